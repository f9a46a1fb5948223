#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "isopar/geometry.hpp"
#include "isopar/linalg.hpp"
#include "isopar/oracle.hpp"

namespace isopar {

enum class OrbitCase { so5_cp3, so5_grassmann, u5_M1_14, u5_M2_13 };

std::string to_string(OrbitCase c);
OrbitCase orbit_case_from_string(std::string_view s);
std::vector<OrbitCase> all_orbit_cases();

// Isotropy orbit K.z0 in p, both stored in real coordinates with respect to
// orthonormal bases for <A,B> = 1/2 Re Tr(A B^*).
//   SO(5) on so(5):      k.Z = kZ - Zk
//   U(5)  on so(5, C):   k.Z = conj(k) Z - Z k
struct OrbitData {
  OrbitCase id = OrbitCase::so5_cp3;
  bool unitary = false;
  int expected_dim = 0;   // dimension of the focal submanifold
  int focal_m1 = 0, focal_m2 = 0;
  std::vector<ComplexMatrix> k_basis;
  std::vector<ComplexMatrix> p_basis;
  std::vector<Matrix> action;  // action[a] = matrix of Z -> k_a.Z on p-coordinates
  Vector z0;
  Matrix m_basis;  // k-coordinates, orthonormal basis of the complement of the isotropy algebra

  int ambient_dim() const { return static_cast<int>(p_basis.size()); }
  int k_dim() const { return static_cast<int>(k_basis.size()); }
  int dim() const { return static_cast<int>(m_basis.cols()); }

  static double inner(const ComplexMatrix& a, const ComplexMatrix& b);
  ComplexMatrix bracket(const ComplexMatrix& k, const ComplexMatrix& z) const;
  Vector p_coords(const ComplexMatrix& z) const;
  ComplexMatrix p_matrix(const Vector& c) const;
  Vector k_coords(const ComplexMatrix& k) const;
  ComplexMatrix k_matrix(const Vector& c) const;
  // action matrix of the k-element with coordinates c
  Matrix L(const Vector& c) const;
};

OrbitData build_orbit(OrbitCase id);

// tangent/normal data at a point y of the orbit
struct OrbitFrame {
  Vector point;
  Matrix kmat;     // columns k_a . y
  Matrix kpinv;    // least-norm inverse of kmat on its range
  Matrix tangent;  // orthonormal
  Matrix normal;   // orthonormal, inside the sphere (perpendicular to y)
  int dim() const { return static_cast<int>(tangent.cols()); }
  // least-norm k-coordinates m with m.y = v, v tangent
  Vector lift(const Vector& v) const { return kpinv * v; }
};

OrbitFrame orbit_frame(const OrbitData& orbit, const Vector& y);
// at z0; for u5_M2_13 the normal basis is the six listed matrices diag(0, X_a)
OrbitFrame orbit_base_frame(const OrbitData& orbit);

// [m, z0] for m in k-coordinates
Vector orbit_tangent(const OrbitData& orbit, const Vector& m);
// m' in m with [m', z0] = [m, [m, z0]]^T
Vector orbit_connection_term(const OrbitData& orbit, const OrbitFrame& frame, const Vector& m);
// (A_xi)_ij = -<e_i, [m_j, xi]>, m_j the lift of e_j
Matrix orbit_shape_operator(const OrbitData& orbit, const OrbitFrame& frame, const Vector& xi);

// sup over unit tangent [m, z0] of |sum_a <[m,xi_a]^T,[m,[m,xi_a]^T]^T> - <[m,xi_a]^T,[m',xi_a]^T>|
DefectEstimate homog_class_A_defect(const OrbitData& orbit, int n_samples, std::uint64_t seed);
// the two sums separately, for one m
std::pair<double, double> homog_class_A_terms(const OrbitData& orbit, const OrbitFrame& frame,
                                              const Vector& m);

EmbeddedGeometry orbit_geometry(const OrbitData& orbit, const OrbitFrame& frame);

// Ricci from the Gauss equation; its derivative from K-invariance:
// (nabla_Z rho)(X,Y) = -rho((k_Z.X)^T, Y) - rho(X, (k_Z.Y)^T), k_Z the lift of Z
class OrbitCurvature final : public CurvatureModel {
 public:
  OrbitCurvature(const OrbitData& orbit, const OrbitFrame& frame);
  int dim() const override { return static_cast<int>(tangent_.cols()); }
  const Matrix& ricci() const override { return ricci_; }
  Matrix nabla_ricci(const Vector& z) const override;
  using CurvatureModel::nabla_ricci;
  std::string name() const override { return "orbit_killing"; }

 private:
  const OrbitData* orbit_;
  Matrix tangent_;
  Matrix kpinv_;
  Matrix ricci_;
};

std::vector<SpectrumCluster> orbit_ricci_spectrum(const OrbitData& orbit, double gap_tol = 1e-6);

// exp of the action of a random element of k; orthogonal on p
Matrix random_group_element(const OrbitData& orbit, Rng& rng, double scale = 1.0);
Matrix group_element(const OrbitData& orbit, const Vector& k);

// curves t -> exp(t k.) y with k the least-norm lift of v
class OrbitChart final : public SubmanifoldChart {
 public:
  explicit OrbitChart(std::shared_ptr<const OrbitData> orbit) : orbit_(std::move(orbit)) {}
  int ambient_dim() const override { return orbit_->ambient_dim(); }
  int dim() const override { return orbit_->dim(); }
  Matrix tangent_projector(const Vector& y) const override;
  Vector curve_point(const Vector& y, const Vector& v, double t) const override;

 private:
  std::shared_ptr<const OrbitData> orbit_;
};

}  // namespace isopar
