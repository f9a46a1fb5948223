#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "isopar/clifford.hpp"
#include "isopar/fkm.hpp"
#include "isopar/linalg.hpp"

namespace isopar {

class SubmanifoldChart;  // oracle.hpp

// Frame, shape operators and a curve generator at one point of M in S^{N-1}.
// Shape operators are in tangent coordinates, one per column of `normal`.
struct EmbeddedGeometry {
  Vector point;
  Matrix tangent;
  Matrix normal;
  std::vector<Matrix> shape_ops;
  Provenance provenance = Provenance::closed_form;
  std::shared_ptr<const SubmanifoldChart> chart;

  int dim() const { return static_cast<int>(tangent.cols()); }
  int codim() const { return static_cast<int>(normal.cols()); }
  Vector coords(const Vector& ambient) const { return tangent.transpose() * ambient; }
  Vector ambient(const Vector& coords) const { return tangent * coords; }
  // shape operator of an arbitrary normal given in ambient form
  Matrix shape_operator(const Vector& eta) const;
};

// X -> -(P_a X)^T on M1
Matrix shape_operator_M1(const CliffordSystem& sys, const TangentFrame& frame, int alpha);
Matrix shape_operator_M1_normal(const CliffordSystem& sys, const TangentFrame& frame,
                                const Vector& eta);
// A_eta X = sum_i <X,Q_i x> Q_i eta + <X,Q_i eta> Q_i x on M2
Matrix shape_operator_M2(const TangentFrame& frame, const Vector& eta);

EmbeddedGeometry geometry_M1(const CliffordSystem& sys, const TangentFrame& frame);
EmbeddedGeometry geometry_M2(const CliffordSystem& sys, const TangentFrame& frame);
EmbeddedGeometry focal_geometry(const CliffordSystem& sys, const TangentFrame& frame);

// (n-1) I + sum tr(A) A - sum A^2
Matrix ricci_gauss(const EmbeddedGeometry& g);
double ricci_gauss(const EmbeddedGeometry& g, const Vector& x, const Vector& y);

class CurvatureModel {
 public:
  virtual ~CurvatureModel() = default;
  virtual int dim() const = 0;
  virtual const Matrix& ricci() const = 0;
  // matrix T with X^T T Y = (nabla_Z rho)(X, Y), tangent coordinates
  virtual Matrix nabla_ricci(const Vector& z) const = 0;
  virtual std::string name() const = 0;

  double nabla_ricci(const Vector& x, const Vector& y, const Vector& z) const {
    return x.dot(nabla_ricci(z) * y);
  }
};

// Closed forms on M1: rho = 2(l-m-2) g + sigma, sigma from the vectors P_a P_b x.
// The system must outlive the model.
class FkmM1Curvature final : public CurvatureModel {
 public:
  FkmM1Curvature(const CliffordSystem& sys, const TangentFrame& frame);
  int dim() const override { return static_cast<int>(basis_.cols()); }
  const Matrix& ricci() const override { return ricci_; }
  Matrix nabla_ricci(const Vector& z) const override;
  using CurvatureModel::nabla_ricci;
  std::string name() const override { return "fkm_M1_closed_form"; }

  const Matrix& sigma() const { return sigma_; }
  const Matrix& v_coords() const { return c_; }  // tangent coords of P_a P_b x

 private:
  const CliffordSystem* sys_;
  Matrix basis_;
  std::vector<std::pair<int, int>> pairs_;
  Matrix c_;
  Matrix sigma_;
  Matrix ricci_;
};

// Closed forms on M2: rho = (l+m-2) g - tau, tau = m g + (l-2m) V - W
class FkmM2Curvature final : public CurvatureModel {
 public:
  FkmM2Curvature(const CliffordSystem& sys, const TangentFrame& frame);
  int dim() const override { return static_cast<int>(basis_.cols()); }
  const Matrix& ricci() const override { return ricci_; }
  Matrix nabla_ricci(const Vector& z) const override;
  using CurvatureModel::nabla_ricci;
  std::string name() const override { return "fkm_M2_closed_form"; }

  const Matrix& V() const { return v_; }
  const Matrix& W() const { return w_; }
  Matrix W_from_q_frame() const;  // W written with Q_i Q_j x, i != j >= 1
  const Matrix& tau() const { return tau_; }
  Matrix nabla_V(const Vector& z) const;
  Matrix nabla_W(const Vector& z) const;
  Matrix nabla_tau(const Vector& z) const;

 private:
  const CliffordSystem* sys_;
  TangentFrame frame_;
  Matrix basis_;
  std::vector<std::pair<int, int>> pairs_;
  Matrix b_;  // P_k x
  Matrix d_;  // P_k P_s x, k < s
  Matrix v_, w_, tau_, ricci_;
};

std::unique_ptr<CurvatureModel> closed_form_model(const CliffordSystem& sys,
                                                  const TangentFrame& frame);

// value = sup of |...| over the samples; empty = no samples were drawn
struct DefectEstimate {
  double value = 0.0;
  int samples = 0;
  bool empty = false;
  double oracle_discrepancy = -1.0;  // < 0 when no oracle was consulted
};

// sup |(nabla_X rho)(X,X)| over random unit X
DefectEstimate cyclic_parallel_defect(const CurvatureModel& model, int n_samples,
                                      std::uint64_t seed, const CurvatureModel* oracle = nullptr,
                                      int oracle_subsample = 5);
// sup |(nabla_X rho)(Y,Z) - (nabla_Y rho)(X,Z)| over random unit triples,
// plus basis triples when basis_sweep is set
DefectEstimate codazzi_defect(const CurvatureModel& model, int n_samples, std::uint64_t seed,
                              bool basis_sweep = false);
// sup |(nabla_Z rho)(X,Y)| over random unit triples, plus every basis Z when basis_sweep
DefectEstimate ricci_parallel_defect(const CurvatureModel& model, int n_samples,
                                     std::uint64_t seed, bool basis_sweep = false);

double einstein_defect(const Matrix& ricci);
std::vector<SpectrumCluster> ricci_operator_spectrum(const Matrix& ricci, double gap_tol = 1e-6);

struct SectionalValue {
  double sec = 0.0;
  double a_tilde = 0.0;
  double b_tilde = 0.0;
};

// X, Y orthonormal in tangent coordinates
SectionalValue sectional_curvature(const EmbeddedGeometry& g, const Vector& x, const Vector& y);

struct SectionalScan {
  double sec_min = 0.0;
  double sec_max = 0.0;
  double a_tilde_max = 0.0;
  int pairs = 0;
};
SectionalScan scan_sectional(const EmbeddedGeometry& g, int n_pairs, std::uint64_t seed);

struct RicciScan {
  double min = 0.0;  // exact, from the eigenvalues
  double max = 0.0;
  int max_multiplicity = 0;
  Matrix argmax;  // tangent coords spanning the top eigenspace
  double sampled_min = 0.0;
  double sampled_max = 0.0;
  int samples = 0;
};
RicciScan ricci_direction_scan(const Matrix& ricci, int n_samples, std::uint64_t seed,
                               double gap_tol = 1e-8);

struct LResidual {
  Vector value;     // ambient
  double off_l = 0.0;  // norm of the part orthogonal to R x + Span{P_a x}
};

// A(X,Y) = sum_{a<b} <X,P_aP_b x> P_aP_b Y + <X,P_aP_b Y> P_aP_b x, X,Y ambient tangent
LResidual a_tensor_M1(const CliffordSystem& sys, const Vector& x, const Vector& X, const Vector& Y);
// B(X) = sum_{a<b} <X,P_aP_b x> P_aP_b X
LResidual b_tensor_M1(const CliffordSystem& sys, const Vector& x, const Vector& X);
// max off-L residual of A over basis pairs of the tangent frame
double a_tensor_defect(const CliffordSystem& sys, const TangentFrame& frame);

}  // namespace isopar
