#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isopar/clifford.hpp"
#include "isopar/linalg.hpp"

namespace isopar {

enum class FocalSet { M1, M2 };
std::string to_string(FocalSet f);
FocalSet focal_set_from_string(std::string_view s);

using Quad = std::array<int, 4>;

struct FocalPoint {
  Vector x;
  FocalSet manifold = FocalSet::M1;
  std::optional<Vector> fixing_coeffs;  // c with (sum c_a P_a) x = x, M2 only
  std::vector<Quad> constraints;        // P_a P_b P_c P_d x = x
};

enum class Provenance { closed_form, numeric };
std::string to_string(Provenance p);

struct TangentFrame {
  FocalPoint point;
  Matrix tangent;  // N x dim
  Matrix normal;   // N x codim (inside the sphere)
  std::vector<Matrix> q_frame;  // Q_0..Q_m for M2
  Provenance provenance = Provenance::closed_form;

  int dim() const { return static_cast<int>(tangent.cols()); }
  int codim() const { return static_cast<int>(normal.cols()); }
  // max |B^T B - I| for B = [x, tangent, normal]
  double gram_residual() const;
};

double fkm_value(const CliffordSystem& sys, const Vector& x);
Vector fkm_gradient(const CliffordSystem& sys, const Vector& x);

// <P_a x, x> for a = 0..m
Vector clifford_moments(const CliffordSystem& sys, const Vector& x);

struct ConsistencyReport {
  double level = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double grad_sq_mean = 0.0;
  double grad_sq_spread = 0.0;
  double laplacian_mean = 0.0;
  double laplacian_spread = 0.0;
  bool consistent(double tol_grad, double tol_lap) const {
    return grad_sq_spread <= tol_grad && laplacian_spread <= tol_lap;
  }
};

// spherical |grad f|^2 and Laplacian of f = F|_S on sampled points of f^{-1}(level)
ConsistencyReport isoparametric_consistency(const CliffordSystem& sys, double level,
                                            int n_samples, std::uint64_t seed);

struct ProjectionOptions {
  int max_iter = 50;
  double tol = 1e-12;
  int restarts = 8;
  std::uint64_t seed = 0;
};

// unit y with <R_a y, y> = 0 for every R_a; damped Gauss-Newton, no restarts.
// Returns nullopt on failure, last iterate in *last.
std::optional<Vector> solve_quadric_system(const std::vector<Matrix>& r, const Vector& y0,
                                           int max_iter, double tol, Vector* last = nullptr,
                                           int* iterations = nullptr);

FocalPoint project_to_M1(const CliffordSystem& sys, const Vector& x0,
                         const ProjectionOptions& opt = {});
FocalPoint sample_M1(const CliffordSystem& sys, std::uint64_t seed);

FocalPoint sample_M2(const CliffordSystem& sys, const Vector& c, std::uint64_t seed);
FocalPoint sample_M2(const CliffordSystem& sys, std::uint64_t seed);  // random c too

// throws InvalidArgument if pt violates the FocalPoint invariants
void check_focal_point(const CliffordSystem& sys, const FocalPoint& pt, double tol = 1e-10);

TangentFrame frame_M1(const CliffordSystem& sys, const FocalPoint& pt);
TangentFrame frame_M2(const CliffordSystem& sys, const FocalPoint& pt);
TangentFrame focal_frame(const CliffordSystem& sys, const FocalPoint& pt);

// basis {Q_i eta_a, Q_j x, Q_i Q_j x (j != i)} of T_x M2 for a chosen 1 <= i <= m
Matrix m2_listed_basis(const TangentFrame& frame, int i);

// generators P_0..P_m plus the extension P_{m+1} when the system has one
std::vector<Matrix> generators_with_extension(const CliffordSystem& sys);

// joint eigenspace of the 4-products; sign +1 or -1 per quad
Matrix joint_eigenspace(const std::vector<Matrix>& gens, const std::vector<Quad>& quads,
                        const std::vector<int>& signs);

// allow_sign_flip: a quad with trivial +1 space is replaced by its -1 space and
// recorded as (b,a,c,d), so every stored constraint still reads P_aP_bP_cP_d x = x
FocalPoint common_eigvec_point(const CliffordSystem& sys, const std::vector<Quad>& quads,
                               std::uint64_t seed = 0, bool allow_sign_flip = false);

struct RestrictedMaximum {
  FocalPoint point;
  double value = 0.0;
  bool on_m1 = false;
  int subspace_dim = 0;
  int restarts_used = 0;
};

RestrictedMaximum maximize_restricted_F(const CliffordSystem& sys, const std::vector<Quad>& quads,
                                        const std::vector<bool>& plus_signs,
                                        std::uint64_t seed = 0);

// columns P_a P_b x, a < b
Matrix v_space_vectors(const CliffordSystem& sys, const Vector& x);
int v_space_dimension(const CliffordSystem& sys, const Vector& x, double tol = 1e-8);

}  // namespace isopar
