#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isopar/linalg.hpp"

namespace isopar {

// Square matrix with exactly one entry +-1 per row and per column.
// Row i holds sign(i) in column col(i).
class SignedPermutation {
 public:
  SignedPermutation() = default;
  SignedPermutation(std::vector<int> cols, std::vector<int> signs);

  static SignedPermutation identity(int n);
  static SignedPermutation from_dense(const Eigen::MatrixXi& a);
  static SignedPermutation kron(const SignedPermutation& a, const SignedPermutation& b);
  static SignedPermutation direct_sum(const std::vector<SignedPermutation>& blocks);

  int size() const { return static_cast<int>(cols_.size()); }
  int col(int row) const { return cols_[row]; }
  int sign(int row) const { return signs_[row]; }

  SignedPermutation operator*(const SignedPermutation& rhs) const;
  SignedPermutation operator-() const;
  SignedPermutation transpose() const;
  bool operator==(const SignedPermutation& rhs) const = default;

  bool is_symmetric() const { return *this == transpose(); }
  long long trace() const;
  Vector apply(const Vector& x) const;

  Eigen::MatrixXi integer() const;
  Matrix dense() const;

 private:
  std::vector<int> cols_;
  std::vector<int> signs_;
};

// exact check of a b + b a == 2 [same] I
bool anticommute_exact(const SignedPermutation& a, const SignedPermutation& b);
bool squares_to_identity(const SignedPermutation& a);

enum class CliffordFamily { standard, definite, indefinite };

std::string to_string(CliffordFamily f);
CliffordFamily clifford_family_from_string(std::string_view s);

class CliffordSystem {
 public:
  CliffordSystem(int m, int k, CliffordFamily family, std::vector<Matrix> generators,
                 std::vector<SignedPermutation> exact = {},
                 std::optional<Matrix> extension = std::nullopt);

  int m() const { return m_; }
  int k() const { return k_; }
  int l() const { return static_cast<int>(generators_.front().rows()) / 2; }
  int ambient_dim() const { return static_cast<int>(generators_.front().rows()); }
  int m1() const { return m_; }
  int m2() const { return l() - m_ - 1; }
  CliffordFamily family() const { return family_; }

  const std::vector<Matrix>& generators() const { return generators_; }
  const Matrix& P(int alpha) const { return generators_[alpha]; }

  bool is_exact() const { return !exact_.empty(); }
  const std::vector<SignedPermutation>& exact_generators() const { return exact_; }

  // P_{m+1} anticommuting with every generator, when the construction has one
  const std::optional<Matrix>& extension() const { return extension_; }

  Matrix combination(const Vector& c) const;

  // O P O^T for every generator; integer structure is dropped
  CliffordSystem conjugated(const Matrix& o) const;

 private:
  int m_;
  int k_;
  CliffordFamily family_;
  std::vector<Matrix> generators_;
  std::vector<SignedPermutation> exact_;
  std::optional<Matrix> extension_;
};

int irreducible_dimension(int m);

// n anticommuting skew complex structures on R^{delta(n+1)}
std::vector<SignedPermutation> complex_structures(int n);

// m+1 generators on R^{2 delta(m)}; for m = 0 mod 4 normalised so that the
// full product is +I
std::vector<SignedPermutation> irreducible_generators(int m);

CliffordSystem build_clifford_system(int m, int k,
                                     CliffordFamily family = CliffordFamily::standard);

struct CliffordVerification {
  double max_anticommutator_residual = 0.0;  // |P_a P_b + P_b P_a|, a != b
  double max_square_residual = 0.0;          // |P_a^2 - I|
  double max_symmetry_residual = 0.0;
  std::optional<long long> trace_invariant_q;
  bool exact = false;  // checked in integer arithmetic
  double tol = 1e-12;
  bool passes() const {
    return max_anticommutator_residual <= tol && max_square_residual <= tol &&
           max_symmetry_residual <= tol;
  }
};

CliffordVerification verify_clifford_system(const CliffordSystem& sys, double tol = 1e-12);

long long product_trace(const CliffordSystem& sys);
// Trace(P_0...P_m) / (2 delta(m)); m must be divisible by 4
long long product_trace_invariant(const CliffordSystem& sys);

// (m+1)x(m+1) orthogonal matrix whose first column is c
Matrix sphere_frame_coefficients(const Vector& c, double tol = 1e-10);
// Q_0 = sum c_a P_a, then Q_1..Q_m completing an orthonormal basis of the span
std::vector<Matrix> clifford_sphere_frame(const CliffordSystem& sys, const Vector& c,
                                          double tol = 1e-10);

}  // namespace isopar
