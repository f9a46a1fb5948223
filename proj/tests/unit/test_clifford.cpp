#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "isopar/clifford.hpp"
#include "isopar/error.hpp"

using namespace isopar;

namespace {

struct Mk {
  int m, k;
  CliffordFamily f;
};

std::vector<Mk> table_cases() {
  using F = CliffordFamily;
  return {{2, 2, F::standard},  {3, 2, F::standard},   {4, 2, F::definite},  {4, 2, F::indefinite},
          {5, 1, F::standard},  {5, 2, F::standard},   {6, 1, F::standard},  {6, 2, F::standard},
          {7, 2, F::standard},  {7, 3, F::standard},   {8, 2, F::definite},  {8, 2, F::indefinite},
          {8, 3, F::standard},  {8, 4, F::definite},   {8, 4, F::indefinite}, {9, 1, F::standard},
          {9, 2, F::standard},  {10, 1, F::standard},  {11, 1, F::standard}, {12, 1, F::standard}};
}

}  // namespace

TEST(IrreducibleDimension, KnownValues) {
  const int expect[] = {1, 2, 4, 4, 8, 8, 8, 8, 16, 32, 64, 64};
  for (int m = 1; m <= 12; ++m) EXPECT_EQ(irreducible_dimension(m), expect[m - 1]) << m;
}

TEST(IrreducibleDimension, Periodicity) {
  for (int m = 1; m <= 8; ++m) EXPECT_EQ(irreducible_dimension(m + 8), 16 * irreducible_dimension(m));
}

TEST(IrreducibleDimension, NoSmallerModuleForMEqualsOne) {
  // on R^1 the only symmetric involutions are +-1 and they commute
  for (int a : {-1, 1})
    for (int b : {-1, 1}) EXPECT_NE(a * b + b * a, 0);
}

TEST(IrreducibleGenerators, ExactOnTwoDelta) {
  for (int m = 1; m <= 12; ++m) {
    const auto p = irreducible_generators(m);
    ASSERT_EQ(static_cast<int>(p.size()), m + 1);
    for (int a = 0; a <= m; ++a) {
      EXPECT_EQ(p[a].size(), 2 * irreducible_dimension(m));
      EXPECT_TRUE(p[a].is_symmetric());
      EXPECT_TRUE(squares_to_identity(p[a]));
      for (int b = a + 1; b <= m; ++b) EXPECT_TRUE(anticommute_exact(p[a], p[b])) << m << " " << a << b;
    }
  }
}

TEST(IrreducibleGenerators, MEqualsOneOnR2) {
  const auto p = irreducible_generators(1);
  Eigen::MatrixXi p0(2, 2), p1(2, 2);
  p0 << 1, 0, 0, -1;
  p1 << 0, 1, 1, 0;
  EXPECT_EQ(p[0].integer(), p0);
  EXPECT_EQ(p[1].integer(), p1);
}

TEST(BuildClifford, RejectsVanishingMultiplicity) {
  EXPECT_THROW(build_clifford_system(1, 2), InvalidArgument);
  EXPECT_THROW(build_clifford_system(0, 3), InvalidArgument);
  EXPECT_THROW(build_clifford_system(3, 0), InvalidArgument);
}

TEST(BuildClifford, TwoCopiesOfTheM1ModuleOnR4AreExact) {
  const auto p = irreducible_generators(1);
  const auto q0 = SignedPermutation::direct_sum({p[0], p[0]});
  const auto q1 = SignedPermutation::direct_sum({p[1], p[1]});
  EXPECT_EQ(q0.size(), 4);
  EXPECT_TRUE(anticommute_exact(q0, q1));
  EXPECT_TRUE(squares_to_identity(q0) && squares_to_identity(q1));
}

TEST(BuildClifford, FamiliesNeedMDivisibleByFour) {
  EXPECT_THROW(build_clifford_system(5, 2, CliffordFamily::definite), UnsupportedFamily);
  EXPECT_THROW(build_clifford_system(4, 3, CliffordFamily::indefinite), UnsupportedFamily);
}

TEST(BuildClifford, DefiniteAndIndefiniteTraces) {
  const auto def = build_clifford_system(4, 2, CliffordFamily::definite);
  const auto ind = build_clifford_system(4, 2, CliffordFamily::indefinite);
  EXPECT_EQ(product_trace(def), 2 * 2 * irreducible_dimension(4));
  EXPECT_EQ(product_trace(ind), 0);
  EXPECT_EQ(product_trace_invariant(def), 2);
  EXPECT_EQ(product_trace_invariant(ind), 0);
}

TEST(BuildClifford, MEightInvariantDistinguishesFamilies) {
  const auto d2 = build_clifford_system(8, 2, CliffordFamily::definite);
  const auto i2 = build_clifford_system(8, 2, CliffordFamily::indefinite);
  const auto d4 = build_clifford_system(8, 4, CliffordFamily::definite);
  const auto i4 = build_clifford_system(8, 4, CliffordFamily::indefinite);
  EXPECT_EQ(std::abs(product_trace_invariant(d2)), 2);
  EXPECT_EQ(product_trace_invariant(i2), 0);
  EXPECT_EQ(std::abs(product_trace_invariant(d4)), 4);
  EXPECT_EQ(product_trace_invariant(i4), 0);
  EXPECT_THROW(product_trace_invariant(build_clifford_system(5, 1)), Unsupported);
}

TEST(BuildClifford, IndefiniteCarriesAnExtension) {
  const auto s = build_clifford_system(8, 2, CliffordFamily::indefinite);
  ASSERT_TRUE(s.extension().has_value());
  const Matrix& e = *s.extension();
  for (int a = 0; a <= s.m(); ++a) EXPECT_EQ(max_abs(e * s.P(a) + s.P(a) * e), 0.0);
}

TEST(VerifyClifford, StandardSystemIsExact) {
  const auto v = verify_clifford_system(build_clifford_system(2, 2));
  EXPECT_EQ(v.max_anticommutator_residual, 0.0);
  EXPECT_EQ(v.max_symmetry_residual, 0.0);
  EXPECT_TRUE(v.exact);
  EXPECT_TRUE(v.passes());
}

TEST(VerifyClifford, PerturbationIsDetected) {
  const auto s = build_clifford_system(2, 2);
  std::vector<Matrix> g = s.generators();
  g[1] += 1e-6 * Matrix::Identity(g[1].rows(), g[1].cols());
  const CliffordSystem bad(2, 2, CliffordFamily::standard, g);
  const auto v = verify_clifford_system(bad);
  EXPECT_NEAR(v.max_anticommutator_residual, 2e-6, 1e-9);
  EXPECT_NEAR(v.max_square_residual, 2e-6, 1e-9);
  EXPECT_FALSE(v.passes());
  EXPECT_FALSE(v.exact);
}

TEST(VerifyClifford, NineOneOnR32) {
  const auto s = build_clifford_system(9, 1);
  EXPECT_EQ(s.ambient_dim(), 32);
  const auto v = verify_clifford_system(s);
  EXPECT_EQ(v.max_anticommutator_residual, 0.0);
  EXPECT_TRUE(v.exact);
}

TEST(VerifyClifford, EveryTableCaseExactAndQuick) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const Mk& c : table_cases()) {
    const auto s = build_clifford_system(c.m, c.k, c.f);
    EXPECT_LE(s.ambient_dim(), 256);
    EXPECT_GT(s.m2(), 0);
    const auto v = verify_clifford_system(s);
    EXPECT_TRUE(v.exact) << c.m << "," << c.k;
    EXPECT_EQ(v.max_anticommutator_residual, 0.0);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
}

TEST(VerifyClifford, ConjugatedSystemStaysClifford) {
  const auto s = build_clifford_system(3, 2);
  Rng rng(4);
  const auto c = s.conjugated(random_orthogonal(s.ambient_dim(), rng));
  EXPECT_FALSE(c.is_exact());
  EXPECT_LT(verify_clifford_system(c, 1e-10).max_anticommutator_residual, 1e-10);
}

TEST(SphereFrame, IdentityCompletion) {
  const auto s = build_clifford_system(3, 2);
  Vector c = Vector::Zero(4);
  c[0] = 1;
  const auto q = clifford_sphere_frame(s, c);
  for (int a = 0; a <= 3; ++a) EXPECT_LT(max_abs(q[a] - s.P(a)), 1e-14);
}

TEST(SphereFrame, MEqualsOneDiagonal) {
  const auto s = build_clifford_system(1, 3);
  Vector c(2);
  c << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const auto q = clifford_sphere_frame(s, c);
  const Matrix want = (s.P(0) - s.P(1)) / std::sqrt(2.0);
  EXPECT_LT(std::min(max_abs(q[1] - want), max_abs(q[1] + want)), 1e-12);
}

TEST(SphereFrame, RandomCoefficientsOrthonormal) {
  Rng rng(9);
  for (int m : {2, 5, 9}) {
    const auto s = build_clifford_system(m, 2);
    const auto q = clifford_sphere_frame(s, random_unit(m + 1, rng));
    const int n = s.ambient_dim();
    for (int a = 0; a <= m; ++a)
      for (int b = 0; b <= m; ++b) {
        // <Q_a, Q_b> = tr(Q_a Q_b)/N
        const double g = (q[a] * q[b]).trace() / n;
        EXPECT_NEAR(g, a == b ? 1.0 : 0.0, 1e-12);
      }
  }
}

TEST(SignedPermutation, Algebra) {
  const auto a = SignedPermutation({1, 0}, {1, -1});
  EXPECT_EQ(a.transpose() * a, SignedPermutation::identity(2));
  EXPECT_EQ((-a).integer(), -a.integer());
  EXPECT_EQ(SignedPermutation::kron(a, SignedPermutation::identity(3)).size(), 6);
  EXPECT_EQ(SignedPermutation::identity(5).trace(), 5);
  EXPECT_EQ(SignedPermutation::from_dense(a.integer()), a);
  EXPECT_THROW(SignedPermutation({0, 0}, {1, 1}), InvalidArgument);
}
