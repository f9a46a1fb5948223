#include <cmath>

#include <gtest/gtest.h>

#include "isopar/error.hpp"
#include "isopar/fkm.hpp"
#include "isopar/witness.hpp"

using namespace isopar;

namespace {

Matrix projector(const Matrix& b) { return b * b.transpose(); }

Vector apply_quad(const CliffordSystem& s, const Quad& q, const Vector& x) {
  const auto g = generators_with_extension(s);
  return g[q[0]] * (g[q[1]] * (g[q[2]] * (g[q[3]] * x)));
}

}  // namespace

TEST(FkmValue, LevelsOfTheFocalSets) {
  const auto s = build_clifford_system(3, 2);
  const FocalPoint p = sample_M1(s, 3);
  EXPECT_NEAR(fkm_value(s, p.x), 1.0, 1e-10);

  Vector c = Vector::Zero(4);
  c[0] = 1;
  const FocalPoint q = sample_M2(s, c, 5);
  EXPECT_NEAR(fkm_value(s, q.x), -1.0, 1e-12);
  EXPECT_EQ(fkm_value(s, Vector::Zero(s.ambient_dim())), 0.0);
}

TEST(FkmGradient, ZeroAtOrigin) {
  const auto s = build_clifford_system(2, 2);
  EXPECT_EQ(fkm_gradient(s, Vector::Zero(s.ambient_dim())).norm(), 0.0);
}

TEST(FkmGradient, FiniteDifferences) {
  const auto s = build_clifford_system(5, 1);
  Rng rng(11);
  const Vector x = gaussian_vector(s.ambient_dim(), rng);
  const Vector g = fkm_gradient(s, x);
  const double h = 1e-5;
  for (int i = 0; i < x.size(); ++i) {
    Vector e = Vector::Zero(x.size());
    e[i] = h;
    const double fd = (fkm_value(s, x + e) - fkm_value(s, x - e)) / (2 * h);
    EXPECT_NEAR(fd, g[i], 1e-8 * std::max(1.0, g.norm()));
  }
}

TEST(FkmGradient, NormalToM1) {
  const auto s = build_clifford_system(4, 2, CliffordFamily::definite);
  const FocalPoint p = sample_M1(s, 2);
  const TangentFrame f = frame_M1(s, p);
  EXPECT_LT((f.tangent.transpose() * fkm_gradient(s, p.x)).norm(), 1e-9);
}

TEST(IsoparametricConsistency, GradientSpreadVanishes) {
  const auto r = isoparametric_consistency(build_clifford_system(1, 3), 0.0, 50, 1);
  EXPECT_LE(r.grad_sq_spread, 1e-8);
  EXPECT_EQ(r.n_samples, 50);
}

TEST(IsoparametricConsistency, SingleSampleHasNoSpread) {
  const auto r = isoparametric_consistency(build_clifford_system(2, 2), 0.3, 1, 1);
  EXPECT_EQ(r.grad_sq_spread, 0.0);
  EXPECT_EQ(r.laplacian_spread, 0.0);
}

TEST(IsoparametricConsistency, LaplacianSpreadVanishes) {
  const auto r = isoparametric_consistency(build_clifford_system(2, 2), 0.5, 50, 2);
  EXPECT_LE(r.laplacian_spread, 1e-6);
  EXPECT_THROW(isoparametric_consistency(build_clifford_system(2, 2), 1.0, 5, 2), InvalidArgument);
}

TEST(ProjectToM1, FixedPoint) {
  const auto s = build_clifford_system(3, 2);
  const FocalPoint p = sample_M1(s, 1);
  const FocalPoint q = project_to_M1(s, p.x);
  EXPECT_EQ((q.x - p.x).norm(), 0.0);
}

TEST(ProjectToM1, RandomStartConverges) {
  const auto s = build_clifford_system(6, 2);
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    const FocalPoint p = project_to_M1(s, gaussian_vector(s.ambient_dim(), rng));
    EXPECT_LE(clifford_moments(s, p.x).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(p.x.norm(), 1.0, 1e-12);
  }
}

TEST(ProjectToM1, AdversarialStartNeverViolatesPostcondition) {
  const auto s = build_clifford_system(3, 2);
  Vector c = Vector::Zero(4);
  c[0] = 1;
  const Vector x0 = sample_M2(s, c, 4).x;
  try {
    const FocalPoint p = project_to_M1(s, x0);
    EXPECT_LE(clifford_moments(s, p.x).cwiseAbs().maxCoeff(), 1e-12);
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.last_iterate().size(), s.ambient_dim());
  }
}

TEST(SampleM2, FixedByP0) {
  const auto s = build_clifford_system(2, 2);
  Vector c = Vector::Zero(3);
  c[0] = 1;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const FocalPoint p = sample_M2(s, c, seed);
    EXPECT_LT((s.P(0) * p.x - p.x).norm(), 1e-12);
    EXPECT_NEAR(fkm_value(s, p.x), -1.0, 1e-12);
  }
}

TEST(SampleM2, FixedByDiagonalCombination) {
  const auto s = build_clifford_system(1, 4);
  Vector c(2);
  c << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const FocalPoint p = sample_M2(s, c, 8);
  EXPECT_LT((s.combination(c) * p.x - p.x).norm(), 1e-12);
}

TEST(SampleM2, SeedsGiveDistinctValidPoints) {
  const auto s = build_clifford_system(5, 1);
  const FocalPoint a = sample_M2(s, 1), b = sample_M2(s, 2);
  EXPECT_GT((a.x - b.x).norm(), 1e-3);
  EXPECT_NO_THROW(check_focal_point(s, a));
  EXPECT_NO_THROW(check_focal_point(s, b));
}

TEST(FrameM1, DimensionsAndGram) {
  const auto s = build_clifford_system(4, 2, CliffordFamily::definite);
  const TangentFrame f = frame_M1(s, sample_M1(s, 6));
  EXPECT_EQ(f.dim(), 10);
  EXPECT_EQ(f.codim(), 5);
  EXPECT_LE(f.gram_residual(), 1e-12);
  // normal space is spanned by the P_a x
  Matrix px(s.ambient_dim(), 5);
  for (int a = 0; a <= 4; ++a) px.col(a) = s.P(a) * f.point.x;
  EXPECT_LT(max_abs(projector(f.normal) - projector(orthonormal_basis(px))), 1e-12);
}

TEST(FrameM1, SmallestMEqualsOneCase) {
  // multiplicities (1,2): l = 4, tangent dimension 2l - m - 2 = 5
  const auto s = build_clifford_system(1, 4);
  EXPECT_EQ(frame_M1(s, sample_M1(s, 1)).dim(), 5);
}

TEST(FrameM1, Equivariance) {
  const auto s = build_clifford_system(3, 2);
  Rng rng(21);
  const Matrix o = random_orthogonal(s.ambient_dim(), rng);
  const auto t = s.conjugated(o);
  const FocalPoint p = sample_M1(s, 2);
  const TangentFrame f = frame_M1(s, p);
  const TangentFrame g = frame_M1(t, FocalPoint{o * p.x, FocalSet::M1, std::nullopt, {}});
  EXPECT_LT(max_abs(o * projector(f.tangent) * o.transpose() - projector(g.tangent)), 1e-10);
}

TEST(FrameM2, DimensionsMEqualsOne) {
  const auto s = build_clifford_system(1, 3);
  const TangentFrame f = frame_M2(s, sample_M2(s, 4));
  EXPECT_EQ(f.dim(), 3);
  EXPECT_EQ(f.codim(), 2);
  EXPECT_LE(f.gram_residual(), 1e-12);
}

TEST(FrameM2, NormalsAreAntiFixedAndOrthogonalToQx) {
  const auto s = build_clifford_system(5, 2);
  const TangentFrame f = frame_M2(s, sample_M2(s, 9));
  EXPECT_EQ(f.dim(), s.l() + s.m() - 1);
  EXPECT_EQ(f.codim(), s.l() - s.m());
  const Matrix& p = f.q_frame[0];
  for (int a = 0; a < f.codim(); ++a) {
    const Vector eta = f.normal.col(a);
    EXPECT_LT((p * eta + eta).norm(), 1e-10);
    for (int i = 1; i <= s.m(); ++i) EXPECT_LT(std::abs(eta.dot(f.q_frame[i] * f.point.x)), 1e-10);
  }
}

TEST(FrameM2, ListedBasisIsOrthonormalAndSpansTangent) {
  for (int m : {2, 3, 5}) {
    const auto s = build_clifford_system(m, 2);
    const TangentFrame f = frame_M2(s, sample_M2(s, 3));
    for (int i = 1; i <= m; ++i) {
      const Matrix b = m2_listed_basis(f, i);
      EXPECT_EQ(b.cols(), s.l() + s.m() - 1);
      EXPECT_LT(gram_residual(b), 1e-10);
      EXPECT_LT(max_abs(projector(b) - projector(f.tangent)), 1e-10);
    }
  }
}

TEST(CommonEigvecPoint, MFourQuad) {
  const auto s = build_clifford_system(4, 2, CliffordFamily::indefinite);
  const FocalPoint p = common_eigvec_point(s, {{0, 1, 2, 3}}, 0, true);
  ASSERT_EQ(p.constraints.size(), 1u);
  EXPECT_LT((apply_quad(s, p.constraints[0], p.x) - p.x).norm(), 1e-10);
  EXPECT_LE(clifford_moments(s, p.x).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(v_space_dimension(s, p.x), 7);
}

TEST(CommonEigvecPoint, MFiveHasSevenDimensionalV) {
  const auto s = build_clifford_system(5, 1);
  const FocalPoint p = common_eigvec_point(s, {{0, 1, 2, 3}, {0, 1, 4, 5}}, 0, true);
  EXPECT_NO_THROW(check_focal_point(s, p));
  EXPECT_EQ(v_space_dimension(s, p.x), 7);
}

TEST(CommonEigvecPoint, MNinePairedQuads) {
  const auto s = build_clifford_system(9, 1);
  const FocalPoint p = common_eigvec_point(s, paired_quads(5), 0, true);
  EXPECT_NO_THROW(check_focal_point(s, p));
  EXPECT_LE(v_space_dimension(s, p.x), 21);
  for (const Quad& q : p.constraints) EXPECT_LT((apply_quad(s, q, p.x) - p.x).norm(), 1e-9);
}

TEST(CommonEigvecPoint, WithoutSignFlipTrivialSpaceIsInfeasible) {
  // P0P1P2P3 acts as -1 on the relevant joint space of this module
  const auto s = build_clifford_system(4, 2, CliffordFamily::indefinite);
  EXPECT_THROW(common_eigvec_point(s, {{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 2, 1, 3}}, 0, false), Error);
}

TEST(RestrictedMax, MEightQuads) {
  for (int k : {2, 3, 4}) {
    const auto s = build_clifford_system(8, k, k == 3 ? CliffordFamily::standard : CliffordFamily::definite);
    const auto r = maximize_restricted_F(s, {{2, 4, 6, 8}, {3, 4, 7, 8}, {5, 6, 7, 8}}, {true, true, true}, 1);
    EXPECT_TRUE(r.on_m1);
    EXPECT_NEAR(r.value, 1.0, 1e-10);
    EXPECT_EQ(r.subspace_dim, 2 * k);
  }
}

TEST(RestrictedMax, MTenQuads) {
  const auto s = build_clifford_system(10, 1);
  const auto r = maximize_restricted_F(s, {{0, 1, 2, 3}, {0, 1, 4, 5}, {4, 5, 6, 7}, {2, 3, 8, 9}},
                                       {true, true, true, true}, 1);
  EXPECT_EQ(r.subspace_dim, 4);
  EXPECT_TRUE(r.on_m1);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
}

TEST(RestrictedMax, NoQuadsMeansWholeSphere) {
  const auto s = build_clifford_system(3, 2);
  const auto r = maximize_restricted_F(s, {}, {}, 2);
  EXPECT_EQ(r.subspace_dim, s.ambient_dim());
  EXPECT_TRUE(r.on_m1);
  EXPECT_NEAR(fkm_value(s, r.point.x), 1.0, 1e-10);
}

TEST(VSpace, MSevenSpecialPoint) {
  const auto s = build_clifford_system(7, 2);
  const FocalPoint p = common_eigvec_point(s, {{0, 1, 2, 3}, {0, 1, 4, 5}, {0, 1, 6, 7}, {0, 2, 4, 6}}, 0, true);
  EXPECT_EQ(v_space_dimension(s, p.x), 7);
}

TEST(VSpace, MEqualsOneIsALine) {
  const auto s = build_clifford_system(1, 5);
  for (std::uint64_t seed : {1u, 2u}) EXPECT_EQ(v_space_dimension(s, sample_M1(s, seed).x), 1);
}

TEST(CheckFocalPoint, RejectsBadPoints) {
  const auto s = build_clifford_system(2, 2);
  FocalPoint p = sample_M1(s, 1);
  p.x *= 2;
  EXPECT_THROW(check_focal_point(s, p), InvalidArgument);
  FocalPoint q = sample_M2(s, 1);
  q.fixing_coeffs.reset();
  EXPECT_THROW(check_focal_point(s, q), InvalidArgument);
}
