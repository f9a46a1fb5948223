#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "isopar/fkm.hpp"
#include "isopar/geometry.hpp"
#include "isopar/oracle.hpp"

using namespace isopar;

TEST(Oracle, GreatSphereIsParallel) {
  const int n = 4;
  auto chart = std::make_shared<GreatSphereChart>(n);
  Rng rng(1);
  Vector x = Vector::Zero(n + 2);
  x.head(n + 1) = random_unit(n + 1, rng);
  const NumericCurvature c(chart, x);
  ASSERT_EQ(c.dim(), n);
  EXPECT_LT(max_abs(c.ricci() - (n - 1) * Matrix::Identity(n, n)), 1e-6);
  for (int t = 0; t < 5; ++t) EXPECT_LT(max_abs(c.nabla_ricci(random_unit(n, rng))), 1e-4);
  EXPECT_NEAR(c.sectional(Vector::Unit(n, 0), Vector::Unit(n, 1)), 1.0, 1e-6);
}

TEST(Oracle, EllipsoidIsNotClassA) {
  Vector axes(3);
  axes << 1.0, 1.6, 2.5;
  auto chart = std::make_shared<EllipsoidChart>(axes);
  Rng rng(2);
  const Vector x = chart->project(gaussian_vector(3, rng));
  const NumericCurvature c(chart, x);
  EXPECT_GT(cyclic_parallel_defect(c, 20, 1).value, 1e-3);
}

TEST(Oracle, EllipsoidPointsLieOnTheSurface) {
  Vector axes(3);
  axes << 1.0, 2.0, 3.0;
  const EllipsoidChart e(axes);
  Rng rng(3);
  const Vector y = e.project(gaussian_vector(3, rng));
  EXPECT_NEAR(y.cwiseQuotient(axes).squaredNorm(), 1.0, 1e-12);
  const Matrix p = e.tangent_projector(y);
  const Vector v = p * gaussian_vector(3, rng);
  const Vector z = e.curve_point(y, v, 1e-2);
  EXPECT_NEAR(z.cwiseQuotient(axes).squaredNorm(), 1.0, 1e-12);
}

TEST(Oracle, FkmChartsProjectOntoTheFrame) {
  const auto s = build_clifford_system(3, 2);
  const TangentFrame f1 = frame_M1(s, sample_M1(s, 2));
  EXPECT_LT(max_abs(FkmM1Chart(s).tangent_projector(f1.point.x) - f1.tangent * f1.tangent.transpose()),
            1e-10);
  const TangentFrame f2 = frame_M2(s, sample_M2(s, 2));
  EXPECT_LT(max_abs(FkmM2Chart(s).tangent_projector(f2.point.x) - f2.tangent * f2.tangent.transpose()),
            1e-10);
}

TEST(Oracle, CurvePointsStayOnM1AndM2) {
  const auto s = build_clifford_system(2, 2);
  Rng rng(4);
  const TangentFrame f1 = frame_M1(s, sample_M1(s, 3));
  const Vector y1 = FkmM1Chart(s).curve_point(f1.point.x, random_unit_in(f1.tangent, rng), 0.05);
  EXPECT_LE(clifford_moments(s, y1).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(y1.norm(), 1.0, 1e-10);
  const TangentFrame f2 = frame_M2(s, sample_M2(s, 3));
  const Vector y2 = FkmM2Chart(s).curve_point(f2.point.x, random_unit_in(f2.tangent, rng), 0.05);
  EXPECT_NEAR(fkm_value(s, y2), -1.0, 1e-10);
}

TEST(Oracle, ShapeOperatorMatchesClosedForm) {
  const auto s = build_clifford_system(3, 2);
  Rng rng(5);
  const TangentFrame f1 = frame_M1(s, sample_M1(s, 4));
  const NumericCurvature n1(std::make_shared<FkmM1Chart>(s), f1.point.x, f1.tangent);
  const Vector eta1 = random_unit_in(f1.normal, rng);
  EXPECT_LT(max_abs(n1.shape_operator(eta1) - shape_operator_M1_normal(s, f1, eta1)), 1e-6);

  const TangentFrame f2 = frame_M2(s, sample_M2(s, 4));
  const NumericCurvature n2(std::make_shared<FkmM2Chart>(s), f2.point.x, f2.tangent);
  const Vector eta2 = random_unit_in(f2.normal, rng);
  EXPECT_LT(max_abs(n2.shape_operator(eta2) - shape_operator_M2(f2, eta2)), 1e-6);
}

TEST(Oracle, RicciAndDerivativeMatchClosedForm) {
  for (FocalSet fs : {FocalSet::M1, FocalSet::M2}) {
    const auto s = build_clifford_system(5, 1);
    const FocalPoint p = fs == FocalSet::M1 ? sample_M1(s, 6) : sample_M2(s, 6);
    const TangentFrame f = focal_frame(s, p);
    std::shared_ptr<const SubmanifoldChart> chart;
    if (fs == FocalSet::M1) chart = std::make_shared<FkmM1Chart>(s);
    else chart = std::make_shared<FkmM2Chart>(s);
    const NumericCurvature oracle(chart, p.x, f.tangent);
    const auto model = closed_form_model(s, f);
    EXPECT_LT(max_abs(oracle.ricci() - model->ricci()), 1e-6) << to_string(fs);
    Rng rng(7);
    for (int t = 0; t < 3; ++t) {
      const Vector z = random_unit(model->dim(), rng);
      EXPECT_LT(max_abs(oracle.nabla_ricci(z) - model->nabla_ricci(z)), 1e-5) << to_string(fs);
    }
  }
}

TEST(Oracle, CyclicDefectConsultsOracle) {
  const auto s = build_clifford_system(2, 2);
  const TangentFrame f = frame_M1(s, sample_M1(s, 1));
  const NumericCurvature oracle(std::make_shared<FkmM1Chart>(s), f.point.x, f.tangent);
  const auto model = closed_form_model(s, f);
  const DefectEstimate d = cyclic_parallel_defect(*model, 20, 2, &oracle, 4);
  EXPECT_GE(d.oracle_discrepancy, 0.0);
  EXPECT_LT(d.oracle_discrepancy, 1e-5);
  EXPECT_LT(cyclic_parallel_defect(*model, 20, 2).oracle_discrepancy, 0.0);
}
