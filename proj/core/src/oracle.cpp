#include "isopar/oracle.hpp"

#include <cmath>

#include "isopar/error.hpp"
#include "isopar/fkm.hpp"

namespace isopar {

namespace {

// Newton in the normal directions N at the base point: z = w + N c with
// <P_a z, z> = 0 and |z| = 1. Square system, so the root is a smooth function of w.
Vector m1_normal_retraction(const CliffordSystem& sys, const Matrix& nbase, const Vector& w) {
  const int p = sys.m() + 1;
  Vector c = Vector::Zero(p + 1);
  Vector g(p + 1);
  Matrix jac(p + 1, p + 1);
  for (int it = 0; it < 60; ++it) {
    const Vector z = w + nbase * c;
    for (int a = 0; a < p; ++a) {
      const Vector pz = sys.P(a) * z;
      g[a] = z.dot(pz);
      jac.row(a) = 2.0 * (nbase.transpose() * pz).transpose();
    }
    g[p] = z.squaredNorm() - 1.0;
    jac.row(p) = 2.0 * (nbase.transpose() * z).transpose();
    if (g.cwiseAbs().maxCoeff() < 1e-15) return z;
    c -= jac.partialPivLu().solve(g);
  }
  const Vector z = w + nbase * c;
  if (clifford_moments(sys, z).cwiseAbs().maxCoeff() > 1e-12 || std::abs(z.norm() - 1.0) > 1e-12)
    throw NonConvergence("M1 chart: retraction failed", z, 60);
  return z;
}

Matrix m1_normal_frame(const CliffordSystem& sys, const Vector& y) {
  Matrix n(y.size(), sys.m() + 2);
  n.col(0) = y;
  for (int a = 0; a <= sys.m(); ++a) n.col(a + 1) = sys.P(a) * y;
  return n;
}

}  // namespace

Matrix FkmM1Chart::tangent_projector(const Vector& y) const {
  const Matrix n = m1_normal_frame(*sys_, y);
  return Matrix::Identity(y.size(), y.size()) - n * n.transpose();
}

Vector FkmM1Chart::curve_point(const Vector& y, const Vector& v, double t) const {
  if (t == 0.0) return y;
  return m1_normal_retraction(*sys_, m1_normal_frame(*sys_, y), y + t * v);
}

Matrix FkmM2Chart::tangent_projector(const Vector& y) const {
  const Vector c = clifford_moments(*sys_, y);
  const Matrix p = sys_->combination(c / c.norm());
  const int n = static_cast<int>(y.size());
  Matrix pi = 0.5 * (Matrix::Identity(n, n) + p) - 2.0 * y * y.transpose();
  for (int a = 0; a <= sys_->m(); ++a) {
    const Vector py = sys_->P(a) * y;
    pi += py * py.transpose();
  }
  return pi;
}

Vector FkmM2Chart::curve_point(const Vector& y, const Vector& v, double t) const {
  if (t == 0.0) return y;
  const Vector z = y + t * v;
  const Vector c = clifford_moments(*sys_, z);
  const Matrix p = sys_->combination(c / c.norm());
  Vector w = 0.5 * (z + p * z);
  return w / w.norm();
}

Matrix GreatSphereChart::tangent_projector(const Vector& y) const {
  Matrix pi = Matrix::Identity(n_ + 2, n_ + 2) - y * y.transpose();
  pi(n_ + 1, n_ + 1) -= 1.0;
  return pi;
}

Vector GreatSphereChart::curve_point(const Vector& y, const Vector& v, double t) const {
  Vector z = y + t * v;
  z[n_ + 1] = 0.0;
  return z / z.norm();
}

Vector EllipsoidChart::project(const Vector& y) const {
  return y / std::sqrt(y.cwiseQuotient(axes_).squaredNorm());
}

Matrix EllipsoidChart::tangent_projector(const Vector& y) const {
  Vector n = y.cwiseQuotient(axes_.cwiseProduct(axes_));
  n.normalize();
  return Matrix::Identity(y.size(), y.size()) - n * n.transpose();
}

Vector EllipsoidChart::curve_point(const Vector& y, const Vector& v, double t) const {
  return project(y + t * v);
}

NumericCurvature::NumericCurvature(std::shared_ptr<const SubmanifoldChart> chart, const Vector& x,
                                   OracleOptions opt)
    : NumericCurvature(chart, x, orthonormal_basis(chart->tangent_projector(x), 1e-8), opt) {}

NumericCurvature::NumericCurvature(std::shared_ptr<const SubmanifoldChart> chart, const Vector& x,
                                   const Matrix& basis, OracleOptions opt)
    : chart_(std::move(chart)), x_(x), basis_(basis), opt_(opt) {
  if (!chart_) throw InvalidArgument("oracle: null chart");
  if (basis_.rows() != chart_->ambient_dim() || basis_.cols() != chart_->dim())
    throw InvalidArgument("oracle: basis does not match the chart dimensions");
  ricci_ = basis_.transpose() * ambient_ricci(x_) * basis_;
  ricci_ = 0.5 * (ricci_ + ricci_.transpose());
}

Matrix NumericCurvature::dprojector(const Vector& y, const Vector& v) const {
  const double h = opt_.h_inner;
  auto central = [&](double s) {
    return ((chart_->tangent_projector(chart_->curve_point(y, v, s)) -
             chart_->tangent_projector(chart_->curve_point(y, v, -s))) /
            (2.0 * s))
        .eval();
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

Matrix NumericCurvature::ambient_ricci(const Vector& y) const {
  const Matrix pi = chart_->tangent_projector(y);
  Eigen::HouseholderQR<Matrix> qr(pi * basis_);
  const Matrix e = qr.householderQ() * Matrix::Identity(basis_.rows(), basis_.cols());
  const int n = static_cast<int>(e.cols());
  const Matrix nproj = Matrix::Identity(pi.rows(), pi.cols()) - pi;
  // g[i] column j = h(e_i, e_j)
  std::vector<Matrix> g(n);
  Vector mean = Vector::Zero(pi.rows());
  for (int i = 0; i < n; ++i) {
    g[i] = nproj * dprojector(y, e.col(i)) * e;
    mean += g[i].col(i);
  }
  Matrix rho(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = 0.5 * (g[i].col(j) + g[j].col(i)).dot(mean);
      for (int k = 0; k < n; ++k) v -= g[k].col(i).dot(g[k].col(j));
      rho(i, j) = rho(j, i) = v;
    }
  return e * rho * e.transpose();
}

Matrix NumericCurvature::nabla_ricci(const Vector& z) const {
  if (z.size() != dim()) throw InvalidArgument("oracle: direction has the wrong size");
  const Vector v = basis_ * z;
  const double h = opt_.h_outer;
  auto central = [&](double s) {
    return ((ambient_ricci(chart_->curve_point(x_, v, s)) -
             ambient_ricci(chart_->curve_point(x_, v, -s))) /
            (2.0 * s))
        .eval();
  };
  const Matrix d = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  Matrix t = basis_.transpose() * d * basis_;
  return 0.5 * (t + t.transpose());
}

Matrix NumericCurvature::shape_operator(const Vector& eta) const {
  const int n = dim();
  Matrix a(n, n);
  for (int j = 0; j < n; ++j) a.col(j) = basis_.transpose() * (dprojector(x_, basis_.col(j)) * eta);
  return 0.5 * (a + a.transpose());
}

double NumericCurvature::sectional(const Vector& x, const Vector& y) const {
  const Matrix pi = chart_->tangent_projector(x_);
  const Matrix nproj = Matrix::Identity(pi.rows(), pi.cols()) - pi;
  const Vector xa = basis_ * x, ya = basis_ * y;
  const Matrix dx = nproj * dprojector(x_, xa);
  const Matrix dy = nproj * dprojector(x_, ya);
  const Vector hxx = dx * xa, hyy = dy * ya, hxy = 0.5 * (dx * ya + dy * xa);
  return hxx.dot(hyy) - hxy.squaredNorm();
}

EmbeddedGeometry numeric_geometry(std::shared_ptr<const SubmanifoldChart> chart, const Vector& x,
                                  const Matrix& basis, const Matrix& normal, OracleOptions opt) {
  NumericCurvature nc(chart, x, basis, opt);
  const int n = nc.dim();
  std::vector<Matrix> dpi(n);
  for (int j = 0; j < n; ++j) dpi[j] = nc.dprojector(x, basis.col(j));
  EmbeddedGeometry g;
  g.point = x;
  g.tangent = basis;
  g.normal = normal;
  g.provenance = Provenance::numeric;
  g.chart = chart;
  for (int a = 0; a < normal.cols(); ++a) {
    Matrix s(n, n);
    for (int j = 0; j < n; ++j) s.col(j) = basis.transpose() * (dpi[j] * normal.col(a));
    g.shape_ops.push_back(0.5 * (s + s.transpose()));
  }
  return g;
}

}  // namespace isopar
