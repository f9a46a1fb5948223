#include "isopar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isopar/error.hpp"
#include "isopar/oracle.hpp"

namespace isopar {

Matrix EmbeddedGeometry::shape_operator(const Vector& eta) const {
  Matrix a = Matrix::Zero(dim(), dim());
  Vector c = normal.transpose() * eta;
  for (int i = 0; i < codim(); ++i) a += c[i] * shape_ops[i];
  return a;
}

Matrix shape_operator_M1(const CliffordSystem& sys, const TangentFrame& frame, int alpha) {
  if (alpha < 0 || alpha > sys.m()) throw InvalidArgument("shape_operator_M1: bad index");
  Matrix a = -frame.tangent.transpose() * (sys.P(alpha) * frame.tangent);
  return 0.5 * (a + a.transpose());
}

Matrix shape_operator_M1_normal(const CliffordSystem& sys, const TangentFrame& frame,
                                const Vector& eta) {
  // eta = sum c_a P_a x
  Vector c(sys.m() + 1);
  for (int a = 0; a <= sys.m(); ++a) c[a] = eta.dot(sys.P(a) * frame.point.x);
  Matrix a = -frame.tangent.transpose() * (sys.combination(c) * frame.tangent);
  return 0.5 * (a + a.transpose());
}

Matrix shape_operator_M2(const TangentFrame& frame, const Vector& eta) {
  const Matrix& b = frame.tangent;
  const int n = static_cast<int>(b.cols());
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t i = 1; i < frame.q_frame.size(); ++i) {
    Vector u = b.transpose() * (frame.q_frame[i] * eta);
    Vector v = b.transpose() * (frame.q_frame[i] * frame.point.x);
    a += u * v.transpose() + v * u.transpose();
  }
  return a;
}

EmbeddedGeometry geometry_M1(const CliffordSystem& sys, const TangentFrame& frame) {
  EmbeddedGeometry g;
  g.point = frame.point.x;
  g.tangent = frame.tangent;
  g.normal = frame.normal;
  for (int a = 0; a <= sys.m(); ++a) g.shape_ops.push_back(shape_operator_M1(sys, frame, a));
  g.provenance = Provenance::closed_form;
  g.chart = std::make_shared<FkmM1Chart>(sys);
  return g;
}

EmbeddedGeometry geometry_M2(const CliffordSystem& sys, const TangentFrame& frame) {
  EmbeddedGeometry g;
  g.point = frame.point.x;
  g.tangent = frame.tangent;
  g.normal = frame.normal;
  for (int a = 0; a < frame.normal.cols(); ++a)
    g.shape_ops.push_back(shape_operator_M2(frame, frame.normal.col(a)));
  g.provenance = Provenance::closed_form;
  g.chart = std::make_shared<FkmM2Chart>(sys);
  return g;
}

EmbeddedGeometry focal_geometry(const CliffordSystem& sys, const TangentFrame& frame) {
  return frame.point.manifold == FocalSet::M1 ? geometry_M1(sys, frame) : geometry_M2(sys, frame);
}

Matrix ricci_gauss(const EmbeddedGeometry& g) {
  const int n = g.dim();
  Matrix r = static_cast<double>(n - 1) * Matrix::Identity(n, n);
  for (const auto& a : g.shape_ops) r += a.trace() * a - a * a;
  return 0.5 * (r + r.transpose());
}

double ricci_gauss(const EmbeddedGeometry& g, const Vector& x, const Vector& y) {
  double r = (g.dim() - 1) * x.dot(y);
  for (const auto& a : g.shape_ops) r += a.trace() * x.dot(a * y) - (a * x).dot(a * y);
  return r;
}

namespace {

std::vector<std::pair<int, int>> index_pairs(int m) {
  std::vector<std::pair<int, int>> p;
  for (int a = 0; a <= m; ++a)
    for (int b = a + 1; b <= m; ++b) p.emplace_back(a, b);
  return p;
}

}  // namespace

FkmM1Curvature::FkmM1Curvature(const CliffordSystem& sys, const TangentFrame& frame)
    : sys_(&sys), basis_(frame.tangent), pairs_(index_pairs(sys.m())) {
  if (frame.point.manifold != FocalSet::M1) throw InvalidArgument("FkmM1Curvature: not an M1 frame");
  const Vector& x = frame.point.x;
  c_.resize(basis_.cols(), pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto [a, b] = pairs_[p];
    c_.col(p) = basis_.transpose() * (sys.P(a) * (sys.P(b) * x));
  }
  const int n = dim();
  sigma_ = 2.0 * c_ * c_.transpose();
  ricci_ = 2.0 * (sys.l() - sys.m() - 2) * Matrix::Identity(n, n) + sigma_;
}

Matrix FkmM1Curvature::nabla_ricci(const Vector& z) const {
  Vector zz = basis_ * z;
  Matrix u(basis_.cols(), pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto [a, b] = pairs_[p];
    u.col(p) = basis_.transpose() * (sys_->P(a) * (sys_->P(b) * zz));
  }
  Matrix uc = u * c_.transpose();
  return 2.0 * (uc + uc.transpose());
}

FkmM2Curvature::FkmM2Curvature(const CliffordSystem& sys, const TangentFrame& frame)
    : sys_(&sys), frame_(frame), basis_(frame.tangent), pairs_(index_pairs(sys.m())) {
  if (frame.point.manifold != FocalSet::M2) throw InvalidArgument("FkmM2Curvature: not an M2 frame");
  const Vector& x = frame.point.x;
  const int m = sys.m();
  const int n = dim();
  b_.resize(n, m + 1);
  for (int k = 0; k <= m; ++k) b_.col(k) = basis_.transpose() * (sys.P(k) * x);
  d_.resize(n, pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto [k, s] = pairs_[p];
    d_.col(p) = basis_.transpose() * (sys.P(k) * (sys.P(s) * x));
  }
  v_ = b_ * b_.transpose();
  w_ = 2.0 * d_ * d_.transpose() - 2.0 * v_;
  const Matrix id = Matrix::Identity(n, n);
  tau_ = m * id + (sys.l() - 2.0 * m) * v_ - w_;
  ricci_ = (sys.l() + m - 2.0) * id - tau_;
}

Matrix FkmM2Curvature::W_from_q_frame() const {
  const int n = dim();
  Matrix w = Matrix::Zero(n, n);
  const auto& q = frame_.q_frame;
  for (std::size_t i = 1; i < q.size(); ++i)
    for (std::size_t j = 1; j < q.size(); ++j) {
      if (i == j) continue;
      Vector u = basis_.transpose() * (q[i] * (q[j] * frame_.point.x));
      w += u * u.transpose();
    }
  return w;
}

Matrix FkmM2Curvature::nabla_V(const Vector& z) const {
  Vector zz = basis_ * z;
  Matrix a(dim(), sys_->m() + 1);
  for (int k = 0; k <= sys_->m(); ++k) a.col(k) = basis_.transpose() * (sys_->P(k) * zz);
  Matrix ab = a * b_.transpose();
  return ab + ab.transpose();
}

Matrix FkmM2Curvature::nabla_W(const Vector& z) const {
  Vector zz = basis_ * z;
  Matrix e(dim(), pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto [k, s] = pairs_[p];
    e.col(p) = basis_.transpose() * (sys_->P(k) * (sys_->P(s) * zz));
  }
  Matrix ed = e * d_.transpose();
  return 2.0 * (ed + ed.transpose()) - 2.0 * nabla_V(z);
}

Matrix FkmM2Curvature::nabla_tau(const Vector& z) const {
  return (sys_->l() - 2.0 * sys_->m()) * nabla_V(z) - nabla_W(z);
}

Matrix FkmM2Curvature::nabla_ricci(const Vector& z) const { return -nabla_tau(z); }

std::unique_ptr<CurvatureModel> closed_form_model(const CliffordSystem& sys,
                                                  const TangentFrame& frame) {
  if (frame.point.manifold == FocalSet::M1) return std::make_unique<FkmM1Curvature>(sys, frame);
  return std::make_unique<FkmM2Curvature>(sys, frame);
}

DefectEstimate cyclic_parallel_defect(const CurvatureModel& model, int n_samples,
                                      std::uint64_t seed, const CurvatureModel* oracle,
                                      int oracle_subsample) {
  DefectEstimate d;
  if (n_samples <= 0) {
    d.empty = true;
    return d;
  }
  Rng rng(seed);
  if (oracle) d.oracle_discrepancy = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Vector x = random_unit(model.dim(), rng);
    Matrix t = model.nabla_ricci(x);
    const double v = x.dot(t * x);
    d.value = std::max(d.value, std::abs(v));
    if (oracle && s < oracle_subsample) {
      const double w = x.dot(oracle->nabla_ricci(x) * x);
      d.oracle_discrepancy = std::max(d.oracle_discrepancy, std::abs(v - w));
    }
  }
  d.samples = n_samples;
  return d;
}

namespace {

std::vector<int> sweep_indices(int n, Rng& rng, int cap) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (n > cap) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
  }
  return idx;
}

}  // namespace

DefectEstimate codazzi_defect(const CurvatureModel& model, int n_samples, std::uint64_t seed,
                              bool basis_sweep) {
  DefectEstimate d;
  const int n = model.dim();
  Rng rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    Vector x = random_unit(n, rng), y = random_unit(n, rng), z = random_unit(n, rng);
    const double v = y.dot(model.nabla_ricci(x) * z) - x.dot(model.nabla_ricci(y) * z);
    d.value = std::max(d.value, std::abs(v));
  }
  d.samples = n_samples;
  if (basis_sweep) {
    auto idx = sweep_indices(n, rng, 96);
    std::vector<Matrix> t;
    for (int i : idx) t.push_back(model.nabla_ricci(Vector::Unit(n, i)));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        // row idx[b] of T_a against row idx[a] of T_b, every k
        Vector diff = t[a].row(idx[b]).transpose() - t[b].row(idx[a]).transpose();
        d.value = std::max(d.value, diff.cwiseAbs().maxCoeff());
      }
    d.samples += static_cast<int>(idx.size() * (idx.size() - 1) / 2);
  }
  d.empty = d.samples == 0;
  return d;
}

DefectEstimate ricci_parallel_defect(const CurvatureModel& model, int n_samples,
                                     std::uint64_t seed, bool basis_sweep) {
  DefectEstimate d;
  const int n = model.dim();
  Rng rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    Vector x = random_unit(n, rng), y = random_unit(n, rng), z = random_unit(n, rng);
    d.value = std::max(d.value, std::abs(x.dot(model.nabla_ricci(z) * y)));
  }
  d.samples = n_samples;
  if (basis_sweep) {
    for (int i = 0; i < n; ++i) d.value = std::max(d.value, max_abs(model.nabla_ricci(Vector::Unit(n, i))));
    d.samples += n;
  }
  d.empty = d.samples == 0;
  return d;
}

double einstein_defect(const Matrix& ricci) {
  if (ricci.rows() == 0) return 0.0;
  Vector ev = symmetric_eigenvalues(ricci);
  const double mean = ev.mean();
  return (ev.array() - mean).abs().maxCoeff();
}

std::vector<SpectrumCluster> ricci_operator_spectrum(const Matrix& ricci, double gap_tol) {
  return cluster_spectrum(ricci, gap_tol);
}

SectionalValue sectional_curvature(const EmbeddedGeometry& g, const Vector& x, const Vector& y) {
  SectionalValue s;
  for (const auto& a : g.shape_ops) {
    Vector ax = a * x;
    s.a_tilde += ax.dot(x) * y.dot(a * y);
    const double b = ax.dot(y);
    s.b_tilde += b * b;
  }
  s.sec = 1.0 + s.a_tilde - s.b_tilde;
  return s;
}

SectionalScan scan_sectional(const EmbeddedGeometry& g, int n_pairs, std::uint64_t seed) {
  SectionalScan sc;
  sc.sec_min = std::numeric_limits<double>::infinity();
  sc.sec_max = -std::numeric_limits<double>::infinity();
  sc.a_tilde_max = -std::numeric_limits<double>::infinity();
  Rng rng(seed);
  const int n = g.dim();
  if (n < 2) throw InvalidArgument("sectional curvature needs dim >= 2");
  for (int p = 0; p < n_pairs; ++p) {
    Vector x = random_unit(n, rng);
    Vector y = random_unit(n, rng);
    y -= y.dot(x) * x;
    if (y.norm() < 1e-8) {
      --p;
      continue;
    }
    y.normalize();
    auto s = sectional_curvature(g, x, y);
    sc.sec_min = std::min(sc.sec_min, s.sec);
    sc.sec_max = std::max(sc.sec_max, s.sec);
    sc.a_tilde_max = std::max(sc.a_tilde_max, s.a_tilde);
  }
  sc.pairs = n_pairs;
  return sc;
}

RicciScan ricci_direction_scan(const Matrix& ricci, int n_samples, std::uint64_t seed,
                               double gap_tol) {
  RicciScan r;
  const int n = static_cast<int>(ricci.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (ricci + ricci.transpose()));
  const Vector& ev = es.eigenvalues();
  r.min = ev[0];
  r.max = ev[n - 1];
  int top = n - 1;
  while (top > 0 && r.max - ev[top - 1] <= gap_tol) --top;
  r.max_multiplicity = n - top;
  r.argmax = es.eigenvectors().rightCols(r.max_multiplicity);
  Rng rng(seed);
  r.sampled_min = std::numeric_limits<double>::infinity();
  r.sampled_max = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    Vector x = random_unit(n, rng);
    const double v = x.dot(ricci * x);
    r.sampled_min = std::min(r.sampled_min, v);
    r.sampled_max = std::max(r.sampled_max, v);
  }
  r.samples = n_samples;
  return r;
}

namespace {

double off_l_norm(const CliffordSystem& sys, const Vector& x, const Vector& v) {
  Vector r = v - v.dot(x) * x;
  for (int a = 0; a <= sys.m(); ++a) {
    Vector pax = sys.P(a) * x;
    r -= v.dot(pax) * pax;
  }
  return r.norm();
}

}  // namespace

LResidual a_tensor_M1(const CliffordSystem& sys, const Vector& x, const Vector& X, const Vector& Y) {
  Vector acc = Vector::Zero(x.size());
  for (int a = 0; a <= sys.m(); ++a)
    for (int b = a + 1; b <= sys.m(); ++b) {
      Vector v = sys.P(a) * (sys.P(b) * x);
      Vector ey = sys.P(a) * (sys.P(b) * Y);
      acc += X.dot(v) * ey + X.dot(ey) * v;
    }
  return {acc, off_l_norm(sys, x, acc)};
}

LResidual b_tensor_M1(const CliffordSystem& sys, const Vector& x, const Vector& X) {
  Vector acc = Vector::Zero(x.size());
  for (int a = 0; a <= sys.m(); ++a)
    for (int b = a + 1; b <= sys.m(); ++b) {
      Vector v = sys.P(a) * (sys.P(b) * x);
      acc += X.dot(v) * (sys.P(a) * (sys.P(b) * X));
    }
  return {acc, off_l_norm(sys, x, acc)};
}

double a_tensor_defect(const CliffordSystem& sys, const TangentFrame& frame) {
  const Matrix& bas = frame.tangent;
  const Vector& x = frame.point.x;
  const int n = static_cast<int>(bas.cols());
  auto pairs = index_pairs(sys.m());
  std::vector<Matrix> eb;  // E_ab B
  Matrix v(x.size(), pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [a, b] = pairs[p];
    eb.push_back(sys.P(a) * (sys.P(b) * bas));
    v.col(p) = sys.P(a) * (sys.P(b) * x);
  }
  Matrix c = bas.transpose() * v;  // <e_i, v_ab>
  Matrix l(x.size(), sys.m() + 2);
  l.col(0) = x;
  for (int a = 0; a <= sys.m(); ++a) l.col(a + 1) = sys.P(a) * x;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    Matrix mi = Matrix::Zero(x.size(), n);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      mi += c(i, p) * eb[p];
      // <e_i, E Y> as a row over basis Y
      mi += v.col(p) * (bas.col(i).transpose() * eb[p]);
    }
    mi -= l * (l.transpose() * mi);
    worst = std::max(worst, mi.colwise().norm().maxCoeff());
  }
  return worst;
}

}  // namespace isopar
