#include "isopar/fkm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "isopar/error.hpp"

namespace isopar {

std::string to_string(FocalSet f) { return f == FocalSet::M1 ? "M1" : "M2"; }

FocalSet focal_set_from_string(std::string_view s) {
  if (s == "M1" || s == "m1") return FocalSet::M1;
  if (s == "M2" || s == "m2") return FocalSet::M2;
  throw InvalidArgument("unknown focal set '" + std::string(s) + "'");
}

std::string to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed_form" : "numeric";
}

double TangentFrame::gram_residual() const {
  const auto n = point.x.size();
  Matrix all(n, 1 + tangent.cols() + normal.cols());
  all << point.x, tangent, normal;
  double r = isopar::gram_residual(all);
  if (all.cols() != n) r = std::max(r, 1.0);  // does not span
  return r;
}

Vector clifford_moments(const CliffordSystem& sys, const Vector& x) {
  Vector g(sys.m() + 1);
  for (int a = 0; a <= sys.m(); ++a) g[a] = x.dot(sys.P(a) * x);
  return g;
}

double fkm_value(const CliffordSystem& sys, const Vector& x) {
  const double r2 = x.squaredNorm();
  return r2 * r2 - 2.0 * clifford_moments(sys, x).squaredNorm();
}

Vector fkm_gradient(const CliffordSystem& sys, const Vector& x) {
  Vector g = 4.0 * x.squaredNorm() * x;
  for (int a = 0; a <= sys.m(); ++a) {
    Vector pa = sys.P(a) * x;
    g -= 8.0 * x.dot(pa) * pa;
  }
  return g;
}

namespace {

// Newton along the spherical gradient onto F = level
Vector project_to_level(const CliffordSystem& sys, Vector x, double level) {
  x.normalize();
  for (int it = 0; it < 100; ++it) {
    const double f = fkm_value(sys, x);
    if (std::abs(f - level) < 1e-14) return x;
    Vector g = fkm_gradient(sys, x);
    g -= g.dot(x) * x;
    const double g2 = g.squaredNorm();
    if (g2 < 1e-20) break;
    x -= (f - level) / g2 * g;
    x.normalize();
  }
  if (std::abs(fkm_value(sys, x) - level) < 1e-12) return x;
  throw NonConvergence("level set projection did not converge", x, 100);
}

double great_circle_second_derivative(const CliffordSystem& sys, const Vector& x, const Vector& e,
                                      double h) {
  auto f = [&](double t) { return fkm_value(sys, std::cos(t) * x + std::sin(t) * e); };
  const double f0 = f(0.0);
  auto d2 = [&](double s) { return (f(s) - 2.0 * f0 + f(-s)) / (s * s); };
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

}  // namespace

ConsistencyReport isoparametric_consistency(const CliffordSystem& sys, double level,
                                            int n_samples, std::uint64_t seed) {
  if (!(level > -1.0 && level < 1.0)) throw InvalidArgument("level must lie in (-1, 1)");
  if (n_samples < 1) throw InvalidArgument("need at least one sample");
  ConsistencyReport rep;
  rep.level = level;
  rep.n_samples = n_samples;
  rep.seed = seed;
  Rng rng(seed);
  const int n = sys.ambient_dim();
  std::vector<double> grads, laps;
  for (int s = 0; s < n_samples; ++s) {
    Vector x;
    try {
      x = project_to_level(sys, random_unit(n, rng), level);
    } catch (const NonConvergence& e) {
      throw NonConvergence(std::string(e.what()) + " (seed " + std::to_string(seed) +
                               ", sample " + std::to_string(s) + ")",
                           e.last_iterate(), e.iterations());
    }
    Vector g = fkm_gradient(sys, x);
    g -= g.dot(x) * x;
    grads.push_back(g.squaredNorm());
    Matrix frame = orthonormal_complement(x);
    double lap = 0.0;
    for (int i = 0; i < frame.cols(); ++i)
      lap += great_circle_second_derivative(sys, x, frame.col(i), 4e-3);
    laps.push_back(lap);
  }
  auto stats = [](const std::vector<double>& v, double& mean, double& spread) {
    mean = 0.0;
    for (double d : v) mean += d;
    mean /= static_cast<double>(v.size());
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    spread = *hi - *lo;
  };
  stats(grads, rep.grad_sq_mean, rep.grad_sq_spread);
  stats(laps, rep.laplacian_mean, rep.laplacian_spread);
  return rep;
}

std::optional<Vector> solve_quadric_system(const std::vector<Matrix>& r, const Vector& y0,
                                           int max_iter, double tol, Vector* last,
                                           int* iterations) {
  const int d = static_cast<int>(y0.size());
  const int p = static_cast<int>(r.size());
  if (y0.norm() == 0.0) throw InvalidArgument("quadric solve: zero start vector");
  Vector y = y0 / y0.norm();

  auto residual = [&](const Vector& v, Vector& g, std::vector<Vector>* ry) {
    g.resize(p + 1);
    if (ry) ry->resize(p);
    for (int a = 0; a < p; ++a) {
      Vector rv = r[a] * v;
      g[a] = v.dot(rv);
      if (ry) (*ry)[a] = std::move(rv);
    }
    g[p] = v.squaredNorm() - 1.0;
  };

  Vector g;
  std::vector<Vector> ry;
  bool converged = false;
  int it = 0;
  for (; it < max_iter; ++it) {
    residual(y, g, &ry);
    const double res = g.cwiseAbs().maxCoeff();
    if (res <= tol) {
      converged = true;
      break;
    }
    Matrix jac(p + 1, d);
    for (int a = 0; a < p; ++a) jac.row(a) = 2.0 * ry[a].transpose();
    jac.row(p) = 2.0 * y.transpose();
    // least-norm Gauss-Newton step; tolerates rank loss
    Vector dy = -jac.completeOrthogonalDecomposition().solve(g);
    const double merit = g.squaredNorm();
    double t = 1.0;
    Vector trial, gt;
    for (;;) {
      trial = y + t * dy;
      residual(trial, gt, nullptr);
      if (gt.squaredNorm() < (1.0 - 1e-4 * t) * merit || t < 1e-8) break;
      t *= 0.5;
    }
    y = trial;
  }
  if (iterations) *iterations = it;
  if (converged) {
    // one polishing step so the result is a smooth function of the start
    Matrix jac(p + 1, d);
    for (int a = 0; a < p; ++a) jac.row(a) = 2.0 * ry[a].transpose();
    jac.row(p) = 2.0 * y.transpose();
    Vector polished = y - jac.completeOrthogonalDecomposition().solve(g);
    polished.normalize();
    residual(polished, g, nullptr);
    if (g.cwiseAbs().maxCoeff() <= tol) return polished;
    y.normalize();
    return y;
  }
  if (last) *last = y;
  return std::nullopt;
}

FocalPoint project_to_M1(const CliffordSystem& sys, const Vector& x0, const ProjectionOptions& opt) {
  if (x0.size() != sys.ambient_dim()) throw InvalidArgument("project_to_M1: dimension mismatch");
  if (x0.norm() == 0.0) throw InvalidArgument("project_to_M1: zero start vector");
  Vector x = x0 / x0.norm();
  if (clifford_moments(sys, x).cwiseAbs().maxCoeff() <= opt.tol)
    return FocalPoint{x, FocalSet::M1, std::nullopt, {}};

  Rng rng(opt.seed);
  Vector last = x;
  int total = 0;
  for (int attempt = 0; attempt <= opt.restarts; ++attempt) {
    Vector start = x;
    if (attempt > 0)
      start = x + 0.3 * attempt * gaussian_vector(sys.ambient_dim(), rng) /
                      std::sqrt(static_cast<double>(sys.ambient_dim()));
    int its = 0;
    auto y = solve_quadric_system(sys.generators(), start, opt.max_iter, opt.tol, &last, &its);
    total += its;
    if (y && clifford_moments(sys, *y).cwiseAbs().maxCoeff() <= opt.tol)
      return FocalPoint{*y, FocalSet::M1, std::nullopt, {}};
  }
  throw NonConvergence("projection onto M1 did not converge", last, total);
}

FocalPoint sample_M1(const CliffordSystem& sys, std::uint64_t seed) {
  Rng rng(seed);
  ProjectionOptions opt;
  opt.seed = mix_seed(seed, 1);
  return project_to_M1(sys, gaussian_vector(sys.ambient_dim(), rng), opt);
}

FocalPoint sample_M2(const CliffordSystem& sys, const Vector& c, std::uint64_t seed) {
  if (c.size() != sys.m() + 1) throw InvalidArgument("sample_M2: need m+1 coefficients");
  if (std::abs(c.norm() - 1.0) > 1e-10) throw InvalidArgument("sample_M2: P must be unit");
  Rng rng(seed);
  const Matrix p = sys.combination(c);
  Vector x;
  do {
    Vector g = gaussian_vector(sys.ambient_dim(), rng);
    x = 0.5 * (g + p * g);
  } while (x.norm() < 1e-6);
  x.normalize();
  return FocalPoint{x, FocalSet::M2, Vector(c), {}};
}

FocalPoint sample_M2(const CliffordSystem& sys, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 7));
  return sample_M2(sys, random_unit(sys.m() + 1, rng), seed);
}

void check_focal_point(const CliffordSystem& sys, const FocalPoint& pt, double tol) {
  if (pt.x.size() != sys.ambient_dim()) throw InvalidArgument("focal point: dimension mismatch");
  if (std::abs(pt.x.norm() - 1.0) > tol) throw InvalidArgument("focal point: x is not unit");
  if (pt.manifold == FocalSet::M1) {
    if (clifford_moments(sys, pt.x).cwiseAbs().maxCoeff() > tol)
      throw InvalidArgument("focal point: x is not on M1");
  } else {
    if (!pt.fixing_coeffs) throw InvalidArgument("focal point: M2 needs the fixing P");
    const Vector& c = *pt.fixing_coeffs;
    if (c.size() != sys.m() + 1 || std::abs(c.norm() - 1.0) > tol)
      throw InvalidArgument("focal point: fixing P is not a unit Clifford element");
    if ((sys.combination(c) * pt.x - pt.x).norm() > tol)
      throw InvalidArgument("focal point: P x != x");
  }
}

TangentFrame frame_M1(const CliffordSystem& sys, const FocalPoint& pt) {
  if (pt.manifold != FocalSet::M1) throw InvalidArgument("frame_M1: point is not on M1");
  check_focal_point(sys, pt);
  const int n = sys.ambient_dim();
  TangentFrame f;
  f.point = pt;
  f.normal.resize(n, sys.m() + 1);
  for (int a = 0; a <= sys.m(); ++a) f.normal.col(a) = sys.P(a) * pt.x;
  Matrix span(n, sys.m() + 2);
  span << pt.x, f.normal;
  f.tangent = orthonormal_complement(span);
  if (f.tangent.cols() != n - sys.m() - 2) throw InternalError("frame_M1: wrong tangent dimension");
  return f;
}

namespace {

// orthonormal basis of E_+(P) and E_-(P) for a symmetric involution P
std::pair<Matrix, Matrix> involution_eigenspaces(const Matrix& p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (p + p.transpose()));
  const Vector& ev = es.eigenvalues();
  std::vector<int> plus, minus;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i] - 1.0) < 1e-6) plus.push_back(i);
    else if (std::abs(ev[i] + 1.0) < 1e-6) minus.push_back(i);
    else throw InvalidArgument("matrix is not an involution");
  }
  Matrix ep(p.rows(), plus.size()), em(p.rows(), minus.size());
  for (std::size_t i = 0; i < plus.size(); ++i) ep.col(i) = es.eigenvectors().col(plus[i]);
  for (std::size_t i = 0; i < minus.size(); ++i) em.col(i) = es.eigenvectors().col(minus[i]);
  return {ep, em};
}

}  // namespace

TangentFrame frame_M2(const CliffordSystem& sys, const FocalPoint& pt) {
  if (pt.manifold != FocalSet::M2) throw InvalidArgument("frame_M2: point is not on M2");
  check_focal_point(sys, pt);
  const int m = sys.m();
  const int l = sys.l();
  TangentFrame f;
  f.point = pt;
  f.q_frame = clifford_sphere_frame(sys, *pt.fixing_coeffs);
  auto [ep, em] = involution_eigenspaces(f.q_frame[0]);
  if (ep.cols() != l || em.cols() != l) throw InternalError("frame_M2: eigenspaces not of dim l");

  // {w in E_+(P), w orthogonal to x}
  Vector u = ep.transpose() * pt.x;
  Matrix w = ep * orthonormal_complement(u);
  Matrix qx(sys.ambient_dim(), m);
  for (int i = 1; i <= m; ++i) qx.col(i - 1) = f.q_frame[i] * pt.x;
  f.tangent.resize(sys.ambient_dim(), w.cols() + m);
  f.tangent << w, qx;

  // normal: E_-(P) minus Span{Q_i x}
  Matrix c = em.transpose() * qx;
  f.normal = em * orthonormal_complement(c);
  if (f.tangent.cols() != l + m - 1 || f.normal.cols() != l - m)
    throw InternalError("frame_M2: wrong dimensions");
  return f;
}

TangentFrame focal_frame(const CliffordSystem& sys, const FocalPoint& pt) {
  return pt.manifold == FocalSet::M1 ? frame_M1(sys, pt) : frame_M2(sys, pt);
}

Matrix m2_listed_basis(const TangentFrame& frame, int i) {
  const int m = static_cast<int>(frame.q_frame.size()) - 1;
  if (m < 1 || i < 1 || i > m) throw InvalidArgument("m2_listed_basis: index out of range");
  const Vector& x = frame.point.x;
  const Matrix& qi = frame.q_frame[i];
  Matrix b(x.size(), frame.normal.cols() + 2 * m - 1);
  int c = 0;
  for (int a = 0; a < frame.normal.cols(); ++a) b.col(c++) = qi * frame.normal.col(a);
  for (int j = 1; j <= m; ++j) b.col(c++) = frame.q_frame[j] * x;
  for (int j = 1; j <= m; ++j)
    if (j != i) b.col(c++) = qi * (frame.q_frame[j] * x);
  return b;
}

std::vector<Matrix> generators_with_extension(const CliffordSystem& sys) {
  std::vector<Matrix> g = sys.generators();
  if (sys.extension()) g.push_back(*sys.extension());
  return g;
}

namespace {

Matrix quad_product(const std::vector<Matrix>& gens, const Quad& q) {
  std::set<int> idx(q.begin(), q.end());
  if (idx.size() != 4) throw InvalidArgument("quadruple indices must be distinct");
  for (int i : q)
    if (i < 0 || i >= static_cast<int>(gens.size()))
      throw InvalidArgument("quadruple index out of range: " + std::to_string(i));
  return gens[q[0]] * (gens[q[1]] * (gens[q[2]] * gens[q[3]]));
}

std::vector<Matrix> checked_quad_products(const std::vector<Matrix>& gens,
                                          const std::vector<Quad>& quads) {
  std::vector<Matrix> prods;
  for (const auto& q : quads) {
    Matrix pq = quad_product(gens, q);
    if (max_abs(pq - pq.transpose()) > 1e-10) throw InvalidArgument("4-product is not symmetric");
    if (max_abs(pq * pq - Matrix::Identity(pq.rows(), pq.cols())) > 1e-10)
      throw InvalidArgument("4-product is not an involution");
    prods.push_back(std::move(pq));
  }
  for (std::size_t i = 0; i < prods.size(); ++i)
    for (std::size_t j = i + 1; j < prods.size(); ++j)
      if (max_abs(prods[i] * prods[j] - prods[j] * prods[i]) > 1e-10)
        throw InvalidArgument("4-products do not commute");
  return prods;
}

Matrix joint_eigenspace_of(const std::vector<Matrix>& prods, const std::vector<int>& signs, int n) {
  Matrix b = Matrix::Identity(n, n);
  for (std::size_t q = 0; q < prods.size(); ++q) {
    if (b.cols() == 0) break;
    Matrix r = b.transpose() * prods[q] * b;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.transpose()));
    std::vector<int> keep;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()[i] - signs[q]) < 0.5) keep.push_back(i);
    Matrix v(r.rows(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) v.col(i) = es.eigenvectors().col(keep[i]);
    b = b * v;
  }
  return b;
}

// restricted quadratic forms that are not identically zero
std::vector<Matrix> restricted_forms(const CliffordSystem& sys, const Matrix& b) {
  std::vector<Matrix> r;
  for (int a = 0; a <= sys.m(); ++a) {
    Matrix ra = b.transpose() * sys.P(a) * b;
    ra = 0.5 * (ra + ra.transpose());
    if (max_abs(ra) > 1e-12) r.push_back(std::move(ra));
  }
  return r;
}

}  // namespace

Matrix joint_eigenspace(const std::vector<Matrix>& gens, const std::vector<Quad>& quads,
                        const std::vector<int>& signs) {
  if (signs.size() != quads.size()) throw InvalidArgument("one sign per quadruple");
  if (gens.empty()) throw InvalidArgument("no generators");
  auto prods = checked_quad_products(gens, quads);
  return joint_eigenspace_of(prods, signs, static_cast<int>(gens.front().rows()));
}

FocalPoint common_eigvec_point(const CliffordSystem& sys, const std::vector<Quad>& quads,
                               std::uint64_t seed, bool allow_sign_flip) {
  const auto gens = generators_with_extension(sys);
  const auto prods = checked_quad_products(gens, quads);
  const int n = sys.ambient_dim();
  std::vector<Quad> recorded = quads;
  Matrix b = Matrix::Identity(n, n);
  for (std::size_t q = 0; q < prods.size(); ++q) {
    Matrix next = b * joint_eigenspace_of({b.transpose() * prods[q] * b}, {1}, static_cast<int>(b.cols()));
    if (next.cols() == 0 && allow_sign_flip) {
      next = b * joint_eigenspace_of({b.transpose() * prods[q] * b}, {-1}, static_cast<int>(b.cols()));
      std::swap(recorded[q][0], recorded[q][1]);
    }
    b = next;
    if (b.cols() == 0) throw Infeasible("joint +1 eigenspace of the 4-products is trivial");
  }
  const int d = static_cast<int>(b.cols());
  auto r = restricted_forms(sys, b);
  for (const auto& ra : r)
    if (max_abs(ra - Matrix::Identity(d, d)) < 1e-10 || max_abs(ra + Matrix::Identity(d, d)) < 1e-10)
      throw Infeasible("a surviving generator acts as +-I on the joint eigenspace");

  Rng rng(mix_seed(seed, 11));
  std::optional<Vector> y;
  if (r.empty()) {
    y = random_unit(d, rng);
  } else {
    for (int attempt = 0; attempt < 8 && !y; ++attempt)
      y = solve_quadric_system(r, random_unit(d, rng), 50, 1e-13);
  }
  if (!y) throw Infeasible("no point of M1 found in the joint eigenspace");
  Vector x = b * (*y);
  x.normalize();
  if (clifford_moments(sys, x).cwiseAbs().maxCoeff() > 1e-10)
    throw Infeasible("joint eigenvector is not on M1");
  return FocalPoint{x, FocalSet::M1, std::nullopt, recorded};
}

RestrictedMaximum maximize_restricted_F(const CliffordSystem& sys, const std::vector<Quad>& quads,
                                        const std::vector<bool>& plus_signs, std::uint64_t seed) {
  if (plus_signs.size() != quads.size()) throw InvalidArgument("one sign per quadruple");
  std::vector<int> signs;
  for (bool s : plus_signs) signs.push_back(s ? 1 : -1);
  const auto gens = generators_with_extension(sys);
  Matrix b = joint_eigenspace(gens, quads, signs);
  if (b.cols() == 0) throw Infeasible("joint eigenspace of the 4-products is trivial");
  const int d = static_cast<int>(b.cols());
  auto r = restricted_forms(sys, b);

  auto value = [&](const Vector& y) {
    double s = 0.0;
    for (const auto& ra : r) {
      double g = y.dot(ra * y);
      s += g * g;
    }
    double n2 = y.squaredNorm();
    return n2 * n2 - 2.0 * s;
  };
  auto gradient = [&](const Vector& y) {
    Vector g = 4.0 * y.squaredNorm() * y;
    for (const auto& ra : r) {
      Vector ry = ra * y;
      g -= 8.0 * y.dot(ry) * ry;
    }
    return g;
  };

  Rng rng(mix_seed(seed, 13));
  RestrictedMaximum best;
  best.value = -std::numeric_limits<double>::infinity();
  best.subspace_dim = d;
  Vector best_y;
  const int restarts = 32;
  for (int rs = 0; rs < restarts; ++rs) {
    Vector y = random_unit(d, rng);
    double f = value(y);
    for (int it = 0; it < 2000; ++it) {
      Vector g = gradient(y);
      g -= g.dot(y) * y;
      if (g.norm() < 1e-12) break;
      double t = 0.1;
      Vector trial;
      double ft = f;
      while (t > 1e-12) {
        trial = (y + t * g).normalized();
        ft = value(trial);
        if (ft > f + 1e-4 * t * g.squaredNorm()) break;
        t *= 0.5;
      }
      if (t <= 1e-12) break;
      y = trial;
      f = ft;
      if (1.0 - f < 1e-14) break;
    }
    best.restarts_used = rs + 1;
    if (f > best.value) {
      best.value = f;
      best_y = y;
    }
    if (1.0 - best.value < 1e-10) break;
  }
  if (1.0 - best.value < 1e-3 && !r.empty()) {
    if (auto y = solve_quadric_system(r, best_y, 50, 1e-13)) {
      if (value(*y) >= best.value) {
        best_y = *y;
        best.value = value(*y);
      }
    }
  }
  Vector x = (b * best_y).normalized();
  best.point = FocalPoint{x, FocalSet::M1, std::nullopt, {}};
  for (std::size_t q = 0; q < quads.size(); ++q)
    if (plus_signs[q]) best.point.constraints.push_back(quads[q]);
  best.on_m1 = clifford_moments(sys, x).cwiseAbs().maxCoeff() <= 1e-10;
  return best;
}

Matrix v_space_vectors(const CliffordSystem& sys, const Vector& x) {
  const int m = sys.m();
  Matrix v(x.size(), m * (m + 1) / 2);
  int c = 0;
  for (int a = 0; a <= m; ++a) {
    for (int b = a + 1; b <= m; ++b) v.col(c++) = sys.P(a) * (sys.P(b) * x);
  }
  return v;
}

int v_space_dimension(const CliffordSystem& sys, const Vector& x, double tol) {
  return numerical_rank(v_space_vectors(sys, x), tol);
}

}  // namespace isopar
