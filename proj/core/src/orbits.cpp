#include "isopar/orbits.hpp"

#include <cmath>
#include <complex>

#include <unsupported/Eigen/MatrixFunctions>

#include "isopar/error.hpp"

namespace isopar {

namespace {

using cd = std::complex<double>;

ComplexMatrix unit(int i, int j, cd v = 1.0) {
  ComplexMatrix e = ComplexMatrix::Zero(5, 5);
  e(i, j) = v;
  return e;
}

ComplexMatrix skew(int i, int j, cd v = 1.0) { return unit(i, j, v) - unit(j, i, v); }

ComplexMatrix block_j(int at) {
  ComplexMatrix z = ComplexMatrix::Zero(5, 5);
  z(at, at + 1) = 1.0;
  z(at + 1, at) = -1.0;
  return z;
}

struct Svd {
  Matrix u, v;
  Vector s;
  int rank = 0;
};

Svd thin_svd(const Matrix& a, int forced_rank = -1) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Svd r;
  r.u = svd.matrixU();
  r.v = svd.matrixV();
  r.s = svd.singularValues();
  if (forced_rank >= 0) {
    r.rank = forced_rank;
  } else {
    const double smax = r.s.size() ? r.s[0] : 0.0;
    while (r.rank < r.s.size() && r.s[r.rank] > 1e-9 * smax) ++r.rank;
  }
  return r;
}

Matrix kmat_at(const OrbitData& orbit, const Vector& y) {
  Matrix k(orbit.ambient_dim(), orbit.k_dim());
  for (int a = 0; a < orbit.k_dim(); ++a) k.col(a) = orbit.action[a] * y;
  return k;
}

}  // namespace

std::string to_string(OrbitCase c) {
  switch (c) {
    case OrbitCase::so5_cp3: return "so5_cp3";
    case OrbitCase::so5_grassmann: return "so5_grassmann";
    case OrbitCase::u5_M1_14: return "u5_M1_14";
    case OrbitCase::u5_M2_13: return "u5_M2_13";
  }
  return "?";
}

OrbitCase orbit_case_from_string(std::string_view s) {
  for (OrbitCase c : all_orbit_cases())
    if (to_string(c) == s) return c;
  throw InvalidArgument("unknown orbit case '" + std::string(s) + "'");
}

std::vector<OrbitCase> all_orbit_cases() {
  return {OrbitCase::so5_cp3, OrbitCase::so5_grassmann, OrbitCase::u5_M1_14, OrbitCase::u5_M2_13};
}

double OrbitData::inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return 0.5 * (a.array() * b.conjugate().array()).sum().real();
}

ComplexMatrix OrbitData::bracket(const ComplexMatrix& k, const ComplexMatrix& z) const {
  return k.conjugate() * z - z * k;
}

Vector OrbitData::p_coords(const ComplexMatrix& z) const {
  Vector c(ambient_dim());
  for (int b = 0; b < ambient_dim(); ++b) c[b] = inner(p_basis[b], z);
  return c;
}

ComplexMatrix OrbitData::p_matrix(const Vector& c) const {
  ComplexMatrix z = ComplexMatrix::Zero(5, 5);
  for (int b = 0; b < ambient_dim(); ++b) z += c[b] * p_basis[b];
  return z;
}

Vector OrbitData::k_coords(const ComplexMatrix& k) const {
  Vector c(k_dim());
  for (int a = 0; a < k_dim(); ++a) c[a] = inner(k_basis[a], k);
  return c;
}

ComplexMatrix OrbitData::k_matrix(const Vector& c) const {
  ComplexMatrix k = ComplexMatrix::Zero(5, 5);
  for (int a = 0; a < k_dim(); ++a) k += c[a] * k_basis[a];
  return k;
}

Matrix OrbitData::L(const Vector& c) const {
  Matrix l = Matrix::Zero(ambient_dim(), ambient_dim());
  for (int a = 0; a < k_dim(); ++a)
    if (c[a] != 0.0) l += c[a] * action[a];
  return l;
}

OrbitData build_orbit(OrbitCase id) {
  OrbitData o;
  o.id = id;
  o.unitary = id == OrbitCase::u5_M1_14 || id == OrbitCase::u5_M2_13;
  const cd I(0.0, 1.0);

  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) o.p_basis.push_back(skew(i, j));
  if (o.unitary) {
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) o.p_basis.push_back(skew(i, j, I));
    for (int j = 0; j < 5; ++j) o.k_basis.push_back(unit(j, j, std::sqrt(2.0) * I));
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        o.k_basis.push_back(skew(i, j));
        o.k_basis.push_back(unit(i, j, I) + unit(j, i, I));
      }
  } else {
    o.k_basis = o.p_basis;
  }

  for (const ComplexMatrix& k : o.k_basis) {
    Matrix a(o.ambient_dim(), o.ambient_dim());
    for (int b = 0; b < o.ambient_dim(); ++b) a.col(b) = o.p_coords(o.bracket(k, o.p_basis[b]));
    o.action.push_back(a);
  }

  ComplexMatrix z0;
  switch (id) {
    case OrbitCase::so5_cp3:
    case OrbitCase::u5_M1_14:
      z0 = (block_j(0) + block_j(2)) / std::sqrt(2.0);
      break;
    case OrbitCase::so5_grassmann:
    case OrbitCase::u5_M2_13:
      z0 = block_j(0);
      break;
  }
  o.z0 = o.p_coords(z0);
  if (std::abs(o.z0.norm() - 1.0) > 1e-14) throw InternalError("orbit: base point is not unit");

  if (o.unitary) {
    o.focal_m1 = 4;
    o.focal_m2 = 5;
    o.expected_dim = id == OrbitCase::u5_M1_14 ? 14 : 13;
  } else {
    o.focal_m1 = o.focal_m2 = 2;
    o.expected_dim = 6;
  }

  const Matrix k = kmat_at(o, o.z0);
  o.m_basis = orthonormal_basis(k.transpose(), 1e-9);
  if (o.dim() != o.expected_dim) throw InternalError("orbit " + to_string(id) + ": wrong dimension");
  return o;
}

OrbitFrame orbit_frame(const OrbitData& orbit, const Vector& y) {
  if (y.size() != orbit.ambient_dim()) throw InvalidArgument("orbit_frame: dimension mismatch");
  OrbitFrame f;
  f.point = y;
  f.kmat = kmat_at(orbit, y);
  const Svd s = thin_svd(f.kmat);
  if (s.rank != orbit.expected_dim) throw InvalidArgument("orbit_frame: point is not on the orbit");
  f.tangent = s.u.leftCols(s.rank);
  f.kpinv = s.v.leftCols(s.rank) * s.s.head(s.rank).cwiseInverse().asDiagonal() *
            f.tangent.transpose();
  Matrix span(y.size(), s.rank + 1);
  span << y, f.tangent;
  f.normal = orthonormal_complement(span);
  return f;
}

OrbitFrame orbit_base_frame(const OrbitData& orbit) {
  OrbitFrame f = orbit_frame(orbit, orbit.z0);
  if (orbit.id == OrbitCase::u5_M2_13) {
    // xi_a = diag(0, X_a), X_a running through e_{12}, i e_{12}, e_{13}, i e_{13}, e_{23}, i e_{23}
    const cd I(0.0, 1.0);
    Matrix n(orbit.ambient_dim(), 6);
    int c = 0;
    for (auto [i, j] : {std::pair{2, 3}, std::pair{2, 4}, std::pair{3, 4}}) {
      n.col(c++) = orbit.p_coords(skew(i, j));
      n.col(c++) = orbit.p_coords(skew(i, j, I));
    }
    if (max_abs(f.tangent.transpose() * n) > 1e-12 || max_abs(n.transpose() * orbit.z0) > 1e-12 ||
        gram_residual(n) > 1e-12)
      throw InternalError("u5_M2_13: listed normals are not an orthonormal normal basis");
    f.normal = n;
  }
  return f;
}

Vector orbit_tangent(const OrbitData& orbit, const Vector& m) { return orbit.L(m) * orbit.z0; }

Vector orbit_connection_term(const OrbitData& orbit, const OrbitFrame& frame, const Vector& m) {
  const Matrix lm = orbit.L(m);
  const Vector target = frame.tangent * (frame.tangent.transpose() * (lm * (lm * frame.point)));
  const Vector mp = frame.lift(target);
  const double res = (orbit.L(mp) * frame.point - target).norm();
  if (res > 1e-9 * (1.0 + target.norm()))
    throw InternalError("orbit: [m', z] does not reproduce [m, [m, z]]^T");
  return mp;
}

Matrix orbit_shape_operator(const OrbitData& orbit, const OrbitFrame& frame, const Vector& xi) {
  const int n = frame.dim();
  Matrix a(n, n);
  for (int j = 0; j < n; ++j) {
    const Vector mj = frame.lift(frame.tangent.col(j));
    a.col(j) = -frame.tangent.transpose() * (orbit.L(mj) * xi);
  }
  return a;
}

std::pair<double, double> homog_class_A_terms(const OrbitData& orbit, const OrbitFrame& frame,
                                              const Vector& m) {
  const Matrix lm = orbit.L(m);
  const Matrix lmp = orbit.L(orbit_connection_term(orbit, frame, m));
  const Matrix& t = frame.tangent;
  auto top = [&](const Vector& v) { return (t * (t.transpose() * v)).eval(); };
  double first = 0.0, second = 0.0;
  for (int a = 0; a < frame.normal.cols(); ++a) {
    const Vector xi = frame.normal.col(a);
    const Vector u = top(lm * xi);
    first += u.dot(top(lm * u));
    second += u.dot(top(lmp * xi));
  }
  return {first, second};
}

DefectEstimate homog_class_A_defect(const OrbitData& orbit, int n_samples, std::uint64_t seed) {
  DefectEstimate d;
  if (n_samples <= 0) {
    d.empty = true;
    return d;
  }
  const OrbitFrame f = orbit_base_frame(orbit);
  Rng rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    const Vector x = random_unit(f.dim(), rng);
    const Vector m = f.lift(f.tangent * x);
    const auto [first, second] = homog_class_A_terms(orbit, f, m);
    d.value = std::max(d.value, std::abs(first - second));
    ++d.samples;
  }
  return d;
}

EmbeddedGeometry orbit_geometry(const OrbitData& orbit, const OrbitFrame& frame) {
  EmbeddedGeometry g;
  g.point = frame.point;
  g.tangent = frame.tangent;
  g.normal = frame.normal;
  g.provenance = Provenance::closed_form;
  for (int a = 0; a < frame.normal.cols(); ++a)
    g.shape_ops.push_back(orbit_shape_operator(orbit, frame, frame.normal.col(a)));
  g.chart = std::make_shared<OrbitChart>(std::make_shared<OrbitData>(orbit));
  return g;
}

OrbitCurvature::OrbitCurvature(const OrbitData& orbit, const OrbitFrame& frame)
    : orbit_(&orbit), tangent_(frame.tangent), kpinv_(frame.kpinv) {
  ricci_ = ricci_gauss(orbit_geometry(orbit, frame));
}

Matrix OrbitCurvature::nabla_ricci(const Vector& z) const {
  const Vector m = kpinv_ * (tangent_ * z);
  const Matrix c = tangent_.transpose() * orbit_->L(m) * tangent_;
  return -(c.transpose() * ricci_ + ricci_ * c);
}

std::vector<SpectrumCluster> orbit_ricci_spectrum(const OrbitData& orbit, double gap_tol) {
  const OrbitFrame f = orbit_base_frame(orbit);
  return ricci_operator_spectrum(ricci_gauss(orbit_geometry(orbit, f)), gap_tol);
}

Matrix group_element(const OrbitData& orbit, const Vector& k) {
  const Matrix l = orbit.L(k);
  return l.exp();
}

Matrix random_group_element(const OrbitData& orbit, Rng& rng, double scale) {
  return group_element(orbit, scale * gaussian_vector(orbit.k_dim(), rng));
}

Matrix OrbitChart::tangent_projector(const Vector& y) const {
  const Svd s = thin_svd(kmat_at(*orbit_, y), orbit_->dim());
  const Matrix u = s.u.leftCols(s.rank);
  return u * u.transpose();
}

Vector OrbitChart::curve_point(const Vector& y, const Vector& v, double t) const {
  if (t == 0.0) return y;
  const Svd s = thin_svd(kmat_at(*orbit_, y), orbit_->dim());
  const Vector k = s.v.leftCols(s.rank) * s.s.head(s.rank).cwiseInverse().asDiagonal() *
                   (s.u.leftCols(s.rank).transpose() * v);
  const Matrix l = orbit_->L(t * k);
  return l.exp() * y;
}

}  // namespace isopar
