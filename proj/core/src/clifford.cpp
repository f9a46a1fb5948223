#include "isopar/clifford.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "isopar/error.hpp"

namespace isopar {

SignedPermutation::SignedPermutation(std::vector<int> cols, std::vector<int> signs)
    : cols_(std::move(cols)), signs_(std::move(signs)) {
  if (cols_.size() != signs_.size()) throw InvalidArgument("signed permutation: size mismatch");
  std::vector<char> seen(cols_.size(), 0);
  for (std::size_t i = 0; i < cols_.size(); ++i) {
    int c = cols_[i];
    if (c < 0 || c >= static_cast<int>(cols_.size()) || seen[c])
      throw InvalidArgument("signed permutation: not a permutation");
    if (signs_[i] != 1 && signs_[i] != -1)
      throw InvalidArgument("signed permutation: sign must be +-1");
    seen[c] = 1;
  }
}

SignedPermutation SignedPermutation::identity(int n) {
  std::vector<int> c(n);
  std::iota(c.begin(), c.end(), 0);
  return {c, std::vector<int>(n, 1)};
}

SignedPermutation SignedPermutation::from_dense(const Eigen::MatrixXi& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> cols(n, -1), signs(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (a(i, j) == 0) continue;
      if (cols[i] >= 0) throw InvalidArgument("not a signed permutation matrix");
      cols[i] = j;
      signs[i] = a(i, j);
    }
  return {cols, signs};
}

SignedPermutation SignedPermutation::kron(const SignedPermutation& a, const SignedPermutation& b) {
  const int na = a.size(), nb = b.size();
  std::vector<int> cols(na * nb), signs(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      cols[i * nb + j] = a.col(i) * nb + b.col(j);
      signs[i * nb + j] = a.sign(i) * b.sign(j);
    }
  return {cols, signs};
}

SignedPermutation SignedPermutation::direct_sum(const std::vector<SignedPermutation>& blocks) {
  std::vector<int> cols, signs;
  int offset = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.size(); ++i) {
      cols.push_back(b.col(i) + offset);
      signs.push_back(b.sign(i));
    }
    offset += b.size();
  }
  return {cols, signs};
}

SignedPermutation SignedPermutation::operator*(const SignedPermutation& rhs) const {
  const int n = size();
  if (rhs.size() != n) throw InvalidArgument("signed permutation product: size mismatch");
  std::vector<int> cols(n), signs(n);
  for (int i = 0; i < n; ++i) {
    cols[i] = rhs.cols_[cols_[i]];
    signs[i] = signs_[i] * rhs.signs_[cols_[i]];
  }
  return {cols, signs};
}

SignedPermutation SignedPermutation::operator-() const {
  std::vector<int> s(signs_);
  for (int& v : s) v = -v;
  return {cols_, s};
}

SignedPermutation SignedPermutation::transpose() const {
  const int n = size();
  std::vector<int> cols(n), signs(n);
  for (int i = 0; i < n; ++i) {
    cols[cols_[i]] = i;
    signs[cols_[i]] = signs_[i];
  }
  return {cols, signs};
}

long long SignedPermutation::trace() const {
  long long t = 0;
  for (int i = 0; i < size(); ++i)
    if (cols_[i] == i) t += signs_[i];
  return t;
}

Vector SignedPermutation::apply(const Vector& x) const {
  Vector y(size());
  for (int i = 0; i < size(); ++i) y[i] = signs_[i] * x[cols_[i]];
  return y;
}

Eigen::MatrixXi SignedPermutation::integer() const {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(size(), size());
  for (int i = 0; i < size(); ++i) a(i, cols_[i]) = signs_[i];
  return a;
}

Matrix SignedPermutation::dense() const { return integer().cast<double>(); }

bool anticommute_exact(const SignedPermutation& a, const SignedPermutation& b) {
  return a * b == -(b * a);
}

bool squares_to_identity(const SignedPermutation& a) {
  return a * a == SignedPermutation::identity(a.size());
}

std::string to_string(CliffordFamily f) {
  switch (f) {
    case CliffordFamily::standard: return "standard";
    case CliffordFamily::definite: return "definite";
    case CliffordFamily::indefinite: return "indefinite";
  }
  return "standard";
}

CliffordFamily clifford_family_from_string(std::string_view s) {
  if (s == "standard") return CliffordFamily::standard;
  if (s == "definite") return CliffordFamily::definite;
  if (s == "indefinite") return CliffordFamily::indefinite;
  throw InvalidArgument("unknown Clifford family '" + std::string(s) + "'");
}

CliffordSystem::CliffordSystem(int m, int k, CliffordFamily family, std::vector<Matrix> generators,
                               std::vector<SignedPermutation> exact,
                               std::optional<Matrix> extension)
    : m_(m), k_(k), family_(family), generators_(std::move(generators)),
      exact_(std::move(exact)), extension_(std::move(extension)) {
  if (m_ < 1) throw InvalidArgument("Clifford system needs m >= 1");
  if (static_cast<int>(generators_.size()) != m_ + 1)
    throw InvalidArgument("Clifford system needs m+1 generators");
  const auto n = generators_.front().rows();
  if (n % 2 != 0) throw InvalidArgument("Clifford system ambient dimension must be even");
  for (const auto& p : generators_)
    if (p.rows() != n || p.cols() != n) throw InvalidArgument("generator shape mismatch");
  if (!exact_.empty() && static_cast<int>(exact_.size()) != m_ + 1)
    throw InvalidArgument("exact generator count mismatch");
}

Matrix CliffordSystem::combination(const Vector& c) const {
  if (c.size() != m_ + 1) throw InvalidArgument("combination: need m+1 coefficients");
  Matrix p = Matrix::Zero(ambient_dim(), ambient_dim());
  for (int a = 0; a <= m_; ++a) p += c[a] * generators_[a];
  return p;
}

CliffordSystem CliffordSystem::conjugated(const Matrix& o) const {
  std::vector<Matrix> g;
  g.reserve(generators_.size());
  for (const auto& p : generators_) g.push_back(o * p * o.transpose());
  std::optional<Matrix> ext;
  if (extension_) ext = o * (*extension_) * o.transpose();
  return CliffordSystem(m_, k_, family_, std::move(g), {}, std::move(ext));
}

int irreducible_dimension(int m) {
  if (m < 1) throw InvalidArgument("irreducible_dimension: m must be >= 1");
  static constexpr std::array<int, 8> base = {1, 2, 4, 4, 8, 8, 8, 8};
  int scale = 1;
  while (m > 8) {
    m -= 8;
    scale *= 16;
  }
  return scale * base[m - 1];
}

namespace {

SignedPermutation pm(std::initializer_list<int> rows) {
  // 2x2 from row-major entries
  std::vector<int> v(rows);
  Eigen::MatrixXi a(2, 2);
  a << v[0], v[1], v[2], v[3];
  return SignedPermutation::from_dense(a);
}

const SignedPermutation& mat_a() { static const auto a = pm({1, 0, 0, -1}); return a; }
const SignedPermutation& mat_b() { static const auto b = pm({0, 1, 1, 0}); return b; }
const SignedPermutation& mat_j() { static const auto j = pm({0, 1, -1, 0}); return j; }

// e_i e_j = sign * e_k for the imaginary octonion units, triples (i, i+1, i+3) mod 7
std::pair<int, int> octonion_product(int i, int j) {
  if (i == 0) return {1, j};
  if (j == 0) return {1, i};
  if (i == j) return {-1, 0};
  for (int s = 0; s < 7; ++s) {
    std::array<int, 3> t = {s % 7 + 1, (s + 1) % 7 + 1, (s + 3) % 7 + 1};
    for (int r = 0; r < 3; ++r) {
      int a = t[r], b = t[(r + 1) % 3], c = t[(r + 2) % 3];
      if (i == a && j == b) return {1, c};
      if (i == b && j == a) return {-1, c};
    }
  }
  throw InternalError("octonion table incomplete");
}

SignedPermutation octonion_left(int i) {
  Eigen::MatrixXi l = Eigen::MatrixXi::Zero(8, 8);
  for (int j = 0; j < 8; ++j) {
    auto [s, k] = octonion_product(i, j);
    l(k, j) = s;
  }
  return SignedPermutation::from_dense(l);
}

void check_complex_structures(const std::vector<SignedPermutation>& e) {
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e[i].transpose() == -e[i])) throw InternalError("complex structure not skew");
    if (!(e[i] * e[i] == -SignedPermutation::identity(e[i].size())))
      throw InternalError("complex structure does not square to -I");
    for (std::size_t j = i + 1; j < e.size(); ++j)
      if (!anticommute_exact(e[i], e[j])) throw InternalError("complex structures commute");
  }
}

}  // namespace

std::vector<SignedPermutation> complex_structures(int n) {
  if (n < 0) throw InvalidArgument("complex_structures: n must be >= 0");
  std::vector<SignedPermutation> e;
  if (n == 0) return e;
  if (n == 1) {
    e.push_back(mat_j());
  } else if (n <= 3) {
    const auto i2 = SignedPermutation::identity(2);
    e.push_back(SignedPermutation::kron(mat_j(), i2));
    e.push_back(SignedPermutation::kron(mat_a(), mat_j()));
    e.push_back(SignedPermutation::kron(mat_b(), mat_j()));
    e.resize(n);
  } else if (n <= 7) {
    for (int i = 1; i <= n; ++i) e.push_back(octonion_left(i));
  } else {
    // periodicity: eight structures F_i = P0 Pi from the m=8 system plus
    // the lower ones twisted by Omega = F_1...F_8
    auto p8 = irreducible_generators(8);
    std::vector<SignedPermutation> f;
    for (int i = 1; i <= 8; ++i) f.push_back(p8[0] * p8[i]);
    SignedPermutation omega = f[0];
    for (int i = 1; i < 8; ++i) omega = omega * f[i];
    auto lower = complex_structures(n - 8);
    const int d = lower.empty() ? 1 : lower.front().size();
    const auto id = SignedPermutation::identity(d);
    for (const auto& fi : f) e.push_back(SignedPermutation::kron(id, fi));
    for (const auto& ej : lower) e.push_back(SignedPermutation::kron(ej, omega));
  }
  check_complex_structures(e);
  return e;
}

std::vector<SignedPermutation> irreducible_generators(int m) {
  if (m < 1) throw InvalidArgument("irreducible_generators: m must be >= 1");
  auto e = complex_structures(m - 1);
  const int d = irreducible_dimension(m);
  if (!e.empty() && e.front().size() != d) throw InternalError("module dimension mismatch");
  const auto id = SignedPermutation::identity(d);
  std::vector<SignedPermutation> p;
  p.push_back(SignedPermutation::kron(mat_a(), id));
  p.push_back(SignedPermutation::kron(mat_b(), id));
  for (const auto& ei : e) p.push_back(SignedPermutation::kron(mat_j(), ei));
  if (m % 4 == 0) {
    SignedPermutation w = p[0];
    for (int a = 1; a <= m; ++a) w = w * p[a];
    const auto id2 = SignedPermutation::identity(2 * d);
    if (w == -id2)
      p[m] = -p[m];
    else if (!(w == id2))
      throw InternalError("product of generators is not +-I on the irreducible module");
  }
  return p;
}

CliffordSystem build_clifford_system(int m, int k, CliffordFamily family) {
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  const int d = irreducible_dimension(m);
  const long long l = static_cast<long long>(k) * d;
  if (l - m - 1 <= 0)
    throw InvalidArgument("(m,k) = (" + std::to_string(m) + "," + std::to_string(k) +
                          ") has l - m - 1 <= 0");
  if (family != CliffordFamily::standard && m % 4 != 0)
    throw UnsupportedFamily("definite/indefinite families need m divisible by 4");

  std::vector<SignedPermutation> exact;
  std::optional<SignedPermutation> ext;
  if (family == CliffordFamily::indefinite) {
    if (k % 2 != 0)
      throw UnsupportedFamily("indefinite family needs an even number of irreducible modules");
    // restriction of the (m+1)-system: P_{m+1} anticommutes with the full
    // product, so its trace vanishes
    auto big = irreducible_generators(m + 1);
    if (big.front().size() != 4 * d) throw InternalError("indefinite module dimension mismatch");
    for (int a = 0; a <= m + 1; ++a) {
      std::vector<SignedPermutation> blocks(k / 2, big[a]);
      auto s = SignedPermutation::direct_sum(blocks);
      if (a <= m) exact.push_back(s); else ext = s;
    }
  } else {
    auto small = irreducible_generators(m);
    for (int a = 0; a <= m; ++a) {
      std::vector<SignedPermutation> blocks(k, small[a]);
      exact.push_back(SignedPermutation::direct_sum(blocks));
    }
  }

  std::vector<Matrix> dense;
  for (const auto& p : exact) dense.push_back(p.dense());
  std::optional<Matrix> ext_dense;
  if (ext) ext_dense = ext->dense();
  return CliffordSystem(m, k, family, std::move(dense), std::move(exact), std::move(ext_dense));
}

CliffordVerification verify_clifford_system(const CliffordSystem& sys, double tol) {
  CliffordVerification v;
  v.tol = tol;
  const int n = sys.ambient_dim();
  if (sys.is_exact()) {
    const auto& p = sys.exact_generators();
    bool ok = true;
    for (int a = 0; a <= sys.m() && ok; ++a) {
      ok = ok && p[a].is_symmetric() && squares_to_identity(p[a]);
      for (int b = a + 1; b <= sys.m() && ok; ++b) ok = anticommute_exact(p[a], p[b]);
    }
    // the dense copies must still be the integer matrices
    bool same = true;
    for (int a = 0; a <= sys.m(); ++a) same = same && (sys.P(a) == p[a].dense());
    v.exact = ok && same;
  }
  const Matrix id = Matrix::Identity(n, n);
  for (int a = 0; a <= sys.m(); ++a) {
    const Matrix& pa = sys.P(a);
    v.max_symmetry_residual = std::max(v.max_symmetry_residual, max_abs(pa - pa.transpose()));
    v.max_square_residual = std::max(v.max_square_residual, max_abs(pa * pa - id));
    for (int b = a + 1; b <= sys.m(); ++b)
      v.max_anticommutator_residual =
          std::max(v.max_anticommutator_residual, max_abs(pa * sys.P(b) + sys.P(b) * pa));
  }
  if (sys.m() % 4 == 0 && v.passes()) v.trace_invariant_q = product_trace_invariant(sys);
  return v;
}

long long product_trace(const CliffordSystem& sys) {
  if (sys.is_exact()) {
    SignedPermutation w = sys.exact_generators()[0];
    for (int a = 1; a <= sys.m(); ++a) w = w * sys.exact_generators()[a];
    return w.trace();
  }
  Matrix w = sys.P(0);
  for (int a = 1; a <= sys.m(); ++a) w = w * sys.P(a);
  double t = w.trace();
  long long r = std::llround(t);
  if (std::abs(t - static_cast<double>(r)) > 1e-6)
    throw InternalError("product trace is not an integer: " + std::to_string(t));
  return r;
}

long long product_trace_invariant(const CliffordSystem& sys) {
  if (sys.m() % 4 != 0) throw Unsupported("trace invariant needs m divisible by 4");
  const long long t = product_trace(sys);
  const long long denom = 2LL * irreducible_dimension(sys.m());
  if (t % denom != 0) throw InternalError("product trace not divisible by 2 delta(m)");
  return t / denom;
}

Matrix sphere_frame_coefficients(const Vector& c, double tol) {
  if (std::abs(c.norm() - 1.0) > tol) throw InvalidArgument("Clifford sphere element must be unit");
  const int n = static_cast<int>(c.size());
  Matrix o(n, n);
  o.col(0) = c / c.norm();
  int filled = 1;
  for (int e = 0; e < n && filled < n; ++e) {
    Vector v = Vector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < filled; ++j) v -= o.col(j).dot(v) * o.col(j);
    double nv = v.norm();
    if (nv < 1e-8) continue;
    o.col(filled++) = v / nv;
  }
  if (filled != n) throw InternalError("sphere frame completion failed");
  return o;
}

std::vector<Matrix> clifford_sphere_frame(const CliffordSystem& sys, const Vector& c, double tol) {
  if (c.size() != sys.m() + 1) throw InvalidArgument("sphere frame: need m+1 coefficients");
  Matrix o = sphere_frame_coefficients(c, tol);
  std::vector<Matrix> q;
  q.reserve(sys.m() + 1);
  for (int i = 0; i <= sys.m(); ++i) q.push_back(sys.combination(o.col(i)));
  return q;
}

}  // namespace isopar
