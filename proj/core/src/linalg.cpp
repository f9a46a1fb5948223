#include "isopar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace isopar {

Vector gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

Vector random_unit(int n, Rng& rng) {
  Vector v = gaussian_vector(n, rng);
  double nrm = v.norm();
  while (nrm < 1e-12) {
    v = gaussian_vector(n, rng);
    nrm = v.norm();
  }
  return v / nrm;
}

Vector random_unit_in(const Matrix& basis, Rng& rng) {
  return basis * random_unit(static_cast<int>(basis.cols()), rng);
}

Matrix random_orthogonal(int n, Rng& rng) {
  Matrix g(n, n);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = nd(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

Matrix orthonormal_basis(const Matrix& spanning, double rel_tol) {
  if (spanning.cols() == 0) return Matrix(spanning.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(spanning, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return Matrix(spanning.rows(), 0);
  int r = 0;
  while (r < s.size() && s[r] > rel_tol * s[0]) ++r;
  return svd.matrixU().leftCols(r);
}

Matrix orthonormal_complement(const Matrix& spanning, double rel_tol) {
  const int n = static_cast<int>(spanning.rows());
  if (spanning.cols() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(spanning, Eigen::ComputeFullU);
  const Vector& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s[0] > 0.0)
    while (r < s.size() && s[r] > rel_tol * s[0]) ++r;
  return svd.matrixU().rightCols(n - r);
}

int numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  while (r < s.size() && s[r] > rel_tol * s[0]) ++r;
  return r;
}

double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double gram_residual(const Matrix& q) {
  if (q.cols() == 0) return 0.0;
  return max_abs(q.transpose() * q - Matrix::Identity(q.cols(), q.cols()));
}

std::vector<SpectrumCluster> cluster_values(std::vector<double> values, double gap_tol) {
  std::sort(values.begin(), values.end());
  std::vector<SpectrumCluster> out;
  double sum = 0.0;
  double last = 0.0;
  int count = 0;
  for (double v : values) {
    if (count > 0 && v - last > gap_tol) {
      out.push_back({sum / count, count});
      sum = 0.0;
      count = 0;
    }
    sum += v;
    last = v;
    ++count;
  }
  if (count > 0) out.push_back({sum / count, count});
  return out;
}

Vector symmetric_eigenvalues(const Matrix& symmetric) {
  if (symmetric.rows() == 0) return Vector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (symmetric + symmetric.transpose()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<SpectrumCluster> cluster_spectrum(const Matrix& symmetric, double gap_tol) {
  Vector ev = symmetric_eigenvalues(symmetric);
  return cluster_values(std::vector<double>(ev.data(), ev.data() + ev.size()), gap_tol);
}

// splitmix64 finalizer
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_label(const std::string& label) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace isopar
