#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace isopar {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

Vector gaussian_vector(int n, Rng& rng);
Vector random_unit(int n, Rng& rng);

// random unit vector inside the column span of an orthonormal basis
Vector random_unit_in(const Matrix& basis, Rng& rng);

// Haar-ish random orthogonal matrix (QR of a Gaussian matrix, sign fixed)
Matrix random_orthogonal(int n, Rng& rng);

// orthonormal basis of the column span, singular values below rel_tol*smax dropped
Matrix orthonormal_basis(const Matrix& spanning, double rel_tol = 1e-10);

// orthonormal basis of the orthogonal complement of the column span in R^n
Matrix orthonormal_complement(const Matrix& spanning, double rel_tol = 1e-10);

int numerical_rank(const Matrix& a, double rel_tol = 1e-8);

double max_abs(const Matrix& a);

// max |Q^T Q - I|
double gram_residual(const Matrix& q);

struct SpectrumCluster {
  double value = 0.0;
  int multiplicity = 0;
};

// sorted ascending; neighbours within gap_tol share a cluster
std::vector<SpectrumCluster> cluster_values(std::vector<double> values, double gap_tol = 1e-6);
std::vector<SpectrumCluster> cluster_spectrum(const Matrix& symmetric, double gap_tol = 1e-6);

Vector symmetric_eigenvalues(const Matrix& symmetric);

// derive a child seed from a parent seed and a label; stable across platforms
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t hash_label(const std::string& label);

}  // namespace isopar
