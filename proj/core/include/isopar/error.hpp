#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace isopar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// family tag that the requested m cannot support
class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

// Retryable: carries the last iterate so callers can restart from it.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Eigen::VectorXd last, int iterations)
      : Error(what), last_(std::move(last)), iterations_(iterations) {}
  const Eigen::VectorXd& last_iterate() const { return last_; }
  int iterations() const { return iterations_; }

 private:
  Eigen::VectorXd last_;
  int iterations_;
};

}  // namespace isopar
