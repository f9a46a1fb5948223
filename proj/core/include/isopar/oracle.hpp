#pragma once

#include <memory>
#include <string>

#include "isopar/clifford.hpp"
#include "isopar/geometry.hpp"
#include "isopar/linalg.hpp"

namespace isopar {

// Local description of a submanifold M of R^N: the tangent projector at points
// of M and a retraction producing curves through them.
class SubmanifoldChart {
 public:
  virtual ~SubmanifoldChart() = default;
  virtual int ambient_dim() const = 0;
  virtual int dim() const = 0;
  virtual Matrix tangent_projector(const Vector& y) const = 0;
  // point of M, smooth in t, equal to y at t = 0 with velocity v (v tangent at y)
  virtual Vector curve_point(const Vector& y, const Vector& v, double t) const = 0;
};

// M1 = {<P_a y, y> = 0, |y| = 1}; Newton retraction. sys must outlive the chart.
class FkmM1Chart final : public SubmanifoldChart {
 public:
  explicit FkmM1Chart(const CliffordSystem& sys) : sys_(&sys) {}
  int ambient_dim() const override { return sys_->ambient_dim(); }
  int dim() const override { return sys_->ambient_dim() - sys_->m() - 2; }
  Matrix tangent_projector(const Vector& y) const override;
  Vector curve_point(const Vector& y, const Vector& v, double t) const override;

 private:
  const CliffordSystem* sys_;
};

// M2 = {P y = y for some P in the Clifford sphere}; eigenprojector retraction
class FkmM2Chart final : public SubmanifoldChart {
 public:
  explicit FkmM2Chart(const CliffordSystem& sys) : sys_(&sys) {}
  int ambient_dim() const override { return sys_->ambient_dim(); }
  int dim() const override { return sys_->l() + sys_->m() - 1; }
  Matrix tangent_projector(const Vector& y) const override;
  Vector curve_point(const Vector& y, const Vector& v, double t) const override;

 private:
  const CliffordSystem* sys_;
};

// great n-sphere {y_{n+1} = 0} inside the unit sphere of R^{n+2}
class GreatSphereChart final : public SubmanifoldChart {
 public:
  explicit GreatSphereChart(int n) : n_(n) {}
  int ambient_dim() const override { return n_ + 2; }
  int dim() const override { return n_; }
  Matrix tangent_projector(const Vector& y) const override;
  Vector curve_point(const Vector& y, const Vector& v, double t) const override;

 private:
  int n_;
};

// ellipsoid sum y_i^2 / a_i^2 = 1 in R^N; hypersurface, radial retraction
class EllipsoidChart final : public SubmanifoldChart {
 public:
  explicit EllipsoidChart(Vector axes) : axes_(std::move(axes)) {}
  int ambient_dim() const override { return static_cast<int>(axes_.size()); }
  int dim() const override { return static_cast<int>(axes_.size()) - 1; }
  Matrix tangent_projector(const Vector& y) const override;
  Vector curve_point(const Vector& y, const Vector& v, double t) const override;
  Vector project(const Vector& y) const;

 private:
  Vector axes_;
};

struct OracleOptions {
  double h_inner = 1e-3;  // derivative of the projector field
  double h_outer = 1e-3;  // derivative of the ambient Ricci field along Z
};

// Curvature from the tangent projector field alone: second fundamental form
// h(X,Y) = (I - Pi) dPi[X] Y, flat Gauss equation, connection of projected
// constant fields. Independent of every closed form.
class NumericCurvature final : public CurvatureModel {
 public:
  NumericCurvature(std::shared_ptr<const SubmanifoldChart> chart, const Vector& x,
                   const Matrix& basis, OracleOptions opt = {});
  NumericCurvature(std::shared_ptr<const SubmanifoldChart> chart, const Vector& x,
                   OracleOptions opt = {});

  int dim() const override { return static_cast<int>(basis_.cols()); }
  const Matrix& ricci() const override { return ricci_; }
  Matrix nabla_ricci(const Vector& z) const override;
  using CurvatureModel::nabla_ricci;
  std::string name() const override { return "numeric_oracle"; }

  const Matrix& basis() const { return basis_; }
  // (A_eta)_ij = e_i . dPi[e_j] eta, eta ambient normal
  Matrix shape_operator(const Vector& eta) const;
  // Gauss-equation sectional curvature of the plane X ^ Y (tangent coords, orthonormal)
  double sectional(const Vector& x, const Vector& y) const;

  Matrix dprojector(const Vector& y, const Vector& v) const;
  Matrix ambient_ricci(const Vector& y) const;

 private:
  std::shared_ptr<const SubmanifoldChart> chart_;
  Vector x_;
  Matrix basis_;
  OracleOptions opt_;
  Matrix ricci_;
};

EmbeddedGeometry numeric_geometry(std::shared_ptr<const SubmanifoldChart> chart, const Vector& x,
                                  const Matrix& basis, const Matrix& normal, OracleOptions opt = {});

}  // namespace isopar
