#include "isopar/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isopar/error.hpp"
#include "isopar/geometry.hpp"

namespace isopar {

namespace {

constexpr double kNonzero = 1e-2;

Vector pp(const CliffordSystem& s, int a, int b, const Vector& x) { return s.P(a) * (s.P(b) * x); }

void fill_defects(Witness& w, const CurvatureModel& model, std::uint64_t seed) {
  w.parallel_defect = ricci_parallel_defect(model, 100, mix_seed(seed, 31), true).value;
  w.einstein_defect = einstein_defect(model.ricci());
}

Witness m1_at(const CliffordSystem& sys, const FocalPoint& pt, std::string kind, std::uint64_t seed) {
  Witness w;
  w.kind = std::move(kind);
  w.point = pt.x;
  w.constraints = pt.constraints;
  w.dim_vx = v_space_dimension(sys, pt.x);
  const TangentFrame f = frame_M1(sys, pt);
  fill_defects(w, FkmM1Curvature(sys, f), seed);
  return w;
}

// vs_l: the case is closed by dim V < l - 1
void dim_records(Witness& w, const CliffordSystem& sys, Relation rel, int bound, bool vs_l) {
  w.records.push_back(make_record("dim_V", *w.dim_vx, rel, bound, 0.0));
  if (vs_l)
    w.records.push_back(make_record("dim_V_vs_l_minus_1", *w.dim_vx, Relation::lt, sys.l() - 1, 0.0));
}

Witness restricted_max_witness(const CliffordSystem& sys, const std::vector<Quad>& quads,
                               std::uint64_t seed) {
  const RestrictedMaximum r =
      maximize_restricted_F(sys, quads, std::vector<bool>(quads.size(), true), seed);
  if (!r.on_m1) throw NonConvergence("restricted maximum is not on M1", r.point.x, r.restarts_used);
  Witness w = m1_at(sys, r.point, "restricted_max", seed);
  w.records.push_back(make_record("restricted_subspace_dim", r.subspace_dim, Relation::record, 0));
  w.records.push_back(make_record("restricted_F_max", r.value, Relation::eq, 1.0));
  return w;
}

Witness m1_witness(const CliffordSystem& sys, std::uint64_t seed) {
  const int m = sys.m(), k = sys.k();
  const bool indefinite = sys.family() == CliffordFamily::indefinite;
  auto generic = [&] { return m1_at(sys, sample_M1(sys, seed), "generic", seed); };
  auto special = [&](const std::vector<Quad>& q) {
    return m1_at(sys, common_eigvec_point(sys, q, seed, true), "special_point", seed);
  };

  const bool positive = (m == 2 && k == 2) || (m == 6 && k == 1) ||
                        (m == 4 && k == 2 && !indefinite);
  if (positive) {
    Witness w = generic();
    const TangentFrame f = frame_M1(sys, FocalPoint{w.point, FocalSet::M1, std::nullopt, {}});
    w.records.push_back(make_record("A_off_L", a_tensor_defect(sys, f), Relation::le, 1e-8));
    return w;
  }

  if (m == 4 && k == 2 && indefinite) {
    Witness w = special({{0, 1, 2, 3}});
    dim_records(w, sys, Relation::eq, 7, false);
    const Vector x = w.point;
    const Vector X = pp(sys, 0, 1, x) + sys.P(0) * pp(sys, 2, 4, x);
    w.records.push_back(make_record("B_off_L", b_tensor_M1(sys, x, X).off_l, Relation::ge, kNonzero));
    return w;
  }
  if (m == 5) {
    Witness w = special({{0, 1, 2, 3}, {0, 1, 4, 5}});
    dim_records(w, sys, Relation::eq, 7, k > 1);
    if (k == 1) {
      const Vector x = w.point;
      const Vector wv = sys.P(0) * pp(sys, 2, 4, x);
      const Vector X = sys.P(0) * pp(sys, 2, 5, x);
      const LResidual a = a_tensor_M1(sys, x, wv, X);
      w.records.push_back(make_record("A(w,X)_off_L", a.off_l, Relation::eq, 3.0));
      w.records.push_back(
          make_record("A(w,X)-3P4P5x", (a.value - 3.0 * pp(sys, 4, 5, x)).norm(), Relation::le, 1e-8));
    }
    return w;
  }
  if (m == 6) {
    Witness w = special({{0, 1, 2, 3}, {0, 1, 4, 5}, {0, 2, 4, 6}});
    dim_records(w, sys, Relation::le, 7, true);
    return w;
  }
  if (m == 7) {
    Witness w = special({{0, 1, 2, 3}, {0, 1, 4, 5}, {0, 1, 6, 7}, {0, 2, 4, 6}});
    dim_records(w, sys, Relation::eq, 7, true);
    return w;
  }
  if (m == 8 && k == 2 && indefinite) {
    Witness w = special(paired_quads(5));
    w.records.push_back(make_record("dim_V", *w.dim_vx, Relation::eq, 21, 0.0));
    return w;
  }
  if (m == 8 && k == 2) {
    Witness w = generic();
    const Vector x = w.point;
    const LResidual a = a_tensor_M1(sys, x, pp(sys, 0, 3, x), pp(sys, 0, 2, x));
    w.records.push_back(make_record("A(P0P3x,P0P2x)_off_L", a.off_l, Relation::ge, kNonzero));
    w.records.push_back(
        make_record("A(P0P3x,P0P2x)-2P2P3x", (a.value - 2.0 * pp(sys, 2, 3, x)).norm(), Relation::record, 0));
    return w;
  }
  if (m == 8) {
    Witness w = restricted_max_witness(sys, {{2, 4, 6, 8}, {3, 4, 7, 8}, {5, 6, 7, 8}}, seed);
    dim_records(w, sys, Relation::le, 22, true);
    return w;
  }
  if (m == 9) {
    Witness w = special(paired_quads(5));
    dim_records(w, sys, Relation::le, 21, k > 1);
    if (k == 1) {
      const Vector x = w.point;
      const TangentFrame f = frame_M1(sys, FocalPoint{x, FocalSet::M1, std::nullopt, w.constraints});
      const FkmM1Curvature c(sys, f);
      auto t = [&](const Vector& v) { return (f.tangent.transpose() * v).eval(); };
      const double q =
          0.25 * c.nabla_ricci(t(pp(sys, 0, 1, x)), t(pp(sys, 0, 2, x)), t(pp(sys, 1, 2, x)));
      w.records.push_back(make_record("quarter_nabla_rho_signed", q, Relation::record, 0));
      w.records.push_back(make_record("quarter_nabla_rho_abs", std::abs(q), Relation::ge, 1.5));
    }
    return w;
  }
  if (m == 10) {
    Witness w =
        restricted_max_witness(sys, {{0, 1, 2, 3}, {0, 1, 4, 5}, {4, 5, 6, 7}, {2, 3, 8, 9}}, seed);
    dim_records(w, sys, Relation::le, 31, false);
    const Vector x = w.point;
    const TangentFrame f = frame_M1(sys, FocalPoint{x, FocalSet::M1, std::nullopt, {}});
    const FkmM1Curvature c(sys, f);
    const Vector x1 = f.tangent.transpose() * pp(sys, 0, 1, x);
    const Vector x2 = f.tangent.transpose() * pp(sys, 0, 10, x);
    const double s1 = x1.dot(c.ricci() * x1), s2 = x2.dot(c.ricci() * x2);
    w.records.push_back(make_record("S(P0P1x)", s1, Relation::record, 0));
    w.records.push_back(make_record("S(P0P10x)", s2, Relation::record, 0));
    w.records.push_back(make_record("S(P0P1x)_eigen_residual",
                                    (c.ricci() * x1 - s1 * x1).norm(), Relation::record, 0));
    w.records.push_back(make_record("S(P0P10x)_eigen_residual",
                                    (c.ricci() * x2 - s2 * x2).norm(), Relation::record, 0));
    w.records.push_back(make_record("S_gap", std::abs(s1 - s2), Relation::ge, kNonzero));
    return w;
  }
  if (m == 11) {
    Witness w = special(paired_quads(6));
    dim_records(w, sys, Relation::le, 31, true);
    return w;
  }
  if (m == 12) {
    Witness w = special({{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 8, 9}, {2, 3, 8, 9}, {6, 7, 10, 11},
                         {0, 2, 8, 12}});
    dim_records(w, sys, Relation::le, 56, true);
    return w;
  }
  if (m <= 3) {
    Witness w = generic();
    dim_records(w, sys, Relation::le, m * (m + 1) / 2, true);
    return w;
  }
  return generic();
}

Witness m2_witness(const CliffordSystem& sys, std::uint64_t seed) {
  const FocalPoint pt = sample_M2(sys, seed);
  const TangentFrame f = frame_M2(sys, pt);
  const FkmM2Curvature c(sys, f);
  Witness w;
  w.point = pt.x;
  w.fixing_coeffs = pt.fixing_coeffs;
  fill_defects(w, c, seed);
  if (sys.m() == 1) {
    w.kind = "generic";
    return w;
  }
  w.kind = "clifford_triple";
  const auto& q = f.q_frame;
  const Vector& x = pt.x;
  auto t = [&](const Vector& v) { return (f.tangent.transpose() * v).eval(); };
  const Vector xa = q[1] * (q[2] * x);
  const Vector X = t(xa), Y = t(q[1] * x), Z = t(q[2] * x);
  const double v = X.dot(c.nabla_tau(Z) * Y);
  double sq = 0.0;
  for (int i = 1; i <= sys.m(); ++i)
    for (int j = 1; j <= sys.m(); ++j) {
      if (i == j || (std::min(i, j) == 1 && std::max(i, j) == 2)) continue;
      const double a = xa.dot(q[i] * (q[j] * x));
      sq += a * a;
    }
  // exact: l - 2m + 2 plus the cross sum
  const double base = sys.l() - 2.0 * sys.m() + 2.0;
  w.records.push_back(make_record("nabla_tau(Q1Q2x,Q1x;Q2x)", v, Relation::ge, base));
  w.records.push_back(make_record("triple_identity_residual", std::abs(v - base - sq), Relation::le, 1e-8));
  w.records.push_back(make_record("triple_cross_sum", sq, Relation::record, 0));
  w.records.push_back(make_record("l-2m+4", sys.l() - 2.0 * sys.m() + 4.0,
                                  Relation::record, 0));
  w.records.push_back(make_record("nabla_rho(Q1Q2x,Q1x;Q2x)", c.nabla_ricci(X, Y, Z),
                                  Relation::record, 0));
  return w;
}

}  // namespace

std::string to_string(Relation r) {
  switch (r) {
    case Relation::eq: return "eq";
    case Relation::ge: return "ge";
    case Relation::le: return "le";
    case Relation::lt: return "lt";
    case Relation::record: return "record";
  }
  return "?";
}

Relation relation_from_string(const std::string& s) {
  for (Relation r : {Relation::eq, Relation::ge, Relation::le, Relation::lt, Relation::record})
    if (to_string(r) == s) return r;
  throw InvalidArgument("unknown relation '" + s + "'");
}

WitnessRecord make_record(std::string name, double value, Relation rel, double bound, double tol) {
  WitnessRecord r{std::move(name), value, rel, bound, true};
  switch (rel) {
    case Relation::eq: r.holds = std::abs(value - bound) <= tol; break;
    case Relation::ge: r.holds = value >= bound - tol; break;
    case Relation::le: r.holds = value <= bound + tol; break;
    case Relation::lt: r.holds = value < bound; break;
    case Relation::record: break;
  }
  return r;
}

bool Witness::all_hold() const {
  for (const auto& r : records)
    if (!r.holds) return false;
  return true;
}

const WitnessRecord* Witness::find(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

std::vector<Quad> paired_quads(int n) {
  std::vector<Quad> q;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) q.push_back({2 * a, 2 * a + 1, 2 * b, 2 * b + 1});
  return q;
}

Witness otfkm_witness(const CliffordSystem& sys, FocalSet focal, std::uint64_t seed) {
  return focal == FocalSet::M1 ? m1_witness(sys, seed) : m2_witness(sys, seed);
}

Witness orbit_witness(const OrbitData& orbit, std::uint64_t seed) {
  const OrbitFrame f = orbit_base_frame(orbit);
  const OrbitCurvature c(orbit, f);
  Witness w;
  w.kind = "orbit_base";
  w.point = f.point;
  fill_defects(w, c, seed);
  w.records.push_back(make_record("class_A_identity", homog_class_A_defect(orbit, 50, seed).value,
                                  Relation::le, 1e-8));
  if (orbit.id == OrbitCase::u5_M2_13) {
    const auto spec = ricci_operator_spectrum(c.ricci());
    w.records.push_back(make_record("ricci_clusters", spec.size(), Relation::eq, 2, 0.0));
    if (spec.size() == 2) {
      w.records.push_back(make_record("ricci_low", spec[0].value, Relation::eq, 8.0, 1e-9));
      w.records.push_back(make_record("ricci_low_mult", spec[0].multiplicity, Relation::eq, 12, 0.0));
      w.records.push_back(make_record("ricci_high", spec[1].value, Relation::eq, 12.0, 1e-9));
      w.records.push_back(make_record("ricci_high_mult", spec[1].multiplicity, Relation::eq, 1, 0.0));
    }
  }
  return w;
}

OmegaReport omega_locus_check(const CliffordSystem& sys, int n_random, std::uint64_t seed) {
  if (sys.m() != 3) throw InvalidArgument("omega locus check needs m = 3");
  OmegaReport r;
  r.target = 2.0 * sys.l() - 6.0;
  const FocalPoint omega = common_eigvec_point(sys, {{0, 1, 2, 3}}, seed, true);
  const RicciScan s =
      ricci_direction_scan(FkmM1Curvature(sys, frame_M1(sys, omega)).ricci(), 200, mix_seed(seed, 1));
  r.omega_max = s.max;
  r.omega_multiplicity = s.max_multiplicity;
  const Matrix big = sys.P(0) * sys.P(1) * sys.P(2) * sys.P(3);
  r.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_random; ++i) {
    const FocalPoint p = sample_M1(sys, mix_seed(seed, 100 + i));
    const RicciScan rs =
        ricci_direction_scan(FkmM1Curvature(sys, frame_M1(sys, p)).ricci(), 0, mix_seed(seed, 200 + i));
    r.random_max.push_back(rs.max);
    r.random_omega_moment.push_back(std::abs(p.x.dot(big * p.x)));
    r.min_margin = std::min(r.min_margin, r.target - rs.max);
  }
  return r;
}

}  // namespace isopar
