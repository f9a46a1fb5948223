#include "isopar/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include "isopar/error.hpp"
#include "isopar/geometry.hpp"
#include "isopar/oracle.hpp"

namespace isopar {

std::string to_string(CaseKind k) { return k == CaseKind::otfkm ? "otfkm" : "homogeneous"; }

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("case spec: bad ") + what + " '" + s + "'");
  }
}

bool is_m1_type(OrbitCase c) { return c == OrbitCase::so5_cp3 || c == OrbitCase::u5_M1_14; }

// which side of the gap a defect falls on; throws in between
bool decide(double defect, double zero, double nonzero, const char* what) {
  if (defect <= zero) return true;
  if (defect >= nonzero) return false;
  std::ostringstream os;
  os.precision(3);
  os << what << " defect " << defect << " lies between the zero and nonzero tolerances";
  throw Error(os.str());
}

// one point's worth of scans, shared by both case kinds
struct PointScan {
  const CaseSpec& spec;
  CaseReport& r;
  bool m1_type;
  int mult_zero, mult_pm;
  std::vector<Vector> spectra;

  void run(const EmbeddedGeometry& g, const CurvatureModel& model, std::uint64_t seed) {
    const int n = model.dim();
    r.dim = n;
    r.codim = g.codim();
    const auto cyc = cyclic_parallel_defect(model, spec.n_samples, mix_seed(seed, 1));
    r.cyclic_defect = std::max(r.cyclic_defect, cyc.value);
    r.cyclic_samples += cyc.samples;
    r.codazzi_defect =
        std::max(r.codazzi_defect, codazzi_defect(model, spec.n_samples, mix_seed(seed, 2), true).value);
    r.parallel_defect = std::max(
        r.parallel_defect, ricci_parallel_defect(model, spec.n_samples, mix_seed(seed, 3), true).value);
    r.einstein_defect = std::max(r.einstein_defect, einstein_defect(model.ricci()));
    r.ricci_gauss_discrepancy =
        std::max(r.ricci_gauss_discrepancy, max_abs(ricci_gauss(g) - model.ricci()));

    const RicciScan rs = ricci_direction_scan(model.ricci(), spec.n_samples, mix_seed(seed, 4));
    if (r.points == 0) {
      r.ricci_min = rs.min;
      r.ricci_max = rs.max;
      r.ricci_spectrum = ricci_operator_spectrum(model.ricci());
    } else {
      r.ricci_min = std::min(r.ricci_min, rs.min);
      r.ricci_max = std::max(r.ricci_max, rs.max);
    }
    spectra.push_back(symmetric_eigenvalues(model.ricci()));

    if (n >= 2) {
      const SectionalScan sc = scan_sectional(g, spec.n_pairs, mix_seed(seed, 5));
      if (r.sec_pairs == 0) {
        r.sec_min = sc.sec_min;
        r.sec_max = sc.sec_max;
        r.a_tilde_max = sc.a_tilde_max;
      } else {
        r.sec_min = std::min(r.sec_min, sc.sec_min);
        r.sec_max = std::max(r.sec_max, sc.sec_max);
        r.a_tilde_max = std::max(r.a_tilde_max, sc.a_tilde_max);
      }
      r.sec_pairs += sc.pairs;
    }

    // every basis normal and three random unit normals
    Rng rng(mix_seed(seed, 6));
    std::vector<Matrix> ops = g.shape_ops;
    for (int i = 0; i < 3; ++i) ops.push_back(g.shape_operator(g.normal * random_unit(g.codim(), rng)));
    for (const Matrix& a : ops) {
      const Vector ev = symmetric_eigenvalues(a);
      int z = 0, p = 0, mi = 0;
      for (int i = 0; i < ev.size(); ++i) {
        const double v = ev[i];
        const double near = std::round(std::clamp(v, -1.0, 1.0));
        r.shape.max_deviation = std::max(r.shape.max_deviation, std::abs(v - near));
        (near > 0.5 ? p : near < -0.5 ? mi : z)++;
      }
      if (z != mult_zero || p != mult_pm || mi != mult_pm) r.shape.multiplicities_ok = false;
      r.shape.max_trace = std::max(r.shape.max_trace, std::abs(a.trace()));
      ++r.shape.operators;
    }
    ++r.points;
  }

  void oracle(std::shared_ptr<const SubmanifoldChart> chart, const Vector& x, const Matrix& basis,
              const CurvatureModel& model, std::uint64_t seed) {
    if (spec.oracle_directions <= 0) return;
    const NumericCurvature num(std::move(chart), x, basis);
    r.oracle.ricci_discrepancy = max_abs(num.ricci() - model.ricci());
    Rng rng(mix_seed(seed, 8));
    const int n = model.dim();
    for (int d = 0; d < spec.oracle_directions; ++d) {
      const Vector z = random_unit(n, rng);
      const Matrix diff = num.nabla_ricci(z) - model.nabla_ricci(z);
      for (int p = 0; p < spec.oracle_pairs; ++p) {
        const Vector a = random_unit(n, rng), b = random_unit(n, rng);
        r.oracle.nabla_discrepancy = std::max(r.oracle.nabla_discrepancy, std::abs(a.dot(diff * b)));
        ++r.oracle.triples;
      }
    }
  }
};

void set_expected_shape(CaseReport& r, PointScan& ps) {
  r.shape.expected_zero = ps.mult_zero;
  r.shape.expected_plus = r.shape.expected_minus = ps.mult_pm;
}

// defects at the witness point fold into the sampled ones
void scan_witness_point(CaseReport& r, const CurvatureModel& model, std::uint64_t seed) {
  r.cyclic_defect =
      std::max(r.cyclic_defect, cyclic_parallel_defect(model, r.spec.n_samples, mix_seed(seed, 11)).value);
  r.codazzi_defect =
      std::max(r.codazzi_defect, codazzi_defect(model, r.spec.n_samples, mix_seed(seed, 12), true).value);
  r.einstein_defect = std::max(r.einstein_defect, einstein_defect(model.ricci()));
}

void run_otfkm(CaseReport& r) {
  const CaseSpec& spec = r.spec;
  const CliffordSystem sys = build_clifford_system(spec.m, spec.k, spec.clifford_family);
  if (sys.ambient_dim() > spec.max_ambient)
    throw InvalidArgument("ambient dimension " + std::to_string(sys.ambient_dim()) + " exceeds the cap " +
                          std::to_string(spec.max_ambient));
  const int m = sys.m(), l = sys.l();
  r.m1 = m;
  r.m2 = l - m - 1;
  r.ambient = sys.ambient_dim();
  const bool on_m1 = spec.focal == FocalSet::M1;
  PointScan ps{spec, r, on_m1, on_m1 ? m : l - m - 1, on_m1 ? l - m - 1 : m, {}};
  set_expected_shape(r, ps);
  if (on_m1) r.ricci_lower_bound = 2.0 * (r.m2 - 1);

  for (int i = 0; i < spec.n_points; ++i) {
    const std::uint64_t s = mix_seed(r.case_seed, 1000 + i);
    const FocalPoint pt = on_m1 ? sample_M1(sys, s) : sample_M2(sys, s);
    const TangentFrame f = focal_frame(sys, pt);
    const EmbeddedGeometry g = focal_geometry(sys, f);
    const auto model = closed_form_model(sys, f);
    ps.run(g, *model, s);
    if (i == 0) {
      std::shared_ptr<const SubmanifoldChart> chart;
      if (on_m1)
        chart = std::make_shared<FkmM1Chart>(sys);
      else
        chart = std::make_shared<FkmM2Chart>(sys);
      ps.oracle(chart, pt.x, f.tangent, *model, s);
    }
  }

  const std::uint64_t ws = mix_seed(r.case_seed, 7);
  Witness w = otfkm_witness(sys, spec.focal, ws);
  const FocalPoint wp{w.point, spec.focal, w.fixing_coeffs, w.constraints};
  const TangentFrame wf = focal_frame(sys, wp);
  scan_witness_point(r, *closed_form_model(sys, wf), ws);
  r.dim_vx_at_witness = w.dim_vx;
  r.witness = std::move(w);
}

void run_homogeneous(CaseReport& r) {
  const CaseSpec& spec = r.spec;
  const auto orbit = std::make_shared<const OrbitData>(build_orbit(spec.orbit));
  r.m1 = orbit->focal_m1;
  r.m2 = orbit->focal_m2;
  r.ambient = orbit->ambient_dim();
  const bool m1t = is_m1_type(spec.orbit);
  PointScan ps{spec, r, m1t, m1t ? r.m1 : r.m2, m1t ? r.m2 : r.m1, {}};
  set_expected_shape(r, ps);
  if (m1t) r.ricci_lower_bound = 2.0 * (r.m2 - 1);

  Rng rng(mix_seed(r.case_seed, 1000));
  for (int i = 0; i < spec.n_points; ++i) {
    const std::uint64_t s = mix_seed(r.case_seed, 1000 + i);
    const OrbitFrame f = i == 0 ? orbit_base_frame(*orbit)
                                : orbit_frame(*orbit, random_group_element(*orbit, rng) * orbit->z0);
    const EmbeddedGeometry g = orbit_geometry(*orbit, f);
    const OrbitCurvature model(*orbit, f);
    ps.run(g, model, s);
    if (i == 0) ps.oracle(std::make_shared<OrbitChart>(orbit), f.point, f.tangent, model, s);
  }
  for (std::size_t i = 1; i < ps.spectra.size(); ++i)
    r.orbit_invariance_defect =
        std::max(r.orbit_invariance_defect, (ps.spectra[i] - ps.spectra[0]).cwiseAbs().maxCoeff());

  const std::uint64_t ws = mix_seed(r.case_seed, 7);
  Witness w = orbit_witness(*orbit, ws);
  const OrbitFrame bf = orbit_base_frame(*orbit);
  scan_witness_point(r, OrbitCurvature(*orbit, bf), ws);
  r.witness = std::move(w);
}

void assign_verdicts(CaseReport& r) {
  const Tolerances& t = r.spec.tol;
  r.verdicts.is_A = decide(r.cyclic_defect, t.zero, t.nonzero, "cyclic-parallel");
  r.verdicts.is_B = decide(r.codazzi_defect, t.zero, t.nonzero, "Codazzi");
  r.verdicts.is_einstein = decide(r.einstein_defect, t.zero, t.nonzero, "Einstein");

  const double wpar = r.witness ? r.witness->parallel_defect : 0.0;
  const double all = std::max(r.parallel_defect, wpar);
  if (all <= t.zero) {
    r.verdicts.is_ricci_parallel = true;
  } else if (wpar >= t.nonzero) {
    r.verdicts.is_ricci_parallel = false;
  } else {
    std::ostringstream os;
    os.precision(3);
    os << "Ricci-parallel: sampled defect " << r.parallel_defect << " but witness defect " << wpar;
    throw Error(os.str());
  }
  if (!r.consistent()) throw InternalError("verdicts are logically inconsistent");
}

}  // namespace

std::string CaseSpec::label() const {
  if (kind == CaseKind::homogeneous) return "homogeneous:" + to_string(orbit);
  return "otfkm:" + std::to_string(m) + ":" + std::to_string(k) + ":" + to_string(clifford_family) + ":" +
         to_string(focal);
}

CaseSpec CaseSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  CaseSpec s;
  if (parts.size() == 2 && parts[0] == "homogeneous") {
    s.kind = CaseKind::homogeneous;
    s.orbit = orbit_case_from_string(parts[1]);
    s.focal = is_m1_type(s.orbit) ? FocalSet::M1 : FocalSet::M2;
    return s;
  }
  if (parts[0] != "otfkm" || (parts.size() != 4 && parts.size() != 5))
    throw InvalidArgument("case spec '" + std::string(text) +
                          "': expected otfkm:M:K[:FAMILY]:M1|M2 or homogeneous:CASE");
  s.kind = CaseKind::otfkm;
  s.m = parse_int(parts[1], "m");
  s.k = parse_int(parts[2], "k");
  if (parts.size() == 5) s.clifford_family = clifford_family_from_string(parts[3]);
  s.focal = focal_set_from_string(parts.back());
  if (s.m < 1 || s.k < 1) throw InvalidArgument("case spec: m and k must be positive");
  return s;
}

Verdicts expected_verdicts(const CaseSpec& spec) {
  Verdicts v;
  v.is_A = true;
  if (spec.kind == CaseKind::homogeneous) {
    v.is_ricci_parallel = v.is_einstein = spec.orbit == OrbitCase::so5_grassmann;
  } else if (spec.focal == FocalSet::M2) {
    v.is_ricci_parallel = spec.m == 1;
  } else {
    const bool def42 =
        spec.m == 4 && spec.k == 2 && spec.clifford_family != CliffordFamily::indefinite;
    v.is_ricci_parallel = (spec.m == 2 && spec.k == 2) || (spec.m == 6 && spec.k == 1) || def42;
    v.is_einstein = def42;
  }
  v.is_B = v.is_ricci_parallel;  // on an A-manifold, B and parallel coincide
  return v;
}

bool CaseReport::consistent() const {
  const Verdicts& v = verdicts;
  if (v.is_ricci_parallel && !(v.is_A && v.is_B)) return false;
  if (v.is_einstein && !v.is_ricci_parallel) return false;
  return true;
}

bool CaseReport::bounds_hold() const {
  const double b = spec.tol.bound;
  if (sec_pairs > 0 && (sec_max > 2.0 + b || a_tilde_max > 1.0 + b)) return false;
  if (ricci_lower_bound && ricci_min < *ricci_lower_bound - b) return false;
  return shape.multiplicities_ok && shape.max_deviation <= spec.tol.spectrum &&
         shape.max_trace <= spec.tol.spectrum;
}

CaseReport run_case(const CaseSpec& spec) {
  CaseReport r;
  r.spec = spec;
  r.label = spec.label();
  r.case_seed = mix_seed(spec.seed, hash_label(r.label));
  r.expected = expected_verdicts(spec);
  try {
    if (spec.n_points < 1) throw InvalidArgument("n_points must be at least 1");
    if (spec.kind == CaseKind::otfkm)
      run_otfkm(r);
    else
      run_homogeneous(r);
    assign_verdicts(r);
  } catch (const std::exception& e) {
    r.errored = true;
    r.error = e.what();
  }
  return r;
}

bool ClassificationTable::all_match() const {
  return std::all_of(rows.begin(), rows.end(), [](const CaseReport& r) { return r.matches_expected(); });
}

bool ClassificationTable::any_errored() const {
  return std::any_of(rows.begin(), rows.end(), [](const CaseReport& r) { return r.errored; });
}

bool ClassificationTable::consistent() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CaseReport& r) { return r.errored || r.consistent(); });
}

std::vector<CaseSpec> default_cases(const CaseSpec& proto) {
  struct Mk {
    int m, k;
    CliffordFamily f;
  };
  using F = CliffordFamily;
  std::vector<Mk> fams;
  for (int k = 3; k <= 10; ++k) fams.push_back({1, k, F::standard});
  fams.push_back({2, 2, F::standard});
  fams.push_back({3, 2, F::standard});
  fams.push_back({4, 2, F::definite});
  fams.push_back({4, 2, F::indefinite});
  for (int k : {1, 2}) fams.push_back({5, k, F::standard});
  for (int k : {1, 2}) fams.push_back({6, k, F::standard});
  for (int k : {2, 3}) fams.push_back({7, k, F::standard});
  fams.push_back({8, 2, F::definite});
  fams.push_back({8, 2, F::indefinite});
  fams.push_back({8, 3, F::standard});
  fams.push_back({8, 4, F::definite});
  fams.push_back({8, 4, F::indefinite});
  for (int k : {1, 2}) fams.push_back({9, k, F::standard});
  for (int m : {10, 11, 12}) fams.push_back({m, 1, F::standard});

  std::vector<CaseSpec> out;
  for (const Mk& f : fams)
    for (FocalSet fs : {FocalSet::M1, FocalSet::M2}) {
      CaseSpec s = proto;
      s.kind = CaseKind::otfkm;
      s.m = f.m;
      s.k = f.k;
      s.clifford_family = f.f;
      s.focal = fs;
      out.push_back(s);
    }
  for (OrbitCase c : all_orbit_cases()) {
    CaseSpec s = proto;
    s.kind = CaseKind::homogeneous;
    s.orbit = c;
    s.focal = is_m1_type(c) ? FocalSet::M1 : FocalSet::M2;
    out.push_back(s);
  }
  return out;
}

ClassificationTable run_table(const TableConfig& config) {
  ClassificationTable t;
  t.seed = config.seed;
  const std::size_t n = config.cases.size();
  t.rows.resize(n);

  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ISOPAR_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) threads = std::min(threads, cap);
  }
  threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      CaseSpec s = config.cases[i];
      s.seed = config.seed;
      t.rows[i] = run_case(s);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::stable_sort(t.rows.begin(), t.rows.end(), [](const CaseReport& a, const CaseReport& b) {
    if (a.m1 != b.m1) return a.m1 < b.m1;
    if (a.m2 != b.m2) return a.m2 < b.m2;
    return a.label < b.label;
  });
  return t;
}

int table_exit_code(const ClassificationTable& t) {
  if (t.any_errored()) return 1;
  return t.all_match() ? 0 : 2;
}

}  // namespace isopar
