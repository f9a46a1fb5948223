// isopar: command line front end for the focal submanifold classifier
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isopar/classifier.hpp"
#include "isopar/clifford.hpp"
#include "isopar/error.hpp"
#include "isopar/report.hpp"
#include "isopar/serialize.hpp"
#include "isopar/witness.hpp"

namespace {

using namespace isopar;

int verify_clifford(int m, int k, const std::string& family, bool dump) {
  const CliffordSystem sys = build_clifford_system(m, k, clifford_family_from_string(family));
  const CliffordVerification v = verify_clifford_system(sys);
  Json j;
  j["m"] = m;
  j["k"] = k;
  j["l"] = sys.l();
  j["family"] = to_string(sys.family());
  j["multiplicities"] = {sys.m1(), sys.m2()};
  j["verification"] = to_json(v);
  if (dump) j["system"] = to_json(sys);
  std::cout << j.dump(2) << "\n";
  return v.passes() ? 0 : 2;
}

struct ClassifyOptions {
  std::vector<std::string> cases;
  bool all = false;
  std::uint64_t seed = 0;
  int samples = 200;
  int points = 5;
  int pairs = 2000;
  int oracle_directions = 10;
  double tol = 1e-8;
  int threads = 0;
  std::string out = "-";
  std::string format = "json";
};

int classify(const ClassifyOptions& o) {
  if (o.cases.empty() && !o.all) throw InvalidArgument("classify: give --case SPEC or --all");
  const ReportFormat fmt = report_format_from_string(o.format);
  CaseSpec proto;
  proto.n_samples = o.samples;
  proto.n_points = o.points;
  proto.n_pairs = o.pairs;
  proto.oracle_directions = o.oracle_directions;
  proto.tol.zero = o.tol;

  TableConfig cfg;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  if (o.all) cfg.cases = default_cases(proto);
  for (const auto& c : o.cases) {
    CaseSpec s = CaseSpec::parse(c);
    s.n_samples = proto.n_samples;
    s.n_points = proto.n_points;
    s.n_pairs = proto.n_pairs;
    s.oracle_directions = proto.oracle_directions;
    s.tol = proto.tol;
    cfg.cases.push_back(s);
  }
  const ClassificationTable t = run_table(cfg);
  emit_report(t, fmt, o.out);
  for (const auto& r : t.rows) {
    if (r.errored)
      std::cerr << "error: " << r.label << ": " << r.error << "\n";
    else if (!r.matches_expected())
      std::cerr << "mismatch: " << r.label << "\n";
  }
  return table_exit_code(t);
}

int witness(const std::string& text, std::uint64_t seed) {
  CaseSpec s = CaseSpec::parse(text);
  s.seed = seed;
  const std::uint64_t ws = mix_seed(mix_seed(seed, hash_label(s.label())), 7);
  Json j;
  j["case"] = s.label();
  Witness w;
  if (s.kind == CaseKind::homogeneous) {
    const OrbitData orbit = build_orbit(s.orbit);
    j["orbit"] = orbit_report(orbit);
    w = orbit_witness(orbit, ws);
  } else {
    const CliffordSystem sys = build_clifford_system(s.m, s.k, s.clifford_family);
    j["multiplicities"] = {sys.m1(), sys.m2()};
    w = otfkm_witness(sys, s.focal, ws);
    if (sys.m() == 3 && s.focal == FocalSet::M1) j["omega_locus"] = to_json(omega_locus_check(sys, 5, ws));
  }
  j["witness"] = to_json(w);
  std::cout << j.dump(2) << "\n";
  return w.all_hold() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isopar: curvature classification of focal submanifolds of isoparametric hypersurfaces"};
  app.require_subcommand(1);

  auto* vc = app.add_subcommand("verify-clifford", "build and check a symmetric Clifford system");
  int m = 0, k = 1;
  std::string family = "standard";
  bool dump = false;
  vc->add_option("-m", m, "number of generators minus one")->required();
  vc->add_option("-k", k, "module multiplicity")->required();
  vc->add_option("--family", family, "standard, definite or indefinite");
  vc->add_flag("--dump", dump, "include the generator matrices");

  auto* cl = app.add_subcommand("classify", "run the classification over one or more cases");
  ClassifyOptions co;
  cl->add_option("--case", co.cases, "otfkm:M:K[:FAMILY]:M1|M2 or homogeneous:CASE (repeatable)");
  cl->add_flag("--all", co.all, "every built-in case");
  cl->add_option("--seed", co.seed, "base seed");
  cl->add_option("--samples", co.samples, "random directions per point");
  cl->add_option("--points", co.points, "sampled points per case");
  cl->add_option("--pairs", co.pairs, "orthonormal pairs per point for sectional curvature");
  cl->add_option("--oracle-directions", co.oracle_directions, "finite-difference directions (0 disables)");
  cl->add_option("--tol", co.tol, "zero tolerance for positive verdicts");
  cl->add_option("--threads", co.threads, "worker threads (ISOPAR_THREADS caps this)");
  cl->add_option("--out", co.out, "output path, - for stdout");
  cl->add_option("--format", co.format, "json, csv or markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));

  auto* wi = app.add_subcommand("witness", "dump the evidence at a case's designated point");
  std::string wcase;
  std::uint64_t wseed = 0;
  wi->add_option("--case", wcase, "case spec")->required();
  wi->add_option("--seed", wseed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*vc) return verify_clifford(m, k, family, dump);
    if (*cl) return classify(co);
    if (*wi) return witness(wcase, wseed);
  } catch (const std::exception& e) {
    std::cerr << "isopar: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
