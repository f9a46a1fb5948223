#include "isopar/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "isopar/error.hpp"

namespace isopar {

std::string to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::json: return "json";
    case ReportFormat::csv: return "csv";
    case ReportFormat::markdown: return "markdown";
  }
  return "?";
}

ReportFormat report_format_from_string(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  throw InvalidArgument("unknown report format '" + std::string(s) + "'");
}

namespace {

Json verdicts_json(const Verdicts& v) {
  Json j;
  j["is_A"] = v.is_A;
  j["is_B"] = v.is_B;
  j["is_ricci_parallel"] = v.is_ricci_parallel;
  j["is_einstein"] = v.is_einstein;
  return j;
}

Verdicts verdicts_from_json(const Json& j) {
  Verdicts v;
  v.is_A = j.at("is_A").get<bool>();
  v.is_B = j.at("is_B").get<bool>();
  v.is_ricci_parallel = j.at("is_ricci_parallel").get<bool>();
  v.is_einstein = j.at("is_einstein").get<bool>();
  return v;
}

std::string fmt(double v, const char* f = "%.12g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const char* yn(bool b) { return b ? "yes" : "no"; }

}  // namespace

Json to_json(const CaseSpec& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  if (s.kind == CaseKind::otfkm) {
    j["m"] = s.m;
    j["k"] = s.k;
    j["clifford_family"] = to_string(s.clifford_family);
  } else {
    j["case_id"] = to_string(s.orbit);
  }
  j["focal"] = to_string(s.focal);
  j["n_points"] = s.n_points;
  j["n_samples"] = s.n_samples;
  j["n_pairs"] = s.n_pairs;
  j["oracle_directions"] = s.oracle_directions;
  j["oracle_pairs"] = s.oracle_pairs;
  j["max_ambient"] = s.max_ambient;
  j["seed"] = s.seed;
  j["tolerances"] = {{"zero", s.tol.zero},
                     {"nonzero", s.tol.nonzero},
                     {"spectrum", s.tol.spectrum},
                     {"bound", s.tol.bound},
                     {"oracle", s.tol.oracle}};
  return j;
}

CaseSpec case_spec_from_json(const Json& j) {
  CaseSpec s;
  s.kind = j.at("kind").get<std::string>() == "otfkm" ? CaseKind::otfkm : CaseKind::homogeneous;
  if (s.kind == CaseKind::otfkm) {
    s.m = j.at("m").get<int>();
    s.k = j.at("k").get<int>();
    s.clifford_family = clifford_family_from_string(j.at("clifford_family").get<std::string>());
  } else {
    s.orbit = orbit_case_from_string(j.at("case_id").get<std::string>());
  }
  s.focal = focal_set_from_string(j.at("focal").get<std::string>());
  s.n_points = j.at("n_points").get<int>();
  s.n_samples = j.at("n_samples").get<int>();
  s.n_pairs = j.at("n_pairs").get<int>();
  s.oracle_directions = j.at("oracle_directions").get<int>();
  s.oracle_pairs = j.at("oracle_pairs").get<int>();
  s.max_ambient = j.at("max_ambient").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  const Json& t = j.at("tolerances");
  s.tol.zero = t.at("zero").get<double>();
  s.tol.nonzero = t.at("nonzero").get<double>();
  s.tol.spectrum = t.at("spectrum").get<double>();
  s.tol.bound = t.at("bound").get<double>();
  s.tol.oracle = t.at("oracle").get<double>();
  return s;
}

Json to_json(const CaseReport& r) {
  Json j;
  j["case"] = r.label;
  j["spec"] = to_json(r.spec);
  j["multiplicities"] = {r.m1, r.m2};
  j["dim"] = r.dim;
  j["codim"] = r.codim;
  j["ambient"] = r.ambient;
  j["case_seed"] = r.case_seed;
  j["errored"] = r.errored;
  j["error"] = r.error;
  j["verdicts"] = verdicts_json(r.verdicts);
  j["expected"] = verdicts_json(r.expected);
  j["matches_expected"] = r.matches_expected();
  j["dim_Vx_at_witness"] = r.dim_vx_at_witness ? Json(*r.dim_vx_at_witness) : Json(nullptr);
  Json spec = Json::array();
  for (const auto& c : r.ricci_spectrum) spec.push_back({{"value", round12(c.value)}, {"multiplicity", c.multiplicity}});
  j["ricci_spectrum"] = std::move(spec);
  j["defects"] = {{"points", r.points},
                  {"cyclic_samples", r.cyclic_samples},
                  {"cyclic", round12(r.cyclic_defect)},
                  {"codazzi", round12(r.codazzi_defect)},
                  {"parallel", round12(r.parallel_defect)},
                  {"einstein", round12(r.einstein_defect)},
                  {"ricci_gauss_discrepancy", round12(r.ricci_gauss_discrepancy)},
                  {"orbit_invariance", round12(r.orbit_invariance_defect)}};
  j["shape"] = {{"operators", r.shape.operators},
                {"max_deviation", round12(r.shape.max_deviation)},
                {"max_trace", round12(r.shape.max_trace)},
                {"multiplicities_ok", r.shape.multiplicities_ok},
                {"expected", {r.shape.expected_zero, r.shape.expected_plus, r.shape.expected_minus}}};
  j["sectional"] = {{"pairs", r.sec_pairs},
                    {"sec_min", round12(r.sec_min)},
                    {"sec_max", round12(r.sec_max)},
                    {"a_tilde_max", round12(r.a_tilde_max)}};
  j["ricci"] = {{"min", round12(r.ricci_min)},
                {"max", round12(r.ricci_max)},
                {"lower_bound", r.ricci_lower_bound ? Json(round12(*r.ricci_lower_bound)) : Json(nullptr)}};
  j["oracle"] = {{"triples", r.oracle.triples},
                 {"nabla_discrepancy", round12(r.oracle.nabla_discrepancy)},
                 {"ricci_discrepancy", round12(r.oracle.ricci_discrepancy)}};
  j["bounds_hold"] = r.bounds_hold();
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  return j;
}

CaseReport case_report_from_json(const Json& j) {
  CaseReport r;
  r.label = j.at("case").get<std::string>();
  r.spec = case_spec_from_json(j.at("spec"));
  r.m1 = j.at("multiplicities")[0].get<int>();
  r.m2 = j.at("multiplicities")[1].get<int>();
  r.dim = j.at("dim").get<int>();
  r.codim = j.at("codim").get<int>();
  r.ambient = j.at("ambient").get<int>();
  r.case_seed = j.at("case_seed").get<std::uint64_t>();
  r.errored = j.at("errored").get<bool>();
  r.error = j.at("error").get<std::string>();
  r.verdicts = verdicts_from_json(j.at("verdicts"));
  r.expected = verdicts_from_json(j.at("expected"));
  if (!j.at("dim_Vx_at_witness").is_null()) r.dim_vx_at_witness = j["dim_Vx_at_witness"].get<int>();
  for (const auto& c : j.at("ricci_spectrum"))
    r.ricci_spectrum.push_back({c.at("value").get<double>(), c.at("multiplicity").get<int>()});
  const Json& d = j.at("defects");
  r.points = d.at("points").get<int>();
  r.cyclic_samples = d.at("cyclic_samples").get<int>();
  r.cyclic_defect = d.at("cyclic").get<double>();
  r.codazzi_defect = d.at("codazzi").get<double>();
  r.parallel_defect = d.at("parallel").get<double>();
  r.einstein_defect = d.at("einstein").get<double>();
  r.ricci_gauss_discrepancy = d.at("ricci_gauss_discrepancy").get<double>();
  r.orbit_invariance_defect = d.at("orbit_invariance").get<double>();
  const Json& sh = j.at("shape");
  r.shape.operators = sh.at("operators").get<int>();
  r.shape.max_deviation = sh.at("max_deviation").get<double>();
  r.shape.max_trace = sh.at("max_trace").get<double>();
  r.shape.multiplicities_ok = sh.at("multiplicities_ok").get<bool>();
  r.shape.expected_zero = sh.at("expected")[0].get<int>();
  r.shape.expected_plus = sh.at("expected")[1].get<int>();
  r.shape.expected_minus = sh.at("expected")[2].get<int>();
  const Json& sc = j.at("sectional");
  r.sec_pairs = sc.at("pairs").get<int>();
  r.sec_min = sc.at("sec_min").get<double>();
  r.sec_max = sc.at("sec_max").get<double>();
  r.a_tilde_max = sc.at("a_tilde_max").get<double>();
  const Json& ri = j.at("ricci");
  r.ricci_min = ri.at("min").get<double>();
  r.ricci_max = ri.at("max").get<double>();
  if (!ri.at("lower_bound").is_null()) r.ricci_lower_bound = ri["lower_bound"].get<double>();
  const Json& o = j.at("oracle");
  r.oracle.triples = o.at("triples").get<int>();
  r.oracle.nabla_discrepancy = o.at("nabla_discrepancy").get<double>();
  r.oracle.ricci_discrepancy = o.at("ricci_discrepancy").get<double>();
  if (!j.at("witness").is_null()) r.witness = witness_from_json(j["witness"]);
  return r;
}

Json to_json(const ClassificationTable& t) {
  Json j;
  j["format"] = "isopar-classification";
  j["version"] = 1;
  j["seed"] = t.seed;
  int matched = 0, errored = 0;
  for (const auto& r : t.rows) {
    matched += r.matches_expected();
    errored += r.errored;
  }
  j["summary"] = {{"cases", t.rows.size()},
                  {"matched", matched},
                  {"errored", errored},
                  {"consistent", t.consistent()},
                  {"all_match", t.all_match()}};
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(to_json(r));
  j["rows"] = std::move(rows);
  return j;
}

ClassificationTable table_from_json(const Json& j) {
  if (j.value("format", std::string()) != "isopar-classification")
    throw InvalidArgument("not an isopar classification report");
  ClassificationTable t;
  t.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& r : j.at("rows")) t.rows.push_back(case_report_from_json(r));
  return t;
}

std::string to_csv(const ClassificationTable& t) {
  std::ostringstream os;
  os << "case,kind,focal,m1,m2,dim,codim,is_A,is_B,is_ricci_parallel,is_einstein,matches_expected,"
        "dim_Vx_at_witness,cyclic_defect,codazzi_defect,parallel_defect,witness_parallel_defect,"
        "einstein_defect,sec_max,a_tilde_max,ricci_min,ricci_max,oracle_nabla_discrepancy,error\n";
  for (const auto& r : t.rows) {
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n' || c == '"') c = ';';
    os << r.label << ',' << to_string(r.spec.kind) << ',' << to_string(r.spec.focal) << ',' << r.m1 << ','
       << r.m2 << ',' << r.dim << ',' << r.codim << ',' << r.verdicts.is_A << ',' << r.verdicts.is_B << ','
       << r.verdicts.is_ricci_parallel << ',' << r.verdicts.is_einstein << ',' << r.matches_expected() << ','
       << (r.dim_vx_at_witness ? std::to_string(*r.dim_vx_at_witness) : "") << ',' << fmt(r.cyclic_defect)
       << ',' << fmt(r.codazzi_defect) << ',' << fmt(r.parallel_defect) << ','
       << (r.witness ? fmt(r.witness->parallel_defect) : "") << ',' << fmt(r.einstein_defect) << ','
       << fmt(r.sec_max) << ',' << fmt(r.a_tilde_max) << ',' << fmt(r.ricci_min) << ',' << fmt(r.ricci_max)
       << ',' << fmt(r.oracle.nabla_discrepancy) << ',' << err << '\n';
  }
  return os.str();
}

std::string to_markdown(const ClassificationTable& t) {
  std::ostringstream os;
  os << "# Focal submanifold classification\n\n";
  os << "seed " << t.seed << ", " << t.rows.size() << " cases\n\n";
  os << "| case | (m1,m2) | dim | A | B | Ricci parallel | Einstein | dim Vx | parallel defect | matches |\n";
  os << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : t.rows) {
    const double pd = std::max(r.parallel_defect, r.witness ? r.witness->parallel_defect : 0.0);
    os << "| " << r.label << " | (" << r.m1 << "," << r.m2 << ") | " << r.dim << " | ";
    if (r.errored) {
      os << "error | | | | | | " << "no |\n";
      continue;
    }
    os << yn(r.verdicts.is_A) << " | " << yn(r.verdicts.is_B) << " | " << yn(r.verdicts.is_ricci_parallel)
       << " | " << yn(r.verdicts.is_einstein) << " | "
       << (r.dim_vx_at_witness ? std::to_string(*r.dim_vx_at_witness) : "") << " | " << fmt(pd, "%.3g")
       << " | " << yn(r.matches_expected()) << " |\n";
  }

  auto list = [&](const char* title, auto pred) {
    os << "\n## " << title << "\n\n";
    bool any = false;
    for (const auto& r : t.rows)
      if (!r.errored && pred(r)) {
        os << "- " << r.label << " (" << r.m1 << "," << r.m2 << ")\n";
        any = true;
      }
    if (!any) os << "- none\n";
  };
  list("Not A-manifolds", [](const CaseReport& r) { return !r.verdicts.is_A; });
  list("Ricci parallel", [](const CaseReport& r) { return r.verdicts.is_ricci_parallel; });
  list("Einstein", [](const CaseReport& r) { return r.verdicts.is_einstein; });

  bool bad = false;
  for (const auto& r : t.rows)
    if (!r.matches_expected()) {
      if (!bad) os << "\n## Mismatches and errors\n\n";
      bad = true;
      os << "- " << r.label << (r.errored ? ": " + r.error : std::string(": verdict differs")) << "\n";
    }
  return os.str();
}

std::string render_report(const ClassificationTable& t, ReportFormat f) {
  switch (f) {
    case ReportFormat::json: return to_json(t).dump(2) + "\n";
    case ReportFormat::csv: return to_csv(t);
    case ReportFormat::markdown: return to_markdown(t);
  }
  return {};
}

void emit_report(const ClassificationTable& t, ReportFormat f, const std::string& path) {
  const std::string text = render_report(t, f);
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error("write to '" + path + "' failed");
}

ClassificationTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return table_from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error("'" + path + "': " + e.what());
  }
}

}  // namespace isopar
