#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "isopar/error.hpp"
#include "isopar/report.hpp"

using namespace isopar;
namespace fs = std::filesystem;

namespace {

// a small table shared by every test; computing it once keeps the suite fast
const ClassificationTable& table() {
  static const ClassificationTable t = [] {
    TableConfig cfg;
    cfg.seed = 5;
    for (const char* l : {"otfkm:2:2:M1", "otfkm:3:2:M2", "otfkm:4:2:definite:M1", "homogeneous:u5_M2_13"}) {
      CaseSpec s = CaseSpec::parse(l);
      s.n_points = 2;
      s.n_samples = 40;
      s.n_pairs = 100;
      s.oracle_directions = 2;
      s.oracle_pairs = 2;
      cfg.cases.push_back(s);
    }
    CaseSpec capped = CaseSpec::parse("otfkm:5:2:M1");
    capped.max_ambient = 8;
    cfg.cases.push_back(capped);
    return run_table(cfg);
  }();
  return t;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("isopar_test_" + name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ReportFormat, Names) {
  for (ReportFormat f : {ReportFormat::json, ReportFormat::csv, ReportFormat::markdown})
    EXPECT_EQ(report_format_from_string(to_string(f)), f);
  EXPECT_THROW(report_format_from_string("yaml"), InvalidArgument);
}

TEST(Json, TopLevelLayout) {
  const Json j = to_json(table());
  EXPECT_EQ(j.at("format"), "isopar-classification");
  EXPECT_EQ(j.at("seed"), 5);
  EXPECT_EQ(j.at("rows").size(), 5u);
  const Json& row = j.at("rows")[0];
  for (const char* key : {"case", "multiplicities", "verdicts", "expected", "defects", "witness"})
    EXPECT_TRUE(row.contains(key)) << key;
}

TEST(Json, RoundTripIsIdentical) {
  const std::string a = to_json(table()).dump();
  const ClassificationTable back = table_from_json(Json::parse(a));
  EXPECT_EQ(to_json(back).dump(), a);
  ASSERT_EQ(back.rows.size(), table().rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].label, table().rows[i].label);
    EXPECT_EQ(back.rows[i].verdicts, table().rows[i].verdicts);
    EXPECT_EQ(back.rows[i].errored, table().rows[i].errored);
  }
}

TEST(Json, CaseSpecRoundTrip) {
  CaseSpec s = CaseSpec::parse("otfkm:8:4:indefinite:M2");
  s.n_samples = 17;
  s.tol.zero = 1e-9;
  const CaseSpec back = case_spec_from_json(to_json(s));
  EXPECT_EQ(back.label(), s.label());
  EXPECT_EQ(back.n_samples, 17);
  EXPECT_EQ(back.tol.zero, 1e-9);
}

TEST(Json, RejectsForeignDocuments) {
  EXPECT_ANY_THROW(table_from_json(Json::parse(R"({"format": "something-else", "rows": []})")));
}

TEST(Csv, OneLinePerRowPlusHeader) {
  const std::string csv = to_csv(table());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(table().rows.size()) + 1);
  EXPECT_EQ(csv.rfind("case,", 0), 0u);
  // same number of fields on every line
  std::istringstream in(csv);
  std::string line;
  long fields = -1;
  while (std::getline(in, line)) {
    const long f = std::count(line.begin(), line.end(), ',');
    if (fields < 0) fields = f;
    EXPECT_EQ(f, fields) << line;
  }
}

TEST(Markdown, Sections) {
  const std::string md = to_markdown(table());
  for (const char* s : {"# Focal submanifold classification", "## Not A-manifolds", "## Ricci parallel",
                        "## Einstein", "## Mismatches and errors"})
    EXPECT_NE(md.find(s), std::string::npos) << s;
  EXPECT_NE(md.find("otfkm:4:2:definite:M1 (4,3)"), std::string::npos);
  EXPECT_NE(md.find("exceeds the cap"), std::string::npos);
}

TEST(Render, Deterministic) {
  for (ReportFormat f : {ReportFormat::json, ReportFormat::csv, ReportFormat::markdown})
    EXPECT_EQ(render_report(table(), f), render_report(table(), f));
}

TEST(Emit, WriteAndLoad) {
  const fs::path p = temp_file("table.json");
  emit_report(table(), ReportFormat::json, p.string());
  EXPECT_EQ(slurp(p), render_report(table(), ReportFormat::json));
  const ClassificationTable back = load_table(p.string());
  EXPECT_EQ(to_json(back).dump(), to_json(table()).dump());
  fs::remove(p);
}

TEST(Emit, UnwritablePathNamesThePath) {
  const std::string bad = "/nonexistent_dir_isopar/out.json";
  try {
    emit_report(table(), ReportFormat::json, bad);
    FAIL() << "no exception";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(bad), std::string::npos);
  }
  EXPECT_THROW(load_table("/nonexistent_dir_isopar/in.json"), Error);
}

TEST(Emit, GarbageFileIsAnError) {
  const fs::path p = temp_file("garbage.json");
  std::ofstream(p) << "not json";
  EXPECT_THROW(load_table(p.string()), Error);
  fs::remove(p);
}

TEST(Serialize, CliffordSystemHasIntegerGenerators) {
  const Json j = to_json(build_clifford_system(2, 2));
  EXPECT_TRUE(j.contains("generators"));
  EXPECT_TRUE(j.at("generators")[0][0][0].is_number_integer());
}

TEST(Serialize, Round12DropsNegativeZero) {
  EXPECT_EQ(Json(round12(-0.0)).dump(), "0.0");
  EXPECT_EQ(round12(0.1 + 0.2), 0.3);
}

TEST(Serialize, WitnessRoundTrip) {
  const Witness w = otfkm_witness(build_clifford_system(4, 2, CliffordFamily::indefinite), FocalSet::M1, 0);
  const Witness back = witness_from_json(to_json(w));
  EXPECT_EQ(to_json(back).dump(), to_json(w).dump());
  EXPECT_EQ(back.records.size(), w.records.size());
}
