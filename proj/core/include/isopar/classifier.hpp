#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isopar/clifford.hpp"
#include "isopar/fkm.hpp"
#include "isopar/linalg.hpp"
#include "isopar/orbits.hpp"
#include "isopar/witness.hpp"

namespace isopar {

enum class CaseKind { otfkm, homogeneous };
std::string to_string(CaseKind k);

struct Tolerances {
  double zero = 1e-8;      // positive verdicts need defects at or below this
  double nonzero = 1e-2;   // negative verdicts need a witness at or above this
  double spectrum = 1e-6;  // shape operator eigenvalues vs {-1, 0, 1}
  double bound = 1e-9;     // slack on Sec <= 2, A~ <= 1, Ricci lower bound
  double oracle = 1e-5;    // closed form vs finite differences
};

struct CaseSpec {
  CaseKind kind = CaseKind::otfkm;
  int m = 0, k = 0;
  CliffordFamily clifford_family = CliffordFamily::standard;
  OrbitCase orbit = OrbitCase::so5_cp3;
  FocalSet focal = FocalSet::M1;  // implied by the orbit for homogeneous cases

  int n_points = 5;
  int n_samples = 200;        // directions per point for the defect scans
  int n_pairs = 2000;         // orthonormal pairs per point for the sectional scan
  int oracle_directions = 10;
  int oracle_pairs = 10;      // (X, Y) pairs per oracle direction
  int max_ambient = 256;
  std::uint64_t seed = 0;
  Tolerances tol;

  // otfkm:M:K:FAMILY:M1|M2 or homogeneous:CASE; the family may be omitted when parsing
  std::string label() const;
  static CaseSpec parse(std::string_view text);
};

struct Verdicts {
  bool is_A = false;
  bool is_B = false;
  bool is_ricci_parallel = false;
  bool is_einstein = false;
  bool operator==(const Verdicts&) const = default;
};

// the classification the theorems predict for this case
Verdicts expected_verdicts(const CaseSpec& spec);

struct ShapeCheck {
  int operators = 0;
  double max_deviation = 0.0;  // distance of eigenvalues to the nearest of -1, 0, 1
  double max_trace = 0.0;      // minimality
  bool multiplicities_ok = true;
  int expected_zero = 0, expected_plus = 0, expected_minus = 0;
};

struct OracleCheck {
  int triples = 0;
  double nabla_discrepancy = 0.0;
  double ricci_discrepancy = 0.0;
};

struct CaseReport {
  CaseSpec spec;
  std::string label;
  int m1 = 0, m2 = 0;
  int dim = 0, codim = 0, ambient = 0;
  std::uint64_t case_seed = 0;

  bool errored = false;
  std::string error;

  int points = 0;
  int cyclic_samples = 0;
  double cyclic_defect = 0.0;
  double codazzi_defect = 0.0;
  double parallel_defect = 0.0;  // sampled points, basis sweep included
  double einstein_defect = 0.0;  // max over sampled points and the witness
  double ricci_gauss_discrepancy = 0.0;
  double orbit_invariance_defect = 0.0;  // homogeneous only

  ShapeCheck shape;
  int sec_pairs = 0;
  double sec_min = 0.0, sec_max = 0.0, a_tilde_max = 0.0;
  double ricci_min = 0.0, ricci_max = 0.0;
  std::optional<double> ricci_lower_bound;  // 2(m2 - 1), M1-type sets only
  std::vector<SpectrumCluster> ricci_spectrum;  // at the first sampled point
  OracleCheck oracle;

  std::optional<Witness> witness;
  std::optional<int> dim_vx_at_witness;

  Verdicts verdicts;
  Verdicts expected;

  bool matches_expected() const { return !errored && verdicts == expected; }
  bool consistent() const;
  bool bounds_hold() const;
};

CaseReport run_case(const CaseSpec& spec);

struct TableConfig {
  std::vector<CaseSpec> cases;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency, capped by ISOPAR_THREADS
};

struct ClassificationTable {
  std::uint64_t seed = 0;
  std::vector<CaseReport> rows;

  bool all_match() const;
  bool any_errored() const;
  bool consistent() const;
};

// table cases, m = 1 with l up to 10, the (3,4) family, both focal sets, plus the four orbits
std::vector<CaseSpec> default_cases(const CaseSpec& proto = {});

ClassificationTable run_table(const TableConfig& config);

// 0 all verdicts match, 2 mismatch, 1 execution error
int table_exit_code(const ClassificationTable& t);

}  // namespace isopar
