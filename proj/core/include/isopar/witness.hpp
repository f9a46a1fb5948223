#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isopar/clifford.hpp"
#include "isopar/fkm.hpp"
#include "isopar/orbits.hpp"

namespace isopar {

enum class Relation { eq, ge, le, lt, record };
std::string to_string(Relation r);
Relation relation_from_string(const std::string& s);

// one checked (or merely recorded) number at a witness point
struct WitnessRecord {
  std::string name;
  double value = 0.0;
  Relation relation = Relation::record;
  double bound = 0.0;
  bool holds = true;
};

WitnessRecord make_record(std::string name, double value, Relation rel, double bound,
                          double tol = 1e-8);

struct Witness {
  std::string kind;  // special_point, restricted_max, generic, clifford_triple, orbit_base
  Vector point;
  std::optional<Vector> fixing_coeffs;  // M2 points only
  std::vector<Quad> constraints;
  std::optional<int> dim_vx;
  double parallel_defect = 0.0;  // sup |(nabla_Z rho)(X,Y)| at the point, basis sweep included
  double einstein_defect = 0.0;
  std::vector<WitnessRecord> records;

  bool all_hold() const;
  const WitnessRecord* find(const std::string& name) const;
};

// quadruples (2a, 2a+1, 2b, 2b+1), 0 <= a < b < n
std::vector<Quad> paired_quads(int n);

// designated point for this focal set, with its evidence
Witness otfkm_witness(const CliffordSystem& sys, FocalSet focal, std::uint64_t seed);
Witness orbit_witness(const OrbitData& orbit, std::uint64_t seed);

// m = 3: maximal Ricci curvature at a point with P0P1P2P3 x = +-x against random points
struct OmegaReport {
  double target = 0.0;  // 2l - 6
  double omega_max = 0.0;
  int omega_multiplicity = 0;
  std::vector<double> random_max;
  std::vector<double> random_omega_moment;  // |<P0P1P2P3 x, x>|
  double min_margin = 0.0;                  // target - max over random points
};
OmegaReport omega_locus_check(const CliffordSystem& sys, int n_random, std::uint64_t seed);

}  // namespace isopar
