#include <cmath>

#include <gtest/gtest.h>

#include "isopar/error.hpp"
#include "isopar/witness.hpp"

using namespace isopar;

namespace {

struct Case {
  int m, k;
  CliffordFamily f;
  bool m1_parallel;
};

std::vector<Case> table() {
  using F = CliffordFamily;
  return {{2, 2, F::standard, true},    {3, 2, F::standard, false},   {4, 2, F::definite, true},
          {4, 2, F::indefinite, false}, {5, 1, F::standard, false},   {5, 2, F::standard, false},
          {6, 1, F::standard, true},    {6, 2, F::standard, false},   {7, 2, F::standard, false},
          {7, 3, F::standard, false},   {8, 2, F::definite, false},   {8, 2, F::indefinite, false},
          {8, 3, F::standard, false},   {9, 1, F::standard, false},   {10, 1, F::standard, false}};
}

}  // namespace

TEST(MakeRecord, Relations) {
  EXPECT_TRUE(make_record("a", 1.0, Relation::eq, 1.0 + 1e-9).holds);
  EXPECT_FALSE(make_record("a", 1.0, Relation::eq, 1.1).holds);
  EXPECT_TRUE(make_record("a", 2.0, Relation::ge, 1.0).holds);
  EXPECT_FALSE(make_record("a", 0.5, Relation::ge, 1.0).holds);
  EXPECT_TRUE(make_record("a", 0.5, Relation::le, 1.0).holds);
  EXPECT_FALSE(make_record("a", 1.0, Relation::lt, 1.0).holds);
  EXPECT_TRUE(make_record("a", 1e9, Relation::record, 0).holds);
  for (Relation r : {Relation::eq, Relation::ge, Relation::le, Relation::lt, Relation::record})
    EXPECT_EQ(relation_from_string(to_string(r)), r);
  EXPECT_THROW(relation_from_string("gt"), InvalidArgument);
}

TEST(PairedQuads, Layout) {
  const auto q = paired_quads(3);
  ASSERT_EQ(q.size(), 3u);
  EXPECT_EQ(q[0], (Quad{0, 1, 2, 3}));
  EXPECT_EQ(q[2], (Quad{2, 3, 4, 5}));
  EXPECT_TRUE(paired_quads(1).empty());
}

TEST(OtfkmWitness, M1VerdictEvidence) {
  for (const Case& c : table()) {
    const auto s = build_clifford_system(c.m, c.k, c.f);
    const Witness w = otfkm_witness(s, FocalSet::M1, 1);
    EXPECT_TRUE(w.all_hold()) << c.m << "," << c.k << " " << to_string(c.f);
    for (const auto& r : w.records) EXPECT_TRUE(r.holds) << c.m << "," << c.k << " " << r.name;
    if (c.m1_parallel)
      EXPECT_LE(w.parallel_defect, 1e-8) << c.m << "," << c.k;
    else
      EXPECT_GE(w.parallel_defect, 1e-2) << c.m << "," << c.k;
    EXPECT_EQ(w.point.size(), s.ambient_dim());
    EXPECT_FALSE(w.fixing_coeffs.has_value());
  }
}

TEST(OtfkmWitness, M2VerdictEvidence) {
  for (const Case& c : table()) {
    const auto s = build_clifford_system(c.m, c.k, c.f);
    const Witness w = otfkm_witness(s, FocalSet::M2, 1);
    EXPECT_TRUE(w.all_hold()) << c.m << "," << c.k;
    EXPECT_GE(w.parallel_defect, 1e-2) << c.m << "," << c.k;
    ASSERT_TRUE(w.fixing_coeffs.has_value());
    EXPECT_NEAR(w.fixing_coeffs->norm(), 1.0, 1e-12);
  }
  for (int k : {3, 5, 8}) {
    const auto s = build_clifford_system(1, k);
    const Witness w = otfkm_witness(s, FocalSet::M2, 1);
    EXPECT_LE(w.parallel_defect, 1e-8) << k;
    EXPECT_EQ(w.kind, "generic");
  }
}

TEST(OtfkmWitness, SpecialPointRecords) {
  const auto ind = build_clifford_system(4, 2, CliffordFamily::indefinite);
  const Witness w4 = otfkm_witness(ind, FocalSet::M1, 0);
  EXPECT_EQ(w4.kind, "special_point");
  ASSERT_TRUE(w4.dim_vx.has_value());
  EXPECT_EQ(*w4.dim_vx, 7);
  EXPECT_GE(w4.find("B_off_L")->value, 1e-2);

  const Witness w9 = otfkm_witness(build_clifford_system(9, 1), FocalSet::M1, 0);
  ASSERT_NE(w9.find("quarter_nabla_rho_abs"), nullptr);
  EXPECT_NEAR(w9.find("quarter_nabla_rho_abs")->value, 1.5, 1e-8);

  const Witness w10 = otfkm_witness(build_clifford_system(10, 1), FocalSet::M1, 0);
  ASSERT_NE(w10.find("S_gap"), nullptr);
  EXPECT_GE(w10.find("S_gap")->value, 1e-2);
}

TEST(OtfkmWitness, RestrictedMaxForMEight) {
  const auto s = build_clifford_system(8, 3);
  const Witness w = otfkm_witness(s, FocalSet::M1, 0);
  EXPECT_EQ(w.kind, "restricted_max");
  EXPECT_NEAR(w.find("restricted_F_max")->value, 1.0, 1e-8);
}

TEST(OtfkmWitness, TripleIdentityOnM2) {
  const auto s = build_clifford_system(3, 2);
  const Witness w = otfkm_witness(s, FocalSet::M2, 4);
  EXPECT_EQ(w.kind, "clifford_triple");
  const double base = s.l() - 2.0 * s.m() + 2.0;
  const double cross = w.find("triple_cross_sum")->value;
  EXPECT_NEAR(w.find("nabla_tau(Q1Q2x,Q1x;Q2x)")->value, base + cross, 1e-8);
  EXPECT_GE(cross, 0.0);
}

TEST(OtfkmWitness, DeterministicInSeed) {
  const auto s = build_clifford_system(5, 2);
  const Witness a = otfkm_witness(s, FocalSet::M2, 9), b = otfkm_witness(s, FocalSet::M2, 9);
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.parallel_defect, b.parallel_defect);
}

TEST(OrbitWitness, Verdicts) {
  for (OrbitCase id : all_orbit_cases()) {
    const Witness w = orbit_witness(build_orbit(id), 2);
    EXPECT_TRUE(w.all_hold()) << to_string(id);
    if (id == OrbitCase::so5_grassmann) {
      EXPECT_LE(w.parallel_defect, 1e-8);
      EXPECT_LE(w.einstein_defect, 1e-8);
    } else {
      EXPECT_GE(w.parallel_defect, 1e-2) << to_string(id);
      EXPECT_GE(w.einstein_defect, 1e-2) << to_string(id);
    }
  }
  const Witness w = orbit_witness(build_orbit(OrbitCase::u5_M2_13), 2);
  EXPECT_EQ(w.find("ricci_low_mult")->value, 12);
}

TEST(OmegaLocus, MaximalRicciAtTheSpecialPoint) {
  const auto s = build_clifford_system(3, 2);
  const OmegaReport r = omega_locus_check(s, 5, 1);
  EXPECT_NEAR(r.target, 2.0 * s.l() - 6.0, 0.0);
  EXPECT_NEAR(r.omega_max, r.target, 1e-9);
  EXPECT_EQ(r.omega_multiplicity, 3);
  ASSERT_EQ(r.random_max.size(), 5u);
  EXPECT_GT(r.min_margin, 0.0);
  for (double v : r.random_max) EXPECT_LT(v, r.target);
  EXPECT_THROW(omega_locus_check(build_clifford_system(2, 2), 3, 1), InvalidArgument);
}
