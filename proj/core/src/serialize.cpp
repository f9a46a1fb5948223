#include "isopar/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "isopar/error.hpp"

namespace isopar {

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // drop -0
}

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(round12(v[i]));
  return j;
}

Json to_json(const Matrix& a) {
  Json j = Json::array();
  for (int i = 0; i < a.rows(); ++i) j.push_back(to_json(Vector(a.row(i).transpose())));
  return j;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (j.empty()) return Matrix();
  Matrix a(static_cast<int>(j.size()), static_cast<int>(j[0].size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != static_cast<std::size_t>(a.cols())) throw InvalidArgument("ragged matrix in JSON");
    for (std::size_t c = 0; c < j[i].size(); ++c)
      a(static_cast<int>(i), static_cast<int>(c)) = j[i][c].get<double>();
  }
  return a;
}

Json to_json(const CliffordSystem& sys) {
  Json j;
  j["m"] = sys.m();
  j["k"] = sys.k();
  j["l"] = sys.l();
  j["family"] = to_string(sys.family());
  j["exact"] = sys.is_exact();
  Json g = Json::array();
  if (sys.is_exact()) {
    for (const auto& p : sys.exact_generators()) {
      const Eigen::MatrixXi a = p.integer();
      Json rows = Json::array();
      for (int r = 0; r < a.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
        rows.push_back(std::move(row));
      }
      g.push_back(std::move(rows));
    }
  } else {
    for (const auto& p : sys.generators()) g.push_back(to_json(p));
  }
  j["generators"] = std::move(g);
  j["extension"] = sys.extension() ? to_json(*sys.extension()) : Json(nullptr);
  return j;
}

CliffordSystem clifford_from_json(const Json& j) {
  const int m = j.at("m").get<int>();
  const int k = j.at("k").get<int>();
  const CliffordFamily fam = clifford_family_from_string(j.at("family").get<std::string>());
  std::vector<Matrix> gens;
  std::vector<SignedPermutation> exact;
  const bool is_exact = j.value("exact", false);
  for (const auto& g : j.at("generators")) {
    Matrix a = matrix_from_json(g);
    if (is_exact) exact.push_back(SignedPermutation::from_dense(a.cast<int>()));
    gens.push_back(std::move(a));
  }
  std::optional<Matrix> ext;
  if (j.contains("extension") && !j["extension"].is_null()) ext = matrix_from_json(j["extension"]);
  return CliffordSystem(m, k, fam, std::move(gens), std::move(exact), std::move(ext));
}

Json to_json(const CliffordVerification& v) {
  Json j;
  j["max_anticommutator_residual"] = round12(v.max_anticommutator_residual);
  j["max_square_residual"] = round12(v.max_square_residual);
  j["max_symmetry_residual"] = round12(v.max_symmetry_residual);
  j["trace_invariant_q"] = v.trace_invariant_q ? Json(*v.trace_invariant_q) : Json(nullptr);
  j["exact"] = v.exact;
  j["passes"] = v.passes();
  return j;
}

namespace {

Json quads_json(const std::vector<Quad>& q) {
  Json j = Json::array();
  for (const auto& a : q) j.push_back({a[0], a[1], a[2], a[3]});
  return j;
}

std::vector<Quad> quads_from_json(const Json& j) {
  std::vector<Quad> q;
  for (const auto& a : j) q.push_back({a[0].get<int>(), a[1].get<int>(), a[2].get<int>(), a[3].get<int>()});
  return q;
}

Json complex_json(const ComplexMatrix& z) {
  Json j;
  j["re"] = to_json(Matrix(z.real()));
  j["im"] = to_json(Matrix(z.imag()));
  return j;
}

}  // namespace

Json to_json(const FocalPoint& p) {
  Json j;
  j["manifold"] = to_string(p.manifold);
  j["x"] = to_json(p.x);
  j["fixing_coeffs"] = p.fixing_coeffs ? to_json(*p.fixing_coeffs) : Json(nullptr);
  j["constraints"] = quads_json(p.constraints);
  return j;
}

FocalPoint focal_point_from_json(const Json& j) {
  FocalPoint p;
  p.manifold = focal_set_from_string(j.at("manifold").get<std::string>());
  p.x = vector_from_json(j.at("x"));
  if (j.contains("fixing_coeffs") && !j["fixing_coeffs"].is_null())
    p.fixing_coeffs = vector_from_json(j["fixing_coeffs"]);
  if (j.contains("constraints")) p.constraints = quads_from_json(j["constraints"]);
  return p;
}

Json to_json(const TangentFrame& f) {
  Json j;
  j["point"] = to_json(f.point);
  j["provenance"] = to_string(f.provenance);
  j["dim"] = f.dim();
  j["codim"] = f.codim();
  j["tangent"] = to_json(f.tangent);
  j["normal"] = to_json(f.normal);
  return j;
}

Json to_json(const WitnessRecord& r) {
  Json j;
  j["name"] = r.name;
  j["value"] = round12(r.value);
  j["relation"] = to_string(r.relation);
  j["bound"] = round12(r.bound);
  j["holds"] = r.holds;
  return j;
}

Json to_json(const Witness& w) {
  Json j;
  j["kind"] = w.kind;
  j["point"] = to_json(w.point);
  j["fixing_coeffs"] = w.fixing_coeffs ? to_json(*w.fixing_coeffs) : Json(nullptr);
  j["constraints"] = quads_json(w.constraints);
  j["dim_Vx"] = w.dim_vx ? Json(*w.dim_vx) : Json(nullptr);
  j["parallel_defect"] = round12(w.parallel_defect);
  j["einstein_defect"] = round12(w.einstein_defect);
  Json recs = Json::array();
  for (const auto& r : w.records) recs.push_back(to_json(r));
  j["records"] = std::move(recs);
  j["all_hold"] = w.all_hold();
  return j;
}

Witness witness_from_json(const Json& j) {
  Witness w;
  w.kind = j.at("kind").get<std::string>();
  w.point = vector_from_json(j.at("point"));
  if (!j.at("fixing_coeffs").is_null()) w.fixing_coeffs = vector_from_json(j["fixing_coeffs"]);
  w.constraints = quads_from_json(j.at("constraints"));
  if (!j.at("dim_Vx").is_null()) w.dim_vx = j["dim_Vx"].get<int>();
  w.parallel_defect = j.at("parallel_defect").get<double>();
  w.einstein_defect = j.at("einstein_defect").get<double>();
  for (const auto& r : j.at("records")) {
    WitnessRecord rec;
    rec.name = r.at("name").get<std::string>();
    rec.value = r.at("value").get<double>();
    rec.relation = relation_from_string(r.at("relation").get<std::string>());
    rec.bound = r.at("bound").get<double>();
    rec.holds = r.at("holds").get<bool>();
    w.records.push_back(std::move(rec));
  }
  return w;
}

Json to_json(const OmegaReport& r) {
  Json j;
  j["target"] = round12(r.target);
  j["omega_max"] = round12(r.omega_max);
  j["omega_multiplicity"] = r.omega_multiplicity;
  Json rm = Json::array(), mo = Json::array();
  for (double v : r.random_max) rm.push_back(round12(v));
  for (double v : r.random_omega_moment) mo.push_back(round12(v));
  j["random_max"] = std::move(rm);
  j["random_omega_moment"] = std::move(mo);
  j["min_margin"] = round12(r.min_margin);
  return j;
}

Json orbit_report(const OrbitData& orbit) {
  const OrbitFrame f = orbit_base_frame(orbit);
  Json j;
  j["case_id"] = to_string(orbit.id);
  j["group"] = orbit.unitary ? "U(5)" : "SO(5)";
  j["multiplicities"] = {orbit.focal_m1, orbit.focal_m2};
  j["dim"] = f.dim();
  j["codim"] = f.normal.cols();
  j["z0"] = complex_json(orbit.p_matrix(orbit.z0));
  Json xi = Json::array();
  for (int a = 0; a < f.normal.cols(); ++a) xi.push_back(complex_json(orbit.p_matrix(f.normal.col(a))));
  j["normals"] = std::move(xi);
  return j;
}

}  // namespace isopar
