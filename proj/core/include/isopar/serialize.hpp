#pragma once

#include <nlohmann/json.hpp>

#include "isopar/clifford.hpp"
#include "isopar/fkm.hpp"
#include "isopar/linalg.hpp"
#include "isopar/orbits.hpp"
#include "isopar/witness.hpp"

namespace isopar {

using Json = nlohmann::ordered_json;

// 12 significant digits; applied to every float that goes into a report
double round12(double v);

Json to_json(const Vector& v);
Json to_json(const Matrix& a);
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

// generators as integer arrays when the system is exact
Json to_json(const CliffordSystem& sys);
CliffordSystem clifford_from_json(const Json& j);
Json to_json(const CliffordVerification& v);

Json to_json(const FocalPoint& p);
FocalPoint focal_point_from_json(const Json& j);
Json to_json(const TangentFrame& f);

Json to_json(const WitnessRecord& r);
Json to_json(const Witness& w);
Witness witness_from_json(const Json& j);

Json to_json(const OmegaReport& r);

// case id, base point and the normal matrices, as complex 5x5 (re, im)
Json orbit_report(const OrbitData& orbit);

}  // namespace isopar
