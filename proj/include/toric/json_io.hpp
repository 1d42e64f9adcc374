#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "toric/collections.hpp"
#include "toric/fano_family.hpp"
#include "toric/stacky_fan.hpp"

namespace toric {

using Json = nlohmann::json;

// Exactness through the text boundary: Int values that fit in 64 bits are
// plain JSON integers, anything else a decimal string; rationals are "p/q".
Json json_int(const Int& v);
Json json_rat(const Rat& v);
Int int_from_json(const Json& j);
Rat rat_from_json(const Json& j);

Json json_vec(const IntVec& v);
IntVec vec_from_json(const Json& j);
Json json_matrix(const IntMatrix& m);  // array of rows
IntMatrix matrix_from_json(const Json& j);

// Interchange fan format: lattice_rank, rays, max_cones, optional markings,
// optional pic_dual (divisor coordinates) and family provenance.
Json fan_to_json(const StackyFan& fan, const std::optional<FamilyParams>& family = std::nullopt);
StackyFan fan_from_json(const Json& j);
std::optional<FamilyParams> family_params_from_json(const Json& j);

Json divisor_to_json(const DivisorClass& d);
DivisorClass divisor_from_json(const Json& j);

// Gale pair serialization: primal, dual free part, torsion orders and the
// per-vector torsion components.
Json gale_pair_to_json(const GaleDualPair& pair);
GaleDualPair gale_pair_from_json(const Json& j);

Json collection_to_json(const LineBundleCollection& col);
std::vector<DivisorClass> bundles_from_json(const Json& j);

}  // namespace toric
