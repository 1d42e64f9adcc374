#include "toric/json_io.hpp"

namespace toric {

namespace {

const Int kInt64Max("9223372036854775807");
const Int kInt64Min("-9223372036854775808");

}  // namespace

Json json_int(const Int& v) {
    if (v <= kInt64Max && v >= kInt64Min) return Json(static_cast<std::int64_t>(v));
    return Json(v.str());
}

Json json_rat(const Rat& v) {
    if (is_integer(v)) return json_int(rat_num(v));
    return Json(rat_to_string(v));
}

Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw ToricError("expected an exact integer in JSON");
}

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(Int(j.get<std::int64_t>()));
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw ToricError("expected an exact rational in JSON");
}

Json json_vec(const IntVec& v) {
    Json a = Json::array();
    for (const Int& x : v) a.push_back(json_int(x));
    return a;
}

IntVec vec_from_json(const Json& j) {
    IntVec v;
    for (const auto& x : j) v.push_back(int_from_json(x));
    return v;
}

Json json_matrix(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(json_vec(m.row(i)));
    return rows;
}

IntMatrix matrix_from_json(const Json& j) {
    std::vector<IntVec> rows;
    for (const auto& r : j) rows.push_back(vec_from_json(r));
    return IntMatrix::from_rows(rows);
}

Json fan_to_json(const StackyFan& fan, const std::optional<FamilyParams>& family) {
    Json j;
    j["lattice_rank"] = fan.lattice_rank;
    Json rays = Json::array();
    for (const auto& v : fan.rays.vectors) rays.push_back(json_vec(v));
    j["rays"] = rays;
    Json cones = Json::array();
    for (const auto& c : fan.max_cones) cones.push_back(c);
    j["max_cones"] = cones;
    if (!fan.rays.labels.empty()) j["markings"] = fan.rays.labels;
    Json pic = Json::array();
    for (const auto& e : fan.pic.dual_free.vectors) pic.push_back(json_vec(e));
    j["pic_dual"] = pic;
    if (family) j["family"] = {{"n", family->n}, {"k", family->k}, {"a", family->a}};
    return j;
}

StackyFan fan_from_json(const Json& j) {
    IntVectorCollection rays;
    rays.dim = j.at("lattice_rank").get<std::size_t>();
    for (const auto& r : j.at("rays")) {
        IntVec v = vec_from_json(r);
        if (v.size() != rays.dim) throw ToricError("fan JSON: ray dimension mismatch");
        rays.vectors.push_back(std::move(v));
    }
    if (j.contains("markings"))
        for (const auto& m : j.at("markings")) rays.labels.push_back(m.get<std::string>());
    std::vector<std::vector<std::size_t>> cones;
    for (const auto& c : j.at("max_cones")) {
        std::vector<std::size_t> cone;
        for (const auto& i : c) cone.push_back(i.get<std::size_t>());
        cones.push_back(std::move(cone));
    }
    std::optional<IntVectorCollection> dual;
    if (j.contains("pic_dual")) {
        IntVectorCollection d;
        for (const auto& e : j.at("pic_dual")) d.vectors.push_back(vec_from_json(e));
        if (!d.vectors.empty()) {
            d.dim = d.vectors[0].size();
            dual = std::move(d);
        }
    }
    return make_fan(rays, std::move(cones), dual);
}

std::optional<FamilyParams> family_params_from_json(const Json& j) {
    if (!j.contains("family")) return std::nullopt;
    const Json& f = j.at("family");
    return FamilyParams{f.at("n").get<long>(), f.at("k").get<long>(), f.at("a").get<long>()};
}

Json divisor_to_json(const DivisorClass& d) {
    if (d.torsion.empty()) return json_vec(d.free);
    Json j;
    j["free"] = json_vec(d.free);
    j["torsion"] = json_vec(d.torsion);
    return j;
}

DivisorClass divisor_from_json(const Json& j) {
    if (j.is_array()) return DivisorClass{vec_from_json(j), {}};
    return DivisorClass{vec_from_json(j.at("free")), vec_from_json(j.at("torsion"))};
}

Json gale_pair_to_json(const GaleDualPair& pair) {
    Json j;
    j["primal_rank"] = pair.primal.dim;
    Json primal = Json::array();
    for (const auto& v : pair.primal.vectors) primal.push_back(json_vec(v));
    j["primal"] = primal;
    Json dual = Json::array();
    for (const auto& e : pair.dual_free.vectors) dual.push_back(json_vec(e));
    j["dual_free"] = dual;
    j["torsion_orders"] = json_vec(pair.torsion_orders);
    Json tors = Json::array();
    for (const auto& t : pair.dual_torsion) tors.push_back(json_vec(t));
    j["dual_torsion"] = tors;
    return j;
}

GaleDualPair gale_pair_from_json(const Json& j) {
    GaleDualPair pair;
    pair.primal.dim = j.at("primal_rank").get<std::size_t>();
    for (const auto& v : j.at("primal")) pair.primal.vectors.push_back(vec_from_json(v));
    for (const auto& e : j.at("dual_free")) pair.dual_free.vectors.push_back(vec_from_json(e));
    if (!pair.dual_free.vectors.empty()) pair.dual_free.dim = pair.dual_free.vectors[0].size();
    pair.torsion_orders = vec_from_json(j.at("torsion_orders"));
    for (const auto& t : j.at("dual_torsion")) pair.dual_torsion.push_back(vec_from_json(t));
    if (pair.dual_torsion.size() != pair.primal.size())
        throw ToricError("gale pair JSON: torsion component count mismatch");
    return pair;
}

Json collection_to_json(const LineBundleCollection& col) {
    Json j;
    j["kind"] = col.kind == LineBundleCollection::Kind::strong_exceptional ? "strong_exceptional"
                                                                           : "exceptional";
    j["length"] = col.bundles.size();
    Json bundles = Json::array();
    for (const auto& b : col.bundles) bundles.push_back(divisor_to_json(b));
    j["bundles"] = bundles;
    std::size_t pass = 0;
    for (const auto& c : col.certificate) pass += c.ok ? 1 : 0;
    j["pair_checks"] = {{"total", col.certificate.size()}, {"passed", pass}};
    return j;
}

std::vector<DivisorClass> bundles_from_json(const Json& j) {
    std::vector<DivisorClass> out;
    for (const auto& b : j) out.push_back(divisor_from_json(b));
    return out;
}

}  // namespace toric
