#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "toric/json_io.hpp"

using namespace toric;

namespace {

IntVectorCollection coll(std::size_t dim, std::vector<std::vector<int>> vecs) {
    IntVectorCollection c;
    c.dim = dim;
    for (auto& v : vecs) c.vectors.push_back(IntVec(v.begin(), v.end()));
    return c;
}

}  // namespace

TEST_CASE("exact integers and rationals through JSON") {
    CHECK(json_int(Int(42)) == Json(42));
    Int big("123456789012345678901234567890");
    CHECK(json_int(big).is_string());
    CHECK(int_from_json(json_int(big)) == big);
    CHECK(json_rat(Rat(1, 8)) == Json("1/8"));
    CHECK(rat_from_json(json_rat(Rat(-7, 3))) == Rat(-7, 3));
    CHECK(json_rat(Rat(5)) == Json(5));
}

TEST_CASE("fan JSON round trip preserves rays, cones and Pic coordinates") {
    FamilyInstance inst = build_family({2, 2, 1});
    Json j = fan_to_json(*inst.fan, inst.params);
    StackyFan back = fan_from_json(j);
    CHECK(back.rays.vectors == inst.fan->rays.vectors);
    CHECK(back.max_cones == inst.fan->max_cones);
    CHECK(back.pic.dual_free.vectors == inst.fan->pic.dual_free.vectors);
    auto fam = family_params_from_json(j);
    REQUIRE(fam.has_value());
    CHECK(fam->n == 2);
    CHECK(fam->k == 2);
    CHECK(fam->a == 1);
}

TEST_CASE("fan JSON rejects inconsistent Pic override") {
    StackyFan p2 = build_fan_from_dual(coll(1, {{1}, {1}, {1}}));
    Json j = fan_to_json(p2);
    j["pic_dual"] = Json::array({Json::array({2}), Json::array({2}), Json::array({2})});
    CHECK_THROWS_AS(fan_from_json(j), ToricError);
}

TEST_CASE("matrix and divisor serialization") {
    IntMatrix m = IntMatrix::from_rows({{1, 2}, {3, 4}});
    CHECK(matrix_from_json(json_matrix(m)) == m);
    DivisorClass d{{Int(1), Int(-2), Int(3)}, {}};
    CHECK(divisor_from_json(divisor_to_json(d)) == d);
    DivisorClass dt{{Int(1)}, {Int(1)}};
    CHECK(divisor_from_json(divisor_to_json(dt)) == dt);
}

TEST_CASE("gale pair serialization round trip, torsion included") {
    GaleDualPair pair = gale_dual(coll(1, {{2}, {2}, {-2}}));
    REQUIRE(!pair.torsion_orders.empty());
    GaleDualPair back = gale_pair_from_json(gale_pair_to_json(pair));
    CHECK(back.primal.vectors == pair.primal.vectors);
    CHECK(back.dual_free.vectors == pair.dual_free.vectors);
    CHECK(back.torsion_orders == pair.torsion_orders);
    CHECK(back.dual_torsion == pair.dual_torsion);
}

TEST_CASE("collection serialization carries order and certificate summary") {
    FamilyInstance inst = build_family({2, 2, 1});
    CohomologyEngine eng(*inst.fan);
    std::vector<DivisorClass> bundles = {eng.divisor_class({Int(0), Int(0), Int(0)}),
                                         eng.divisor_class({Int(1), Int(0), Int(0)})};
    LineBundleCollection col =
        certify_collection(eng, bundles, LineBundleCollection::Kind::exceptional);
    Json j = collection_to_json(col);
    CHECK(j.at("length") == 2);
    CHECK(j.at("kind") == "exceptional");
    auto back = bundles_from_json(j.at("bundles"));
    CHECK(back.size() == 2);
    CHECK(back[0] == col.bundles[0]);
    CHECK(back[1] == col.bundles[1]);
}
