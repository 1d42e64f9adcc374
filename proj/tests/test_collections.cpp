#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "toric/collections.hpp"

using namespace toric;

namespace {

IntVectorCollection coll(std::size_t dim, std::vector<std::vector<int>> vecs) {
    IntVectorCollection c;
    c.dim = dim;
    for (auto& v : vecs) c.vectors.push_back(IntVec(v.begin(), v.end()));
    return c;
}

StackyFan p1_fan() { return build_fan_from_dual(coll(1, {{1}, {1}})); }
StackyFan p2_fan() { return build_fan_from_dual(coll(1, {{1}, {1}, {1}})); }
StackyFan p1p1_fan() { return build_fan_from_dual(coll(2, {{1, 0}, {1, 0}, {0, 1}, {0, 1}})); }
StackyFan p1p1p1_fan() {
    return build_fan_from_dual(
        coll(3, {{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}}));
}

std::vector<DivisorClass> classes(CohomologyEngine& eng, std::vector<std::vector<int>> frees) {
    std::vector<DivisorClass> out;
    for (auto& f : frees) out.push_back(eng.divisor_class(IntVec(f.begin(), f.end())));
    return out;
}

}  // namespace

TEST_CASE("is_exceptional on P^1: the classical pair and its reverse") {
    CohomologyEngine eng(p1_fan());
    CHECK(is_exceptional(eng, classes(eng, {{0}, {1}})).ok);
    ExceptionalVerdict bad = is_exceptional(eng, classes(eng, {{1}, {0}}));
    CHECK(!bad.ok);
    CHECK(bad.bad_i == 0);
    CHECK(bad.bad_j == 1);
}

TEST_CASE("is_exceptional on P^2: the triple extends to no fourth bundle") {
    CohomologyEngine eng(p2_fan());
    CHECK(is_exceptional(eng, classes(eng, {{0}, {1}, {2}})).ok);
    CHECK(!is_exceptional(eng, classes(eng, {{0}, {1}, {2}, {3}})).ok);
}

TEST_CASE("windowed search on P^2 is exact with length 3") {
    CohomologyEngine eng(p2_fan());
    SearchWindow w{{{-3, 3}}};
    SearchResult r = max_exceptional_search(eng, w, 1u << 22);
    CHECK(r.exact);
    CHECK(r.best.size() == 3);
    // stability under window enlargement
    SearchWindow w2{{{-4, 4}}};
    SearchResult r2 = max_exceptional_search(eng, w2, 1u << 22);
    CHECK(r2.exact);
    CHECK(r2.best.size() == 3);
}

TEST_CASE("windowed search on P^1 x P^1 finds the classical length-4 collection") {
    CohomologyEngine eng(p1p1_fan());
    SearchWindow w{{{-2, 2}, {-2, 2}}};
    SearchResult r = max_exceptional_search(eng, w, 1u << 24);
    CHECK(r.exact);
    CHECK(r.best.size() == 4);
    SearchWindow w2{{{-3, 3}, {-2, 2}}};
    SearchResult r2 = max_exceptional_search(eng, w2, 1u << 24);
    CHECK(r2.exact);
    CHECK(r2.best.size() == 4);
}

TEST_CASE("search on a small Y_{2,2,1} window emits only verified collections") {
    FamilyInstance inst = build_family({2, 2, 1});
    CohomologyEngine eng(*inst.fan);
    SearchWindow w{{{-3, 3}, {-2, 2}, {-3, 3}}};
    SearchResult r = max_exceptional_search(eng, w, 30000, inst.params, 2);
    CHECK(r.best.size() >= 8);  // greedy floor; exactness not claimed
    CHECK(r.best.size() <= 36);
    // slab bounds from the proof hold on the output
    Int zmin = r.best.bundles.front().free[2], zmax = zmin;
    std::map<Int, int> per_z;
    for (const auto& b : r.best.bundles) {
        zmin = std::min(zmin, b.free[2]);
        zmax = std::max(zmax, b.free[2]);
        ++per_z[b.free[2]];
    }
    CHECK(zmax - zmin <= Int(2 + 2 + 2 + 1));
    for (auto& [z, cnt] : per_z) CHECK(cnt <= (2 + 2 + 1) * (2 + 3));
}

TEST_CASE("strong collection on P^1 x P^1 x P^1 reaches three quarters of rk K_0") {
    CohomologyEngine eng(p1p1p1_fan());
    StrongCollectionResult r = build_strong_collection(eng, 2);
    CHECK(r.rk_k0 == 8);
    CHECK(r.target == 6);
    CHECK(r.collection.size() >= 6);
    CHECK(r.vol_p >= 6 * Rat(r.rk_k0));
    CHECK(r.collection.kind == LineBundleCollection::Kind::strong_exceptional);
    for (const auto& pc : r.collection.certificate) CHECK(pc.ok);
}

TEST_CASE("strong collection on Y_{2,2,1} reaches ceil(3/4 * 36) = 27") {
    FamilyInstance inst = build_family({2, 2, 1});
    CohomologyEngine eng(*inst.fan);
    StrongCollectionResult r = build_strong_collection(eng, 2);
    CHECK(r.rk_k0 == 36);
    CHECK(r.target == 27);
    CHECK(r.collection.size() >= 27);
    CHECK(r.vol_p >= Rat(216));
    // each member of the certificate is a verified vanishing
    for (const auto& pc : r.collection.certificate) CHECK(pc.ok);
    // the l-values are ascending along the order
    for (std::size_t i = 0; i + 1 < r.collection.size(); ++i) {
        Rat a = 0, b = 0;
        for (std::size_t c = 0; c < 3; ++c) {
            a += r.functional[c] * Rat(r.collection.bundles[i].free[c]);
            b += r.functional[c] * Rat(r.collection.bundles[i + 1].free[c]);
        }
        CHECK(a <= b);
    }
}

TEST_CASE("strong collection rejects non nef-Fano input") {
    IntVectorCollection rays = coll(2, {{1, 0}, {0, 1}, {-1, 3}, {0, -1}});
    StackyFan f3 = make_fan(rays, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CohomologyEngine eng(std::move(f3));
    CHECK_THROWS_AS(build_strong_collection(eng), ToricError);
}

TEST_CASE("zonotope area identity: generator pairs vs boundary shoelace") {
    for (StackyFan fan : {p1p1p1_fan(), build_fan_from_dual(coll(3, {{1, 0, 0},
                                                                     {1, 0, 0},
                                                                     {1, 0, 0},
                                                                     {1, 0, 0},
                                                                     {0, 1, 0},
                                                                     {0, 1, 1},
                                                                     {-1, 1, 1},
                                                                     {0, 0, 1},
                                                                     {-1, 0, 1},
                                                                     {1, -1, 0}}))}) {
        std::vector<IntVec> gens = project_mod_canonical(fan.pic.dual_free);
        Rat pair_sum = 0;
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t j = i + 1; j < gens.size(); ++j)
                pair_sum += Rat(abs(gens[i][0] * gens[j][1] - gens[i][1] * gens[j][0]));
        // Boundary walk: edges are the +-generators sorted by angle.
        std::vector<IntVec> edges;
        for (const auto& g : gens) {
            if (g[0] == 0 && g[1] == 0) continue;
            edges.push_back(g);
            edges.push_back({-g[0], -g[1]});
        }
        std::sort(edges.begin(), edges.end(), [](const IntVec& a, const IntVec& b) {
            auto half = [](const IntVec& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
            int ha = half(a), hb = half(b);
            if (ha != hb) return ha < hb;
            return a[0] * b[1] - a[1] * b[0] > 0;
        });
        std::vector<IntVec> poly;
        IntVec cur = {Int(0), Int(0)};
        for (const auto& e : edges) {
            poly.push_back(cur);
            cur = {cur[0] + e[0], cur[1] + e[1]};
        }
        Rat shoelace = 0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const IntVec& a = poly[i];
            const IntVec& b = poly[(i + 1) % poly.size()];
            shoelace += Rat(a[0] * b[1] - a[1] * b[0]);
        }
        // Doubling: the walk uses each generator once per sign, tracing the
        // boundary of the full zonotope; shoelace is twice the area.
        CHECK(abs(shoelace) / 2 == pair_sum);
    }
}

TEST_CASE("sublemma: t = 1 is an equality") {
    WedgeConfig c;
    c.t = 1;
    c.g = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(-1)}};
    c.f = {{Rat(1), Rat(1)}, {Rat(-1), Rat(1)}, {Rat(1), Rat(-1)}};
    REQUIRE(!validate_wedge_config(c).has_value());
    SublemmaResult r = sublemma_check(c);
    CHECK(r.holds);
    CHECK(r.lhs == r.rhs);
}

TEST_CASE("sublemma: degenerate zero vector still holds") {
    WedgeConfig c;
    c.t = 2;
    // g_1 = 0; remaining vectors sum to zero and wind anticlockwise.
    c.g = {{Rat(1), Rat(0)}, {Rat(0), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(0)},
           {Rat(0), Rat(-1)}};
    c.f = {{Rat(1), Rat(1)}, {Rat(-1), Rat(1)}, {Rat(-1), Rat(0)}, {Rat(0), Rat(-1)},
           {Rat(1), Rat(-1)}};
    if (auto bad = validate_wedge_config(c)) {
        INFO(*bad);
        CHECK(false);
    } else {
        CHECK(sublemma_check(c).holds);
    }
}

TEST_CASE("sublemma rejects invalid configs with the failed hypothesis") {
    WedgeConfig c;
    c.t = 1;
    c.g = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(0)}};  // sum != 0
    c.f = {{Rat(1), Rat(1)}, {Rat(-1), Rat(1)}, {Rat(-1), Rat(-1)}};
    auto bad = validate_wedge_config(c);
    REQUIRE(bad.has_value());
    CHECK(bad->find("sum") != std::string::npos);
    CHECK_THROWS_AS(sublemma_check(c), PrecondViolatedError);
}

TEST_CASE("random valid wedge configs satisfy the inequality") {
    std::mt19937_64 rng(123456);
    for (std::size_t t : {1, 2, 3}) {
        for (int iter = 0; iter < 100; ++iter) {
            WedgeConfig c = random_wedge_config(t, rng);
            SublemmaResult r = sublemma_check(c);
            CHECK(r.holds);
            if (t == 1) CHECK(r.lhs == r.rhs);
        }
    }
}
