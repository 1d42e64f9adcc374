#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "toric/stacky_fan.hpp"

using namespace toric;

namespace {

IntVectorCollection coll(std::size_t dim, std::vector<std::vector<int>> vecs) {
    IntVectorCollection c;
    c.dim = dim;
    for (auto& v : vecs) c.vectors.push_back(IntVec(v.begin(), v.end()));
    return c;
}

IntVectorCollection p2_dual() { return coll(1, {{1}, {1}, {1}}); }

IntVectorCollection p1p1p1_dual() {
    return coll(3, {{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
}

// Divisor classes of Y_{2,2,1} in the paper's Pic = Z^3 coordinates,
// grouped X_0(4), X_1(1), X_2(2), X_3(2), X_4(1).
IntVectorCollection y221_dual() {
    return coll(3, {{1, 0, 0},
                    {1, 0, 0},
                    {1, 0, 0},
                    {1, 0, 0},
                    {0, 1, 0},
                    {0, 1, 1},
                    {-1, 1, 1},
                    {0, 0, 1},
                    {-1, 0, 1},
                    {1, -1, 0}});
}

// Independent 2D oracle: the union of ray simplices is convex iff its area
// equals the area of the convex hull of the rays and the origin.
bool convex_union_2d(const StackyFan& fan) {
    Rat union_area = 0;
    for (const auto& cone : fan.max_cones) {
        const IntVec& a = fan.rays.vectors[cone[0]];
        const IntVec& b = fan.rays.vectors[cone[1]];
        union_area += Rat(abs(a[0] * b[1] - a[1] * b[0]), 2);
    }
    // Gift-wrap hull of rays + origin with exact arithmetic.
    std::vector<IntVec> pts = fan.rays.vectors;
    pts.push_back({Int(0), Int(0)});
    std::sort(pts.begin(), pts.end(), [](const IntVec& p, const IntVec& q) {
        return p[0] < q[0] || (p[0] == q[0] && p[1] < q[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto cross = [](const IntVec& o, const IntVec& a, const IntVec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<IntVec> hull;
    for (int pass = 0; pass < 2; ++pass) {
        std::size_t base = hull.size();
        for (const auto& p : pts) {
            while (hull.size() >= base + 2 &&
                   cross(hull[hull.size() - 2], hull[hull.size() - 1], p) <= 0)
                hull.pop_back();
            hull.push_back(p);
        }
        hull.pop_back();
        std::reverse(pts.begin(), pts.end());
    }
    Rat hull_area = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const IntVec& a = hull[i];
        const IntVec& b = hull[(i + 1) % hull.size()];
        hull_area += Rat(a[0] * b[1] - a[1] * b[0], 2);
    }
    return union_area == abs(hull_area);
}

std::vector<std::size_t> sizes_of(const Picard3Decomposition& d) {
    std::vector<std::size_t> s;
    for (const auto& x : d.X) s.push_back(x.size());
    return s;
}

bool cyclic_equal(std::vector<std::size_t> a, std::vector<std::size_t> b) {
    if (a.size() != b.size()) return false;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a == b) return true;
        std::rotate(a.begin(), a.begin() + 1, a.end());
    }
    std::reverse(a.begin(), a.end());
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a == b) return true;
        std::rotate(a.begin(), a.begin() + 1, a.end());
    }
    return false;
}

}  // namespace

TEST_CASE("build_fan_from_dual: P^2") {
    StackyFan fan = build_fan_from_dual(p2_dual());
    CHECK(fan.n_rays() == 3);
    CHECK(fan.lattice_rank == 2);
    CHECK(fan.max_cones.size() == 3);
    CHECK(check_fano(fan).fano);
    CHECK(rank_k0(fan) == 3);
}

TEST_CASE("build_fan_from_dual: Y_{2,2,1} has 10 rays in rank 7 and 36 maximal cones") {
    StackyFan fan = build_fan_from_dual(y221_dual());
    CHECK(fan.n_rays() == 10);
    CHECK(fan.lattice_rank == 7);
    // Facet-complement count 8+2+16+2+8 from the cyclic size products.
    CHECK(fan.max_cones.size() == 36);
    CHECK(check_fano(fan).fano);
    CHECK(rank_k0(fan) == 36);
}

TEST_CASE("build_fan_from_dual rejects an antipodal projected pair") {
    IntVectorCollection dual = coll(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 1}, {1, 1, -1}});
    CHECK_THROWS_AS(build_fan_from_dual(dual), NotFanoError);
}

TEST_CASE("fan-level gale round trip") {
    for (const auto& dual : {p2_dual(), p1p1p1_dual(), y221_dual()}) {
        StackyFan fan = build_fan_from_dual(dual);
        GaleDualPair re = gale_dual(fan.rays);
        CHECK(unimodular_equivalent(re.dual_free, fan.pic.dual_free));
    }
}

TEST_CASE("check_fano flags on the Hirzebruch surface F_3") {
    IntVectorCollection rays = coll(2, {{1, 0}, {0, 1}, {-1, 3}, {0, -1}});
    StackyFan fan = make_fan(rays, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    FanoFlags f = check_fano(fan);
    CHECK(!f.fano);
    CHECK(!f.nef_fano);
    CHECK(!convex_union_2d(fan));

    // P^1 x P^1 through the same oracle: convex and Fano.
    IntVectorCollection sq = coll(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    StackyFan fan2 = make_fan(sq, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(check_fano(fan2).fano);
    CHECK(convex_union_2d(fan2));
}

TEST_CASE("rank_k0 via dual determinants equals cone count and primal volumes on varieties") {
    for (const auto& dual : {p2_dual(), p1p1p1_dual(), y221_dual()}) {
        StackyFan fan = build_fan_from_dual(dual);
        Int by_dual = rank_k0(fan);
        CHECK(by_dual == Int(fan.max_cones.size()));
        Int by_primal = 0;
        for (const auto& cone : fan.max_cones) {
            std::vector<IntVec> vs;
            for (auto i : cone) vs.push_back(fan.rays.vectors[i]);
            by_primal += abs(determinant(IntMatrix::from_columns(vs)));
        }
        CHECK(by_dual == by_primal);
    }
}

TEST_CASE("minimal non-faces of P^2 and P^1 x P^1") {
    StackyFan p2 = build_fan_from_dual(p2_dual());
    auto prim = minimal_non_faces(p2);
    REQUIRE(prim.size() == 1);
    CHECK(prim[0] == std::vector<std::size_t>{0, 1, 2});

    IntVectorCollection sq = coll(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    StackyFan fan = make_fan(sq, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto prim2 = minimal_non_faces(fan);
    std::set<std::vector<std::size_t>> got(prim2.begin(), prim2.end());
    std::set<std::vector<std::size_t>> want = {{0, 2}, {1, 3}};
    CHECK(got == want);
}

TEST_CASE("decompose_picard3 on Y_{2,2,1}: t = 2 with sizes (4,1,2,2,1)") {
    StackyFan fan = build_fan_from_dual(y221_dual());
    Picard3Decomposition d = decompose_picard3(fan);
    CHECK(d.t == 2);
    CHECK(cyclic_equal(sizes_of(d), {4, 1, 2, 2, 1}));
    CHECK(d.strict_signs);

    // The classes are exactly the X_i groups of the construction.
    std::set<std::set<std::size_t>> got;
    for (const auto& x : d.X) got.insert(std::set<std::size_t>(x.begin(), x.end()));
    std::set<std::set<std::size_t>> want = {{0, 1, 2, 3}, {4}, {5, 6}, {7, 8}, {9}};
    CHECK(got == want);

    // Verbatim part-2 invariants: disjoint cover and sign patterns.
    std::vector<int> seen(fan.n_rays(), 0);
    for (const auto& x : d.X)
        for (auto i : x) ++seen[i];
    for (int s : seen) CHECK(s == 1);
    const std::size_t cnt = 2 * d.t + 1;
    IntVec mk = fan.minus_canonical();
    for (std::size_t i = 0; i < cnt; ++i) {
        Rat on_k = 0;
        for (std::size_t c = 0; c < 3; ++c) on_k += d.l[i][c] * Rat(mk[c]);
        CHECK(on_k == Rat(0));
        std::vector<bool> positive(fan.n_rays(), false);
        for (std::size_t j = 0; j <= d.t; ++j)
            for (auto r : d.X[(i + j) % cnt]) positive[r] = true;
        for (std::size_t j = 0; j < fan.n_rays(); ++j) {
            Rat v = 0;
            for (std::size_t c = 0; c < 3; ++c)
                v += d.l[i][c] * Rat(fan.pic.dual_free.vectors[j][c]);
            if (positive[j])
                CHECK(v > 0);
            else
                CHECK(v < 0);
        }
    }
}

TEST_CASE("decompose_picard3 on P^1 x P^1 x P^1: t = 1, three classes of size 2") {
    StackyFan fan = build_fan_from_dual(p1p1p1_dual());
    Picard3Decomposition d = decompose_picard3(fan);
    CHECK(d.t == 1);
    CHECK(sizes_of(d) == std::vector<std::size_t>{2, 2, 2});
    CHECK(nonzero_homology_index_sets(d, fan.n_rays()).size() == 8);
}

TEST_CASE("nonzero homology index set count is 4t + 4") {
    StackyFan fan = build_fan_from_dual(y221_dual());
    Picard3Decomposition d = decompose_picard3(fan);
    auto sets = nonzero_homology_index_sets(d, fan.n_rays());
    CHECK(sets.size() == 12);
    std::set<std::vector<std::size_t>> uniq(sets.begin(), sets.end());
    CHECK(uniq.size() == 12);
}

TEST_CASE("perturbed Y_{2,2,1} cone set is rejected as not projective") {
    StackyFan fan = build_fan_from_dual(y221_dual());
    // Duplicate one maximal cone in place of another; the face structure no
    // longer matches any cyclic decomposition.
    auto cones = fan.max_cones;
    cones[0] = cones[1];
    StackyFan broken = make_fan(fan.rays, cones, std::nullopt, false);
    CHECK_THROWS_AS(decompose_picard3(broken), NotProjectiveError);
}

TEST_CASE("decompose_picard3 rejects wrong Picard rank") {
    StackyFan p2 = build_fan_from_dual(p2_dual());
    CHECK_THROWS_AS(decompose_picard3(p2), NotPicardThreeError);
}
