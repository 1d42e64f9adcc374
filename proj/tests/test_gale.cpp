#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "toric/gale.hpp"

using namespace toric;

namespace {

IntVectorCollection coll(std::size_t dim, std::vector<std::vector<int>> vecs) {
    IntVectorCollection c;
    c.dim = dim;
    for (auto& v : vecs) {
        IntVec w(v.begin(), v.end());
        c.vectors.push_back(std::move(w));
    }
    return c;
}

IntVectorCollection random_collection(std::mt19937_64& rng, std::size_t dim, std::size_t n) {
    std::uniform_int_distribution<int> entry(-5, 5);
    IntVectorCollection c;
    c.dim = dim;
    for (std::size_t i = 0; i < n; ++i) {
        IntVec v(dim);
        for (auto& x : v) x = entry(rng);
        c.vectors.push_back(std::move(v));
    }
    return c;
}

// Random collection generating the lattice (rejection sampling).
IntVectorCollection random_generating(std::mt19937_64& rng, std::size_t dim, std::size_t n) {
    while (true) {
        IntVectorCollection c = random_collection(rng, dim, n);
        if (columns_generate_lattice(c.as_columns())) return c;
    }
}

// Random collection spanning the real space (torsion allowed).
IntVectorCollection random_spanning(std::mt19937_64& rng, std::size_t dim, std::size_t n) {
    while (true) {
        IntVectorCollection c = random_collection(rng, dim, n);
        if (rank_of(c.as_columns()) == dim) return c;
    }
}

}  // namespace

TEST_CASE("gale dual of the P^1 rays") {
    GaleDualPair p = gale_dual(coll(1, {{1}, {-1}}));
    CHECK(p.dual_free.dim == 1);
    CHECK(p.dual_free.vectors == std::vector<IntVec>{{1}, {1}});
    CHECK(p.torsion_orders.empty());
}

TEST_CASE("gale dual of the P^2 rays") {
    GaleDualPair p = gale_dual(coll(2, {{1, 0}, {0, 1}, {-1, -1}}));
    CHECK(p.dual_free.vectors == std::vector<IntVec>{{1}, {1}, {1}});
    CHECK(p.torsion_orders.empty());
}

TEST_CASE("gale_dual rejects non-spanning input") {
    CHECK_THROWS_AS(gale_dual(coll(2, {{1, 0}, {2, 0}})), NotSpanningError);
}

TEST_CASE("contains_origin_interior") {
    CHECK(contains_origin_interior(coll(1, {{1}, {1}})));
    CHECK(!contains_origin_interior(coll(2, {{1, 0}, {-1, 0}})));
}

TEST_CASE("polytope predicates for P^2") {
    GaleDualPair p = gale_dual(coll(2, {{1, 0}, {0, 1}, {-1, -1}}));
    PolytopePredicates pred = polytope_predicates(p);
    CHECK(pred.is_vertex_set);
    CHECK(pred.is_simplicial);
    std::vector<std::vector<std::size_t>> want = {{0}, {1}, {2}};
    CHECK(pred.facet_complements == want);
}

TEST_CASE("antipodal pair in the projected dual kills simpliciality") {
    // bar(E_1) = -bar(E_2) after projecting mod K = -(3,3,0).
    IntVectorCollection dual =
        coll(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 1}, {1, 1, -1}});
    GaleDualPair p = make_pair_from_dual(dual);
    PolytopePredicates pred = polytope_predicates(p);
    CHECK(!pred.is_simplicial);
}

TEST_CASE("check_basis_duality on P^2 and an index-2 sublattice") {
    GaleDualPair p2 = gale_dual(coll(2, {{1, 0}, {0, 1}, {-1, -1}}));
    BasisDuality b = check_basis_duality(p2, {0, 1});
    CHECK(b.v_side);
    CHECK(b.e_side);

    GaleDualPair q = gale_dual(coll(1, {{2}, {-1}}));
    BasisDuality c = check_basis_duality(q, {0});
    CHECK(!c.v_side);
    CHECK(c.agree());
}

TEST_CASE("volume duality on P^1 and P^2") {
    GaleDualPair p1 = gale_dual(coll(1, {{1}, {-1}}));
    auto [lhs, rhs] = volume_duality_check(p1, {0, 1});
    CHECK(lhs == Rat(1));
    CHECK(rhs == Rat(1));

    GaleDualPair p2 = gale_dual(coll(2, {{1, 0}, {0, 1}, {-1, -1}}));
    std::vector<std::size_t> sigma = {2, 0, 1};
    auto [l2, r2] = volume_duality_check(p2, sigma);
    CHECK(l2 == r2);
}

TEST_CASE("round trip recovers generating collections up to unimodular equivalence") {
    std::mt19937_64 rng(314159);
    std::uniform_int_distribution<std::size_t> rankd(1, 4);
    for (int iter = 0; iter < 300; ++iter) {
        std::size_t r = rankd(rng);
        std::uniform_int_distribution<std::size_t> nd(r + 1, 8);
        IntVectorCollection v = random_generating(rng, r, nd(rng));
        GaleDualPair p = gale_dual(v);
        CHECK(p.torsion_orders.empty());
        GaleDualPair back = gale_dual(p.dual_free);
        CHECK(unimodular_equivalent(back.dual_free, v));
    }
}

TEST_CASE("relation transport both ways") {
    std::mt19937_64 rng(271828);
    std::uniform_int_distribution<std::size_t> rankd(1, 4);
    std::uniform_int_distribution<int> cf(-4, 4);
    for (int iter = 0; iter < 300; ++iter) {
        std::size_t r = rankd(rng);
        std::uniform_int_distribution<std::size_t> nd(r + 1, 8);
        IntVectorCollection v = random_spanning(rng, r, nd(rng));
        GaleDualPair p = gale_dual(v);
        const std::size_t n = v.size();

        // Relation on the v_i -> functional on the dual span hitting it.
        IntMatrix ker = integer_kernel_basis(v.as_columns());
        RatVec a(n, Rat(0));
        for (std::size_t c = 0; c < ker.cols(); ++c) {
            int w = cf(rng);
            for (std::size_t i = 0; i < n; ++i) a[i] += Rat(w) * Rat(ker.at(i, c));
        }
        auto phi = solve_rational(p.dual_free.as_columns().transposed(), a);
        CHECK(phi.has_value());

        // Functional on C -> relation on the E_i (free and torsion parts).
        IntVec f(r);
        for (auto& x : f) x = cf(rng);
        IntVec rel(n);
        for (std::size_t i = 0; i < n; ++i) {
            rel[i] = 0;
            for (std::size_t j = 0; j < r; ++j) rel[i] += f[j] * v.vectors[i][j];
        }
        IntVec sum_free(p.dual_free.dim, Int(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p.dual_free.dim; ++j)
                sum_free[j] += rel[i] * p.dual_free.vectors[i][j];
        for (const Int& s : sum_free) CHECK(s == 0);
        for (std::size_t t = 0; t < p.torsion_orders.size(); ++t) {
            Int s = 0;
            for (std::size_t i = 0; i < n; ++i) s += rel[i] * p.dual_torsion[i][t];
            CHECK(s % p.torsion_orders[t] == 0);
        }
    }
}

TEST_CASE("volume duality holds on random spanning collections") {
    std::mt19937_64 rng(161803);
    std::uniform_int_distribution<std::size_t> rankd(1, 3);
    for (int iter = 0; iter < 300; ++iter) {
        std::size_t r = rankd(rng);
        std::uniform_int_distribution<std::size_t> nd(r + 1, 7);
        IntVectorCollection v = random_spanning(rng, r, nd(rng));
        GaleDualPair p = gale_dual(v);
        std::vector<std::size_t> sigma(v.size());
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        auto [lhs, rhs] = volume_duality_check(p, sigma);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("basis duality two-sided agreement on random subsets") {
    std::mt19937_64 rng(577215);
    std::uniform_int_distribution<std::size_t> rankd(1, 3);
    for (int iter = 0; iter < 300; ++iter) {
        std::size_t r = rankd(rng);
        std::uniform_int_distribution<std::size_t> nd(r + 1, 7);
        IntVectorCollection v = random_spanning(rng, r, nd(rng));
        GaleDualPair p = gale_dual(v);
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(r);
        std::sort(idx.begin(), idx.end());
        BasisDuality b = check_basis_duality(p, idx);
        CHECK(b.agree());
    }
}

TEST_CASE("torsion order equals index of the generated sublattice") {
    std::mt19937_64 rng(141421);
    std::uniform_int_distribution<std::size_t> rankd(1, 3);
    int with_torsion = 0;
    for (int iter = 0; iter < 300; ++iter) {
        std::size_t r = rankd(rng);
        std::uniform_int_distribution<std::size_t> nd(r + 1, 6);
        IntVectorCollection v = random_spanning(rng, r, nd(rng));
        GaleDualPair p = gale_dual(v);
        SmithForm f = smith_normal_form(v.as_columns());
        Int index = 1;
        for (std::size_t i = 0; i < r; ++i) index *= f.d[i];
        CHECK(p.torsion_order() == index);
        if (index > 1) ++with_torsion;
    }
    CHECK(with_torsion > 3);  // the sampler does hit torsion cases
}
