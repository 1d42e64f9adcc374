#include "toric/fano_family.hpp"

#include <algorithm>
#include <set>

namespace toric {

const char* family_set_name(FamilySet s) {
    switch (s) {
        case FamilySet::Keff: return "K_eff";
        case FamilySet::Kneg: return "K_neg";
        case FamilySet::K0: return "K_0";
        case FamilySet::K1: return "K_1";
        case FamilySet::K2: return "K_2";
        case FamilySet::K3: return "K_3";
        case FamilySet::K4: return "K_4";
        case FamilySet::K0h: return "K_0^";
        case FamilySet::K1h: return "K_1^";
        case FamilySet::K2h: return "K_2^";
        case FamilySet::K3h: return "K_3^";
        case FamilySet::K4h: return "K_4^";
    }
    return "?";
}

IntVec FamilyInstance::minus_k() const {
    return {Int(params.n + 1), Int(params.k), Int(params.k + params.n)};
}

IntVec FamilyInstance::k_class() const {
    return {Int(-(params.n + 1)), Int(-params.k), Int(-(params.k + params.n))};
}

namespace {

IntVec e3(long x, long y, long z) { return {Int(x), Int(y), Int(z)}; }

// 0-based relation index of the paper's basis vector e_i (1-based).
std::size_t row_of_e(long i) { return std::size_t(i - 1); }

struct RelationBasis {
    IntMatrix R;  // M x N, rows in the printed order
};

RelationBasis printed_relations(const FamilyParams& p, std::size_t N) {
    const long n = p.n, k = p.k, a = p.a, m = n + 2 * a;
    const std::size_t M = std::size_t(m + k + n - 1);
    // divisor indices: X_0 = 0..m-1, X_1 = m, X_2 = m+1..m+k, X_3 = ..., X_4 last
    auto X0 = [&](long j) { return std::size_t(j - 1); };           // E_{0,j}
    std::size_t X1 = std::size_t(m);                                // E_{1,1}
    auto X2 = [&](long j) { return std::size_t(m + 1 + (j - 1)); }; // E_{2,j}
    auto X3 = [&](long j) { return std::size_t(m + 1 + k + (j - 1)); };
    std::size_t X4 = std::size_t(m + 1 + k + n);                    // E_{4,1}

    RelationBasis rb;
    rb.R = IntMatrix(M, N);
    std::size_t row = 0;
    // E_{0,1} - E_{1,1} - E_{4,1}
    rb.R.at(row, X0(1)) = 1;
    rb.R.at(row, X1) = -1;
    rb.R.at(row, X4) = -1;
    ++row;
    // E_{0,j} - E_{0,j+1}, 1 <= j <= m-1
    for (long j = 1; j <= m - 1; ++j, ++row) {
        rb.R.at(row, X0(j)) = 1;
        rb.R.at(row, X0(j + 1)) = -1;
    }
    // E_{1,1} - E_{2,k} + E_{3,n}
    rb.R.at(row, X1) = 1;
    rb.R.at(row, X2(k)) = -1;
    rb.R.at(row, X3(n)) = 1;
    ++row;
    // E_{2,j} - E_{2,j+1}, 1 <= j <= k-2
    for (long j = 1; j <= k - 2; ++j, ++row) {
        rb.R.at(row, X2(j)) = 1;
        rb.R.at(row, X2(j + 1)) = -1;
    }
    // E_{2,k-1} - E_{2,k} - E_{3,n-1} + E_{3,n}
    rb.R.at(row, X2(k - 1)) += 1;
    rb.R.at(row, X2(k)) += -1;
    rb.R.at(row, X3(n - 1)) += -1;
    rb.R.at(row, X3(n)) += 1;
    ++row;
    // E_{3,j} - E_{3,j+1}, 1 <= j <= n-2
    for (long j = 1; j <= n - 2; ++j, ++row) {
        rb.R.at(row, X3(j)) = 1;
        rb.R.at(row, X3(j + 1)) = -1;
    }
    // a E_{2,k-1} - (a+1) E_{3,n-1} + E_{3,n} + a E_{4,1}
    rb.R.at(row, X2(k - 1)) += a;
    rb.R.at(row, X3(n - 1)) += -(a + 1);
    rb.R.at(row, X3(n)) += 1;
    rb.R.at(row, X4) += a;
    ++row;
    if (row != M) throw InternalError("printed_relations: relation count mismatch");
    return rb;
}

// The ray vectors exactly as printed in the construction section,
// including the k >= 3 / n >= 3 case splits; used only to compare against
// the relation-derived rays.
std::vector<IntVec> printed_ray_formulas(const FamilyParams& p) {
    const long n = p.n, k = p.k, a = p.a, m = n + 2 * a;
    const long M = m + k + n - 1;
    auto unit = [&](long i, long coef = 1) {
        IntVec v(std::size_t(M), Int(0));
        v[row_of_e(i)] = coef;
        return v;
    };
    auto add = [&](IntVec v, long i, long coef) {
        v[row_of_e(i)] += coef;
        return v;
    };
    std::vector<IntVec> vs;
    // X_0
    vs.push_back(add(unit(1), 2, 1));                       // v_{0,1} = e_1 + e_2
    for (long i = 2; i <= m - 1; ++i) vs.push_back(add(unit(i + 1), i, -1));
    vs.push_back(unit(m, -1));                              // v_{0,m} = -e_m
    // X_1
    vs.push_back(add(unit(m + 1), 1, -1));                  // v_{1,1}
    // X_2
    if (k >= 3) vs.push_back(unit(m + 2));                  // v_{2,1}
    for (long i = 2; i <= k - 2; ++i) vs.push_back(add(unit(m + i + 1), m + i, -1));
    vs.push_back(add(add(unit(m + k), M, a), m + k - 1, -1));  // v_{2,k-1}
    vs.push_back(add(unit(m + 1, -1), m + k, -1));             // v_{2,k}
    // X_3
    if (n >= 3) vs.push_back(unit(m + k + 1));              // v_{3,1}
    for (long i = 2; i <= n - 2; ++i) vs.push_back(add(unit(m + k + i), m + k + i - 1, -1));
    if (n >= 3)
        vs.push_back(add(add(unit(m + k, -1), M - 1, -1), M, -(a + 1)));  // v_{3,n-1}
    else
        vs.push_back(add(unit(m + k, -1), M, -(a + 1)));
    vs.push_back(add(add(unit(m + 1), m + k, 1), M, 1));    // v_{3,n}
    // X_4
    vs.push_back(add(unit(M, a), 1, -1));                   // v_{4,1}
    return vs;
}

std::string ray_label(const FamilyParams& p, std::size_t idx) {
    const long m = p.n + 2 * p.a;
    long i = long(idx);
    if (i < m) return "v[0," + std::to_string(i + 1) + "]";
    if (i == m) return "v[1,1]";
    if (i < m + 1 + p.k) return "v[2," + std::to_string(i - m) + "]";
    if (i < m + 1 + p.k + p.n) return "v[3," + std::to_string(i - m - p.k) + "]";
    return "v[4,1]";
}

}  // namespace

FamilyInstance build_family(const FamilyParams& p, bool with_fan) {
    if (p.n < 2 || p.k < 2 || p.a < 1)
        throw BadParamsError("build_family: need n >= 2, k >= 2, a >= 1");
    const long n = p.n, k = p.k, a = p.a, m = n + 2 * a;

    FamilyInstance inst;
    inst.params = p;
    inst.divisors.dim = 3;
    auto push_group = [&](std::size_t count, IntVec v) {
        std::vector<std::size_t> g;
        for (std::size_t c = 0; c < count; ++c) {
            g.push_back(inst.divisors.vectors.size());
            inst.divisors.vectors.push_back(v);
        }
        return g;
    };
    std::vector<std::size_t> g0 = push_group(std::size_t(m), e3(1, 0, 0));
    std::vector<std::size_t> g1 = push_group(1, e3(0, 1, 0));
    std::vector<std::size_t> g2 = push_group(std::size_t(k - 1), e3(0, 1, 1));
    {
        auto last = push_group(1, e3(-a, 1, 1));
        g2.insert(g2.end(), last.begin(), last.end());
    }
    std::vector<std::size_t> g3 = push_group(std::size_t(n - 1), e3(0, 0, 1));
    {
        auto last = push_group(1, e3(-a, 0, 1));
        g3.insert(g3.end(), last.begin(), last.end());
    }
    std::vector<std::size_t> g4 = push_group(1, e3(1, -1, 0));
    inst.groups = {g0, g1, g2, g3, g4};

    const std::size_t N = inst.divisors.size();
    RelationBasis rb = printed_relations(p, N);
    // Every printed row must be an actual relation on the divisor vectors.
    {
        IntMatrix ET = inst.divisors.as_columns().transposed();  // N x 3
        IntMatrix prod = rb.R * ET;                              // M x 3
        for (std::size_t i = 0; i < prod.rows(); ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (prod.at(i, j) != 0)
                    throw InternalError("build_family: printed relation fails on the divisors");
    }
    inst.rays.dim = rb.R.rows();
    for (std::size_t j = 0; j < N; ++j) inst.rays.vectors.push_back(rb.R.column(j));
    for (std::size_t j = 0; j < N; ++j) inst.rays.labels.push_back(ray_label(p, j));

    // Compare with the ray vectors as printed; duality is the arbiter, so
    // divergences are recorded rather than adopted.
    std::vector<IntVec> printed = printed_ray_formulas(p);
    if (printed.size() != N) throw InternalError("build_family: printed ray count mismatch");
    for (std::size_t j = 0; j < N; ++j)
        if (printed[j] != inst.rays.vectors[j])
            inst.printed_discrepancies.push_back(
                ray_label(p, j) + " as printed differs from the relation-basis column");

    if (with_fan) {
        // Facet structure from the dual predicates, Pic kept in the paper's
        // Z^3 coordinates and rays as constructed above.
        GaleDualPair pair;
        pair.primal = inst.rays;
        pair.dual_free = inst.divisors;
        pair.dual_torsion.assign(N, IntVec{});
        PolytopePredicates pred = polytope_predicates(pair);
        if (!pred.is_vertex_set || !pred.is_simplicial)
            throw NotFanoError("build_family: family dual fails the vertex/simplicial predicates");
        std::vector<std::vector<std::size_t>> cones;
        std::vector<bool> inside(N);
        for (const auto& comp : pred.facet_complements) {
            inside.assign(N, true);
            for (auto i : comp) inside[i] = false;
            std::vector<std::size_t> cone;
            for (std::size_t i = 0; i < N; ++i)
                if (inside[i]) cone.push_back(i);
            cones.push_back(std::move(cone));
        }
        inst.fan = make_fan(inst.rays, std::move(cones), inst.divisors);
        if (!check_fano(*inst.fan).fano)
            throw NotFanoError("build_family: constructed fan is not Fano");
    }
    return inst;
}

namespace {

Int imax(const Int& a, const Int& b) { return a > b ? a : b; }
Int imin(const Int& a, const Int& b) { return a < b ? a : b; }

bool member_printed(const FamilyParams& p, FamilySet s, const Int& x, const Int& y, const Int& z) {
    const Int n = p.n, k = p.k, a = p.a;
    switch (s) {
        case FamilySet::Keff:
            return z >= 0 && x >= -a * z + imax(-y, Int(0));
        case FamilySet::K1h:
            return y >= 1 && z >= 0 && x <= -n - 2 * a - 1;
        case FamilySet::K2h:
            return y <= z - 1 && z >= 0 && x <= -n - 2 * a - 1 + z - y;
        case FamilySet::K0:
            return y <= imin(-k - 1, z - 1) && x <= -a * (y + k) - n - 2 * a;
        case FamilySet::K0h:
            return y >= imax(Int(1), z + n + 1) && x >= -a * y + 2 * a - 1;
        case FamilySet::K3:
            return y >= imax(z + n + 1, Int(1)) && x <= a * (y - z - n - 1) - n - a - 1;
        case FamilySet::K3h:
            return y <= imin(z - 1, -k - 1) && x >= a * (y - z) + 2 * a;
        case FamilySet::K4:
            return z >= 0 && x <= -n - 2 * a - 1 + imin(Int(0), z - y);
        default:
            throw InternalError("member_printed: set has no printed form");
    }
}

}  // namespace

bool closed_form_member(const FamilyParams& p, FamilySet s, const IntVec& xyz) {
    const Int& x = xyz[0];
    const Int& y = xyz[1];
    const Int& z = xyz[2];
    // K = (-(n+1), -k, -(k+n)); the remaining four sets are reflections
    // K_i = K - hat(K_i), K_neg = K - K_eff.
    Int kx = -(Int(p.n) + 1) - x, ky = -Int(p.k) - y, kz = -(Int(p.k) + Int(p.n)) - z;
    switch (s) {
        case FamilySet::Keff:
        case FamilySet::K1h:
        case FamilySet::K2h:
        case FamilySet::K0:
        case FamilySet::K0h:
        case FamilySet::K3:
        case FamilySet::K3h:
        case FamilySet::K4:
            return member_printed(p, s, x, y, z);
        case FamilySet::Kneg:
            return member_printed(p, FamilySet::Keff, kx, ky, kz);
        case FamilySet::K1:
            return member_printed(p, FamilySet::K1h, kx, ky, kz);
        case FamilySet::K2:
            return member_printed(p, FamilySet::K2h, kx, ky, kz);
        case FamilySet::K4h:
            return member_printed(p, FamilySet::K4, kx, ky, kz);
    }
    return false;
}

bool closed_form_member_any(const FamilyParams& p, const IntVec& xyz) {
    for (FamilySet s : kAllFamilySets)
        if (closed_form_member(p, s, xyz)) return true;
    return false;
}

std::vector<std::size_t> family_index_set(const FamilyInstance& inst, FamilySet s) {
    auto collect = [&](std::initializer_list<std::size_t> groups) {
        std::vector<std::size_t> I;
        for (auto g : groups)
            for (auto i : inst.groups[g]) I.push_back(i);
        std::sort(I.begin(), I.end());
        return I;
    };
    switch (s) {
        case FamilySet::Keff: return {};
        case FamilySet::Kneg: return collect({0, 1, 2, 3, 4});
        case FamilySet::K0: return collect({0, 1, 2});
        case FamilySet::K1: return collect({1, 2, 3});
        case FamilySet::K2: return collect({2, 3, 4});
        case FamilySet::K3: return collect({3, 4, 0});
        case FamilySet::K4: return collect({4, 0, 1});
        case FamilySet::K0h: return collect({3, 4});
        case FamilySet::K1h: return collect({4, 0});
        case FamilySet::K2h: return collect({0, 1});
        case FamilySet::K3h: return collect({1, 2});
        case FamilySet::K4h: return collect({2, 3});
    }
    return {};
}

Int rank_k0_sum(const FamilyParams& p) {
    std::array<Int, 5> size = {Int(p.n + 2 * p.a), Int(1), Int(p.k), Int(p.n), Int(1)};
    Int total = 0;
    for (std::size_t i = 0; i < 5; ++i)
        total += size[i] * size[(i + 1) % 5] * size[(i + 3) % 5];
    return total;
}

Int rank_k0_closed_form(const FamilyParams& p) {
    Int n = p.n, k = p.k, a = p.a;
    return n * n * k + 2 * a * k * n + n * n + n * k + 2 * a * n + 2 * a * k + k + n;
}

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

ValidationReport validate_construction(const FamilyInstance& inst) {
    const FamilyParams& p = inst.params;
    const long n = p.n, k = p.k, a = p.a;
    const std::size_t N = inst.n_divisors();
    ValidationReport rep;
    auto add = [&](std::string name, bool pass, std::string detail = "") {
        rep.checks.push_back({std::move(name), pass, std::move(detail)});
    };

    // Group sizes and the anticanonical class.
    {
        std::array<std::size_t, 5> want = {std::size_t(n + 2 * a), 1, std::size_t(k),
                                           std::size_t(n), 1};
        bool ok = true;
        for (std::size_t i = 0; i < 5; ++i) ok = ok && inst.groups[i].size() == want[i];
        add("group_sizes", ok);
        IntVec sum(3, Int(0));
        for (const auto& e : inst.divisors.vectors)
            for (std::size_t c = 0; c < 3; ++c) sum[c] += e[c];
        add("anticanonical_class", sum == inst.minus_k());
    }

    // Condition 1: a functional positive on every divisor exists, and the
    // explicit witness x + y/2 + (a+1) z works.
    {
        add("condition1_lp", contains_origin_interior(inst.divisors));
        RatVec w = {Rat(1), Rat(1, 2), Rat(a + 1)};
        bool ok = true;
        for (const auto& e : inst.divisors.vectors) {
            Rat v = 0;
            for (std::size_t c = 0; c < 3; ++c) v += w[c] * Rat(e[c]);
            ok = ok && v > 0;
        }
        add("condition1_explicit_witness", ok);
    }

    // Condition 2: the printed pullback functionals have the cyclic sign
    // pattern and annihilate K.
    {
        auto pi = [&](const IntVec& e) {
            return std::pair<Int, Int>{Int(k + n) * e[0] - Int(n + 1) * e[2],
                                       Int(k + n) * e[1] - Int(k) * e[2]};
        };
        const Int c = Int(k) * a + Int(n) * a + n + 2;
        std::array<std::array<Int, 2>, 5> f = {{{Int(2 * n), Int(2 * n + 1)},
                                                {Int(-1), c},
                                                {Int(-2), Int(-1)},
                                                {Int(-1), -c},
                                                {Int(k), Int(-1)}}};
        bool ok = true;
        std::string detail;
        {
            auto [ku, kv] = pi(inst.k_class());
            if (ku != 0 || kv != 0) {
                ok = false;
                detail = "projection does not annihilate K";
            }
        }
        for (std::size_t i = 0; i < 5 && ok; ++i) {
            std::vector<bool> positive(N, false);
            for (auto idx : inst.groups[i]) positive[idx] = true;
            for (auto idx : inst.groups[(i + 1) % 5]) positive[idx] = true;
            for (std::size_t j = 0; j < N && ok; ++j) {
                auto [u, v] = pi(inst.divisors.vectors[j]);
                Int val = f[i][0] * u + f[i][1] * v;
                if (positive[j] ? val <= 0 : val >= 0) {
                    ok = false;
                    detail = "f_" + std::to_string(i) + " has wrong sign on divisor " +
                             std::to_string(j);
                }
            }
        }
        add("condition2_pullbacks", ok, detail);
    }

    // Condition 3: every triple (p, q, r) with p in X_i, q in X_{i+1},
    // r in X_{i+3} is a basis of Z^3.
    {
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; i < 5 && ok; ++i)
            for (auto pi_ : inst.groups[i])
                for (auto qi : inst.groups[(i + 1) % 5])
                    for (auto ri : inst.groups[(i + 3) % 5]) {
                        Int d = determinant(IntMatrix::from_columns({inst.divisors.vectors[pi_],
                                                                     inst.divisors.vectors[qi],
                                                                     inst.divisors.vectors[ri]}));
                        if (abs(d) != 1) {
                            ok = false;
                            detail = "triple (" + std::to_string(pi_) + "," + std::to_string(qi) +
                                     "," + std::to_string(ri) + ") has determinant " + d.str();
                            goto done3;
                        }
                    }
    done3:
        add("condition3_determinants", ok, detail);
    }

    // Gale duality of the constructed rays.
    {
        bool ok = false;
        std::string detail;
        try {
            GaleDualPair dualized = gale_dual(inst.rays);
            ok = dualized.torsion_orders.empty() &&
                 unimodular_equivalent(dualized.dual_free, inst.divisors);
        } catch (const ToricError& e) {
            detail = e.what();
        }
        add("gale_duality", ok, detail);
    }

    // Fan-level checks when the fan was built.
    if (inst.fan) {
        FanoFlags flags = check_fano(*inst.fan);
        add("fan_fano", flags.fano);
        add("fan_max_cone_count", Int(inst.fan->max_cones.size()) == rank_k0_sum(p));
        // The facet complements are exactly the cyclic triples.
        std::set<std::vector<std::size_t>> want;
        for (std::size_t i = 0; i < 5; ++i)
            for (auto pi_ : inst.groups[i])
                for (auto qi : inst.groups[(i + 1) % 5])
                    for (auto ri : inst.groups[(i + 3) % 5]) {
                        std::vector<std::size_t> tri = {pi_, qi, ri};
                        std::sort(tri.begin(), tri.end());
                        want.insert(tri);
                    }
        std::set<std::vector<std::size_t>> got;
        std::vector<bool> inside(N);
        for (const auto& cone : inst.fan->max_cones) {
            inside.assign(N, false);
            for (auto i : cone) inside[i] = true;
            std::vector<std::size_t> comp;
            for (std::size_t i = 0; i < N; ++i)
                if (!inside[i]) comp.push_back(i);
            got.insert(comp);
        }
        add("facet_complement_triples", got == want);
    }

    for (const auto& d : inst.printed_discrepancies)
        rep.notes.push_back("printed ray formula: " + d);
    return rep;
}

}  // namespace toric
