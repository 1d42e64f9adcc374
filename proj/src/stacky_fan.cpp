#include "toric/stacky_fan.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace toric {

StackyFan make_fan(const IntVectorCollection& rays,
                   std::vector<std::vector<std::size_t>> max_cones,
                   const std::optional<IntVectorCollection>& dual_override, bool validate) {
    StackyFan fan;
    fan.lattice_rank = rays.dim;
    fan.rays = rays;
    for (auto& c : max_cones) std::sort(c.begin(), c.end());
    fan.max_cones = std::move(max_cones);
    fan.pic = gale_dual(rays);
    if (dual_override) {
        if (!fan.pic.torsion_orders.empty())
            throw PrecondViolatedError("make_fan: cannot override Pic coordinates, group has torsion");
        if (!unimodular_equivalent(fan.pic.dual_free, *dual_override))
            throw PrecondViolatedError("make_fan: override is not a Gale dual of the rays");
        fan.pic.dual_free = *dual_override;
    }
    if (validate) validate_fan_combinatorics(fan);
    return fan;
}

void validate_fan_combinatorics(const StackyFan& fan) {
    const std::size_t d = fan.lattice_rank;
    if (fan.max_cones.empty()) throw PrecondViolatedError("fan has no maximal cones");
    std::map<std::vector<std::size_t>, int> ridge_count;
    for (const auto& cone : fan.max_cones) {
        if (cone.size() != d)
            throw PrecondViolatedError("maximal cone has wrong number of rays");
        std::vector<IntVec> vs;
        for (auto i : cone) vs.push_back(fan.rays.vectors[i]);
        if (determinant(IntMatrix::from_columns(vs)) == 0)
            throw PrecondViolatedError("maximal cone is not simplicial of full dimension");
        for (std::size_t drop = 0; drop < d; ++drop) {
            std::vector<std::size_t> ridge;
            for (std::size_t i = 0; i < d; ++i)
                if (i != drop) ridge.push_back(cone[i]);
            ++ridge_count[ridge];
        }
    }
    for (const auto& [ridge, cnt] : ridge_count)
        if (cnt != 2)
            throw PrecondViolatedError("fan is not complete: a ridge lies on " +
                                       std::to_string(cnt) + " maximal cones");
}

StackyFan build_fan_from_dual(const IntVectorCollection& dual) {
    if (!contains_origin_interior(dual))
        throw NotFanoError("build_fan_from_dual: origin not interior to conv(v)");
    GaleDualPair pair = make_pair_from_dual(dual);
    PolytopePredicates pred = polytope_predicates(pair);
    if (!pred.is_vertex_set)
        throw NotFanoError("build_fan_from_dual: some v_i is not a vertex");
    if (!pred.is_simplicial)
        throw NotFanoError("build_fan_from_dual: polytope is not simplicial");

    const std::size_t n = dual.size();
    StackyFan fan;
    fan.lattice_rank = n - dual.dim;
    fan.rays = pair.primal;
    fan.pic = std::move(pair);
    std::vector<bool> inside(n);
    for (const auto& comp : pred.facet_complements) {
        inside.assign(n, true);
        for (auto i : comp) inside[i] = false;
        std::vector<std::size_t> cone;
        for (std::size_t i = 0; i < n; ++i)
            if (inside[i]) cone.push_back(i);
        fan.max_cones.push_back(std::move(cone));
    }
    validate_fan_combinatorics(fan);
    FanoFlags flags = check_fano(fan);
    if (!flags.fano) throw NotFanoError("build_fan_from_dual: constructed fan is not Fano");
    return fan;
}

FanoFlags check_fano(const StackyFan& fan) {
    const std::size_t d = fan.lattice_rank, n = fan.n_rays();
    FanoFlags flags{true, true};
    for (const auto& cone : fan.max_cones) {
        std::vector<IntVec> vs;
        for (auto i : cone) vs.push_back(fan.rays.vectors[i]);
        // Supporting functional of the cone's simplex: h(v_i) = 1 on the cone.
        IntMatrix A = IntMatrix::from_columns(vs).transposed();
        auto h = solve_rational(A, RatVec(d, Rat(1)));
        if (!h) throw PrecondViolatedError("check_fano: degenerate maximal cone");
        std::vector<bool> in_cone(n, false);
        for (auto i : cone) in_cone[i] = true;
        for (std::size_t j = 0; j < n; ++j) {
            Rat val = 0;
            for (std::size_t c = 0; c < d; ++c) val += (*h)[c] * Rat(fan.rays.vectors[j][c]);
            if (val > 1) {
                flags.nef_fano = false;
                flags.fano = false;
            } else if (!in_cone[j] && val == 1) {
                flags.fano = false;
            }
        }
        if (!flags.nef_fano) break;
    }
    if (!flags.nef_fano) flags.fano = false;
    return flags;
}

Int rank_k0(const StackyFan& fan) {
    const std::size_t n = fan.n_rays(), p = fan.picard_rank();
    Int tors = fan.pic.torsion_order();
    Int total = 0;
    std::vector<bool> inside(n);
    for (const auto& cone : fan.max_cones) {
        inside.assign(n, false);
        for (auto i : cone) inside[i] = true;
        std::vector<IntVec> es;
        for (std::size_t j = 0; j < n; ++j)
            if (!inside[j]) es.push_back(fan.pic.dual_free.vectors[j]);
        if (es.size() != p) throw InternalError("rank_k0: complement size mismatch");
        total += tors * abs(determinant(IntMatrix::from_columns(es)));
    }
    return total;
}

namespace {

using Mask = std::uint64_t;

Mask cone_mask(const std::vector<std::size_t>& cone) {
    Mask m = 0;
    for (auto i : cone) m |= Mask(1) << i;
    return m;
}

}  // namespace

std::vector<std::vector<std::size_t>> minimal_non_faces(const StackyFan& fan) {
    const std::size_t n = fan.n_rays();
    if (n > 22)
        throw DimensionTooLargeError("minimal_non_faces: fan with more than 22 rays");
    const std::size_t total = std::size_t(1) << n;
    // face[U] = U is contained in some maximal cone.
    std::vector<bool> face(total, false);
    for (const auto& cone : fan.max_cones) {
        Mask cm = cone_mask(cone);
        // enumerate all submasks of cm
        Mask s = cm;
        while (true) {
            face[s] = true;
            if (s == 0) break;
            s = (s - 1) & cm;
        }
    }
    std::vector<std::vector<std::size_t>> out;
    for (Mask u = 1; u < total; ++u) {
        if (face[u]) continue;
        bool minimal = true;
        for (std::size_t v = 0; v < n && minimal; ++v)
            if ((u >> v) & 1)
                if (!face[u & ~(Mask(1) << v)]) minimal = false;
        if (!minimal) continue;
        std::vector<std::size_t> idx;
        for (std::size_t v = 0; v < n; ++v)
            if ((u >> v) & 1) idx.push_back(v);
        out.push_back(std::move(idx));
    }
    return out;
}

namespace {

// 2D exact predicates on the projections mod K.
Int det2(const IntVec& a, const IntVec& b) { return a[0] * b[1] - a[1] * b[0]; }

// Sign-pattern functional for part 2 of the classification. Returns
// nullopt when none exists.
std::optional<RatVec> sign_pattern_functional(const StackyFan& fan,
                                              const std::vector<bool>& positive,
                                              bool strict) {
    const std::size_t p = fan.picard_rank(), n = fan.n_rays();
    IntVec mk = fan.minus_canonical();
    auto base = [&]() {
        RationalPolyhedron P(p);
        RatVec kf(p);
        for (std::size_t j = 0; j < p; ++j) kf[j] = Rat(mk[j]);
        P.add_eq(kf, Rat(0));  // l(K) = 0
        for (std::size_t j = 0; j < n; ++j) {
            RatVec row(p);
            for (std::size_t c = 0; c < p; ++c) {
                Rat e(fan.pic.dual_free.vectors[j][c]);
                row[c] = positive[j] ? -e : e;  // sign-flipped into "<= 0" form
            }
            P.add(std::move(row), Rat(0), strict);
        }
        return P;
    };
    if (strict) {
        LpResult r = lp_feasible(base());
        if (r.feasible) return r.witness;
        return std::nullopt;
    }
    // Weak pattern: force nonzeroness through one divisor at a time.
    for (std::size_t j0 = 0; j0 < n; ++j0) {
        RationalPolyhedron P = base();
        RatVec row(p);
        for (std::size_t c = 0; c < p; ++c) {
            Rat e(fan.pic.dual_free.vectors[j0][c]);
            row[c] = positive[j0] ? -e : e;
        }
        P.add(std::move(row), Rat(-1));
        LpResult r = lp_feasible(P);
        if (r.feasible) return r.witness;
    }
    return std::nullopt;
}

}  // namespace

Picard3Decomposition decompose_picard3(const StackyFan& fan) {
    const std::size_t n = fan.n_rays();
    if (fan.picard_rank() != 3)
        throw NotPicardThreeError("decompose_picard3: Picard number is not three");

    Picard3Decomposition out;

    // Ample-like functional; exists for every complete fan.
    {
        RationalPolyhedron P(3);
        for (std::size_t j = 0; j < n; ++j) {
            RatVec row(3);
            for (std::size_t c = 0; c < 3; ++c) row[c] = -Rat(fan.pic.dual_free.vectors[j][c]);
            P.add(std::move(row), Rat(0), true);
        }
        LpResult r = lp_feasible(P);
        if (!r.feasible)
            throw NotProjectiveError("decompose_picard3: no positive functional on the divisors");
        out.ample_like = r.witness;
    }

    std::vector<std::vector<std::size_t>> prim = minimal_non_faces(fan);
    const std::size_t cnt = prim.size();
    if (cnt < 3 || cnt % 2 == 0)
        throw NotProjectiveError("decompose_picard3: primitive collection count " +
                                 std::to_string(cnt) + " is not odd >= 3");
    const std::size_t t = (cnt - 1) / 2;
    out.t = t;

    // Fingerprint of each ray: which primitive collections contain it.
    std::vector<Mask> member(n, 0);
    for (std::size_t c = 0; c < cnt; ++c)
        for (auto i : prim[c]) member[i] |= Mask(1) << c;
    std::map<Mask, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::size_t(__builtin_popcountll(member[i])) != t)
            throw NotProjectiveError("decompose_picard3: ray lies on wrong number of collections");
        classes[member[i]].push_back(i);
    }
    if (classes.size() != cnt)
        throw NotProjectiveError("decompose_picard3: class count does not match collections");

    // Cyclic order of the classes. For t = 1 the collections are the
    // classes and any cyclic order is consistent; for t >= 2 consecutive
    // collections share exactly t-1 classes.
    std::vector<Mask> keys;
    for (const auto& [k, _] : classes) keys.push_back(k);
    std::vector<std::size_t> order;  // indices into keys
    if (t == 1) {
        for (std::size_t i = 0; i < keys.size(); ++i) order.push_back(i);
    } else {
        // Classes are identified with their collection fingerprints; two
        // classes are cyclically consecutive exactly when their
        // fingerprints overlap in t-1 collections.
        std::vector<std::vector<std::size_t>> neigh(cnt);
        for (std::size_t a = 0; a < cnt; ++a)
            for (std::size_t b = 0; b < cnt; ++b) {
                if (a == b) continue;
                if (std::size_t(__builtin_popcountll(keys[a] & keys[b])) == t - 1)
                    neigh[a].push_back(b);
            }
        for (std::size_t a = 0; a < cnt; ++a)
            if (neigh[a].size() != 2)
                throw NotProjectiveError("decompose_picard3: class adjacency is not a cycle");
        order.push_back(0);
        order.push_back(neigh[0][0]);
        while (order.size() < cnt) {
            std::size_t cur = order.back(), prev = order[order.size() - 2];
            std::size_t nxt = neigh[cur][0] == prev ? neigh[cur][1] : neigh[cur][0];
            if (nxt == 0 && order.size() < cnt)
                throw NotProjectiveError("decompose_picard3: class cycle closes early");
            order.push_back(nxt);
        }
    }

    auto classes_of = [&](std::size_t pos) { return classes[keys[order[pos]]]; };

    // Verify part 1: the primitive collections are exactly the unions of t
    // cyclically consecutive classes.
    {
        std::set<Mask> got, want;
        for (const auto& pc : prim) got.insert(cone_mask(pc));
        for (std::size_t i = 0; i < cnt; ++i) {
            Mask u = 0;
            for (std::size_t j = 0; j < t; ++j)
                for (auto r : classes_of((i + j) % cnt)) u |= Mask(1) << r;
            want.insert(u);
        }
        if (got != want)
            throw NotProjectiveError(
                "decompose_picard3: collections are not consecutive class unions");
    }

    for (std::size_t i = 0; i < cnt; ++i) out.X.push_back(classes_of(i));

    // Orientation: make the class sectors run anticlockwise in the plane
    // Pic_R / R*K, then rotate so the class containing ray 0 comes first.
    {
        std::vector<IntVec> bars = project_mod_canonical(fan.pic.dual_free);
        auto w_of = [&](const std::vector<std::size_t>& cls) {
            IntVec w(2, Int(0));
            for (auto i : cls) {
                w[0] += bars[i][0];
                w[1] += bars[i][1];
            }
            return w;
        };
        Int d = det2(w_of(out.X[0]), w_of(out.X[1]));
        if (d < 0) {
            std::reverse(out.X.begin(), out.X.end());
            d = det2(w_of(out.X[0]), w_of(out.X[1]));
        }
        out.orientation = sign_of(d);
        std::size_t start = 0;
        for (std::size_t i = 0; i < out.X.size(); ++i)
            if (std::find(out.X[i].begin(), out.X[i].end(), std::size_t(0)) != out.X[i].end())
                start = i;
        std::rotate(out.X.begin(), out.X.begin() + start, out.X.end());
    }

    // Part 2 functionals by exact LP, strict for Fano and weak otherwise.
    FanoFlags flags = check_fano(fan);
    out.strict_signs = flags.fano;
    for (std::size_t i = 0; i < cnt; ++i) {
        std::vector<bool> positive(n, false);
        for (std::size_t j = 0; j <= t; ++j)
            for (auto r : out.X[(i + j) % cnt]) positive[r] = true;
        auto li = sign_pattern_functional(fan, positive, flags.fano);
        if (!li)
            throw NotProjectiveError("decompose_picard3: no sign-pattern functional for class " +
                                     std::to_string(i));
        out.l.push_back(*li);
    }

    // Internal consistency used by the classification proof: the class
    // cones in the plane meet only at the origin. Checked in the Fano case
    // where the anticanonical projection is the right chart.
    if (flags.fano) {
        std::vector<IntVec> bars = project_mod_canonical(fan.pic.dual_free);
        for (std::size_t a = 0; a < cnt; ++a)
            for (std::size_t b = a + 1; b < cnt; ++b) {
                std::vector<IntVec> ga, gb;
                for (auto i : out.X[a]) ga.push_back(bars[i]);
                for (auto i : out.X[b]) gb.push_back(bars[i]);
                for (const auto& g : ga)
                    if (cone_member(g, gb))
                        throw NotProjectiveError("decompose_picard3: class cones overlap");
                for (const auto& g : gb)
                    if (cone_member(g, ga))
                        throw NotProjectiveError("decompose_picard3: class cones overlap");
            }
    }
    return out;
}

std::vector<std::vector<std::size_t>> nonzero_homology_index_sets(const Picard3Decomposition& d,
                                                                  std::size_t n_rays) {
    std::vector<std::vector<std::size_t>> out;
    out.push_back({});
    std::vector<std::size_t> all(n_rays);
    for (std::size_t i = 0; i < n_rays; ++i) all[i] = i;
    out.push_back(all);
    const std::size_t cnt = 2 * d.t + 1;
    for (std::size_t i = 0; i < cnt; ++i) {
        std::vector<std::size_t> fwd, bwd;
        for (std::size_t j = 0; j <= d.t; ++j)
            for (auto r : d.X[(i + j) % cnt]) fwd.push_back(r);
        for (std::size_t j = 1; j <= d.t; ++j)
            for (auto r : d.X[(i + cnt - j) % cnt]) bwd.push_back(r);
        std::sort(fwd.begin(), fwd.end());
        std::sort(bwd.begin(), bwd.end());
        out.push_back(std::move(fwd));
        out.push_back(std::move(bwd));
    }
    return out;
}

}  // namespace toric
