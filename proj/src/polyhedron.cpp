#include "toric/polyhedron.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace toric {

void RationalPolyhedron::add(RatVec normal, Rat offset, bool strict) {
    if (normal.size() != dim) throw ToricError("constraint dimension mismatch");
    ineqs.push_back(LinearConstraint{std::move(normal), std::move(offset), strict});
}

void RationalPolyhedron::add_eq(const RatVec& normal, const Rat& offset) {
    add(normal, offset, false);
    RatVec neg(normal.size());
    for (std::size_t i = 0; i < normal.size(); ++i) neg[i] = -normal[i];
    add(std::move(neg), -offset, false);
}

namespace {

// Working row of the elimination: normal . x <= b (< when strict), together
// with the nonnegative combination of input rows it was derived from.
struct Row {
    RatVec a;
    Rat b;
    bool strict;
    RatVec comb;
};

using Rows = std::vector<Row>;

bool normal_is_zero(const Row& r) {
    for (const Rat& v : r.a)
        if (v != 0) return false;
    return true;
}

// Scale by a positive rational so (a, b) becomes a primitive integer vector;
// canonical form for deduplication.
void canonical_scale(Row& r) {
    Int l = 1;
    for (const Rat& v : r.a) l = lcm(l, rat_den(v));
    l = lcm(l, rat_den(r.b));
    Int g = 0;
    for (const Rat& v : r.a) g = gcd(g, rat_num(v) * (l / rat_den(v)));
    g = gcd(g, rat_num(r.b) * (l / rat_den(r.b)));
    if (g == 0) return;  // all-zero row, nothing to scale
    g = abs(g);
    Rat f(l, g);
    for (Rat& v : r.a) v *= f;
    r.b *= f;
    for (Rat& v : r.comb) v *= f;
}

// Drops tautologies, merges duplicates keeping the tighter offset, and
// reports the first contradictory row (zero normal, impossible offset).
std::optional<Row> tidy(Rows& rows) {
    Rows kept;
    std::map<RatVec, std::size_t> by_normal;
    for (Row& r : rows) {
        canonical_scale(r);
        if (normal_is_zero(r)) {
            if (r.b < 0 || (r.b == 0 && r.strict)) return r;  // contradiction
            continue;                                         // tautology
        }
        auto it = by_normal.find(r.a);
        if (it == by_normal.end()) {
            by_normal.emplace(r.a, kept.size());
            kept.push_back(std::move(r));
        } else {
            Row& old = kept[it->second];
            bool tighter = r.b < old.b || (r.b == old.b && r.strict && !old.strict);
            if (tighter) old = std::move(r);
        }
    }
    rows = std::move(kept);
    return std::nullopt;
}

constexpr std::size_t kRowLimit = 500000;

// Fourier-Motzkin step removing variable v.
Rows eliminate_variable(const Rows& rows, std::size_t v) {
    Rows out;
    std::vector<const Row*> pos, neg;
    for (const Row& r : rows) {
        int s = sign_of(r.a[v]);
        if (s == 0)
            out.push_back(r);
        else if (s > 0)
            pos.push_back(&r);
        else
            neg.push_back(&r);
    }
    for (const Row* p : pos)
        for (const Row* n : neg) {
            Rat mp = Rat(1) / p->a[v];
            Rat mn = Rat(-1) / n->a[v];
            Row r;
            r.a.resize(p->a.size());
            for (std::size_t j = 0; j < r.a.size(); ++j) r.a[j] = mp * p->a[j] + mn * n->a[j];
            r.a[v] = 0;  // exact by construction
            r.b = mp * p->b + mn * n->b;
            r.strict = p->strict || n->strict;
            r.comb.resize(p->comb.size());
            for (std::size_t j = 0; j < r.comb.size(); ++j)
                r.comb[j] = mp * p->comb[j] + mn * n->comb[j];
            out.push_back(std::move(r));
            if (out.size() > kRowLimit)
                throw InternalError("Fourier-Motzkin row blowup beyond safety cap");
        }
    return out;
}

FarkasCertificate certificate_from(const Row& r) {
    FarkasCertificate c;
    c.coeffs = r.comb;
    c.combined_offset = r.b;
    c.strict = r.strict;
    return c;
}

struct Elimination {
    bool feasible;
    std::vector<Rows> levels;  // levels[k]: constraints on variables 0..k-1
    FarkasCertificate cert;    // when infeasible
};

Elimination run_elimination(const RationalPolyhedron& P) {
    Elimination e;
    Rows cur;
    cur.reserve(P.ineqs.size());
    for (std::size_t i = 0; i < P.ineqs.size(); ++i) {
        Row r{P.ineqs[i].normal, P.ineqs[i].offset, P.ineqs[i].strict,
              RatVec(P.ineqs.size(), Rat(0))};
        r.comb[i] = 1;
        cur.push_back(std::move(r));
    }
    e.levels.resize(P.dim + 1);
    for (std::size_t v = P.dim; v-- > 0;) {
        if (auto bad = tidy(cur)) {
            e.feasible = false;
            e.cert = certificate_from(*bad);
            return e;
        }
        e.levels[v + 1] = cur;
        cur = eliminate_variable(cur, v);
    }
    if (auto bad = tidy(cur)) {
        e.feasible = false;
        e.cert = certificate_from(*bad);
        return e;
    }
    e.levels[0] = cur;  // empty after tidy: no contradiction at constant level
    e.feasible = true;
    return e;
}

struct Interval {
    std::optional<Rat> lo, hi;
    bool lo_strict = false, hi_strict = false;
};

// Bounds on variable v induced by `rows` once x_0..x_{v-1} are fixed.
Interval bounds_for(const Rows& rows, std::size_t v, const RatVec& partial) {
    Interval iv;
    for (const Row& r : rows) {
        if (r.a[v] == 0) continue;
        Rat rest = r.b;
        for (std::size_t j = 0; j < v; ++j) rest -= r.a[j] * partial[j];
        Rat bound = rest / r.a[v];
        if (r.a[v] > 0) {  // upper bound
            if (!iv.hi || bound < *iv.hi || (bound == *iv.hi && r.strict)) {
                iv.hi_strict = (!iv.hi || bound < *iv.hi) ? r.strict : (iv.hi_strict || r.strict);
                iv.hi = bound;
            }
        } else {  // lower bound
            if (!iv.lo || bound > *iv.lo || (bound == *iv.lo && r.strict)) {
                iv.lo_strict = (!iv.lo || bound > *iv.lo) ? r.strict : (iv.lo_strict || r.strict);
                iv.lo = bound;
            }
        }
    }
    return iv;
}

Rat pick_value(const Interval& iv) {
    if (iv.lo && iv.hi) {
        if (*iv.lo == *iv.hi) {
            if (iv.lo_strict || iv.hi_strict)
                throw InternalError("empty interval after feasible elimination");
            return *iv.lo;
        }
        return (*iv.lo + *iv.hi) / 2;
    }
    if (iv.lo) return iv.lo_strict ? *iv.lo + 1 : *iv.lo;
    if (iv.hi) return iv.hi_strict ? *iv.hi - 1 : *iv.hi;
    return Rat(0);
}

}  // namespace

LpResult lp_feasible(const RationalPolyhedron& P) {
    LpResult res;
    Elimination e = run_elimination(P);
    if (!e.feasible) {
        res.feasible = false;
        res.certificate = e.cert;
        return res;
    }
    res.feasible = true;
    res.witness.assign(P.dim, Rat(0));
    for (std::size_t v = 0; v < P.dim; ++v)
        res.witness[v] = pick_value(bounds_for(e.levels[v + 1], v, res.witness));
    return res;
}

bool verify_farkas(const RationalPolyhedron& P, const FarkasCertificate& c) {
    if (c.coeffs.size() != P.ineqs.size()) return false;
    RatVec total(P.dim, Rat(0));
    Rat offset = 0;
    bool strict = false;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
        if (c.coeffs[i] < 0) return false;
        if (c.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < P.dim; ++j) total[j] += c.coeffs[i] * P.ineqs[i].normal[j];
        offset += c.coeffs[i] * P.ineqs[i].offset;
        strict = strict || P.ineqs[i].strict;
    }
    for (const Rat& t : total)
        if (t != 0) return false;
    return offset < 0 || (offset == 0 && strict);
}

std::optional<RatVec> recession_direction(const RationalPolyhedron& P) {
    for (std::size_t j = 0; j < P.dim; ++j)
        for (int s : {1, -1}) {
            RationalPolyhedron C(P.dim);
            for (const auto& c : P.ineqs) C.add(c.normal, Rat(0), false);
            RatVec pin(P.dim, Rat(0));
            pin[j] = -s;  // s*w_j >= 1
            C.add(std::move(pin), Rat(-1), false);
            LpResult r = lp_feasible(C);
            if (r.feasible) return r.witness;
        }
    return std::nullopt;
}

namespace {

// Depth-first scan over the elimination levels; visit returns false to stop.
bool scan_points(const std::vector<Rows>& levels, std::size_t dim, IntVec& point,
                 RatVec& partial, std::size_t v,
                 const std::function<bool(const IntVec&)>& visit) {
    if (v == dim) return visit(point);
    Interval iv = bounds_for(levels[v + 1], v, partial);
    if (!iv.lo || !iv.hi)
        throw InternalError("unbounded direction while scanning a bounded polyhedron");
    Int lo = ceil_rat(*iv.lo);
    if (iv.lo_strict && Rat(lo) == *iv.lo) ++lo;
    Int hi = floor_rat(*iv.hi);
    if (iv.hi_strict && Rat(hi) == *iv.hi) --hi;
    for (Int x = lo; x <= hi; ++x) {
        point[v] = x;
        partial[v] = Rat(x);
        if (!scan_points(levels, dim, point, partial, v + 1, visit)) return false;
    }
    return true;
}

bool enumerate_impl(const RationalPolyhedron& P, const std::function<bool(const IntVec&)>& visit) {
    Elimination e = run_elimination(P);
    if (!e.feasible) return true;  // empty: nothing to visit
    if (auto w = recession_direction(P))
        throw UnboundedPolyhedronError("enumerate_lattice_points: recession direction exists");
    IntVec point(P.dim, Int(0));
    RatVec partial(P.dim, Rat(0));
    return scan_points(e.levels, P.dim, point, partial, 0, visit);
}

}  // namespace

std::vector<IntVec> enumerate_lattice_points(const RationalPolyhedron& P) {
    std::vector<IntVec> pts;
    enumerate_impl(P, [&](const IntVec& p) {
        pts.push_back(p);
        return true;
    });
    return pts;
}

IntegerFeasibility integer_feasible(const RationalPolyhedron& P) {
    if (P.dim > 4)
        throw DimensionTooLargeError("integer_feasible: dimension " + std::to_string(P.dim) +
                                     " exceeds the supported bound 4");
    IntegerFeasibility out;
    LpResult lp = lp_feasible(P);
    if (!lp.feasible) {
        out.feasible = false;
        out.emptiness_proof = "lp";
        out.certificate = lp.certificate;
        return out;
    }
    if (P.dim == 0) {
        out.feasible = true;
        return out;
    }
    auto w = recession_direction(P);
    if (!w) {
        bool found = !enumerate_impl(P, [&](const IntVec& p) {
            out.witness = p;
            return false;  // stop at the first point
        });
        out.feasible = found;
        if (!found) out.emptiness_proof = "bounded-scan";
        return out;
    }

    // Unbounded: quotient the lattice by the primitive integer recession
    // direction and recurse on the projection.
    Int l = 1;
    for (const Rat& v : *w) l = lcm(l, rat_den(v));
    IntVec wi(P.dim);
    Int g = 0;
    for (std::size_t i = 0; i < P.dim; ++i) {
        wi[i] = rat_num((*w)[i]) * (l / rat_den((*w)[i]));
        g = gcd(g, wi[i]);
    }
    for (auto& v : wi) v /= g;

    // Unimodular change of coordinates x = W y with first column of W equal
    // to the recession direction; constraints then have nonpositive
    // coefficients on y_0, so every fiber over the projection is a ray
    // going up in y_0 and contains integers.
    SmithForm sf = smith_normal_form(IntMatrix::from_columns({wi}));
    IntMatrix W = sf.U_inv;
    if (W.column(0) != wi) {
        W.negate_col(0);  // SNF may have flipped the orientation
        if (W.column(0) != wi) throw InternalError("failed to align recession coordinate");
    }
    std::vector<RatVec> tnormals;
    for (const auto& c : P.ineqs) {
        RatVec row(P.dim, Rat(0));
        for (std::size_t j = 0; j < P.dim; ++j)
            for (std::size_t i = 0; i < P.dim; ++i) row[j] += c.normal[i] * Rat(W.at(i, j));
        tnormals.push_back(std::move(row));
    }
    // Projection: move y_0 to the last slot and Fourier-Motzkin it away.
    RationalPolyhedron proj(P.dim - 1);
    {
        Rows rows;
        for (std::size_t i = 0; i < tnormals.size(); ++i) {
            Row r;
            r.a.resize(P.dim);
            for (std::size_t j = 0; j + 1 < P.dim; ++j) r.a[j] = tnormals[i][j + 1];
            r.a[P.dim - 1] = tnormals[i][0];
            r.b = P.ineqs[i].offset;
            r.strict = P.ineqs[i].strict;
            rows.push_back(std::move(r));
        }
        Rows flat = eliminate_variable(rows, P.dim - 1);
        for (Row& r : flat) {
            r.a.pop_back();
            proj.add(std::move(r.a), std::move(r.b), r.strict);
        }
    }
    IntegerFeasibility sub = integer_feasible(proj);
    if (!sub.feasible) {
        out.feasible = false;
        out.emptiness_proof = "projection";
        out.certificate = sub.certificate;
        return out;
    }
    // Lift: all y_0 coefficients are <= 0, so only lower bounds arise.
    std::optional<Rat> lo;
    bool lo_strict = false;
    for (std::size_t i = 0; i < tnormals.size(); ++i) {
        const Rat& c0 = tnormals[i][0];
        if (c0 == 0) continue;
        if (c0 > 0) throw InternalError("recession coordinate with positive coefficient");
        Rat rest = P.ineqs[i].offset;
        for (std::size_t j = 1; j < P.dim; ++j) rest -= tnormals[i][j] * Rat(sub.witness[j - 1]);
        Rat bound = rest / c0;
        if (!lo || bound > *lo || (bound == *lo && P.ineqs[i].strict)) {
            lo_strict = (!lo || bound > *lo) ? P.ineqs[i].strict : (lo_strict || P.ineqs[i].strict);
            lo = bound;
        }
    }
    Int y0 = 0;
    if (lo) {
        y0 = ceil_rat(*lo);
        if (lo_strict && Rat(y0) == *lo) ++y0;
    }
    IntVec y(P.dim);
    y[0] = y0;
    for (std::size_t j = 1; j < P.dim; ++j) y[j] = sub.witness[j - 1];
    out.feasible = true;
    out.witness = mat_vec(W, y);
    return out;
}

bool origin_in_convex_hull(const std::vector<IntVec>& points) {
    if (points.empty()) return false;
    const std::size_t d = points[0].size();
    for (const auto& p : points) {
        bool zero = true;
        for (const auto& v : p) zero = zero && v == 0;
        if (zero) return true;
    }
    // 0 in conv(S) iff no functional is >= 1 on all of S.
    RationalPolyhedron sep(d);
    for (const auto& p : points) {
        RatVec n(d);
        for (std::size_t j = 0; j < d; ++j) n[j] = -Rat(p[j]);
        sep.add(std::move(n), Rat(-1));
    }
    return !lp_feasible(sep).feasible;
}

bool origin_in_relative_interior(const std::vector<IntVec>& points) {
    if (points.empty()) return false;
    const std::size_t d = points[0].size();
    std::vector<IntVec> distinct;
    for (const auto& p : points)
        if (std::find(distinct.begin(), distinct.end(), p) == distinct.end())
            distinct.push_back(p);
    // 0 in relint conv(S) iff every functional nonnegative on S vanishes on
    // S; check each candidate strict direction separately.
    for (const auto& target : distinct) {
        bool zero = true;
        for (const auto& v : target) zero = zero && v == 0;
        if (zero) continue;
        RationalPolyhedron sep(d);
        for (const auto& p : distinct) {
            RatVec n(d);
            for (std::size_t j = 0; j < d; ++j) n[j] = -Rat(p[j]);
            sep.add(std::move(n), Rat(0));
        }
        RatVec n(d);
        for (std::size_t j = 0; j < d; ++j) n[j] = -Rat(target[j]);
        sep.add(std::move(n), Rat(-1));
        if (lp_feasible(sep).feasible) return false;
    }
    return true;
}

bool cone_member(const IntVec& u, const std::vector<IntVec>& generators) {
    bool u_zero = true;
    for (const auto& v : u) u_zero = u_zero && v == 0;
    if (u_zero) return true;
    if (generators.empty()) return false;
    const std::size_t d = u.size();
    // u in cone(G) iff no h with h.g >= 0 on G and h.u <= -1 exists.
    RationalPolyhedron sep(d);
    for (const auto& g : generators) {
        RatVec n(d);
        for (std::size_t j = 0; j < d; ++j) n[j] = -Rat(g[j]);
        sep.add(std::move(n), Rat(0));
    }
    RatVec n(d);
    for (std::size_t j = 0; j < d; ++j) n[j] = Rat(u[j]);
    sep.add(std::move(n), Rat(-1));
    return !lp_feasible(sep).feasible;
}

}  // namespace toric
