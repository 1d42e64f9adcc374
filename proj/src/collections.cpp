#include "toric/collections.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

namespace toric {

ExceptionalVerdict is_exceptional(CohomologyEngine& engine,
                                  const std::vector<DivisorClass>& bundles) {
    ExceptionalVerdict v;
    const auto& sets = engine.forbidden_index_sets();
    for (std::size_t i = 0; i < bundles.size(); ++i)
        for (std::size_t j = i + 1; j < bundles.size(); ++j) {
            DivisorClass d = engine.class_difference(bundles[i], bundles[j]);
            for (const auto& I : sets) {
                if (engine.forbidden_membership(I, d)) {
                    v.ok = false;
                    v.bad_i = i;
                    v.bad_j = j;
                    v.violating_set = "forbidden set of an index set of size " + std::to_string(I.size());
                    return v;
                }
            }
        }
    return v;
}

LineBundleCollection certify_collection(CohomologyEngine& engine,
                                        std::vector<DivisorClass> bundles,
                                        LineBundleCollection::Kind kind) {
    LineBundleCollection col;
    col.kind = kind;
    col.bundles = std::move(bundles);
    for (std::size_t i = 0; i < col.bundles.size(); ++i)
        for (std::size_t j = i + 1; j < col.bundles.size(); ++j) {
            DivisorClass back = engine.class_difference(col.bundles[i], col.bundles[j]);
            bool ok = engine.vanishing(back, false);
            col.certificate.push_back({i, j, "H^*(L_i - L_j) = 0", ok});
            if (!ok) throw InternalError("certify_collection: backward Ext does not vanish");
            if (kind == LineBundleCollection::Kind::strong_exceptional) {
                DivisorClass fwd = engine.class_difference(col.bundles[j], col.bundles[i]);
                bool ok2 = engine.vanishing(fwd, true);
                col.certificate.push_back({i, j, "H^{>0}(L_j - L_i) = 0", ok2});
                if (!ok2)
                    throw InternalError("certify_collection: forward higher Ext does not vanish");
            }
        }
    return col;
}

// ---------------------------------------------------------------------------
// Windowed branch-and-bound search.

namespace {

class BitSet {
  public:
    explicit BitSet(std::size_t n = 0) : n_(n), w_((n + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += std::size_t(__builtin_popcountll(x));
        return c;
    }
    void and_with(const BitSet& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    }
    template <typename F>
    void for_each(F f) const {
        for (std::size_t b = 0; b < w_.size(); ++b) {
            std::uint64_t x = w_[b];
            while (x) {
                std::size_t i = (b << 6) + std::size_t(__builtin_ctzll(x));
                if (i < n_) f(i);
                x &= x - 1;
            }
        }
    }

  private:
    std::size_t n_;
    std::vector<std::uint64_t> w_;
};

struct PairData {
    std::size_t n = 0;
    std::vector<BitSet> may_precede;  // [u].test(v): u admissible before v
    std::vector<BitSet> compat;

    bool forced(std::size_t u, std::size_t v) const {
        return may_precede[u].test(v) && !may_precede[v].test(u);
    }
};

bool acyclic_with(const PairData& pd, const std::vector<std::size_t>& members,
                  std::size_t extra) {
    std::vector<std::size_t> all = members;
    all.push_back(extra);
    const std::size_t m = all.size();
    std::vector<std::vector<std::size_t>> adj(m);
    std::vector<std::size_t> indeg(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && pd.forced(all[i], all[j])) {
                adj[i].push_back(j);
                ++indeg[j];
            }
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < m; ++i)
        if (indeg[i] == 0) queue.push_back(i);
    std::size_t seen = 0;
    while (!queue.empty()) {
        std::size_t u = queue.back();
        queue.pop_back();
        ++seen;
        for (auto v : adj[u])
            if (--indeg[v] == 0) queue.push_back(v);
    }
    return seen == m;
}

struct SearchState {
    const PairData& pd;
    const std::vector<IntVec>& points;
    std::uint64_t budget = 0;
    std::uint64_t nodes = 0;
    bool exhausted = true;
    std::vector<std::size_t> best;
    std::vector<std::size_t> current;
    std::optional<FamilyParams> family;
    Int z_cap, amplitude;

    SearchState(const PairData& p, const std::vector<IntVec>& pts) : pd(p), points(pts) {}
};

std::size_t coloring_bound(const SearchState& st, const BitSet& cand, std::size_t cand_count) {
    if (cand_count > 600) return cand_count;
    std::vector<std::size_t> items;
    items.reserve(cand_count);
    cand.for_each([&](std::size_t i) { items.push_back(i); });
    std::vector<std::vector<std::size_t>> classes;
    for (auto v : items) {
        bool placed = false;
        for (auto& cls : classes) {
            bool fits = true;
            for (auto u : cls)
                if (st.pd.compat[u].test(v)) {
                    fits = false;
                    break;
                }
            if (fits) {
                cls.push_back(v);
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back({v});
    }
    return classes.size();
}

// Per-z-layer cap from the fixed-z theorem of the family.
std::size_t family_bound(const SearchState& st, const BitSet& cand) {
    std::map<Int, std::size_t> layers;
    cand.for_each([&](std::size_t i) { ++layers[st.points[i][2]]; });
    std::size_t add = 0;
    for (auto& [z, cnt] : layers) {
        std::size_t used = 0;
        for (auto v : st.current)
            if (st.points[v][2] == z) ++used;
        if (Int(used) >= st.z_cap) continue;
        Int room = st.z_cap - Int(used);
        add += std::min(cnt, std::size_t(room));
    }
    return add;
}

void expand(SearchState& st, const BitSet& cand, std::size_t cand_count) {
    if (st.nodes++ > st.budget) {
        st.exhausted = false;
        return;
    }
    if (st.current.size() > st.best.size()) st.best = st.current;
    if (cand_count == 0) return;
    if (st.current.size() + cand_count <= st.best.size()) return;
    if (st.family && st.current.size() + family_bound(st, cand) <= st.best.size()) return;
    if (st.current.size() + coloring_bound(st, cand, cand_count) <= st.best.size()) return;

    std::vector<std::size_t> items;
    items.reserve(cand_count);
    cand.for_each([&](std::size_t i) { items.push_back(i); });
    for (std::size_t idx = 0; idx < items.size(); ++idx) {
        if (st.current.size() + (items.size() - idx) <= st.best.size()) return;
        std::size_t v = items[idx];
        if (!acyclic_with(st.pd, st.current, v)) continue;
        BitSet next = cand;
        next.and_with(st.pd.compat[v]);
        for (std::size_t k = 0; k <= idx; ++k) next.reset(items[k]);
        st.current.push_back(v);
        if (st.family) {
            // amplitude pruning: the z-spread of any exceptional collection
            // on a family member is bounded
            Int zmin = st.points[st.current[0]][2], zmax = zmin;
            for (auto u : st.current) {
                zmin = std::min(zmin, st.points[u][2]);
                zmax = std::max(zmax, st.points[u][2]);
            }
            BitSet filtered = next;
            next.for_each([&](std::size_t u) {
                const Int& z = st.points[u][2];
                if (z < zmax - st.amplitude || z > zmin + st.amplitude) filtered.reset(u);
            });
            expand(st, filtered, filtered.count());
        } else {
            expand(st, next, next.count());
        }
        st.current.pop_back();
        if (!st.exhausted) return;
    }
}

std::vector<std::size_t> topological_positions(const PairData& pd,
                                               const std::vector<std::size_t>& members,
                                               const std::vector<IntVec>& points) {
    const std::size_t m = members.size();
    std::vector<std::size_t> result;
    std::vector<bool> used(m, false);
    for (std::size_t step = 0; step < m; ++step) {
        std::size_t pick = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (used[i]) continue;
            bool ready = true;
            for (std::size_t j = 0; j < m; ++j)
                if (!used[j] && j != i && pd.forced(members[j], members[i])) ready = false;
            if (!ready) continue;
            if (pick == m || points[members[i]] < points[members[pick]]) pick = i;
        }
        if (pick == m) throw InternalError("topological_positions: cycle in forced order");
        used[pick] = true;
        result.push_back(members[pick]);
    }
    return result;
}

}  // namespace

SearchResult max_exceptional_search(CohomologyEngine& engine, const SearchWindow& window,
                                    std::uint64_t budget,
                                    const std::optional<FamilyParams>& family,
                                    std::size_t jobs) {
    const std::size_t dim = engine.fan().picard_rank();
    if (window.ranges.size() != dim)
        throw PrecondViolatedError("max_exceptional_search: window rank mismatch");
    if (family && dim != 3)
        throw PrecondViolatedError("max_exceptional_search: family fast path needs rank 3");

    std::vector<IntVec> points;
    {
        std::vector<long> idx(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (window.ranges[i].first > window.ranges[i].second)
                throw PrecondViolatedError("max_exceptional_search: empty window range");
            idx[i] = window.ranges[i].first;
        }
        while (true) {
            IntVec cur(dim);
            for (std::size_t i = 0; i < dim; ++i) cur[i] = idx[i];
            points.push_back(std::move(cur));
            std::size_t c = dim;
            bool done = true;
            while (c-- > 0) {
                if (++idx[c] <= window.ranges[c].second) {
                    done = false;
                    break;
                }
                idx[c] = window.ranges[c].first;
            }
            if (done) break;
        }
    }
    const std::size_t n = points.size();
    if (n > 100000)
        throw PrecondViolatedError("max_exceptional_search: window has over 100000 bundles");

    // Admissibility of all window differences. The family path is pure
    // closed-form arithmetic and parallelizes trivially.
    std::map<IntVec, bool> allowed;
    {
        std::vector<IntVec> diffs;
        std::vector<long> lo(dim), hi(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            lo[i] = window.ranges[i].first - window.ranges[i].second;
            hi[i] = window.ranges[i].second - window.ranges[i].first;
        }
        std::vector<long> idx = lo;
        while (true) {
            IntVec d(dim);
            for (std::size_t i = 0; i < dim; ++i) d[i] = idx[i];
            diffs.push_back(std::move(d));
            std::size_t c = dim;
            bool done = true;
            while (c-- > 0) {
                if (++idx[c] <= hi[c]) {
                    done = false;
                    break;
                }
                idx[c] = lo[c];
            }
            if (done) break;
        }
        std::vector<char> verdict(diffs.size(), 0);
        if (family && jobs > 1) {
            std::vector<std::thread> pool;
            std::size_t chunk = (diffs.size() + jobs - 1) / jobs;
            for (std::size_t w = 0; w < jobs; ++w) {
                std::size_t a = w * chunk, b = std::min(diffs.size(), a + chunk);
                pool.emplace_back([&, a, b] {
                    for (std::size_t i = a; i < b; ++i)
                        verdict[i] = !closed_form_member_any(*family, diffs[i]);
                });
            }
            for (auto& t : pool) t.join();
        } else {
            for (std::size_t i = 0; i < diffs.size(); ++i)
                verdict[i] = family ? !closed_form_member_any(*family, diffs[i])
                                    : engine.vanishing(engine.divisor_class(diffs[i]), false);
        }
        for (std::size_t i = 0; i < diffs.size(); ++i) allowed.emplace(diffs[i], verdict[i] != 0);
    }

    PairData pd;
    pd.n = n;
    pd.may_precede.assign(n, BitSet(n));
    pd.compat.assign(n, BitSet(n));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            IntVec d(dim);
            for (std::size_t c = 0; c < dim; ++c) d[c] = points[u][c] - points[v][c];
            if (allowed.at(d)) pd.may_precede[u].set(v);
        }
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (pd.may_precede[u].test(v) || pd.may_precede[v].test(u)) {
                pd.compat[u].set(v);
                pd.compat[v].set(u);
            }

    SearchState st(pd, points);
    st.budget = budget;
    st.family = family;
    if (family) {
        Int cna = ceil_div(Int(family->n), Int(family->a));
        st.amplitude = Int(family->n) + Int(family->k) + cna + 1;
        st.z_cap = Int(family->n + 2 * family->a + 1) * Int(family->n + 3);
    }

    {
        std::vector<std::size_t> greedy;
        for (std::size_t v = 0; v < n; ++v) {
            bool ok = true;
            for (auto u : greedy)
                if (!pd.compat[u].test(v)) {
                    ok = false;
                    break;
                }
            if (ok && acyclic_with(pd, greedy, v)) greedy.push_back(v);
        }
        st.best = greedy;
    }

    BitSet all(n);
    for (std::size_t i = 0; i < n; ++i) all.set(i);
    expand(st, all, n);

    SearchResult res;
    res.nodes = st.nodes;
    res.exact = st.exhausted;
    std::vector<std::size_t> ordered = topological_positions(pd, st.best, points);
    std::vector<DivisorClass> bundles;
    for (auto i : ordered) bundles.push_back(engine.divisor_class(points[i]));
    ExceptionalVerdict verdict = is_exceptional(engine, bundles);
    if (!verdict.ok)
        throw InternalError("max_exceptional_search: output failed generic re-verification");
    res.best =
        certify_collection(engine, std::move(bundles), LineBundleCollection::Kind::exceptional);
    return res;
}

// ---------------------------------------------------------------------------
// Strong collections through the zonotope slab.

namespace {

// c0 + c1 d + c2 d^2 for an infinitesimal d > 0, compared lexicographically.
struct Eps2 {
    Rat c0, c1, c2;
    Eps2(Rat a = Rat(0), Rat b = Rat(0), Rat c = Rat(0))
        : c0(std::move(a)), c1(std::move(b)), c2(std::move(c)) {}
    int sign() const {
        if (int s = sign_of(c0)) return s;
        if (int s = sign_of(c1)) return s;
        return sign_of(c2);
    }
    Eps2 operator-(const Eps2& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Eps2 operator+(const Eps2& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Eps2 scaled(const Rat& f) const { return {c0 * f, c1 * f, c2 * f}; }
    bool positive() const { return sign() > 0; }
    Rat at(const Rat& d) const { return c0 + c1 * d + c2 * d * d; }
};

Int floor_eps(const Eps2& x) {
    Int f = floor_rat(x.c0);
    if (Rat(f) == x.c0 && Eps2(Rat(0), x.c1, x.c2).sign() < 0) return f - 1;
    return f;
}

Int ceil_eps(const Eps2& x) {
    Int c = ceil_rat(x.c0);
    if (Rat(c) == x.c0 && Eps2(Rat(0), x.c1, x.c2).sign() > 0) return c + 1;
    return c;
}

std::optional<IntVec> solve_with_snf(const SmithForm& f, std::size_t cols, const IntVec& b) {
    IntVec c = mat_vec(f.U, b);
    IntVec y(cols, Int(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        Int di = i < f.d.size() ? f.d[i] : Int(0);
        if (di == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            if (c[i] % di != 0) return std::nullopt;
            y[i] = c[i] / di;
        }
    }
    return mat_vec(f.V, y);
}

struct PlaneData {
    IntMatrix proj;      // 2 x 3, rows are the covectors alpha, beta
    SmithForm proj_snf;
    IntVec k0;           // primitive fiber direction with l(k0) > 0
    std::vector<IntVec> ehat;
    std::vector<std::pair<IntVec, Rat>> facets;  // (primitive normal, full-zonotope support)
    RatVec l;
    Rat s;   // l(k0)
    Rat H;   // l(-K)/2
    IntVec r0, r1;  // rows of a basis of pi(Z^3)
};

Rat dot_rl(const RatVec& a, const IntVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
    return s;
}

Int det2i(const IntVec& a, const IntVec& b) { return a[0] * b[1] - a[1] * b[0]; }

PlaneData make_plane(const StackyFan& fan, const RatVec& ample_like) {
    PlaneData pl;
    pl.l = ample_like;
    IntVec mk = fan.minus_canonical();
    IntMatrix kmat(1, 3);
    for (std::size_t j = 0; j < 3; ++j) kmat.at(0, j) = mk[j];
    IntMatrix cov = integer_kernel_basis(kmat);  // 3 x 2 columns of covectors
    pl.proj = hermite_row_basis(cov.transposed());
    if (pl.proj.rows() != 2) throw InternalError("make_plane: projection is not rank two");
    pl.proj_snf = smith_normal_form(pl.proj);
    IntMatrix ker = integer_kernel_basis(pl.proj);  // 3 x 1
    pl.k0 = ker.column(0);
    pl.s = dot_rl(pl.l, pl.k0);
    if (pl.s == 0) throw InternalError("make_plane: functional vanishes on the fiber direction");
    if (pl.s < 0) {
        for (auto& v : pl.k0) v = -v;
        pl.s = -pl.s;
    }
    pl.H = dot_rl(pl.l, mk) / 2;
    if (pl.H <= 0) throw InternalError("make_plane: functional not positive on -K");

    for (std::size_t j = 0; j < fan.n_rays(); ++j) {
        const IntVec& e = fan.pic.dual_free.vectors[j];
        IntVec img(2, Int(0));
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 3; ++c) img[r] += pl.proj.at(r, c) * e[c];
        pl.ehat.push_back(std::move(img));
    }
    // Facet normals: primitive perpendiculars of the nonzero generators.
    std::set<IntVec> dirs;
    for (const auto& e : pl.ehat) {
        if (e[0] == 0 && e[1] == 0) continue;
        IntVec nrm = {-e[1], e[0]};
        Int g = gcd(abs(nrm[0]), abs(nrm[1]));
        nrm[0] /= g;
        nrm[1] /= g;
        if (nrm[0] < 0 || (nrm[0] == 0 && nrm[1] < 0)) {
            nrm[0] = -nrm[0];
            nrm[1] = -nrm[1];
        }
        dirs.insert(nrm);
    }
    if (dirs.empty()) throw InternalError("make_plane: degenerate zonotope");
    for (const auto& nrm : dirs) {
        Rat off = 0;
        for (const auto& e : pl.ehat) off += Rat(abs(nrm[0] * e[0] + nrm[1] * e[1]), 2);
        pl.facets.emplace_back(nrm, off);
    }
    // Basis of the image lattice pi(Z^3).
    IntMatrix img_basis = hermite_row_basis(pl.proj.transposed());
    if (img_basis.rows() != 2) throw InternalError("make_plane: image lattice is not rank two");
    pl.r0 = img_basis.row(0);
    pl.r1 = img_basis.row(1);
    return pl;
}

Int window_count(const Rat& mu, const PlaneData& pl, const Eps2& lambda) {
    Eps2 lo = (lambda - Eps2(mu + pl.H)).scaled(Rat(1) / pl.s);
    Eps2 hi = (lambda - Eps2(mu - pl.H)).scaled(Rat(1) / pl.s);
    Int c = ceil_eps(hi) - floor_eps(lo) - 1;
    return c > 0 ? c : Int(0);
}

struct ShiftMembers {
    std::vector<std::pair<IntVec, Rat>> sel;  // (ghat, mu = l of a preimage)
};

// Lattice points of the plane window around p_hat, with mu per fiber.
ShiftMembers members_at(const PlaneData& pl, const std::array<Eps2, 2>& p_hat) {
    ShiftMembers out;
    Rat hx = 0, hy = 0;
    for (const auto& e : pl.ehat) {
        hx += Rat(abs(e[0]), 4);  // half-zonotope support in the axis directions
        hy += Rat(abs(e[1]), 4);
    }
    Int x_lo = floor_rat(p_hat[0].c0 - hx) - 1, x_hi = ceil_rat(p_hat[0].c0 + hx) + 1;
    Int y_lo = floor_rat(p_hat[1].c0 - hy) - 1, y_hi = ceil_rat(p_hat[1].c0 + hy) + 1;
    for (Int gx = x_lo; gx <= x_hi; ++gx)
        for (Int gy = y_lo; gy <= y_hi; ++gy) {
            bool inside = true;
            for (const auto& [nrm, off] : pl.facets) {
                Eps2 val = Eps2(Rat(nrm[0] * gx + nrm[1] * gy)) -
                           (p_hat[0].scaled(Rat(nrm[0])) + p_hat[1].scaled(Rat(nrm[1])));
                Rat half = off / 2;
                if (!(Eps2(half) - val).positive() || !(val + Eps2(half)).positive()) {
                    inside = false;
                    break;
                }
            }
            if (!inside) continue;
            IntVec g = {gx, gy};
            auto pre = solve_with_snf(pl.proj_snf, 3, g);
            if (!pre) continue;  // not in the image lattice
            out.sel.emplace_back(std::move(g), dot_rl(pl.l, *pre));
        }
    return out;
}

struct ShiftEval {
    Int count = 0;
    Eps2 lambda;
};

// Best slab position over one period of the fiber step.
ShiftEval best_lambda(const PlaneData& pl, const ShiftMembers& mem) {
    ShiftEval ev;
    if (mem.sel.empty()) return ev;
    std::set<Rat> breaks;
    auto mod_s = [&](Rat v) {
        Rat q = v / pl.s;
        return v - pl.s * Rat(floor_rat(q));
    };
    for (const auto& [g, mu] : mem.sel) {
        breaks.insert(mod_s(mu - pl.H));
        breaks.insert(mod_s(mu + pl.H));
    }
    for (const Rat& bp : breaks) {
        Eps2 lambda(bp, Rat(1));  // just above the breakpoint
        Int total = 0;
        for (const auto& [g, mu] : mem.sel) total += window_count(mu, pl, lambda);
        if (total > ev.count) {
            ev.count = total;
            ev.lambda = lambda;
        }
    }
    return ev;
}

struct LineEq {
    IntVec n;  // primitive normal
    Rat c;
    bool operator<(const LineEq& o) const {
        if (n != o.n) return n < o.n;
        return c < o.c;
    }
};

}  // namespace

StrongCollectionResult build_strong_collection(CohomologyEngine& engine, std::size_t jobs) {
    const StackyFan& fan = engine.fan();
    if (fan.picard_rank() != 3)
        throw NotPicardThreeError("build_strong_collection: Picard number is not three");
    if (!fan.picard_torsion_free())
        throw PrecondViolatedError(
            "build_strong_collection: torsion in Pic is gated off on this path");
    FanoFlags flags = check_fano(fan);
    if (!flags.nef_fano) throw NotFanoError("build_strong_collection: fan is not nef-Fano");
    if (!engine.decomposition())
        throw NotProjectiveError("build_strong_collection: no cyclic decomposition");

    PlaneData pl = make_plane(fan, engine.decomposition()->ample_like);

    // Exact volume bound Vol(P) >= 6 rk K_0 before any searching.
    Rat det_t;
    {
        IntMatrix lmat(3, 3);
        Int scale = 1;
        for (std::size_t c = 0; c < 3; ++c) scale = lcm(scale, rat_den(pl.l[c]));
        for (std::size_t c = 0; c < 3; ++c)
            lmat.at(0, c) = rat_num(pl.l[c]) * (scale / rat_den(pl.l[c]));
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 3; ++c) lmat.at(r + 1, c) = pl.proj.at(r, c);
        det_t = Rat(abs(determinant(lmat)), scale);
        if (det_t == 0) throw InternalError("build_strong_collection: degenerate frame");
    }
    Rat zono_area = 0;
    for (std::size_t i = 0; i < pl.ehat.size(); ++i)
        for (std::size_t j = i + 1; j < pl.ehat.size(); ++j)
            zono_area += Rat(abs(det2i(pl.ehat[i], pl.ehat[j])));
    Rat vol_p_hat = zono_area / det_t;
    Rat vol_p = 2 * (2 * pl.H) * vol_p_hat;  // 2 l(-K) Vol(P_hat), l(-K) = 2H
    Int rk = rank_k0(fan);
    Int target = ceil_div(3 * rk, 4);
    if (vol_p < 6 * Rat(rk))
        throw InternalError("build_strong_collection: volume bound 6 rk K_0 fails");

    // Shift candidates: a rational grid over the fundamental cell first,
    // then the exact cell sweep of the membership-boundary arrangement.
    Int best_count = 0;
    std::array<Eps2, 2> best_p{};
    Eps2 best_lam;
    Int per_fiber_cap = floor_rat(2 * pl.H / pl.s) + 1;
    auto consider = [&](const std::array<Eps2, 2>& p_hat) {
        ShiftMembers mem = members_at(pl, p_hat);
        if (Int(mem.sel.size()) * per_fiber_cap <= best_count)
            return false;  // every fiber contributes at most per_fiber_cap
        ShiftEval ev = best_lambda(pl, mem);
        if (ev.count > best_count) {
            best_count = ev.count;
            best_p = p_hat;
            best_lam = ev.lambda;
        }
        return best_count >= target;
    };

    bool found = false;
    for (long i = 0; i < 8 && !found; ++i)
        for (long j = 0; j < 8 && !found; ++j) {
            std::array<Eps2, 2> p_hat = {
                Eps2(Rat(pl.r0[0]) * Rat(2 * i + 1, 16) + Rat(pl.r1[0]) * Rat(2 * j + 1, 16),
                     Rat(1)),
                Eps2(Rat(pl.r0[1]) * Rat(2 * i + 1, 16) + Rat(pl.r1[1]) * Rat(2 * j + 1, 16),
                     Rat(0), Rat(1))};
            found = consider(p_hat);
        }

    if (!found) {
        // Boundary lines n.p = n.g -+ off/2 for lattice points g near the
        // fundamental cell, plus the cell box edges.
        Rat cx[4] = {Rat(0), Rat(pl.r0[0]), Rat(pl.r1[0]), Rat(pl.r0[0] + pl.r1[0])};
        Rat cy[4] = {Rat(0), Rat(pl.r0[1]), Rat(pl.r1[1]), Rat(pl.r0[1] + pl.r1[1])};
        Rat fx0 = *std::min_element(cx, cx + 4);
        Rat fx1 = *std::max_element(cx, cx + 4);
        Rat fy0 = *std::min_element(cy, cy + 4);
        Rat fy1 = *std::max_element(cy, cy + 4);
        Rat hx = 0, hy = 0;
        for (const auto& e : pl.ehat) {
            hx += Rat(abs(e[0]), 4);
            hy += Rat(abs(e[1]), 4);
        }
        std::set<LineEq> lines;
        lines.insert({{Int(1), Int(0)}, fx0});
        lines.insert({{Int(1), Int(0)}, fx1});
        lines.insert({{Int(0), Int(1)}, fy0});
        lines.insert({{Int(0), Int(1)}, fy1});
        for (Int gx = floor_rat(fx0 - hx) - 1; gx <= ceil_rat(fx1 + hx) + 1; ++gx)
            for (Int gy = floor_rat(fy0 - hy) - 1; gy <= ceil_rat(fy1 + hy) + 1; ++gy) {
                IntVec g = {gx, gy};
                if (!solve_with_snf(pl.proj_snf, 3, g)) continue;
                for (const auto& [nrm, off] : pl.facets)
                    for (int sgn : {1, -1}) {
                        Rat c = Rat(nrm[0] * gx + nrm[1] * gy) + Rat(sgn) * off / 2;
                        // keep only lines meeting the cell box
                        Rat vals[4] = {Rat(nrm[0]) * fx0 + Rat(nrm[1]) * fy0,
                                       Rat(nrm[0]) * fx0 + Rat(nrm[1]) * fy1,
                                       Rat(nrm[0]) * fx1 + Rat(nrm[1]) * fy0,
                                       Rat(nrm[0]) * fx1 + Rat(nrm[1]) * fy1};
                        Rat lo = *std::min_element(vals, vals + 4);
                        Rat hi = *std::max_element(vals, vals + 4);
                        if (c < lo || c > hi) continue;
                        lines.insert({nrm, c});
                    }
            }
        std::vector<LineEq> ls(lines.begin(), lines.end());
        // Deterministic stride order over pairs; early exit on success.
        std::vector<std::array<Eps2, 2>> batch;
        auto flush = [&]() {
            if (batch.empty()) return false;
            std::vector<ShiftEval> evs(batch.size());
            std::vector<ShiftMembers> mems(batch.size());
            std::size_t workers = std::max<std::size_t>(1, std::min(jobs, batch.size()));
            if (workers > 1) {
                std::vector<std::thread> pool;
                std::size_t chunk = (batch.size() + workers - 1) / workers;
                for (std::size_t w = 0; w < workers; ++w) {
                    std::size_t a = w * chunk, b = std::min(batch.size(), a + chunk);
                    pool.emplace_back([&, a, b] {
                        for (std::size_t q = a; q < b; ++q) {
                            mems[q] = members_at(pl, batch[q]);
                            evs[q] = best_lambda(pl, mems[q]);
                        }
                    });
                }
                for (auto& t : pool) t.join();
            } else {
                for (std::size_t q = 0; q < batch.size(); ++q) {
                    mems[q] = members_at(pl, batch[q]);
                    evs[q] = best_lambda(pl, mems[q]);
                }
            }
            for (std::size_t q = 0; q < batch.size(); ++q) {
                if (evs[q].count > best_count) {
                    best_count = evs[q].count;
                    best_p = batch[q];
                    best_lam = evs[q].lambda;
                }
                if (best_count >= target) return true;
            }
            batch.clear();
            return false;
        };
        for (std::size_t i = 0; i < ls.size() && !found; ++i)
            for (std::size_t j = i + 1; j < ls.size() && !found; ++j) {
                Int det = det2i(ls[i].n, ls[j].n);
                if (det == 0) continue;
                for (int si : {1, -1})
                    for (int sj : {1, -1}) {
                        // Solve n_i . p = c_i + si*d, n_j . p = c_j + sj*d^2.
                        Eps2 rhs_i(ls[i].c, Rat(si)), rhs_j(ls[j].c, Rat(0), Rat(sj));
                        Rat d(det);
                        std::array<Eps2, 2> p_hat = {
                            (rhs_i.scaled(Rat(ls[j].n[1])) - rhs_j.scaled(Rat(ls[i].n[1])))
                                .scaled(Rat(1) / d),
                            (rhs_j.scaled(Rat(ls[i].n[0])) - rhs_i.scaled(Rat(ls[j].n[0])))
                                .scaled(Rat(1) / d)};
                        batch.push_back(p_hat);
                    }
                if (batch.size() >= std::max<std::size_t>(16, jobs * 8)) found = flush();
            }
        if (!found) found = flush();
    }

    if (best_count < target)
        throw ConstructionShortfallError(
            "build_strong_collection: no shift reached ceil(3/4 rk K_0) = " + target.str());

    // Realize the infinitesimal as an explicit rational and recount.
    StrongCollectionResult out;
    std::vector<DivisorClass> bundles;
    Rat delta;
    for (int kpow = 8; kpow <= 120; kpow += 8) {
        delta = Rat(Int(1), Int(1) << kpow);
        Rat px = best_p[0].at(delta), py = best_p[1].at(delta), lam = best_lam.at(delta);
        bundles.clear();
        Rat hx = 0, hy = 0;
        for (const auto& e : pl.ehat) {
            hx += Rat(abs(e[0]), 4);
            hy += Rat(abs(e[1]), 4);
        }
        for (Int gx = floor_rat(px - hx) - 1; gx <= ceil_rat(px + hx) + 1; ++gx)
            for (Int gy = floor_rat(py - hy) - 1; gy <= ceil_rat(py + hy) + 1; ++gy) {
                bool inside = true;
                for (const auto& [nrm, off] : pl.facets) {
                    Rat val = Rat(nrm[0]) * (Rat(gx) - px) + Rat(nrm[1]) * (Rat(gy) - py);
                    if (!(val < off / 2 && -(off / 2) < val)) {
                        inside = false;
                        break;
                    }
                }
                if (!inside) continue;
                IntVec g = {gx, gy};
                auto pre = solve_with_snf(pl.proj_snf, 3, g);
                if (!pre) continue;
                Rat mu = dot_rl(pl.l, *pre);
                Int m_lo = floor_rat((lam - pl.H - mu) / pl.s) + 1;
                Int m_hi = ceil_rat((lam + pl.H - mu) / pl.s) - 1;
                for (Int m = m_lo; m <= m_hi; ++m) {
                    IntVec L(3);
                    for (std::size_t c = 0; c < 3; ++c) L[c] = (*pre)[c] + m * pl.k0[c];
                    bundles.push_back(engine.divisor_class(L));
                }
            }
        if (Int(bundles.size()) >= target) break;
    }
    if (Int(bundles.size()) < target)
        throw InternalError("build_strong_collection: infinitesimal realization failed");

    // Ascending slab order; ties broken lexicographically.
    std::sort(bundles.begin(), bundles.end(), [&](const DivisorClass& A, const DivisorClass& B) {
        Rat la = dot_rl(pl.l, A.free), lb = dot_rl(pl.l, B.free);
        if (la != lb) return la < lb;
        return A.free < B.free;
    });
    // Backward effectivity is impossible in this order; assert it directly.
    for (std::size_t i = 0; i < bundles.size(); ++i)
        for (std::size_t j = i + 1; j < bundles.size(); ++j) {
            DivisorClass d = engine.class_difference(bundles[i], bundles[j]);
            if (engine.forbidden_membership({}, d))
                throw InternalError("build_strong_collection: ordering soundness violated");
        }

    out.collection = certify_collection(engine, std::move(bundles),
                                        LineBundleCollection::Kind::strong_exceptional);
    out.delta = delta;
    Rat px = best_p[0].at(delta), py = best_p[1].at(delta), lam = best_lam.at(delta);
    {
        // Lift the plane shift and slab position back to Pic_R.
        IntMatrix frame(3, 3);
        Int scale = 1;
        for (std::size_t c = 0; c < 3; ++c) scale = lcm(scale, rat_den(pl.l[c]));
        for (std::size_t c = 0; c < 3; ++c)
            frame.at(0, c) = rat_num(pl.l[c]) * (scale / rat_den(pl.l[c]));
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 3; ++c) frame.at(r + 1, c) = pl.proj.at(r, c);
        auto p = solve_rational(frame, {lam * Rat(scale), px, py});
        if (!p) throw InternalError("build_strong_collection: shift lift failed");
        out.shift = *p;
    }
    out.vol_p = vol_p;
    out.vol_p_hat = vol_p_hat;
    out.functional = pl.l;
    out.rk_k0 = rk;
    out.target = target;
    return out;
}

// ---------------------------------------------------------------------------
// The cyclic wedge inequality.

namespace {

Rat wedge(const std::array<Rat, 2>& a, const std::array<Rat, 2>& b) {
    return a[0] * b[1] - a[1] * b[0];
}

bool is_zero_vec(const std::array<Rat, 2>& v) { return v[0] == 0 && v[1] == 0; }

}  // namespace

std::optional<std::string> validate_wedge_config(const WedgeConfig& c) {
    const std::size_t cnt = 2 * c.t + 1;
    if (c.t < 1) return "t must be at least 1";
    if (c.g.size() != cnt) return "g must have 2t+1 vectors";
    if (c.f.size() != cnt) return "f must have 2t+1 functionals";
    std::array<Rat, 2> sum = {Rat(0), Rat(0)};
    for (const auto& g : c.g) {
        sum[0] += g[0];
        sum[1] += g[1];
    }
    if (sum[0] != 0 || sum[1] != 0) return "sum of g_i is not zero";
    for (std::size_t i = 0; i < cnt; ++i)
        if (is_zero_vec(c.f[i])) return "functional f_" + std::to_string(i) + " is zero";
    for (std::size_t i = 0; i < cnt; ++i) {
        for (std::size_t j = 0; j <= c.t; ++j) {
            const auto& g = c.g[(i + j) % cnt];
            if (c.f[i][0] * g[0] + c.f[i][1] * g[1] < 0)
                return "f_" + std::to_string(i) + " negative on g_" + std::to_string((i + j) % cnt);
        }
        for (std::size_t j = 1; j <= c.t; ++j) {
            const auto& g = c.g[(i + cnt - j) % cnt];
            if (c.f[i][0] * g[0] + c.f[i][1] * g[1] > 0)
                return "f_" + std::to_string(i) + " positive on g_" +
                       std::to_string((i + cnt - j) % cnt);
        }
    }
    for (std::size_t i = 0; i < cnt; ++i)
        for (std::size_t j = 1; j <= c.t; ++j)
            if (wedge(c.g[i], c.g[(i + j) % cnt]) < 0)
                return "wedge g_" + std::to_string(i) + " ^ g_" + std::to_string((i + j) % cnt) +
                       " is negative";
    return std::nullopt;
}

SublemmaResult sublemma_check(const WedgeConfig& c) {
    if (auto bad = validate_wedge_config(c))
        throw PrecondViolatedError("sublemma_check: " + *bad);
    const std::size_t cnt = 2 * c.t + 1;
    SublemmaResult r;
    r.lhs = 0;
    for (std::size_t i = 0; i < cnt; ++i)
        for (std::size_t j = 1; j <= c.t; ++j) r.lhs += wedge(c.g[i], c.g[(i + j) % cnt]);
    r.rhs = 0;
    for (std::size_t j1 = 1; j1 <= c.t; ++j1)
        for (std::size_t j2 = 1; j2 <= c.t; ++j2)
            if (j1 + j2 > c.t) r.rhs += wedge(c.g[j1 % cnt], c.g[(cnt - j2) % cnt]);
    r.rhs *= 3;
    r.holds = r.lhs >= r.rhs;
    return r;
}

WedgeConfig random_wedge_config(std::size_t t, std::mt19937_64& rng) {
    const std::size_t cnt = 2 * t + 1;
    std::uniform_int_distribution<int> entry(-10, 10);
    auto angle_less = [](const std::array<Rat, 2>& a, const std::array<Rat, 2>& b) {
        auto half = [](const std::array<Rat, 2>& v) {
            return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1;
        };
        int ha = half(a), hb = half(b);
        if (ha != hb) return ha < hb;
        return a[0] * b[1] - a[1] * b[0] > 0;
    };
    for (int attempt = 0; attempt < 200000; ++attempt) {
        std::vector<std::array<Rat, 2>> g(cnt);
        Rat sx = 0, sy = 0;
        for (std::size_t i = 0; i + 1 < cnt; ++i) {
            g[i] = {Rat(entry(rng)), Rat(entry(rng))};
            sx += g[i][0];
            sy += g[i][1];
        }
        g[cnt - 1] = {-sx, -sy};
        bool any_zero = false;
        for (const auto& v : g) any_zero = any_zero || is_zero_vec(v);
        if (any_zero) continue;
        std::sort(g.begin(), g.end(), angle_less);
        for (std::size_t rot = 0; rot < cnt; ++rot) {
            WedgeConfig cfg;
            cfg.t = t;
            cfg.g.resize(cnt);
            for (std::size_t i = 0; i < cnt; ++i) cfg.g[i] = g[(i + rot) % cnt];
            bool wedges_ok = true;
            for (std::size_t i = 0; i < cnt && wedges_ok; ++i)
                for (std::size_t j = 1; j <= t && wedges_ok; ++j)
                    if (wedge(cfg.g[i], cfg.g[(i + j) % cnt]) < 0) wedges_ok = false;
            if (!wedges_ok) continue;
            bool all_found = true;
            cfg.f.assign(cnt, {Rat(0), Rat(0)});
            for (std::size_t i = 0; i < cnt && all_found; ++i) {
                bool found = false;
                for (std::size_t j0 = 0; j0 < cnt && !found; ++j0) {
                    RationalPolyhedron P(2);
                    for (std::size_t j = 0; j <= t; ++j) {
                        const auto& v = cfg.g[(i + j) % cnt];
                        P.add({-v[0], -v[1]}, Rat(0));
                    }
                    for (std::size_t j = 1; j <= t; ++j) {
                        const auto& v = cfg.g[(i + cnt - j) % cnt];
                        P.add({v[0], v[1]}, Rat(0));
                    }
                    bool pos_block = j0 <= t;
                    const auto& v = cfg.g[(i + j0) % cnt];
                    if (pos_block)
                        P.add({-v[0], -v[1]}, Rat(-1));
                    else
                        P.add({v[0], v[1]}, Rat(-1));
                    LpResult r = lp_feasible(P);
                    if (r.feasible) {
                        cfg.f[i] = {r.witness[0], r.witness[1]};
                        found = true;
                    }
                }
                all_found = found;
            }
            if (!all_found) continue;
            if (!validate_wedge_config(cfg)) return cfg;
        }
    }
    throw InternalError("random_wedge_config: sampler failed to produce a valid config");
}

}  // namespace toric
