#include "toric/cohomology.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace toric {

namespace {

using Mask = std::uint64_t;

// Sparse Smith invariants (diagonal only): pivot on +-1 entries first to
// avoid coefficient growth, finish any residual block densely.
std::vector<Int> sparse_invariants(std::size_t nrows,
                                   const std::vector<std::tuple<std::size_t, std::size_t, int>>& entries) {
    std::vector<std::map<std::size_t, Int>> rows(nrows);
    for (const auto& [r, c, v] : entries)
        if (v != 0) rows[r][c] += v;
    std::vector<bool> row_alive(nrows, true);
    std::vector<Int> invariants;

    while (true) {
        // Among +-1 pivots prefer the sparsest row to limit fill-in.
        std::size_t best_r = nrows, best_c = 0, best_nnz = SIZE_MAX;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (!row_alive[r] || rows[r].size() >= best_nnz) continue;
            for (const auto& [c, v] : rows[r])
                if (v == 1 || v == -1) {
                    best_r = r;
                    best_c = c;
                    best_nnz = rows[r].size();
                    break;
                }
        }
        if (best_r == nrows) break;
        Int pv = rows[best_r][best_c];
        for (std::size_t r = 0; r < nrows; ++r) {
            if (!row_alive[r] || r == best_r) continue;
            auto it = rows[r].find(best_c);
            if (it == rows[r].end()) continue;
            Int factor = it->second * pv;  // pv in {1,-1}
            for (const auto& [c, v] : rows[best_r]) {
                Int& dst = rows[r][c];
                dst -= factor * v;
                if (dst == 0) rows[r].erase(c);
            }
        }
        row_alive[best_r] = false;
        invariants.push_back(1);
    }

    // Residual block without unit entries: finish densely.
    std::vector<std::size_t> live_rows;
    std::set<std::size_t> live_cols;
    for (std::size_t r = 0; r < nrows; ++r) {
        if (!row_alive[r]) continue;
        bool any = false;
        for (const auto& [c, v] : rows[r])
            if (v != 0) {
                any = true;
                live_cols.insert(c);
            }
        if (any) live_rows.push_back(r);
    }
    if (!live_rows.empty()) {
        std::map<std::size_t, std::size_t> cidx;
        std::size_t k = 0;
        for (auto c : live_cols) cidx[c] = k++;
        IntMatrix dense(live_rows.size(), live_cols.size());
        for (std::size_t i = 0; i < live_rows.size(); ++i)
            for (const auto& [c, v] : rows[live_rows[i]])
                if (v != 0) dense.at(i, cidx[c]) = v;
        SmithForm f = smith_normal_form(dense);
        for (const Int& d : f.d)
            if (d != 0) invariants.push_back(d);
    }
    return invariants;
}

}  // namespace

SimplicialComplexCI complex_ci(const StackyFan& fan, std::vector<std::size_t> I) {
    std::sort(I.begin(), I.end());
    I.erase(std::unique(I.begin(), I.end()), I.end());
    if (I.size() > 63) throw DimensionTooLargeError("complex_ci: vertex set too large");
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < I.size(); ++i) local[I[i]] = i;

    std::unordered_set<Mask> faces;
    faces.insert(0);  // the empty face (boundary of the zero cone)
    for (const auto& cone : fan.max_cones) {
        Mask m = 0;
        int bits = 0;
        for (auto r : cone) {
            auto it = local.find(r);
            if (it != local.end()) {
                m |= Mask(1) << it->second;
                ++bits;
            }
        }
        if (bits > 22) throw DimensionTooLargeError("complex_ci: cone restriction too large");
        Mask s = m;
        while (true) {
            faces.insert(s);
            if (s == 0) break;
            s = (s - 1) & m;
        }
    }
    SimplicialComplexCI c;
    c.vertices = std::move(I);
    for (Mask f : faces) {
        std::size_t card = std::size_t(__builtin_popcountll(f));
        if (c.faces_by_card.size() <= card) c.faces_by_card.resize(card + 1);
        c.faces_by_card[card].push_back(f);
    }
    for (auto& level : c.faces_by_card) std::sort(level.begin(), level.end());
    return c;
}

bool HomologyResult::nonzero() const {
    for (long r : ranks)
        if (r != 0) return true;
    for (const auto& t : torsion)
        if (!t.empty()) return true;
    return false;
}

bool HomologyResult::torsion_only() const {
    if (!nonzero()) return false;
    for (long r : ranks)
        if (r != 0) return false;
    return true;
}

long HomologyResult::rank_at_degree(long degree) const {
    std::size_t idx = std::size_t(degree + 1);
    return idx < ranks.size() ? ranks[idx] : 0;
}

HomologyResult reduced_homology(const SimplicialComplexCI& c) {
    const std::size_t levels = c.faces_by_card.size();  // cardinalities 0..levels-1
    // rank and invariant factors of each boundary map card -> card-1
    std::vector<std::size_t> brank(levels + 1, 0);
    std::vector<std::vector<Int>> invariants(levels + 1);
    for (std::size_t card = 1; card < levels; ++card) {
        const auto& cols = c.faces_by_card[card];
        const auto& rows_faces = c.faces_by_card[card - 1];
        std::map<Mask, std::size_t> row_of;
        for (std::size_t i = 0; i < rows_faces.size(); ++i) row_of[rows_faces[i]] = i;
        std::vector<std::tuple<std::size_t, std::size_t, int>> entries;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            Mask f = cols[j];
            int sign = 1;
            for (std::size_t b = 0; b < 64; ++b) {
                if (!((f >> b) & 1)) continue;
                Mask sub = f & ~(Mask(1) << b);
                entries.emplace_back(row_of.at(sub), j, sign);
                sign = -sign;
            }
        }
        std::vector<Int> inv = sparse_invariants(rows_faces.size(), entries);
        brank[card] = inv.size();
        invariants[card] = std::move(inv);
    }
    HomologyResult h;
    h.ranks.resize(levels, 0);
    h.torsion.resize(levels);
    for (std::size_t card = 0; card < levels; ++card) {
        long free_rank = long(c.faces_by_card[card].size()) - long(brank[card]) -
                         long(card + 1 <= levels ? brank[card + 1] : 0);
        h.ranks[card] = free_rank;
        if (card + 1 < invariants.size())
            for (const Int& d : invariants[card + 1])
                if (d > 1) h.torsion[card].push_back(d);
    }
    return h;
}

std::vector<std::vector<std::size_t>> primitive_collections(const StackyFan& fan) {
    return minimal_non_faces(fan);
}

Int CohomologyTable::total() const {
    Int t = 0;
    for (const Int& v : h) t += v;
    return t;
}

// Grouped fiber of an index set: variables are the per-group sums of the
// exponents, with composition-count weights recovering the full count.
struct CohomologyEngine::FiberTemplate {
    struct Group {
        bool in_I;
        IntVec e_free, e_tors;
        long size;
    };
    std::vector<Group> groups;
    IntMatrix stacked;     // (p + T) x (G + T)
    SmithForm snf;         // of stacked
    IntMatrix kernel;      // (G + T) x K
};

CohomologyEngine::CohomologyEngine(StackyFan fan) : fan_(std::move(fan)) {}
CohomologyEngine::CohomologyEngine(CohomologyEngine&&) noexcept = default;
CohomologyEngine::~CohomologyEngine() = default;

const std::optional<Picard3Decomposition>& CohomologyEngine::decomposition() {
    if (!decomp_tried_) {
        decomp_tried_ = true;
        if (fan_.picard_rank() == 3) {
            try {
                decomp_ = decompose_picard3(fan_);
            } catch (const NotProjectiveError&) {
                decomp_.reset();
            }
        }
    }
    return decomp_;
}

const std::vector<std::vector<std::size_t>>& CohomologyEngine::forbidden_index_sets() {
    if (forbidden_) return *forbidden_;
    std::vector<std::vector<std::size_t>> list;
    if (decomposition()) {
        list = nonzero_homology_index_sets(*decomp_, fan_.n_rays());
    } else {
        const std::size_t n = fan_.n_rays();
        if (n > 16)
            throw DimensionTooLargeError(
                "forbidden_index_sets: no Picard-three classification and fan too large to scan");
        for (Mask m = 0; m < (Mask(1) << n); ++m) {
            std::vector<std::size_t> I;
            for (std::size_t i = 0; i < n; ++i)
                if ((m >> i) & 1) I.push_back(i);
            if (homology_of(I).nonzero()) list.push_back(std::move(I));
        }
    }
    for (const auto& I : list) {
        const HomologyResult& h = homology_of(I);
        if (!h.nonzero())
            throw InternalError("forbidden_index_sets: classified set has zero homology");
        if (h.torsion_only())
            throw InternalError("forbidden_index_sets: torsion-only homology is ambiguous for dimensions");
    }
    forbidden_ = std::move(list);
    return *forbidden_;
}

const HomologyResult& CohomologyEngine::homology_of(const std::vector<std::size_t>& I) {
    std::vector<std::size_t> key = I;
    std::sort(key.begin(), key.end());
    auto it = homology_cache_.find(key);
    if (it != homology_cache_.end()) return it->second;
    HomologyResult h = reduced_homology(complex_ci(fan_, key));
    return homology_cache_.emplace(std::move(key), std::move(h)).first->second;
}

const CohomologyEngine::FiberTemplate& CohomologyEngine::fiber_template(
    const std::vector<std::size_t>& I) {
    std::vector<std::size_t> key = I;
    std::sort(key.begin(), key.end());
    auto it = fiber_cache_.find(key);
    if (it != fiber_cache_.end()) return it->second;

    const std::size_t n = fan_.n_rays(), p = fan_.picard_rank();
    const std::size_t T = fan_.pic.torsion_orders.size();
    std::vector<bool> in_I(n, false);
    for (auto i : key) in_I[i] = true;

    FiberTemplate tpl;
    std::map<std::tuple<bool, IntVec, IntVec>, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) {
        auto k = std::make_tuple(in_I[i], fan_.pic.dual_free.vectors[i], fan_.pic.dual_torsion[i]);
        auto f = index.find(k);
        if (f == index.end()) {
            index.emplace(k, tpl.groups.size());
            tpl.groups.push_back({in_I[i], fan_.pic.dual_free.vectors[i],
                                  fan_.pic.dual_torsion[i], 1});
        } else {
            ++tpl.groups[f->second].size;
        }
    }
    const std::size_t G = tpl.groups.size();
    tpl.stacked = IntMatrix(p + T, G + T);
    for (std::size_t g = 0; g < G; ++g) {
        for (std::size_t r = 0; r < p; ++r) tpl.stacked.at(r, g) = tpl.groups[g].e_free[r];
        for (std::size_t t = 0; t < T; ++t) tpl.stacked.at(p + t, g) = tpl.groups[g].e_tors[t];
    }
    for (std::size_t t = 0; t < T; ++t) tpl.stacked.at(p + t, G + t) = fan_.pic.torsion_orders[t];
    tpl.snf = smith_normal_form(tpl.stacked);
    tpl.kernel = integer_kernel_basis(tpl.stacked);
    return fiber_cache_.emplace(std::move(key), std::move(tpl)).first->second;
}

namespace {

// Solve A x = b reusing a cached Smith form of A.
std::optional<IntVec> solve_with(const SmithForm& f, std::size_t cols, const IntVec& b) {
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

}  // namespace

bool CohomologyEngine::forbidden_membership(const std::vector<std::size_t>& I,
                                            const DivisorClass& L) {
    const FiberTemplate& tpl = fiber_template(I);
    const std::size_t p = fan_.picard_rank(), T = fan_.pic.torsion_orders.size();
    if (L.free.size() != p || L.torsion.size() != T)
        throw PrecondViolatedError("forbidden_membership: class has wrong shape for this Picard group");
    IntVec rhs(p + T);
    for (std::size_t r = 0; r < p; ++r) rhs[r] = L.free[r];
    for (std::size_t t = 0; t < T; ++t) rhs[p + t] = L.torsion[t];
    auto part = solve_with(tpl.snf, tpl.stacked.cols(), rhs);
    if (!part) return false;
    const std::size_t K = tpl.kernel.cols();
    RationalPolyhedron poly(K);
    for (std::size_t g = 0; g < tpl.groups.size(); ++g) {
        RatVec row(K);
        for (std::size_t k = 0; k < K; ++k) row[k] = Rat(tpl.kernel.at(g, k));
        Rat c0((*part)[g]);
        if (tpl.groups[g].in_I) {
            // sum over the group <= -size
            poly.add(std::move(row), Rat(-tpl.groups[g].size) - c0);
        } else {
            // sum over the group >= 0
            for (auto& v : row) v = -v;
            poly.add(std::move(row), c0);
        }
    }
    return integer_feasible(poly).feasible;
}

Int CohomologyEngine::fiber_count(const std::vector<std::size_t>& I, const DivisorClass& L) {
    const FiberTemplate& tpl = fiber_template(I);
    const std::size_t p = fan_.picard_rank(), T = fan_.pic.torsion_orders.size();
    if (L.free.size() != p || L.torsion.size() != T)
        throw PrecondViolatedError("fiber_count: class has wrong shape for this Picard group");
    IntVec rhs(p + T);
    for (std::size_t r = 0; r < p; ++r) rhs[r] = L.free[r];
    for (std::size_t t = 0; t < T; ++t) rhs[p + t] = L.torsion[t];
    auto part = solve_with(tpl.snf, tpl.stacked.cols(), rhs);
    if (!part) return 0;
    const std::size_t K = tpl.kernel.cols();
    RationalPolyhedron poly(K);
    for (std::size_t g = 0; g < tpl.groups.size(); ++g) {
        RatVec row(K);
        for (std::size_t k = 0; k < K; ++k) row[k] = Rat(tpl.kernel.at(g, k));
        Rat c0((*part)[g]);
        if (tpl.groups[g].in_I) {
            poly.add(std::move(row), Rat(-tpl.groups[g].size) - c0);
        } else {
            for (auto& v : row) v = -v;
            poly.add(std::move(row), c0);
        }
    }
    std::vector<IntVec> pts;
    try {
        pts = enumerate_lattice_points(poly);
    } catch (const UnboundedPolyhedronError&) {
        // Completeness forces finite cohomology; an unbounded fiber would
        // mean the certificate failed.
        throw EnumerationUnboundedError("fiber_count: unbounded fiber for a complete fan");
    }
    Int total = 0;
    for (const auto& y : pts) {
        Int weight = 1;
        for (std::size_t g = 0; g < tpl.groups.size(); ++g) {
            Int cg = (*part)[g];
            for (std::size_t k = 0; k < K; ++k) cg += tpl.kernel.at(g, k) * y[k];
            long m = tpl.groups[g].size;
            Int slack = tpl.groups[g].in_I ? (-cg - m) : cg;
            weight *= binomial(slack + m - 1, m - 1);
        }
        total += weight;
    }
    return total;
}

CohomologyTable CohomologyEngine::cohomology(const DivisorClass& L) {
    CohomologyTable table;
    table.h.assign(fan_.lattice_rank + 1, Int(0));
    for (const auto& I : forbidden_index_sets()) {
        const HomologyResult& hom = homology_of(I);
        bool any_rank = false;
        for (long r : hom.ranks) any_rank = any_rank || r > 0;
        if (!any_rank) continue;
        Int count = fiber_count(I, L);
        if (count == 0) continue;
        for (std::size_t idx = 0; idx < hom.ranks.size(); ++idx) {
            if (hom.ranks[idx] <= 0) continue;
            // chain degree idx-1 feeds H^idx
            if (idx < table.h.size()) table.h[idx] += count * hom.ranks[idx];
        }
    }
    return table;
}

bool CohomologyEngine::vanishing(const DivisorClass& L, bool higher_only) {
    for (const auto& I : forbidden_index_sets()) {
        if (higher_only && I.empty()) continue;
        if (forbidden_membership(I, L)) return false;
    }
    return true;
}

UnionCheck CohomologyEngine::union_of_primitives_check(const std::vector<std::size_t>& I) {
    if (I.empty()) throw PrecondViolatedError("union_of_primitives_check: empty index set");
    if (!homology_of(I).nonzero())
        throw PrecondViolatedError("union_of_primitives_check: C_I has zero homology");
    if (!primitives_) primitives_ = primitive_collections(fan_);
    std::set<std::size_t> target(I.begin(), I.end());
    UnionCheck out;
    std::set<std::size_t> covered;
    for (const auto& pc : *primitives_) {
        bool inside = std::all_of(pc.begin(), pc.end(),
                                  [&](std::size_t v) { return target.count(v) > 0; });
        if (inside) {
            out.witness.push_back(pc);
            covered.insert(pc.begin(), pc.end());
        }
    }
    out.is_union = covered == target;
    if (!out.is_union) out.witness.clear();
    return out;
}

DivisorClass CohomologyEngine::divisor_class(IntVec free) const {
    if (free.size() != fan_.picard_rank())
        throw PrecondViolatedError("divisor_class: wrong free rank");
    return DivisorClass{std::move(free), IntVec(fan_.pic.torsion_orders.size(), Int(0))};
}

DivisorClass CohomologyEngine::class_difference(const DivisorClass& a, const DivisorClass& b) const {
    DivisorClass d;
    d.free.resize(a.free.size());
    for (std::size_t i = 0; i < a.free.size(); ++i) d.free[i] = a.free[i] - b.free[i];
    d.torsion.resize(a.torsion.size());
    for (std::size_t i = 0; i < a.torsion.size(); ++i) {
        Int m = (a.torsion[i] - b.torsion[i]) % fan_.pic.torsion_orders[i];
        if (m < 0) m += fan_.pic.torsion_orders[i];
        d.torsion[i] = m;
    }
    return d;
}

}  // namespace toric
