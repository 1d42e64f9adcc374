#include "toric/gale.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace toric {

Int GaleDualPair::torsion_order() const {
    Int t = 1;
    for (const Int& d : torsion_orders) t *= d;
    return t;
}

IntVec GaleDualPair::minus_canonical_free() const {
    IntVec s(dual_free.dim, Int(0));
    for (const auto& e : dual_free.vectors)
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += e[j];
    return s;
}

DivisorClass GaleDualPair::dual_class(std::size_t i) const {
    return DivisorClass{dual_free.vectors[i], dual_torsion[i]};
}

Rat VolumeForm::value(const std::vector<IntVec>& vectors) const {
    return scale * Rat(determinant(IntMatrix::from_columns(vectors)));
}

GaleDualPair gale_dual(const IntVectorCollection& v) {
    const std::size_t n = v.size(), r = v.dim;
    if (n == 0) throw NotSpanningError("gale_dual: empty collection");
    // M is the matrix of the dual inclusion C^v -> Z^n; D = coker(M).
    IntMatrix M = v.as_columns().transposed();  // n x r
    SmithForm f = smith_normal_form(M);
    if (f.rank != r) throw NotSpanningError("gale_dual: vectors do not span the ambient space");

    GaleDualPair pair;
    pair.primal = v;
    // In coordinates y = U x the image of M is spanned by d_i e_i, so the
    // free part of D is cut out by the last n-r rows of U and the torsion
    // components by the rows with d_i > 1.
    std::vector<IntVec> free_rows;
    for (std::size_t i = r; i < n; ++i) free_rows.push_back(f.U.row(i));
    IntMatrix F = free_rows.empty() ? IntMatrix(0, n) : IntMatrix::from_rows(free_rows);
    IntMatrix canon = F.rows() ? hermite_row_basis(F) : F;
    if (canon.rows() != n - r) throw InternalError("gale_dual: free part lost rank");

    pair.dual_free.dim = n - r;
    for (std::size_t i = 0; i < n; ++i) pair.dual_free.vectors.push_back(canon.column(i));

    std::vector<std::size_t> tors_rows;
    for (std::size_t i = 0; i < r; ++i)
        if (f.d[i] > 1) {
            pair.torsion_orders.push_back(f.d[i]);
            tors_rows.push_back(i);
        }
    for (std::size_t i = 0; i < n; ++i) {
        IntVec comp;
        for (std::size_t t = 0; t < tors_rows.size(); ++t) {
            Int m = f.U.at(tors_rows[t], i) % pair.torsion_orders[t];
            if (m < 0) m += pair.torsion_orders[t];
            comp.push_back(m);
        }
        pair.dual_torsion.push_back(std::move(comp));
    }
    return pair;
}

bool contains_origin_interior(const IntVectorCollection& dual) {
    if (dual.size() == 0) throw PrecondViolatedError("contains_origin_interior: empty collection");
    RationalPolyhedron P(dual.dim);
    for (const auto& e : dual.vectors) {
        RatVec n(dual.dim);
        for (std::size_t j = 0; j < dual.dim; ++j) n[j] = -Rat(e[j]);
        P.add(std::move(n), Rat(0), true);  // l(E_i) > 0
    }
    return lp_feasible(P).feasible;
}

std::vector<IntVec> project_mod_canonical(const IntVectorCollection& dual) {
    const std::size_t p = dual.dim;
    IntVec k(p, Int(0));
    for (const auto& e : dual.vectors)
        for (std::size_t j = 0; j < p; ++j) k[j] -= e[j];
    bool k_zero = std::all_of(k.begin(), k.end(), [](const Int& x) { return x == 0; });
    if (k_zero) throw PrecondViolatedError("projection mod K: canonical class is zero");
    // Covectors vanishing on K: kernel of the 1 x p matrix K^T.
    IntMatrix kt(1, p);
    for (std::size_t j = 0; j < p; ++j) kt.at(0, j) = k[j];
    IntMatrix phi = integer_kernel_basis(kt);  // p x (p-1), columns are covectors
    std::vector<IntVec> out;
    for (const auto& e : dual.vectors) {
        IntVec img(phi.cols(), Int(0));
        for (std::size_t c = 0; c < phi.cols(); ++c)
            for (std::size_t j = 0; j < p; ++j) img[c] += phi.at(j, c) * e[j];
        out.push_back(std::move(img));
    }
    return out;
}

namespace {

std::vector<IntVec> distinct_vectors(const std::vector<IntVec>& vs) {
    std::vector<IntVec> out;
    for (const auto& v : vs)
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
}

// Enumerate subsets of `pool` of size exactly k, calling f on each.
void for_subsets(std::size_t n, std::size_t k,
                 const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == k) {
            f(idx);
            return;
        }
        for (std::size_t i = start; i + (k - depth) <= n; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

}  // namespace

PolytopePredicates polytope_predicates(const GaleDualPair& pair) {
    if (!contains_origin_interior(pair.dual_free))
        throw PrecondViolatedError("polytope_predicates: origin not interior to conv(v)");
    const std::size_t n = pair.n();
    const std::size_t p = pair.dual_free.dim;
    std::vector<IntVec> bars = project_mod_canonical(pair.dual_free);

    PolytopePredicates out;

    // Every v_i a vertex: condition (iii), origin interior to the hull of
    // the remaining projections.
    out.is_vertex_set = true;
    for (std::size_t i = 0; i < n && out.is_vertex_set; ++i) {
        std::vector<IntVec> rest;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) rest.push_back(bars[j]);
        if (!origin_in_relative_interior(rest)) out.is_vertex_set = false;
    }

    // Simpliciality: no index set of size < p puts the origin inside the
    // hull; it is enough to range over distinct projected points.
    out.is_simplicial = true;
    std::vector<IntVec> distinct = distinct_vectors(bars);
    for (std::size_t sz = 1; sz < p && sz <= distinct.size() && out.is_simplicial; ++sz) {
        for_subsets(distinct.size(), sz, [&](const std::vector<std::size_t>& idx) {
            if (!out.is_simplicial) return;
            std::vector<IntVec> pts;
            for (auto i : idx) pts.push_back(distinct[i]);
            if (origin_in_convex_hull(pts)) out.is_simplicial = false;
        });
    }

    if (!out.is_vertex_set || !out.is_simplicial) return out;

    // Facet complements: under the two predicates above these are exactly
    // the p-element index sets whose projections surround the origin.
    // Memoize per distinct point tuple.
    std::map<std::vector<IntVec>, bool> cache;
    for_subsets(n, p, [&](const std::vector<std::size_t>& idx) {
        std::vector<IntVec> pts;
        for (auto i : idx) pts.push_back(bars[i]);
        std::vector<IntVec> key = pts;
        std::sort(key.begin(), key.end());
        auto it = cache.find(key);
        bool ok;
        if (it != cache.end())
            ok = it->second;
        else {
            ok = origin_in_relative_interior(pts);
            cache.emplace(std::move(key), ok);
        }
        if (ok) out.facet_complements.push_back(idx);
    });
    return out;
}

BasisDuality check_basis_duality(const GaleDualPair& pair, const std::vector<std::size_t>& A) {
    const std::size_t n = pair.n(), r = pair.primal.dim;
    if (A.size() != r) throw PrecondViolatedError("check_basis_duality: |A| != rank C");
    BasisDuality out;
    std::vector<IntVec> vs;
    for (auto i : A) vs.push_back(pair.primal.vectors[i]);
    out.v_side = abs(determinant(IntMatrix::from_columns(vs))) == 1;

    // E-side computed independently of the Smith data that produced the
    // dual: the classes {q(e_j) : j in complement} generate D iff those
    // unit columns together with the relation columns generate Z^n.
    std::vector<bool> in_A(n, false);
    for (auto i : A) in_A[i] = true;
    std::vector<IntVec> cols;
    for (std::size_t j = 0; j < n; ++j) {
        if (in_A[j]) continue;
        IntVec e(n, Int(0));
        e[j] = 1;
        cols.push_back(std::move(e));
    }
    IntMatrix M = pair.primal.as_columns().transposed();  // n x r
    for (std::size_t c = 0; c < M.cols(); ++c) cols.push_back(M.column(c));
    out.e_side = columns_generate_lattice(IntMatrix::from_columns(cols));
    return out;
}

std::pair<Rat, Rat> volume_duality_check(const GaleDualPair& pair,
                                         const std::vector<std::size_t>& sigma) {
    const std::size_t n = pair.n(), r = pair.primal.dim;
    if (sigma.size() != n) throw PrecondViolatedError("volume_duality_check: bad permutation");
    std::vector<IntVec> vs, es;
    for (std::size_t i = 0; i < r; ++i) vs.push_back(pair.primal.vectors[sigma[i]]);
    for (std::size_t i = r; i < n; ++i) es.push_back(pair.dual_free.vectors[sigma[i]]);
    VolumeForm omega;                              // unit covolume on C
    VolumeForm omega_dual{Rat(pair.torsion_order())};  // covolume |D_tors| on D/D_tors
    Rat lhs = abs(omega.value(vs));
    Rat rhs = abs(omega_dual.value(es));
    return {lhs, rhs};
}

bool unimodular_equivalent(const IntVectorCollection& a, const IntVectorCollection& b) {
    if (a.dim != b.dim || a.size() != b.size()) return false;
    const std::size_t d = a.dim, n = a.size();
    IntMatrix A = a.as_columns(), B = b.as_columns();
    if (rank_of(A) != d || rank_of(B) != d) return false;

    // Greedily pick d independent columns of A, solve T on them, then check
    // T is integral with |det| = 1 and maps every column correctly.
    std::vector<std::size_t> pick;
    std::vector<IntVec> chosen;
    for (std::size_t j = 0; j < n && pick.size() < d; ++j) {
        chosen.push_back(a.vectors[j]);
        if (rank_of(IntMatrix::from_columns(chosen)) == chosen.size())
            pick.push_back(j);
        else
            chosen.pop_back();
    }
    if (pick.size() != d) return false;
    IntMatrix As = IntMatrix::from_columns(chosen);
    // T = Bs * As^{-1}, recovered one row at a time by rational solves.
    IntMatrix T(d, d);
    for (std::size_t row = 0; row < d; ++row) {
        // Solve As^T t_row = Bs_row over Q.
        RatVec rhs(d);
        for (std::size_t c = 0; c < d; ++c) rhs[c] = Rat(b.vectors[pick[c]][row]);
        auto sol = solve_rational(As.transposed(), rhs);
        if (!sol) return false;
        for (std::size_t c = 0; c < d; ++c) {
            if (!is_integer((*sol)[c])) return false;
            T.at(row, c) = rat_num((*sol)[c]);
        }
    }
    if (abs(determinant(T)) != 1) return false;
    return T * A == B;
}

GaleDualPair make_pair_from_dual(const IntVectorCollection& dual) {
    if (!columns_generate_lattice(dual.as_columns()))
        throw NotSpanningError("make_pair_from_dual: dual vectors must generate the lattice");
    GaleDualPair swapped = gale_dual(dual);
    if (!swapped.torsion_orders.empty())
        throw InternalError("make_pair_from_dual: unexpected torsion on the primal side");
    GaleDualPair pair;
    pair.primal = swapped.dual_free;
    pair.dual_free = dual;
    pair.dual_torsion.assign(dual.size(), IntVec{});
    return pair;
}

}  // namespace toric
