#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "toric/int_matrix.hpp"
#include "toric/polyhedron.hpp"

namespace toric {

// Ordered list of integer vectors in a common ambient lattice Z^dim.
struct IntVectorCollection {
    std::size_t dim = 0;
    std::vector<IntVec> vectors;
    std::vector<std::string> labels;  // optional markings

    std::size_t size() const { return vectors.size(); }
    IntMatrix as_columns() const { return IntMatrix::from_columns(vectors); }
};

// An element of Pic = Z^free_rank (+) torsion. Torsion components are kept
// reduced modulo the group orders of the ambient pair.
struct DivisorClass {
    IntVec free;
    IntVec torsion;

    bool operator==(const DivisorClass&) const = default;
};

// Gale dual data of a spanning collection. The dual lattice D is presented
// as Z^(n - rank) (+) (+)_j Z/orders_j; dual_free holds the free parts in a
// canonical basis (Hermite-normalized), dual_torsion the per-vector torsion
// components.
struct GaleDualPair {
    IntVectorCollection primal;     // v_1..v_n spanning C (x) R
    IntVectorCollection dual_free;  // E_1..E_n free parts in D
    std::vector<IntVec> dual_torsion;
    IntVec torsion_orders;          // cyclic orders > 1, divisibility chain

    std::size_t n() const { return primal.size(); }
    Int torsion_order() const;
    // -K = E_1 + ... + E_n (free part).
    IntVec minus_canonical_free() const;
    DivisorClass dual_class(std::size_t i) const;
};

// Volume form: value on vectors is scale * det of their coordinates.
struct VolumeForm {
    Rat scale = 1;
    Rat value(const std::vector<IntVec>& vectors) const;
};

// Gale dual of a collection spanning C (x) R. Throws NotSpanningError
// otherwise. The dual generates D = coker(C^v -> Z^n); torsion appears
// exactly when the v_i fail to generate the lattice C.
GaleDualPair gale_dual(const IntVectorCollection& v);

// True iff a functional l with l(E_i) > 0 for all i exists; by Gale duality
// this decides whether the interior of conv(v_1..v_n) contains the origin.
bool contains_origin_interior(const IntVectorCollection& dual);

struct PolytopePredicates {
    bool is_vertex_set = false;
    bool is_simplicial = false;
    std::vector<std::vector<std::size_t>> facet_complements;  // 0-based index sets
};

// The section-2 predicates on the dual side: every v_i a vertex, hull
// simplicial, and the complements of facet vertex sets. Requires
// contains_origin_interior (throws PrecondViolatedError otherwise).
PolytopePredicates polytope_predicates(const GaleDualPair& pair);

struct BasisDuality {
    bool v_side = false;  // {v_j : j in A} generates C
    bool e_side = false;  // {E_j : j in complement} generates D
    bool agree() const { return v_side == e_side; }
};

// Both sides computed independently; the two verdicts must coincide.
BasisDuality check_basis_duality(const GaleDualPair& pair, const std::vector<std::size_t>& A);

// |omega(v_sigma(1..dimV))| vs |omega'(E_sigma(dimV+1..n))| with forms
// normalized to unit covolume on C resp. |D_tors| on D/D_tors. Returns both
// sides; they are equal.
std::pair<Rat, Rat> volume_duality_check(const GaleDualPair& pair,
                                         const std::vector<std::size_t>& sigma);

// Ordered unimodular equivalence: an integer change of basis with |det| = 1
// carrying one collection onto the other, order preserved. Requires the
// collections to span their ambient space.
bool unimodular_equivalent(const IntVectorCollection& a, const IntVectorCollection& b);

// Projections of the E_i modulo the line R*K (the bar(E_i) of section 2),
// in integer coordinates given by a kernel basis of K.
std::vector<IntVec> project_mod_canonical(const IntVectorCollection& dual);

// Gale pair with prescribed dual coordinates: the primal is the canonical
// Gale dual of the given collection, which must generate its lattice
// (torsion-free Picard group). Keeps caller coordinates on the dual side.
GaleDualPair make_pair_from_dual(const IntVectorCollection& dual);

}  // namespace toric
