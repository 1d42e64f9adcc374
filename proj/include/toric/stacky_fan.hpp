#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "toric/gale.hpp"

namespace toric {

// Complete simplicial stacky fan: marked ray vectors, maximal cones as
// index sets of size lattice_rank, and the Gale-dual Picard data.
struct StackyFan {
    std::size_t lattice_rank = 0;
    IntVectorCollection rays;
    std::vector<std::vector<std::size_t>> max_cones;
    GaleDualPair pic;  // primal = rays, dual = invariant divisor classes

    std::size_t n_rays() const { return rays.size(); }
    std::size_t picard_rank() const { return n_rays() - lattice_rank; }
    DivisorClass divisor(std::size_t i) const { return pic.dual_class(i); }
    // Free part of -K = sum of the divisor classes.
    IntVec minus_canonical() const { return pic.minus_canonical_free(); }
    bool picard_torsion_free() const { return pic.torsion_orders.empty(); }
};

// Assembles a fan from rays and maximal cones, recomputing Picard data by
// Gale duality. `dual_override` fixes the Pic coordinates to the caller's
// (must be unimodularly equivalent to the canonical dual and torsion-free).
StackyFan make_fan(const IntVectorCollection& rays,
                   std::vector<std::vector<std::size_t>> max_cones,
                   const std::optional<IntVectorCollection>& dual_override = std::nullopt,
                   bool validate = true);

// Combinatorial completeness certificate: every ridge (facet of a maximal
// cone) is shared by exactly two maximal cones; cones are simplicial of
// full dimension. Throws on violation.
void validate_fan_combinatorics(const StackyFan& fan);

// Fan from divisor classes: requires the origin interior to the dual hull,
// all vertices, simplicial; maximal cones are the complements of the facet
// complements. Throws NotFanoError when the predicates fail.
StackyFan build_fan_from_dual(const IntVectorCollection& dual);

struct FanoFlags {
    bool fano = false;
    bool nef_fano = false;
};

// Exact convexity test of the union of marked simplices: nef-Fano iff the
// support function values h_cone(v_j) stay <= 1, Fano iff strict off the
// cone (vertices + simpliciality).
FanoFlags check_fano(const StackyFan& fan);

// rk K_0 = sum over maximal cones of |omega(v_cone)|, evaluated on the
// Gale-dual side as |D_tors| * |det E_complement|; equals the number of
// maximal cones in the variety case.
Int rank_k0(const StackyFan& fan);

// All minimal non-faces of the fan's simplicial structure.
std::vector<std::vector<std::size_t>> minimal_non_faces(const StackyFan& fan);

struct Picard3Decomposition {
    std::size_t t = 0;
    std::vector<std::vector<std::size_t>> X;  // 2t+1 disjoint classes, cyclic order
    std::vector<RatVec> l;                    // functionals on Pic_R, l_i(K) = 0
    RatVec ample_like;                        // l with l(E_j) > 0 for all j
    bool strict_signs = false;                // strict pattern (Fano) vs weak (nef)
    int orientation = 0;                      // sign of det(W_0, W_1) after ordering
};

// Combinatorial classification of Picard-number-three fans: recovers t and
// the cyclic decomposition from the primitive collections, then certifies
// the sign-pattern functionals by exact LP. Structural failures are
// reported as NotProjectiveError.
Picard3Decomposition decompose_picard3(const StackyFan& fan);

// The index sets with nonzero reduced homology of C_I: the empty set, all
// of Sigma(1), and the cyclic unions X_i..X_{i+t} with their complements.
std::vector<std::vector<std::size_t>> nonzero_homology_index_sets(
    const Picard3Decomposition& d, std::size_t n_rays);

}  // namespace toric
