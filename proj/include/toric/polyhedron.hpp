#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toric/int_matrix.hpp"
#include "toric/numeric.hpp"

namespace toric {

// One closed or open halfspace: normal . x <= offset, or < when strict.
struct LinearConstraint {
    RatVec normal;
    Rat offset;
    bool strict = false;
};

// H-description of a rational polyhedron. Strictness is carried as a flag
// end-to-end; no epsilon perturbation anywhere.
struct RationalPolyhedron {
    std::size_t dim = 0;
    std::vector<LinearConstraint> ineqs;

    explicit RationalPolyhedron(std::size_t d = 0) : dim(d) {}

    void add(RatVec normal, Rat offset, bool strict = false);
    // a . x == b as a pair of opposite weak inequalities
    void add_eq(const RatVec& normal, const Rat& offset);
};

// Nonnegative combination of the input inequalities with zero normal and
// contradictory right-hand side; proves emptiness by substitution.
struct FarkasCertificate {
    RatVec coeffs;   // one per input inequality
    Rat combined_offset;
    bool strict = false;  // combination uses at least one strict inequality
};

struct LpResult {
    bool feasible = false;
    RatVec witness;                        // set when feasible
    std::optional<FarkasCertificate> certificate;  // set when infeasible
};

// Exact rational feasibility by Fourier-Motzkin elimination. Returns either
// a witness satisfying every inequality (strictly where flagged) or a
// Farkas certificate; never both.
LpResult lp_feasible(const RationalPolyhedron& P);

// Checks a certificate against the system it came from.
bool verify_farkas(const RationalPolyhedron& P, const FarkasCertificate& c);

// Some nonzero rational recession direction of P (ignoring strictness and
// offsets), or nullopt when the recession cone is {0}.
std::optional<RatVec> recession_direction(const RationalPolyhedron& P);

// All integer points of a bounded P. Throws UnboundedPolyhedronError when a
// feasible P has a nonzero recession direction.
std::vector<IntVec> enumerate_lattice_points(const RationalPolyhedron& P);

struct IntegerFeasibility {
    bool feasible = false;
    IntVec witness;
    // How emptiness was established: "lp" (Farkas certificate below),
    // "bounded-scan" or "projection" (recursion on a lattice quotient).
    std::string emptiness_proof;
    std::optional<FarkasCertificate> certificate;
};

// Integer feasibility for dim <= 4 (desk-scale contract), total also on
// unbounded input: a nonzero integer recession direction is quotiented out
// and the projection solved recursively.
IntegerFeasibility integer_feasible(const RationalPolyhedron& P);

// Shared small predicates, all decided by exact LP on the dual side.
bool origin_in_convex_hull(const std::vector<IntVec>& points);
bool origin_in_relative_interior(const std::vector<IntVec>& points);
// u in cone(generators), closed cone.
bool cone_member(const IntVec& u, const std::vector<IntVec>& generators);

}  // namespace toric
