#pragma once

#include <optional>

#include "toric/fano_family.hpp"
#include "toric/numeric.hpp"

namespace toric {

// Exact-rational evaluation of the bound machinery for the family
// Y_{n,k,a}. Everything is closed-form; no search or geometry here.
struct BoundReport {
    FamilyParams params;
    Rat eps;
    Rat c = 1;
    Int amplitude_bound;        // n + k + ceil(n/a) + 1
    Rat t_eps_bound;            // count bound on z-levels with large y-spread
    Int z_fixed_bound;          // (n+2a+1)(n+3)
    Rat z_fixed_strong_bound;   // refined per-level bound under the eps assumption
    Rat e_value;                // E(n,k,a,eps)
    Int rk_k0;
    Rat margin;                 // c * rk_k0 - E
};

// Standing assumption of the proof: 2a/n <= eps < 1/4.
void require_admissible_eps(long n, long a, const Rat& eps);

Rat evaluate_E(long n, long k, long a, const Rat& eps);

BoundReport bound_components(long n, long k, long a, const Rat& eps, const Rat& c = Rat(1));

// Smallest k with c * rk K_0 > E, scanning k = 2..k_max with exact
// comparisons; nullopt when no k below the cutoff works.
std::optional<long> counterexample_threshold(long n, long a, const Rat& eps,
                                             const Rat& c = Rat(1), long k_max = 200000);

// P_2(n, a, eps) as printed, the leading k^2 coefficient of the difference.
Rat leading_coefficient_P2(long n, long a, const Rat& eps, const Rat& c);

}  // namespace toric
