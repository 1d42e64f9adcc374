#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "toric/bounds.hpp"
#include "toric/cohomology.hpp"
#include "toric/fano_family.hpp"

namespace toric {

struct PairCheck {
    std::size_t i = 0, j = 0;      // positions in the collection
    std::string condition;         // which vanishing was certified
    bool ok = false;
};

struct LineBundleCollection {
    enum class Kind { exceptional, strong_exceptional };
    Kind kind = Kind::exceptional;
    std::vector<DivisorClass> bundles;  // ordered
    std::vector<PairCheck> certificate;

    std::size_t size() const { return bundles.size(); }
};

struct ExceptionalVerdict {
    bool ok = true;
    std::size_t bad_i = 0, bad_j = 0;
    std::string violating_set;
};

// Checks L_i - L_j against every forbidden set for i < j through the
// generic membership oracle; returns the first violating pair.
ExceptionalVerdict is_exceptional(CohomologyEngine& engine,
                                  const std::vector<DivisorClass>& bundles);

// Certificate trail for a (strong) collection; throws on violation.
LineBundleCollection certify_collection(CohomologyEngine& engine,
                                        std::vector<DivisorClass> bundles,
                                        LineBundleCollection::Kind kind);

struct SearchWindow {
    std::vector<std::pair<long, long>> ranges;  // inclusive, one per Pic coordinate
};

struct SearchResult {
    LineBundleCollection best;
    bool exact = false;  // search tree exhausted within budget
    std::uint64_t nodes = 0;
};

// Branch-and-bound over candidate bundles in the window. Pair admissibility
// is precomputed (closed forms when the fan is a family member); a set is
// admissible iff pairwise compatible with an acyclic forced-order digraph.
SearchResult max_exceptional_search(CohomologyEngine& engine, const SearchWindow& window,
                                    std::uint64_t budget,
                                    const std::optional<FamilyParams>& family = std::nullopt,
                                    std::size_t jobs = 1);

struct StrongCollectionResult {
    LineBundleCollection collection;
    RatVec shift;       // realized rational shift in Pic_R
    Rat delta;          // realized infinitesimal used for the shift
    Rat vol_p;          // Vol(P) with the lattice-normalized form
    Rat vol_p_hat;      // zonotope area in the quotient plane
    RatVec functional;  // the positive functional l
    Int rk_k0;
    Int target;         // ceil(3/4 rk)
};

// Constructive form of the three-quarters theorem: builds the zonotope
// slab P, certifies Vol(P) >= 6 rk K_0, finds a shift whose half-open
// interior captures at least ceil(3/4 rk) bundles by an exact arrangement
// search, and certifies strong exceptionality pair by pair.
StrongCollectionResult build_strong_collection(CohomologyEngine& engine, std::size_t jobs = 1);

struct WedgeConfig {
    std::size_t t = 1;
    std::vector<std::array<Rat, 2>> g;  // 2t+1 plane vectors, cyclic
    std::vector<std::array<Rat, 2>> f;  // matching functionals
};

// Which hypothesis fails, or nullopt when the config is valid.
std::optional<std::string> validate_wedge_config(const WedgeConfig& c);

struct SublemmaResult {
    Rat lhs, rhs;
    bool holds = false;
};

// Exact evaluation of the cyclic wedge inequality; the config must be
// valid (throws PrecondViolatedError naming the failed hypothesis).
SublemmaResult sublemma_check(const WedgeConfig& c);

// Rejection sampler over integer vectors in [-10,10]^2 with the functional
// side certified by LP.
WedgeConfig random_wedge_config(std::size_t t, std::mt19937_64& rng);

}  // namespace toric
