#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "toric/cohomology.hpp"
#include "toric/stacky_fan.hpp"

namespace toric {

struct FamilyParams {
    long n = 2, k = 2, a = 1;  // n >= 2, k >= 2, a >= 1
};

// The twelve forbidden sets of a family member, named after the cyclic
// classes: K_i for X_i u X_{i+1} u X_{i+2}, hat(K_i) for X_{i+3} u X_{i+4},
// K_eff for the empty set and K_neg for all of Sigma(1).
enum class FamilySet { Keff, Kneg, K0, K1, K2, K3, K4, K0h, K1h, K2h, K3h, K4h };

constexpr std::array<FamilySet, 12> kAllFamilySets = {
    FamilySet::Keff, FamilySet::Kneg, FamilySet::K0,  FamilySet::K1,
    FamilySet::K2,   FamilySet::K3,   FamilySet::K4,  FamilySet::K0h,
    FamilySet::K1h,  FamilySet::K2h,  FamilySet::K3h, FamilySet::K4h};

const char* family_set_name(FamilySet s);

struct FamilyInstance {
    FamilyParams params;
    IntVectorCollection divisors;               // E_{i,j} in Z^3, grouped
    std::vector<std::vector<std::size_t>> groups;  // X_0..X_4 index lists
    IntVectorCollection rays;                   // v_{i,j} in Z^{2n+2a+k-1}
    std::vector<std::string> printed_discrepancies;  // vs the printed ray formulas
    std::optional<StackyFan> fan;               // present unless skipped

    std::size_t n_divisors() const { return divisors.size(); }
    IntVec minus_k() const;  // (n+1, k, k+n)
    IntVec k_class() const;
};

// Constructs E_{i,j} and the Gale dual rays from the printed relation
// basis, verifies duality, and (optionally) builds the Fano fan.
FamilyInstance build_family(const FamilyParams& p, bool with_fan = true);

// Closed-form membership in one of the twelve forbidden sets.
bool closed_form_member(const FamilyParams& p, FamilySet s, const IntVec& xyz);
bool closed_form_member_any(const FamilyParams& p, const IntVec& xyz);  // K_all

// Index set I <= Sigma(1) whose forbidden set is `s`.
std::vector<std::size_t> family_index_set(const FamilyInstance& inst, FamilySet s);

// rk K_0 as the cyclic size-product sum and as the closed polynomial.
Int rank_k0_sum(const FamilyParams& p);
Int rank_k0_closed_form(const FamilyParams& p);

struct ValidationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    std::vector<std::string> notes;
    bool all_pass() const;
};

// Checks the three construction conditions (positive functional with the
// explicit witness, the printed pullback functionals, the basis triples)
// plus Gale duality and the anticanonical class.
ValidationReport validate_construction(const FamilyInstance& inst);

}  // namespace toric
