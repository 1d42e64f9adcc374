#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "toric/stacky_fan.hpp"

namespace toric {

// The simplicial complex C_I: vertex set I, faces the subsets of I that are
// boundary ray sets of cones of the fan. Vertices are indexed locally; the
// empty face is always present.
struct SimplicialComplexCI {
    std::vector<std::size_t> vertices;                 // I, sorted fan indices
    std::vector<std::vector<std::uint64_t>> faces_by_card;  // [k] = faces with k vertices, as local masks
};

SimplicialComplexCI complex_ci(const StackyFan& fan, std::vector<std::size_t> I);

// Reduced integral homology. ranks[k] is the free rank in degree k-1 (so
// index 0 is degree -1); torsion[k] lists the nontrivial cyclic orders of
// the same degree.
struct HomologyResult {
    std::vector<long> ranks;
    std::vector<std::vector<Int>> torsion;

    bool nonzero() const;
    bool torsion_only() const;
    long rank_at_degree(long degree) const;  // degree >= -1
};

HomologyResult reduced_homology(const SimplicialComplexCI& c);

// Minimal non-faces of the fan (the primitive collections).
std::vector<std::vector<std::size_t>> primitive_collections(const StackyFan& fan);

struct CohomologyTable {
    std::vector<Int> h;  // h[0..rk N]
    Int total() const;
};

struct UnionCheck {
    bool is_union = false;
    std::vector<std::vector<std::size_t>> witness;  // primitive collections covering I
};

// Per-fan oracle with memoized homology and fiber data. All queries are
// exact; fiber enumeration is grouped over equal divisor classes so the
// integer problems stay within the low-dimensional kernel contract.
// The memoization caches are not synchronized: confine an engine to one
// worker (parallel callers each hold their own).
class CohomologyEngine {
  public:
    explicit CohomologyEngine(StackyFan fan);
    CohomologyEngine(CohomologyEngine&&) noexcept;
    ~CohomologyEngine();

    const StackyFan& fan() const { return fan_; }

    // Index sets I with nonzero reduced homology of C_I. Uses the
    // Picard-three classification when it applies, otherwise an exhaustive
    // scan (small fans only).
    const std::vector<std::vector<std::size_t>>& forbidden_index_sets();

    const HomologyResult& homology_of(const std::vector<std::size_t>& I);

    // L in K_I: some fiber point with support exactly I represents L.
    bool forbidden_membership(const std::vector<std::size_t>& I, const DivisorClass& L);

    // Number of representations r with Supp(r) = I and class L.
    Int fiber_count(const std::vector<std::size_t>& I, const DivisorClass& L);

    CohomologyTable cohomology(const DivisorClass& L);
    bool vanishing(const DivisorClass& L, bool higher_only);

    UnionCheck union_of_primitives_check(const std::vector<std::size_t>& I);

    DivisorClass divisor_class(IntVec free) const;
    DivisorClass class_difference(const DivisorClass& a, const DivisorClass& b) const;

    const std::optional<Picard3Decomposition>& decomposition();

  private:
    struct FiberTemplate;
    const FiberTemplate& fiber_template(const std::vector<std::size_t>& I);

    StackyFan fan_;
    bool decomp_tried_ = false;
    std::optional<Picard3Decomposition> decomp_;
    std::optional<std::vector<std::vector<std::size_t>>> forbidden_;
    std::optional<std::vector<std::vector<std::size_t>>> primitives_;
    std::map<std::vector<std::size_t>, HomologyResult> homology_cache_;
    std::map<std::vector<std::size_t>, FiberTemplate> fiber_cache_;
};

}  // namespace toric
