#ifndef TCANON_FREE_CANON_HPP
#define TCANON_FREE_CANON_HPP

#include "tcanon/dummy_canon.hpp"

namespace tcanon {

/// Canonical representative of the single coset S x g: the element whose
/// base-image sequence is minimal in the extend_base order, or Zero when both
/// signs of that permutation lie in the coset (equivalently, -id is in S).
/// This is the dummy search with a trivial D, run over the whole base; ALPHA
/// then never branches.
inline CanonResult free_can_rep(const SignedPerm& g, const std::vector<int>& b_S,
                                const std::vector<SignedPerm>& K_S,
                                const SearchOptions& options = {}) {
    CosetSearch search(b_S, K_S, g, DummySpec::contracted(0, MetricMode::none), options);
    search.set_free_mode();
    return search.result();
}

/// Pipeline variant for a merged tensor whose first free_count standard slots
/// hold the free indices: minimizes level by level only until all of them
/// are placed, then returns the current trace witness.  The later levels
/// would pin dummy contents that the dummy stage re-frees anyway, and the
/// dummy-stage double coset is independent of the witness choice.
inline CanonResult free_can_rep_placing(const SignedPerm& g, const std::vector<int>& b_S,
                                        const std::vector<SignedPerm>& K_S, int free_count,
                                        const SearchOptions& options = {}) {
    CosetSearch search(b_S, K_S, g, DummySpec::contracted(0, MetricMode::none), options);
    search.set_free_mode(free_count);
    return search.result();
}

} // namespace tcanon

#endif
