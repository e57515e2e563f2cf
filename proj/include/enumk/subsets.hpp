#pragma once
// Streaming subset/combination enumerators shared by the kernel machinery.
// (The brute-force oracle deliberately has its own combination iterator so the
// two sides stay independent.)

#include "enumk/graph.hpp"
#include "enumk/stream.hpp"

namespace enumk {

// All size-r subsets of the sorted universe, in lexicographic order.
inline Generator<VertexSet> combinations(VertexSet universe, int r) {
    const int n = static_cast<int>(universe.size());
    if (r < 0 || r > n) co_return;
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        VertexSet subset(r);
        for (int i = 0; i < r; ++i) subset[static_cast<std::size_t>(i)] = universe[static_cast<std::size_t>(idx[i])];
        co_yield subset;
        int i = r - 1;
        while (i >= 0 && idx[i] == n - r + i) --i;
        if (i < 0) break;  // r = 0 lands here after the single empty subset
        ++idx[i];
        for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

namespace detail {

inline Generator<VertexSet> subsets_branch(VertexSet universe, std::size_t at, VertexSet current,
                                           int budget) {
    if (at == universe.size()) {
        co_yield current;
        co_return;
    }
    // exclude-first ordered branching: disjoint subtrees, no duplicates
    for (VertexSet& s : subsets_branch(universe, at + 1, current, budget)) co_yield s;
    if (budget > 0) {
        VertexSet with = current;
        set_insert(with, universe[at]);
        for (VertexSet& s : subsets_branch(universe, at + 1, std::move(with), budget - 1)) co_yield s;
    }
}

}  // namespace detail

// All subsets of size <= max_size by ordered include/exclude branching.
inline Generator<VertexSet> subsets_up_to(VertexSet universe, int max_size) {
    return detail::subsets_branch(std::move(universe), 0, {}, max_size);
}

}  // namespace enumk
