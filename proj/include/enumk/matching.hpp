#pragma once
// Maximum bipartite matching, Koenig vertex cover, and the Nemhauser-Trotter
// half-integral relaxation that yields crown decompositions.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enumk/graph.hpp"

namespace enumk {

struct Matching {
    // normalized (min,max), sorted; every pair is an edge of the host graph
    std::vector<std::pair<VertexId, VertexId>> pairs;

    std::size_t size() const { return pairs.size(); }
    bool covers(VertexId v) const;
    // the partner of v, if matched
    std::optional<VertexId> partner(VertexId v) const;
    VertexSet matched_vertices() const;
    void add(VertexId u, VertexId v);
};

// Crown decomposition (C, H, B): C independent with N(C) = H exactly, M an
// H-saturating matching of G[H u C] into C, B the rest of the graph.
struct CrownDecomposition {
    VertexSet C;
    VertexSet H;
    VertexSet B;
    Matching M;
};

// Half-integral vertex cover; values kept as twice-units in {0,1,2} so the
// arithmetic stays integral.
struct HalfIntegralSolution {
    std::map<VertexId, int> twice_value;
    int twice_weight = 0;
};

// Maximum matching of a bipartite graph given its sides. Sides must be
// disjoint, cover V(g), and every edge must cross; otherwise structure error.
Matching max_bipartite_matching(const MultiGraph& g, const VertexSet& left, const VertexSet& right);

// Minimum vertex cover from a maximum matching via Koenig's construction;
// internal error if |cover| != |matching|.
VertexSet konig_cover(const MultiGraph& g, const VertexSet& left, const VertexSet& right,
                      const Matching& matching);

// Returns the reason the decomposition is invalid for g, or nullopt if valid.
std::optional<std::string> crown_violation(const MultiGraph& g, const CrownDecomposition& d);
inline bool verify_crown(const MultiGraph& g, const CrownDecomposition& d) {
    return !crown_violation(g, d).has_value();
}

struct NtResult {
    // true when the minimum half-integral cover weighs more than k, proving
    // Sol(g,k) empty (LP bound)
    bool no_half_integral_cover = false;
    CrownDecomposition crown;  // meaningful iff !no_half_integral_cover
    HalfIntegralSolution half; // the optimal half-integral cover, always set
};

// Nemhauser-Trotter via the bipartite double cover: optimal half-integral
// cover x, C = zeros, H = ones, B = halves, M projected from the double-cover
// matching. Preconditions (usage error): g simple, no isolated vertex,
// |V| >= 2k+1, k >= 0. Postconditions (internal error): crown verifies,
// C nonempty, |H| <= k.
NtResult nt_decompose(const MultiGraph& g, int k);

}  // namespace enumk
