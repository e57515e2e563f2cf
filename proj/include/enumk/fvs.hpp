#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "enumk/graph.hpp"
#include "enumk/stream.hpp"

namespace enumk {

// ---------------------------------------------------------------------------
// Feedback-vertex-set kernelization with lifting traces.
//
// The compression loop applies local reduction rules (multiplicity cap,
// pendant removal, forced double edges, heavy vertices, degree-two
// contraction, twin triangles, pending doubles, multi-flags) and, for
// vertices whose degree exceeds 3k(k+1)+5k, a flower/hitting-set phase that
// either removes a flower core or forces/deletes edges via an auxiliary
// bipartite structure.  Every application is recorded as a trace entry whose
// lifting streams all solutions of the pre-rule instance from one solution of
// the post-rule instance; the streams for distinct kernel solutions
// partition the solution set of the original instance.
// ---------------------------------------------------------------------------

enum class FvsBasicCase {
    CapMultiplicity,  // edge multiplicity >= 3 capped to 2            (identity)
    RemovePendant,    // degree <= 1 vertex removed                    (free choice)
    AddCommonDouble,  // >= k+2 common neighbours force a double edge  (identity)
    RemoveHeavy,      // loop or >= k+1 double-edge neighbours: v in every solution
};

struct FvsBasicEntry {
    FvsBasicCase c = FvsBasicCase::CapMultiplicity;
    VertexId u = 0;  // CapMultiplicity/AddCommonDouble: edge (u, v) with u <= v
    VertexId v = 0;  // RemovePendant/RemoveHeavy: the removed vertex
    int k_before = 0;
    int k_after = 0;
};

// Degree-two vertex x with neighbours a < b, ab absent: x contracted into a.
struct FvsShortPathEntry {
    VertexId a = 0, x = 0, b = 0;
    MultiGraph pre;  // graph before the contraction (lifting guard needs it)
    int k_before = 0;
    int k_after = 0;
};

// Twin degree-two triangle vertices x < y over apex u: y removed, ux doubled.
struct FvsTwinTriangleEntry {
    VertexId u = 0, x = 0, y = 0;
    int k_before = 0;
    int k_after = 0;
};

// u with pending double-edge neighbours eps (all of degree two): u and eps
// removed, budget decremented.
struct FvsPendingDoublesEntry {
    VertexId u = 0;
    VertexSet eps;
    MultiGraph pre;
    int k_before = 0;
    int k_after = 0;
};

// Flag pair (a, b): eps are the degree-two common neighbours of a and b and
// N(b) = {a} + eps; the closed neighbourhood of b is removed.
struct FvsMultiFlagEntry {
    VertexId a = 0, b = 0;
    VertexSet eps;
    MultiGraph pre;
    int k_before = 0;
    int k_after = 0;
};

// Flower of order >= k+1 at v: v is in every solution.
struct FvsFlowerEntry {
    VertexId v = 0;
    int k_before = 0;
    int k_after = 0;
};

// Auxiliary phase: head u reaches >= k+2 components, edge uv doubled.
struct FvsAuxDoubleEntry {
    VertexId u = 0, v = 0;
    int k_before = 0;
    int k_after = 0;
};

// Auxiliary phase: component attached through w sees only doubled heads, so
// the simple edge vw is deleted.
struct FvsEdgeDeleteEntry {
    VertexId v = 0, w = 0;
    int k_before = 0;
    int k_after = 0;
};

using FvsEntry = std::variant<FvsBasicEntry, FvsShortPathEntry, FvsTwinTriangleEntry,
                              FvsPendingDoublesEntry, FvsMultiFlagEntry, FvsFlowerEntry,
                              FvsAuxDoubleEntry, FvsEdgeDeleteEntry>;

struct FvsTrace {
    std::vector<FvsEntry> entries;
};

struct FvsRuleOutcome {
    MultiGraph g;
    int k = 0;
    FvsEntry entry;
};

// Each rule function looks for the sigma-least witness of its rule and
// applies it once; nullopt when the rule is not applicable.
std::optional<FvsRuleOutcome> fvs_rule_basic(const MultiGraph& g, int k);
std::optional<FvsRuleOutcome> fvs_rule_short_path(const MultiGraph& g, int k);
std::optional<FvsRuleOutcome> fvs_rule_twin_triangle(const MultiGraph& g, int k);
std::optional<FvsRuleOutcome> fvs_rule_pending_doubles(const MultiGraph& g, int k);
std::optional<FvsRuleOutcome> fvs_rule_multiflag(const MultiGraph& g, int k);

// Removes v, decrementing the budget.  Caller certifies a flower of order
// >= k+1 at v (the driver obtains one from flower_or_hitting).
FvsRuleOutcome fvs_rule_flower(const MultiGraph& g, int k, VertexId v);

// 2-approximate feedback vertex set (local-ratio with exact rational
// weights): loops are mandatory picks, semidisjoint cycles are reduced
// uniformly, otherwise weights drop proportionally to degree-1; a reverse
// scan removes redundant picks.  The result is an inclusion-minimal feedback
// vertex set of size at most twice the minimum.
VertexSet two_approx_fvs(const MultiGraph& g);

// Flower search at x relative to a feedback vertex set X.
struct FlowerResult {
    bool no_instance = false;           // only for degenerate budgets (k < 0)
    bool has_flower = false;
    std::vector<VertexSet> petals;      // cycles pairwise intersecting exactly in {x}
    VertexSet hitting;                  // H_x: hits every cycle through x, size <= 3k
};

// Either finds a flower of order >= k+1 at x or a set H_x of size at most 3k
// meeting every cycle through x.  X must be a feedback vertex set of g with
// |X| <= 2k (usage error otherwise).
FlowerResult flower_or_hitting(const MultiGraph& g, const VertexSet& X, VertexId x, int k);

// Auxiliary bipartite structure between H_v and the components of
// G - (H_v + v) attached to v by a simple edge.
struct AuxBipartite {
    VertexId v = 0;
    VertexSet heads;                     // H_v
    std::vector<VertexSet> components;   // D_v, ordered by least vertex
    std::vector<VertexSet> head_sets;    // per component: heads with a neighbour inside
    VertexSet doubled_heads;             // heads with a double edge to v (at build time)
};

// Builds the auxiliary structure.  Internal error when |D_v| <= 3k(k+1):
// with the local rules exhausted and deg(v) > 3k(k+1)+5k this cannot happen.
AuxBipartite build_aux(const MultiGraph& g, VertexId v, const VertexSet& heads, int k);

// Auxiliary-phase rules.  fvs_rule_aux_double doubles the edge from the
// sigma-least head with aux-degree >= k+2; fvs_rule_edge_delete deletes the
// attachment edge of the sigma-least component whose heads are all doubled.
std::optional<FvsRuleOutcome> fvs_rule_aux_double(const MultiGraph& g, int k,
                                                  const AuxBipartite& aux);
std::optional<FvsRuleOutcome> fvs_rule_edge_delete(const MultiGraph& g, int k,
                                                   const AuxBipartite& aux);

struct FvsKernel {
    bool no_instance = false;
    MultiGraph graph;
    int k = 0;
    FvsTrace trace;
};

// Full compression: exhausts the rules, runs the flower/hitting phases on
// high-degree vertices, and finishes with the kernel size guarantees
// |V| <= 3k'^3 + 8k'^2 and max degree <= 3k'(k'+1)+5k'.  Returns no_instance
// when the budget is exhausted, the kernel certifies infeasibility, or the
// kernel has no solution at all.
FvsKernel fvs_compress(const MultiGraph& g, int k);

// Streams all feedback vertex sets of size <= k of g without duplicates
// (cycle branching with subset padding on acyclic leaves).
SolutionStream fvs_kernel_solutions(MultiGraph g, int k);

// Lifting: streams the solutions of the pre-rule instance generated by one
// solution of the post-rule instance.  Distinct inputs generate disjoint
// families covering the pre-rule solution set.
SolutionStream fvs_lift_entry(FvsEntry entry, VertexSet sprime);

// Composition over a full trace: kernel_solution is a solution of the kernel
// instance; the stream yields solutions of the original instance.
SolutionStream fvs_lift(const FvsTrace& trace, VertexSet kernel_solution);

// Compression + kernel enumeration + lifting: streams Sol(g, k) exactly.
SolutionStream fvs_enumerate(MultiGraph g, int k);

// One line per entry: tag, key=value fields, and for entries carrying their
// pre-rule graph a base64 edge-list payload.
std::string serialize_fvs_trace(const FvsTrace& trace);

// Replays the recorded mutations on g; the result equals the kernel graph of
// the compression that produced the trace.
MultiGraph replay_fvs_trace(MultiGraph g, const FvsTrace& trace);

}  // namespace enumk
