#pragma once
// Enumeration kernel for vertex cover: crown-rule compression, the
// propagation procedures on crowned graphs, streaming enumerators for
// crown solutions, and the lifting that turns kernel solutions back into
// solutions of the original instance.

#include "enumk/graph.hpp"
#include "enumk/matching.hpp"
#include "enumk/stream.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace enumk {

// A crowned instance: g is the graph induced on H u C, C is independent,
// every edge touches H, and M is an H-saturating matching into C.  The
// instance is "small" when |H| = |C| (M is then a perfect matching).  The
// slack x only matters for enum_crown: solutions have size |H| + x.
struct CrownedInstance {
    MultiGraph g;
    VertexSet H;
    VertexSet C;
    Matching M;
    int x = 0;

    bool is_small() const { return H.size() == C.size(); }
};

// Returns an explanation if (g, H, C, M) is not a crowned instance as above,
// std::nullopt if it is valid.
std::optional<std::string> crowned_violation(const CrownedInstance& inst);

// Outcome of a propagation run.  F is forced into the solution, Fbar is
// forced out of it; the two sets are disjoint.  For prop_x, F <= H and
// Fbar is exactly the M-image of F.  For prop_avoid both sets may mix the
// two sides and failed=true means no solution avoids the start vertex.
struct PropResult {
    bool failed = false;
    VertexSet F;
    VertexSet Fbar;
};

// Propagates the decision "all of X0 is in the solution".  Orients each
// M-edge from H to C and every other H-C edge from C to H (H-H edges carry
// no arc), then takes everything reachable from X0.  Usage error unless
// X0 <= H.
PropResult prop_x(const CrownedInstance& inst, const VertexSet& X0);

// Propagates the decision "v is not in the solution" on a small crowned
// instance.  Alternates F := N(Fbar), Fbar := M-image of F until a fixed
// point; fails if some M-edge lies inside N(Fbar) or the next Fbar is not
// independent.  Usage error unless v is in H.
PropResult prop_avoid(const CrownedInstance& inst, VertexId v);

// Streams every vertex cover of size exactly |H| of a small crowned
// instance, each exactly once.  Branches on the least head: first the
// covers containing it (via prop_x), then the covers avoiding it (via
// prop_avoid).
SolutionStream enum_small_crown(CrownedInstance inst);

// A signature for enum_crown: C1 <= C n V(M) are the matched crown
// vertices in the solution, C2 <= C \ V(M) the unmatched ones, with
// |C1| + |C2| = x.
struct Signature {
    VertexSet C1;
    VertexSet C2;
};

struct PropBigResult {
    VertexSet F;
    VertexSet Fbar;
    VertexSet X1bar;  // unmatched crown vertices forced out: (C \ V(M)) \ C2
};

// Propagation for one enum_crown signature: the unmatched crown vertices
// outside C2 are forced out, so their neighbors among the still-undecided
// heads are forced in; runs prop_x on the instance restricted to the heads
// not matched into C1 and their partners.  Usage error if (C1, C2) is not
// a valid signature for inst.
PropBigResult prop_big(const CrownedInstance& inst, const VertexSet& C1, const VertexSet& C2);

// Streams every vertex cover of size exactly |H| + x of a crowned
// instance, each exactly once, grouped by signature (|C1| ascending, then
// C1 and C2 lexicographic).  Usage error unless 0 <= x <= |C|.
SolutionStream enum_crown(CrownedInstance inst);

// ---- compression trace ----

// Isolated-vertex removal: v had degree 0; k is unchanged.
struct VcIsolatedEntry {
    VertexId v = 0;
    int k_before = 0;
    int k_after = 0;
};

// Crown rule application: H u C was removed and k dropped by |H|.  The
// entry keeps the induced crowned graph, the decomposition, and every edge
// between H and the body B = V \ (H u C) of the pre-rule graph; that is
// exactly what the lifting needs.
struct VcCrownEntry {
    MultiGraph crown_graph;  // induced on H u C before removal
    VertexSet H;
    VertexSet C;
    Matching M;
    std::vector<std::pair<VertexId, VertexId>> hb_edges;  // (head, body) pairs
    int k_before = 0;
    int k_after = 0;
};

using VcEntry = std::variant<VcIsolatedEntry, VcCrownEntry>;

struct VcTrace {
    std::vector<VcEntry> entries;  // in order of application
};

// One compression rule step, returning the reduced instance and the trace
// entry describing the step.
struct VcRuleOutcome {
    MultiGraph g;
    int k = 0;
    VcEntry entry;
};

// Removes the isolated vertex v.  Usage error if v is missing or not
// isolated.
VcRuleOutcome vc_rule_isolated(const MultiGraph& g, int k, VertexId v);

// Removes H u C for a crown decomposition of g.  Usage error if the
// decomposition is invalid for g or |H| > k.
VcRuleOutcome vc_rule_crown(const MultiGraph& g, int k, const CrownDecomposition& d);

// Result of compression: either "no solution" or a kernel with at most 2k'
// vertices together with the trace that produced it.
struct VcKernel {
    bool no_instance = false;
    MultiGraph graph;
    int k = 0;
    VcTrace trace;
};

// Compresses (g, k) by exhausting isolated-vertex removal and applying the
// crown rule until at most 2k' vertices remain.  Reports no_instance when
// the instance provably has no vertex cover of size <= k (in particular
// whenever the solution set is empty).  Usage error on multigraphs and
// k < 0 reports no_instance.
VcKernel vc_compress(const MultiGraph& g, int k);

// Streams every vertex cover of size <= k of g (intended for kernels), by
// branching on the least uncovered edge with a matching lower bound for
// pruning, each solution exactly once.
SolutionStream vc_kernel_solutions(MultiGraph g, int k);

// Lifting of a single trace entry: streams all pre-rule solutions that
// reduce to the post-rule solution sprime, each exactly once.
SolutionStream vc_lift_isolated(VcIsolatedEntry entry, VertexSet sprime);
SolutionStream vc_lift_crown(VcCrownEntry entry, VertexSet sprime);

// Streams all solutions of the original instance obtained by lifting one
// kernel solution back through the whole trace.
SolutionStream vc_lift(const VcTrace& trace, VertexSet kernel_solution);

// The composed enumerator: every vertex cover of size <= k of g, exactly
// once, with polynomial delay.  Empty stream when vc_compress reports
// no_instance.
SolutionStream vc_enumerate(MultiGraph g, int k);

// Stable one-line-per-entry text form of a trace, for logs and golden
// tests.
std::string serialize_vc_trace(const VcTrace& trace);

}  // namespace enumk
