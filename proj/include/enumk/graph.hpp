#pragma once
// Multigraph core: vertex ids, sorted vertex sets, the edge-list text format,
// forest tests, contraction, components, and the seeded random generator.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace enumk {

using VertexId = int;

// A VertexSet is always sorted ascending with no duplicates.
using VertexSet = std::vector<VertexId>;

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps parse/usage errors to exit code 4; internal and
// structure errors indicate a bug and abort the run with a message.
// ---------------------------------------------------------------------------
class Error : public std::runtime_error {
public:
    enum class Kind { parse, usage, internal, structure };
    Error(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline Error parse_error(int line, const std::string& message) {
    return Error(Error::Kind::parse, "parse error at line " + std::to_string(line) + ": " + message);
}
inline Error usage_error(const std::string& message) {
    return Error(Error::Kind::usage, "usage error: " + message);
}
inline Error internal_error(const std::string& message) {
    return Error(Error::Kind::internal, "internal error: " + message);
}
inline Error structure_error(const std::string& message) {
    return Error(Error::Kind::structure, "structure error: " + message);
}

// ---------------------------------------------------------------------------
// Basic-step counter for delay instrumentation. Frozen definition: every
// adjacency probe and every sorted-set membership test counts one step, so
// delay numbers are comparable across runs and machines.
// ---------------------------------------------------------------------------
extern thread_local std::uint64_t g_steps;
inline void count_step() { ++g_steps; }

// --------------------------- sorted-set helpers ----------------------------
bool set_contains(const VertexSet& s, VertexId v);  // counts one step
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_minus(const VertexSet& a, const VertexSet& b);
VertexSet set_intersect(const VertexSet& a, const VertexSet& b);
void set_insert(VertexSet& s, VertexId v);
void set_erase(VertexSet& s, VertexId v);
VertexSet make_set(std::vector<VertexId> ids);  // sorts + dedups

// ---------------------------------------------------------------------------
// Undirected multigraph. Edge multiplicities are >= 1; a loop at v is stored
// as an edge v-v and contributes 2 to deg(v). Vertex ids are never reused;
// the global order sigma used by the reduction rules is ascending id order.
// ---------------------------------------------------------------------------
class MultiGraph {
public:
    void add_vertex(VertexId v);
    bool has_vertex(VertexId v) const;
    // Adds mult to the u-v multiplicity, creating the vertices if needed.
    void add_edge(VertexId u, VertexId v, int mult = 1);
    // Sets the multiplicity exactly; 0 erases the edge.
    void set_edge_mult(VertexId u, VertexId v, int mult);
    void remove_edge(VertexId u, VertexId v);
    void remove_vertex(VertexId v);
    // 0 if absent. Counts one instrumentation step (adjacency probe).
    int edge_mult(VertexId u, VertexId v) const;
    bool has_loop(VertexId v) const { return edge_mult(v, v) > 0; }
    int degree(VertexId v) const;  // loops count 2

    std::size_t num_vertices() const { return adj_.size(); }
    std::size_t num_edges() const;         // distinct unordered pairs incl. loops
    long long total_multiplicity() const;  // sum of multiplicities
    VertexId max_vertex_id() const;        // 0 when empty

    VertexSet vertices() const;
    // Neighbors w != v with positive multiplicity, sorted. Loops excluded;
    // query has_loop separately.
    std::vector<VertexId> neighbors(VertexId v) const;
    // Raw adjacency row (includes the loop entry at key v if present).
    const std::map<VertexId, int>& adjacency(VertexId v) const;

    // Induced subgraph on keep (vertices absent from the graph are ignored).
    MultiGraph induced(const VertexSet& keep) const;

    bool operator==(const MultiGraph& other) const { return adj_ == other.adj_; }

private:
    std::map<VertexId, std::map<VertexId, int>> adj_;
};

// ------------------------------- operations --------------------------------
// Edge-list text format (see README): '#' comments, header "p <n> <m>" with
// n = max vertex id and m = number of e-lines, body "e <u> <v> [mult]",
// loops as u = v, multiplicities summed over repeated lines.
MultiGraph parse_graph(std::istream& in);
MultiGraph parse_graph(const std::string& text);
std::string serialize_graph(const MultiGraph& g);

// True iff g minus removed has no loop, no multiplicity >= 2 edge, and an
// acyclic underlying simple graph.
bool is_forest(const MultiGraph& g, const VertexSet& removed = {});

// Contract x into a (x adjacent to a required): x is removed and every other
// edge x-w becomes a-w, multiplicities merged additively (callers cap them);
// the x-a edge itself produces no loop. A pre-existing loop at x moves to a.
MultiGraph contract(const MultiGraph& g, VertexId x, VertexId a);

// Partition of V(g) minus excluded into connected components, each sorted,
// list ordered by smallest member.
std::vector<VertexSet> connected_components(const MultiGraph& g, const VertexSet& excluded = {});

struct RandomSpec {
    int n = 0;
    double p = 0.0;          // edge probability
    double multiProb = 0.0;  // probability a present edge is doubled
    double loopProb = 0.0;   // probability a vertex carries a loop
    std::uint64_t seed = 0;
};

// Deterministic in the seed: pairs (i,j), i<j, are visited in lexicographic
// order, then loop draws for v = 1..n.
MultiGraph random_graph(const RandomSpec& spec);

}  // namespace enumk
