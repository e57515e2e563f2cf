#include "enumk/matching.hpp"

#include <algorithm>

namespace enumk {

bool Matching::covers(VertexId v) const {
    return partner(v).has_value();
}

std::optional<VertexId> Matching::partner(VertexId v) const {
    for (const auto& [a, b] : pairs) {
        count_step();
        if (a == v) return b;
        if (b == v) return a;
    }
    return std::nullopt;
}

VertexSet Matching::matched_vertices() const {
    VertexSet out;
    for (const auto& [a, b] : pairs) {
        set_insert(out, a);
        set_insert(out, b);
    }
    return out;
}

void Matching::add(VertexId u, VertexId v) {
    auto pair = std::minmax(u, v);
    pairs.emplace_back(pair.first, pair.second);
    std::sort(pairs.begin(), pairs.end());
}

namespace {

// augmenting-path step of Kuhn's algorithm
bool try_augment(const MultiGraph& g, VertexId u, const VertexSet& right, VertexSet& visited,
                 std::map<VertexId, VertexId>& match_right) {
    for (VertexId w : g.neighbors(u)) {
        if (!set_contains(right, w) || set_contains(visited, w)) continue;
        set_insert(visited, w);
        auto it = match_right.find(w);
        if (it == match_right.end() || try_augment(g, it->second, right, visited, match_right)) {
            match_right[w] = u;
            return true;
        }
    }
    return false;
}

}  // namespace

Matching max_bipartite_matching(const MultiGraph& g, const VertexSet& left, const VertexSet& right) {
    if (!set_intersect(left, right).empty())
        throw structure_error("bipartition sides overlap");
    for (VertexId v : g.vertices()) {
        bool in_left = set_contains(left, v), in_right = set_contains(right, v);
        if (!in_left && !in_right)
            throw structure_error("vertex " + std::to_string(v) + " on neither side");
        if (g.has_loop(v)) throw structure_error("graph is not bipartite (loop)");
        for (VertexId w : g.neighbors(v))
            if (set_contains(left, w) == in_left)
                throw structure_error("graph is not bipartite for the given sides");
    }
    std::map<VertexId, VertexId> match_right;  // right vertex -> left partner
    for (VertexId u : left) {
        if (!g.has_vertex(u)) continue;
        VertexSet visited;
        try_augment(g, u, right, visited, match_right);
    }
    Matching m;
    for (const auto& [w, u] : match_right) m.add(u, w);
    return m;
}

VertexSet konig_cover(const MultiGraph& g, const VertexSet& left, const VertexSet& right,
                      const Matching& matching) {
    std::map<VertexId, VertexId> partner;
    for (const auto& [a, b] : matching.pairs) {
        partner[a] = b;
        partner[b] = a;
    }
    // alternating BFS from unmatched left vertices: left->right along
    // non-matching edges, right->left along matching edges
    VertexSet reached;
    std::vector<VertexId> queue;
    for (VertexId u : left)
        if (g.has_vertex(u) && !partner.count(u)) {
            set_insert(reached, u);
            queue.push_back(u);
        }
    while (!queue.empty()) {
        VertexId v = queue.back();
        queue.pop_back();
        if (set_contains(left, v)) {
            for (VertexId w : g.neighbors(v)) {
                auto it = partner.find(v);
                if (it != partner.end() && it->second == w) continue;  // matching edge
                if (!set_contains(reached, w)) {
                    set_insert(reached, w);
                    queue.push_back(w);
                }
            }
        } else {
            auto it = partner.find(v);
            if (it != partner.end() && !set_contains(reached, it->second)) {
                set_insert(reached, it->second);
                queue.push_back(it->second);
            }
        }
    }
    VertexSet cover = set_union(set_minus(left, reached), set_intersect(right, reached));
    // keep only actual vertices of g
    VertexSet present;
    for (VertexId v : cover)
        if (g.has_vertex(v)) set_insert(present, v);
    if (present.size() != matching.size())
        throw internal_error("Koenig cover size " + std::to_string(present.size()) +
                             " != matching size " + std::to_string(matching.size()));
    return present;
}

std::optional<std::string> crown_violation(const MultiGraph& g, const CrownDecomposition& d) {
    // partition of V(g)
    if (!set_intersect(d.C, d.H).empty() || !set_intersect(d.C, d.B).empty() ||
        !set_intersect(d.H, d.B).empty())
        return "C, H, B are not disjoint";
    if (set_union(set_union(d.C, d.H), d.B) != g.vertices()) return "C, H, B do not cover V";
    // C independent
    for (VertexId c : d.C) {
        if (g.has_loop(c)) return "loop inside C";
        for (VertexId w : g.neighbors(c))
            if (set_contains(d.C, w)) return "edge inside C";
    }
    // N(C) = H exactly
    VertexSet nbhd;
    for (VertexId c : d.C)
        for (VertexId w : g.neighbors(c)) set_insert(nbhd, w);
    if (nbhd != d.H) return "N(C) != H";
    // M: an H-saturating matching of H-C edges
    VertexSet seen;
    for (const auto& [a, b] : d.M.pairs) {
        VertexId h = set_contains(d.H, a) ? a : b;
        VertexId c = (h == a) ? b : a;
        if (!set_contains(d.H, h) || !set_contains(d.C, c)) return "matching pair not H-C";
        if (g.edge_mult(h, c) == 0) return "matching pair is not an edge";
        if (set_contains(seen, h) || set_contains(seen, c)) return "matching reuses a vertex";
        set_insert(seen, h);
        set_insert(seen, c);
    }
    if (d.M.size() != d.H.size()) return "matching does not saturate H";
    return std::nullopt;
}

NtResult nt_decompose(const MultiGraph& g, int k) {
    if (k < 0) throw usage_error("nt_decompose requires k >= 0");
    for (VertexId v : g.vertices()) {
        if (g.has_loop(v)) throw usage_error("nt_decompose requires a simple graph (loop)");
        if (g.degree(v) == 0) throw usage_error("nt_decompose requires no isolated vertices");
        for (const auto& [w, mult] : g.adjacency(v))
            if (mult >= 2) throw usage_error("nt_decompose requires a simple graph (double edge)");
    }
    if (g.num_vertices() < 2 * static_cast<std::size_t>(k) + 1)
        throw usage_error("nt_decompose requires |V| >= 2k+1");

    // bipartite double cover: v_L = 2v, v_R = 2v+1, edges u_L-v_R for uv in E
    MultiGraph dc;
    VertexSet left, right;
    for (VertexId v : g.vertices()) {
        dc.add_vertex(2 * v);
        dc.add_vertex(2 * v + 1);
        set_insert(left, 2 * v);
        set_insert(right, 2 * v + 1);
    }
    // each undirected edge uv yields both u_L-v_R and v_L-u_R, once apiece
    for (VertexId v : g.vertices())
        for (VertexId w : g.neighbors(v)) dc.add_edge(2 * v, 2 * w + 1, 1);

    Matching mstar = max_bipartite_matching(dc, left, right);
    VertexSet cover = konig_cover(dc, left, right, mstar);

    NtResult result;
    result.half.twice_weight = static_cast<int>(mstar.size());
    for (VertexId v : g.vertices()) {
        int copies = (set_contains(cover, 2 * v) ? 1 : 0) + (set_contains(cover, 2 * v + 1) ? 1 : 0);
        result.half.twice_value[v] = copies;
    }
    if (static_cast<int>(mstar.size()) > 2 * k) {
        result.no_half_integral_cover = true;
        return result;
    }

    CrownDecomposition d;
    for (const auto& [v, copies] : result.half.twice_value) {
        if (copies == 0)
            set_insert(d.C, v);
        else if (copies == 2)
            set_insert(d.H, v);
        else
            set_insert(d.B, v);
    }
    // project the double-cover matching: each head's left copy is matched to
    // the right copy of a crown vertex (complementary slackness)
    for (VertexId h : d.H) {
        auto p = mstar.partner(2 * h);
        if (!p) throw internal_error("head copy unmatched in the double cover");
        VertexId c = (*p - 1) / 2;
        if (!set_contains(d.C, c)) throw internal_error("head matched outside the crown");
        d.M.add(h, c);
    }
    if (auto why = crown_violation(g, d)) throw internal_error("crown verification failed: " + *why);
    if (d.C.empty()) throw internal_error("empty crown despite |V| >= 2k+1 and weight <= k");
    if (static_cast<int>(d.H.size()) > k) throw internal_error("|H| > k in nt_decompose");
    result.crown = std::move(d);
    return result;
}

}  // namespace enumk
