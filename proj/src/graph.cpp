#include "enumk/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace enumk {

thread_local std::uint64_t g_steps = 0;

// --------------------------- sorted-set helpers ----------------------------

bool set_contains(const VertexSet& s, VertexId v) {
    count_step();
    return std::binary_search(s.begin(), s.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_minus(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    out.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void set_insert(VertexSet& s, VertexId v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
}

void set_erase(VertexSet& s, VertexId v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it != s.end() && *it == v) s.erase(it);
}

VertexSet make_set(std::vector<VertexId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

// ------------------------------- MultiGraph --------------------------------

void MultiGraph::add_vertex(VertexId v) { adj_.try_emplace(v); }

bool MultiGraph::has_vertex(VertexId v) const { return adj_.count(v) > 0; }

void MultiGraph::add_edge(VertexId u, VertexId v, int mult) {
    if (mult <= 0) throw internal_error("add_edge with non-positive multiplicity");
    add_vertex(u);
    add_vertex(v);
    adj_[u][v] += mult;
    if (u != v) adj_[v][u] += mult;
}

void MultiGraph::set_edge_mult(VertexId u, VertexId v, int mult) {
    if (mult < 0) throw internal_error("set_edge_mult with negative multiplicity");
    add_vertex(u);
    add_vertex(v);
    if (mult == 0) {
        adj_[u].erase(v);
        adj_[v].erase(u);
    } else {
        adj_[u][v] = mult;
        adj_[v][u] = mult;
    }
}

void MultiGraph::remove_edge(VertexId u, VertexId v) { set_edge_mult(u, v, 0); }

void MultiGraph::remove_vertex(VertexId v) {
    auto it = adj_.find(v);
    if (it == adj_.end()) return;
    for (const auto& [w, mult] : it->second) {
        if (w != v) adj_[w].erase(v);
    }
    adj_.erase(it);
}

int MultiGraph::edge_mult(VertexId u, VertexId v) const {
    count_step();
    auto it = adj_.find(u);
    if (it == adj_.end()) return 0;
    auto jt = it->second.find(v);
    return jt == it->second.end() ? 0 : jt->second;
}

int MultiGraph::degree(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) return 0;
    int deg = 0;
    for (const auto& [w, mult] : it->second) {
        count_step();
        deg += (w == v) ? 2 * mult : mult;
    }
    return deg;
}

std::size_t MultiGraph::num_edges() const {
    std::size_t count = 0;
    for (const auto& [v, row] : adj_)
        for (const auto& [w, mult] : row)
            if (w >= v) ++count;
    return count;
}

long long MultiGraph::total_multiplicity() const {
    long long total = 0;
    for (const auto& [v, row] : adj_)
        for (const auto& [w, mult] : row)
            if (w >= v) total += mult;
    return total;
}

VertexId MultiGraph::max_vertex_id() const { return adj_.empty() ? 0 : adj_.rbegin()->first; }

VertexSet MultiGraph::vertices() const {
    VertexSet out;
    out.reserve(adj_.size());
    for (const auto& [v, row] : adj_) out.push_back(v);
    return out;
}

std::vector<VertexId> MultiGraph::neighbors(VertexId v) const {
    std::vector<VertexId> out;
    auto it = adj_.find(v);
    if (it == adj_.end()) return out;
    for (const auto& [w, mult] : it->second) {
        count_step();
        if (w != v) out.push_back(w);
    }
    return out;
}

const std::map<VertexId, int>& MultiGraph::adjacency(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw internal_error("adjacency of absent vertex " + std::to_string(v));
    return it->second;
}

MultiGraph MultiGraph::induced(const VertexSet& keep) const {
    MultiGraph out;
    for (VertexId v : keep)
        if (has_vertex(v)) out.add_vertex(v);
    for (VertexId v : keep) {
        auto it = adj_.find(v);
        if (it == adj_.end()) continue;
        for (const auto& [w, mult] : it->second) {
            count_step();
            if (w >= v && set_contains(keep, w)) out.set_edge_mult(v, w, mult);
        }
    }
    return out;
}

// ------------------------------ text format --------------------------------

MultiGraph parse_graph(std::istream& in) {
    MultiGraph g;
    std::string line;
    int lineno = 0;
    int header_line = 0;
    long long n = -1, m = -1, seen_edges = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip trailing carriage return so CRLF files parse too
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;  // blank line
        if (tag[0] == '#') continue;
        if (tag == "p") {
            if (n >= 0) throw parse_error(lineno, "duplicate header");
            if (!(ls >> n >> m) || n < 0 || m < 0) throw parse_error(lineno, "malformed header");
            std::string rest;
            if (ls >> rest) throw parse_error(lineno, "trailing tokens after header");
            header_line = lineno;
            for (VertexId v = 1; v <= n; ++v) g.add_vertex(v);
        } else if (tag == "e") {
            if (n < 0) throw parse_error(lineno, "edge before header");
            long long u, v, mult = 1;
            if (!(ls >> u >> v)) throw parse_error(lineno, "malformed edge line");
            if (!(ls >> mult)) mult = 1;
            std::string rest;
            if (ls >> rest) throw parse_error(lineno, "trailing tokens after edge");
            if (u < 1 || u > n || v < 1 || v > n) throw parse_error(lineno, "vertex id out of range");
            if (mult < 1) throw parse_error(lineno, "multiplicity < 1");
            ++seen_edges;
            if (seen_edges > m) throw parse_error(lineno, "more edge lines than the header declares");
            g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), static_cast<int>(mult));
        } else {
            throw parse_error(lineno, "unknown line type '" + tag + "'");
        }
    }
    if (n < 0) throw parse_error(lineno, "missing header");
    if (seen_edges != m) throw parse_error(header_line, "fewer edge lines than the header declares");
    return g;
}

MultiGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

std::string serialize_graph(const MultiGraph& g) {
    std::ostringstream out;
    out << "p " << g.max_vertex_id() << " " << g.num_edges() << "\n";
    for (VertexId v : g.vertices()) {
        for (const auto& [w, mult] : g.adjacency(v)) {
            if (w < v) continue;
            out << "e " << v << " " << w;
            if (mult != 1) out << " " << mult;
            out << "\n";
        }
    }
    return out.str();
}

// ------------------------------- algorithms --------------------------------

namespace {

class UnionFind {
public:
    int find(int v) {
        auto it = parent_.find(v);
        if (it == parent_.end()) {
            parent_[v] = v;
            return v;
        }
        int root = v;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[v] != root) v = std::exchange(parent_[v], root);
        return root;
    }
    // false if u and v were already connected
    bool unite(int u, int v) {
        int ru = find(u), rv = find(v);
        if (ru == rv) return false;
        parent_[ru] = rv;
        return true;
    }

private:
    std::map<int, int> parent_;
};

}  // namespace

bool is_forest(const MultiGraph& g, const VertexSet& removed) {
    UnionFind uf;
    for (VertexId v : g.vertices()) {
        if (set_contains(removed, v)) continue;
        for (const auto& [w, mult] : g.adjacency(v)) {
            count_step();
            if (w < v || set_contains(removed, w)) continue;
            if (w == v) return false;        // loop
            if (mult >= 2) return false;     // 2-cycle
            if (!uf.unite(v, w)) return false;
        }
    }
    return true;
}

MultiGraph contract(const MultiGraph& g, VertexId x, VertexId a) {
    if (x == a || !g.has_vertex(x) || !g.has_vertex(a) || g.edge_mult(x, a) == 0)
        throw Error(Error::Kind::usage, "contract error: " + std::to_string(x) + " is not adjacent to " + std::to_string(a));
    MultiGraph out = g;
    const auto row = g.adjacency(x);  // copy: out is mutated below
    out.remove_vertex(x);
    for (const auto& [w, mult] : row) {
        if (w == a) continue;  // the x-a edge vanishes, producing no loop
        if (w == x)
            out.add_edge(a, a, mult);  // pre-existing loop at x moves to a
        else
            out.add_edge(a, w, mult);
    }
    return out;
}

std::vector<VertexSet> connected_components(const MultiGraph& g, const VertexSet& excluded) {
    std::vector<VertexSet> components;
    VertexSet seen;
    for (VertexId seed : g.vertices()) {
        if (set_contains(excluded, seed) || set_contains(seen, seed)) continue;
        VertexSet component;
        std::vector<VertexId> stack{seed};
        set_insert(seen, seed);
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            set_insert(component, v);
            for (VertexId w : g.neighbors(v)) {
                if (set_contains(excluded, w) || set_contains(seen, w)) continue;
                set_insert(seen, w);
                stack.push_back(w);
            }
        }
        components.push_back(std::move(component));
    }
    // seeds are visited in ascending order, so the list is already sorted by
    // smallest member
    return components;
}

MultiGraph random_graph(const RandomSpec& spec) {
    if (spec.n < 0 || spec.p < 0 || spec.p > 1 || spec.multiProb < 0 || spec.multiProb > 1 ||
        spec.loopProb < 0 || spec.loopProb > 1)
        throw usage_error("random_graph parameters out of range");
    std::mt19937_64 rng(spec.seed);
    // explicit mapping to [0,1) so outputs are reproducible across standard
    // library implementations
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    MultiGraph g;
    for (VertexId v = 1; v <= spec.n; ++v) g.add_vertex(v);
    for (VertexId i = 1; i <= spec.n; ++i) {
        for (VertexId j = i + 1; j <= spec.n; ++j) {
            if (uniform() < spec.p) {
                int mult = uniform() < spec.multiProb ? 2 : 1;
                g.add_edge(i, j, mult);
            }
        }
    }
    for (VertexId v = 1; v <= spec.n; ++v)
        if (uniform() < spec.loopProb) g.add_edge(v, v, 1);
    return g;
}

}  // namespace enumk
