#include "enumk/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace enumk {

namespace {

constexpr std::size_t kRetainLimit = std::size_t(1) << 21;

// Visits every size-r subset of universe (ascending ids, lexicographic order).
template <class Visit>
void for_each_combination(const VertexSet& universe, int r, Visit&& visit) {
    const int n = static_cast<int>(universe.size());
    if (r < 0 || r > n) return;
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    VertexSet subset(r);
    while (true) {
        for (int i = 0; i < r; ++i) subset[i] = universe[idx[i]];
        visit(subset);
        int i = r - 1;
        while (i >= 0 && idx[i] == n - r + i) --i;
        if (i < 0) break;  // r = 0 lands here after the single empty visit
        ++idx[i];
        for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

bool require_simple(const MultiGraph& g, const char* who) {
    for (VertexId v : g.vertices()) {
        if (g.has_loop(v)) throw usage_error(std::string(who) + " requires a simple graph (loop at " + std::to_string(v) + ")");
        for (const auto& [w, mult] : g.adjacency(v))
            if (mult >= 2) throw usage_error(std::string(who) + " requires a simple graph (double edge)");
    }
    return true;
}

std::string format_set(const VertexSet& s) {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << s[i];
    out << "}";
    return out.str();
}

}  // namespace

Digest solution_digest(const VertexSet& s) {
    // seeded so the empty set hashes to something other than 0
    Digest h = (Digest(0x9E3779B97F4A7C15ull) << 64) | 0xD1B54A32D192ED03ull;
    constexpr Digest prime = (Digest(0x0000000001000000ull) << 64) | 0x000000000000013Bull;
    for (VertexId v : s) h = h * prime + Digest(static_cast<unsigned>(v) + 1);
    return h;
}

SolutionSetReport report_from(std::vector<VertexSet> solutions) {
    SolutionSetReport report;
    report.count = static_cast<long long>(solutions.size());
    for (const VertexSet& s : solutions) report.digest += solution_digest(s);
    std::sort(solutions.begin(), solutions.end());
    if (solutions.size() > kRetainLimit) {
        solutions.resize(kRetainLimit);
        report.solutions_complete = false;
    }
    report.solutions = std::move(solutions);
    return report;
}

SolutionSetReport brute_vc(const MultiGraph& g, int k) {
    if (g.num_vertices() > 24) throw usage_error("brute_vc guard: n <= 24");
    require_simple(g, "brute_vc");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId v : g.vertices())
        for (const auto& [w, mult] : g.adjacency(v))
            if (w > v) edges.emplace_back(v, w);
    const VertexSet universe = g.vertices();
    std::vector<VertexSet> found;
    for (int r = 0; r <= k && r <= static_cast<int>(universe.size()); ++r) {
        for_each_combination(universe, r, [&](const VertexSet& s) {
            for (const auto& [u, v] : edges)
                if (!set_contains(s, u) && !set_contains(s, v)) return;
            found.push_back(s);
        });
    }
    return report_from(std::move(found));
}

SolutionSetReport brute_fvs(const MultiGraph& g, int k) {
    if (g.num_vertices() > 20) throw usage_error("brute_fvs guard: n <= 20");
    const VertexSet universe = g.vertices();
    std::vector<VertexSet> found;
    for (int r = 0; r <= k && r <= static_cast<int>(universe.size()); ++r) {
        for_each_combination(universe, r, [&](const VertexSet& s) {
            if (is_forest(g, s)) found.push_back(s);
        });
    }
    return report_from(std::move(found));
}

namespace {

// DFS over {0, 1/2, 1} assignments in twice-units {0,1,2}; prunes on weight
// and on already-violated edges to assigned vertices.
void half_integral_dfs(const std::vector<std::vector<int>>& earlier_nbrs, std::vector<int>& value,
                       std::size_t at, int twice_weight, int& best) {
    if (twice_weight >= best) return;
    if (at == value.size()) {
        best = twice_weight;
        return;
    }
    for (int x : {0, 1, 2}) {
        bool ok = true;
        for (int u : earlier_nbrs[at])
            if (value[u] + x < 2) {
                ok = false;
                break;
            }
        if (!ok) continue;
        value[at] = x;
        half_integral_dfs(earlier_nbrs, value, at + 1, twice_weight + x, best);
    }
}

}  // namespace

int brute_half_integral_vc_twice(const MultiGraph& g) {
    if (g.num_vertices() > 16) throw usage_error("brute_half_integral_vc guard: n <= 16");
    require_simple(g, "brute_half_integral_vc");
    const VertexSet verts = g.vertices();
    const int n = static_cast<int>(verts.size());
    std::vector<std::vector<int>> earlier_nbrs(n);  // neighbor positions < own position
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (g.edge_mult(verts[i], verts[j]) > 0) earlier_nbrs[i].push_back(j);
    int best = 2 * n + 1;
    std::vector<int> value(n, 0);
    half_integral_dfs(earlier_nbrs, value, 0, 0, best);
    return best;
}

CompareResult compare(const SolutionSetReport& a, const SolutionSetReport& b) {
    CompareResult result;
    if (a.count != b.count) {
        result.equal = false;
        result.detail = "count mismatch: " + std::to_string(a.count) + " vs " + std::to_string(b.count);
    }
    if (a.solutions_complete && b.solutions_complete) {
        std::size_t i = 0, j = 0;
        while (i < a.solutions.size() || j < b.solutions.size()) {
            if (j == b.solutions.size() || (i < a.solutions.size() && a.solutions[i] < b.solutions[j])) {
                result.equal = false;
                result.detail = "only in first: " + format_set(a.solutions[i]);
                return result;
            }
            if (i == a.solutions.size() || b.solutions[j] < a.solutions[i]) {
                result.equal = false;
                result.detail = "only in second: " + format_set(b.solutions[j]);
                return result;
            }
            ++i, ++j;
        }
    } else if (a.digest != b.digest) {
        result.equal = false;
        if (result.detail.empty()) result.detail = "digest mismatch";
    }
    return result;
}

CompareResult compare_stream(SolutionStream stream, const SolutionSetReport& expected) {
    std::vector<VertexSet> streamed;
    std::set<VertexSet> seen;
    for (VertexSet& s : stream) {
        if (!seen.insert(s).second) {
            CompareResult result;
            result.equal = false;
            result.detail = "duplicate streamed solution: " + format_set(s);
            return result;
        }
        streamed.push_back(s);
    }
    return compare(report_from(std::move(streamed)), expected);
}

}  // namespace enumk
