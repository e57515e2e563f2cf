#pragma once
// Brute-force ground truth: exhaustive vertex-cover / feedback-vertex-set
// enumeration, the half-integral VC optimum, and solution-set comparison.
// Everything here is written independently of the kernel machinery so the two
// can check each other.

#include <optional>
#include <string>
#include <vector>

#include "enumk/graph.hpp"
#include "enumk/stream.hpp"

namespace enumk {

using Digest = unsigned __int128;

struct SolutionSetReport {
    long long count = 0;
    std::vector<VertexSet> solutions;  // sorted lexicographically; may be capped
    bool solutions_complete = true;    // false once the retain cap was hit
    Digest digest = 0;                 // order-independent hash of the whole set
};

// Per-solution 128-bit polynomial hash of the sorted members; the set digest
// is the sum of these mod 2^128 (order-independent, duplicate-sensitive).
Digest solution_digest(const VertexSet& s);

SolutionSetReport report_from(std::vector<VertexSet> solutions);

// All vertex covers of size <= k. Guard n <= 24; requires a simple graph.
SolutionSetReport brute_vc(const MultiGraph& g, int k);

// All feedback vertex sets of size <= k (multigraphs welcome). Guard n <= 20.
SolutionSetReport brute_fvs(const MultiGraph& g, int k);

// Minimum of sum(x_v) over assignments x in {0, 1/2, 1}^V with
// x_u + x_v >= 1 on every edge, returned as twice the weight so the value
// stays integral and exact. Guard n <= 16; requires a simple graph.
int brute_half_integral_vc_twice(const MultiGraph& g);

struct CompareResult {
    bool equal = true;
    std::string detail;  // human-readable witness when not equal
};

CompareResult compare(const SolutionSetReport& a, const SolutionSetReport& b);

// Drains the stream, flags duplicates, then compares against expected.
CompareResult compare_stream(SolutionStream stream, const SolutionSetReport& expected);

}  // namespace enumk
