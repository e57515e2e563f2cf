// Command-line front-end: instance generation, kernelization, enumeration,
// oracle verification, and delay benchmarking.
//
// Solutions go to stdout, one per line (sorted ids, space-separated, the
// empty set printed as an empty line).  Machine-readable reports go to
// stderr as key=value lines so pipelines can consume the solution stream
// raw.  Exit statuses: 0 success/Equal, 2 NoInstance, 3 Diff, 4 usage error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "enumk/fvs.hpp"
#include "enumk/graph.hpp"
#include "enumk/oracle.hpp"
#include "enumk/stream.hpp"
#include "enumk/vc.hpp"

using namespace enumk;

namespace {

constexpr int kExitNoInstance = 2;
constexpr int kExitDiff = 3;
constexpr int kExitUsage = 4;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long long ms() const {
        auto d = std::chrono::steady_clock::now() - t0;
        return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
    }
};

MultiGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw usage_error("cannot write file: " + path);
    out << text;
    if (!out) throw usage_error("failed while writing file: " + path);
}

std::string format_solution(const VertexSet& s) {
    std::string line;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) line += ' ';
        line += std::to_string(s[i]);
    }
    line += '\n';
    return line;
}

template <typename T>
void report(const std::string& key, const T& value) {
    std::cerr << key << '=' << value << '\n';
}

void report_instance(const MultiGraph& g, int k) {
    report("n", g.num_vertices());
    report("m", g.num_edges());
    report("k", k);
}

void check_problem(const std::string& problem) {
    if (problem != "vc" && problem != "fvs")
        throw usage_error("unknown problem: " + problem + " (expected vc or fvs)");
}

SolutionStream make_stream(const std::string& problem, const MultiGraph& g, int k) {
    return problem == "vc" ? vc_enumerate(g, k) : fvs_enumerate(g, k);
}

SolutionSetReport run_oracle(const std::string& problem, const MultiGraph& g, int k) {
    return problem == "vc" ? brute_vc(g, k) : brute_fvs(g, k);
}

// ------------------------------- subcommands -------------------------------

int run_gen(const RandomSpec& spec, const std::string& out) {
    write_text(out, serialize_graph(random_graph(spec)));
    return 0;
}

int run_kernelize(const std::string& problem, const std::string& in, int k,
                  const std::string& traceOut) {
    Timer timer;
    MultiGraph g = load_graph(in);
    report_instance(g, k);
    bool no_instance = false;
    MultiGraph kernel;
    int kprime = 0;
    std::size_t trace_len = 0;
    std::string trace_text;
    if (problem == "vc") {
        VcKernel kern = vc_compress(g, k);
        no_instance = kern.no_instance;
        kernel = std::move(kern.graph);
        kprime = kern.k;
        trace_len = kern.trace.entries.size();
        if (!traceOut.empty()) trace_text = serialize_vc_trace(kern.trace);
    } else {
        FvsKernel kern = fvs_compress(g, k);
        no_instance = kern.no_instance;
        kernel = std::move(kern.graph);
        kprime = kern.k;
        trace_len = kern.trace.entries.size();
        if (!traceOut.empty()) trace_text = serialize_fvs_trace(kern.trace);
    }
    report("no_instance", no_instance ? 1 : 0);
    report("trace_len", trace_len);
    if (!traceOut.empty()) write_text(traceOut, trace_text);
    if (no_instance) {
        report("wall_ms", timer.ms());
        return kExitNoInstance;
    }
    report("kernel_n", kernel.num_vertices());
    report("kernel_m", kernel.num_edges());
    report("kprime", kprime);
    std::cout << serialize_graph(kernel);
    report("wall_ms", timer.ms());
    return 0;
}

int run_enumerate(const std::string& problem, const std::string& in, int k,
                  const std::string& engine, long long maxSolutions, bool countOnly) {
    if (engine != "kernel" && engine != "oracle")
        throw usage_error("unknown engine: " + engine + " (expected kernel or oracle)");
    Timer timer;
    MultiGraph g = load_graph(in);
    report_instance(g, k);
    report("engine", engine);
    long long count = 0;
    bool truncated = false;
    if (engine == "kernel") {
        // compress once up front so the report carries the kernel outcome
        if (problem == "vc") {
            VcKernel kern = vc_compress(g, k);
            report("no_instance", kern.no_instance ? 1 : 0);
            if (!kern.no_instance) {
                report("kernel_n", kern.graph.num_vertices());
                report("kprime", kern.k);
            }
            report("trace_len", kern.trace.entries.size());
        } else {
            FvsKernel kern = fvs_compress(g, k);
            report("no_instance", kern.no_instance ? 1 : 0);
            if (!kern.no_instance) {
                report("kernel_n", kern.graph.num_vertices());
                report("kprime", kern.k);
            }
            report("trace_len", kern.trace.entries.size());
        }
        SolutionStream stream = make_stream(problem, g, k);
        while (stream.next()) {
            if (!countOnly) {
                std::cout << format_solution(stream.value());
                std::cout.flush();
            }
            ++count;
            if (maxSolutions >= 0 && count >= maxSolutions) {
                truncated = true;
                break;
            }
        }
    } else {
        SolutionSetReport rep = run_oracle(problem, g, k);
        count = rep.count;
        report("solutions_complete", rep.solutions_complete ? 1 : 0);
        if (!countOnly) {
            long long printed = 0;
            for (const VertexSet& s : rep.solutions) {
                if (maxSolutions >= 0 && printed >= maxSolutions) {
                    truncated = true;
                    break;
                }
                std::cout << format_solution(s);
                ++printed;
            }
        }
    }
    report("count", count);
    report("truncated", truncated ? 1 : 0);
    report("wall_ms", timer.ms());
    return count == 0 ? kExitNoInstance : 0;
}

int run_verify(const std::string& problem, const std::string& in, int k, bool dropFirst) {
    Timer timer;
    MultiGraph g = load_graph(in);
    report_instance(g, k);
    SolutionSetReport expected = run_oracle(problem, g, k);
    report("count", expected.count);

    bool ok;
    std::string witness;
    if (dropFirst) {
        // fault injection for tests: drop the first streamed solution
        std::vector<VertexSet> rest;
        SolutionStream stream = make_stream(problem, g, k);
        bool first = true;
        while (stream.next()) {
            if (first) {
                first = false;
                continue;
            }
            rest.push_back(stream.value());
        }
        CompareResult cr = compare(report_from(std::move(rest)), expected);
        ok = cr.equal;
        witness = cr.detail;
    } else {
        CompareResult cr = compare_stream(make_stream(problem, g, k), expected);
        ok = cr.equal;
        witness = cr.detail;
    }

    // the vertex cover kernel additionally promises extension-only lifting:
    // every streamed solution restricted to the kernel vertices is itself a
    // kernel solution (the feedback vertex set families partition the
    // solution set but are not extension-only, so the check is vc-specific)
    if (ok && problem == "vc") {
        VcKernel kern = vc_compress(g, k);
        if (!kern.no_instance) {
            const VertexSet kernel_vertices = kern.graph.vertices();
            std::set<VertexSet> kernel_solutions;
            SolutionStream ks = vc_kernel_solutions(kern.graph, kern.k);
            while (ks.next()) kernel_solutions.insert(ks.value());
            SolutionStream stream = make_stream(problem, g, k);
            while (stream.next()) {
                VertexSet restricted = set_intersect(stream.value(), kernel_vertices);
                if (!kernel_solutions.count(restricted)) {
                    ok = false;
                    witness = "restriction " + format_solution(restricted);
                    witness.pop_back();  // trailing newline
                    witness += " of a streamed solution is not a kernel solution";
                    break;
                }
            }
        }
    }

    report("result", ok ? "Equal" : "Diff");
    if (!ok && !witness.empty()) report("witness", witness);
    report("wall_ms", timer.ms());
    std::cout << (ok ? "Equal" : "Diff") << '\n';
    return ok ? 0 : kExitDiff;
}

int run_bench_delay(const std::string& problem, const std::string& in, int k) {
    Timer timer;
    MultiGraph g = load_graph(in);
    report_instance(g, k);
    g_steps = 0;
    SolutionStream stream = make_stream(problem, g, k);
    std::uint64_t prev = g_steps;
    std::uint64_t precalc = 0, maxDelay = 0, sumDelay = 0, postcalc = 0;
    long long outputs = 0;
    while (stream.next()) {
        std::uint64_t delta = g_steps - prev;
        prev = g_steps;
        if (outputs == 0) {
            precalc = delta;
        } else {
            maxDelay = std::max(maxDelay, delta);
            sumDelay += delta;
        }
        ++outputs;
    }
    if (outputs == 0) {
        precalc = g_steps;
    } else {
        postcalc = g_steps - prev;
    }
    report("outputs", outputs);
    report("precalc_steps", precalc);
    report("max_delay_steps", maxDelay);
    report("mean_delay_steps", outputs > 1 ? sumDelay / (std::uint64_t)(outputs - 1) : 0);
    report("postcalc_steps", postcalc);
    report("wall_ms", timer.ms());
    return outputs == 0 ? kExitNoInstance : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"enumeration kernels for vertex cover and feedback vertex set"};
    app.require_subcommand(1);

    // gen
    RandomSpec spec;
    std::string genOut;
    CLI::App* gen = app.add_subcommand("gen", "generate a seeded random instance");
    gen->add_option("--n", spec.n, "number of vertices")->required();
    gen->add_option("--p", spec.p, "edge probability");
    gen->add_option("--multi", spec.multiProb, "probability a present edge is doubled");
    gen->add_option("--loops", spec.loopProb, "probability a vertex carries a loop");
    gen->add_option("--seed", spec.seed, "random seed");
    gen->add_option("--out", genOut, "output path (default stdout)");

    std::string problem, in, traceOut, engine = "kernel";
    int k = 0;
    long long maxSolutions = -1;
    bool countOnly = false, dropFirst = false;

    // kernelize
    CLI::App* kernelize = app.add_subcommand("kernelize", "compress an instance to its kernel");
    kernelize->add_option("--problem", problem, "vc or fvs")->required();
    kernelize->add_option("--in", in, "input graph path")->required();
    kernelize->add_option("--k", k, "solution size bound")->required();
    kernelize->add_option("--traceOut,--trace-out", traceOut, "write the reduction trace here");

    // enumerate
    CLI::App* enumerate = app.add_subcommand("enumerate", "stream all solutions of size <= k");
    enumerate->add_option("--problem", problem, "vc or fvs")->required();
    enumerate->add_option("--in", in, "input graph path")->required();
    enumerate->add_option("--k", k, "solution size bound")->required();
    enumerate->add_option("--engine", engine, "kernel or oracle (default kernel)");
    enumerate->add_option("--maxSolutions,--max-solutions", maxSolutions,
                          "stop after this many solutions");
    enumerate->add_flag("--countOnly,--count-only", countOnly, "report the count, print nothing");

    // verify
    CLI::App* verify = app.add_subcommand("verify", "compare the kernel engine against the oracle");
    verify->add_option("--problem", problem, "vc or fvs")->required();
    verify->add_option("--in", in, "input graph path")->required();
    verify->add_option("--k", k, "solution size bound")->required();
    verify->add_flag("--dropFirst,--drop-first", dropFirst)->group("");  // fault injection

    // bench-delay
    CLI::App* bench = app.add_subcommand("bench-delay", "instrumented enumeration step counts");
    bench->add_option("--problem", problem, "vc or fvs")->required();
    bench->add_option("--in", in, "input graph path")->required();
    bench->add_option("--k", k, "solution size bound")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) return run_gen(spec, genOut);
        check_problem(problem);
        if (*kernelize) return run_kernelize(problem, in, k, traceOut);
        if (*enumerate) return run_enumerate(problem, in, k, engine, maxSolutions, countOnly);
        if (*verify) return run_verify(problem, in, k, dropFirst);
        if (*bench) return run_bench_delay(problem, in, k);
        throw usage_error("no subcommand selected");
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return e.kind() == Error::Kind::parse || e.kind() == Error::Kind::usage ? kExitUsage : 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
