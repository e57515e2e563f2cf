#!/usr/bin/env python3
"""End-to-end checks for the enumk command-line tool.

Usage: cli_checks.py /path/to/enumk
"""

import subprocess
import sys
import tempfile
import time
from pathlib import Path

BIN = sys.argv[1]
WORK = Path(tempfile.mkdtemp(prefix="enumk_cli_"))
FAILURES = []


def run(*args, stdin=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, input=stdin)


def report_of(proc):
    out = {}
    for line in proc.stderr.splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            out[key] = value
    return out


def check(name, cond, detail=""):
    if cond:
        print(f"ok   {name}")
    else:
        print(f"FAIL {name} {detail}")
        FAILURES.append(name)


def write_graph(name, text):
    path = WORK / name
    path.write_text(text)
    return str(path)


# --------------------------------- gen -------------------------------------

a = run("gen", "--n", "8", "--p", "0.4", "--seed", "7")
b = run("gen", "--n", "8", "--p", "0.4", "--seed", "7")
check("gen deterministic in seed", a.returncode == 0 and a.stdout == b.stdout)

edgeless = run("gen", "--n", "5", "--p", "0")
check("gen p=0 edgeless", edgeless.returncode == 0 and edgeless.stdout.splitlines()[0] == "p 5 0")

multi_path = str(WORK / "multi.gr")
m = run("gen", "--n", "10", "--p", "0.3", "--multi", "0.5", "--loops", "0.1",
        "--seed", "3", "--out", multi_path)
mk = run("kernelize", "--problem", "fvs", "--in", multi_path, "--k", "4")
check("gen multigraph accepted by fvs pipeline", m.returncode == 0 and mk.returncode in (0, 2),
      f"rc={m.returncode},{mk.returncode}")

check("gen unwritable path is a usage error",
      run("gen", "--n", "3", "--out", str(WORK / "no" / "dir" / "x.gr")).returncode == 4)

# ------------------------------- kernelize ----------------------------------

p3 = write_graph("p3.gr", "p 3 2\ne 1 2\ne 2 3\n")
r = run("kernelize", "--problem", "vc", "--in", p3, "--k", "1")
rep = report_of(r)
check("kernelize vc P3 k=1 empty kernel",
      r.returncode == 0 and r.stdout.startswith("p 0 0") and rep.get("kprime") == "0",
      f"rc={r.returncode} out={r.stdout!r}")

k5_lines = ["p 5 10"] + [f"e {u} {v}" for u in range(1, 6) for v in range(u + 1, 6)]
k5 = write_graph("k5.gr", "\n".join(k5_lines) + "\n")
r = run("kernelize", "--problem", "vc", "--in", k5, "--k", "2")
check("kernelize vc K5 k=2 NoInstance exit", r.returncode == 2 and
      report_of(r).get("no_instance") == "1")

tri = write_graph("tri.gr", "p 3 3\ne 1 2\ne 1 3\ne 2 3\n")
r = run("kernelize", "--problem", "fvs", "--in", tri, "--k", "1")
rep = report_of(r)
check("kernelize fvs triangle k=1 empty kernel",
      r.returncode == 0 and r.stdout.startswith("p 0 0") and rep.get("kprime") == "0")

trace_path = str(WORK / "tri.trace")
r = run("kernelize", "--problem", "fvs", "--in", tri, "--k", "1", "--traceOut", trace_path)
trace = Path(trace_path).read_text()
check("kernelize writes the requested trace",
      r.returncode == 0 and trace.startswith("twintriangle u=1 x=2 y=3"),
      repr(trace[:40]))

dbl = write_graph("dbl.gr", "p 2 1\ne 1 2 2\n")
check("kernelize vc rejects multigraphs",
      run("kernelize", "--problem", "vc", "--in", dbl, "--k", "1").returncode == 4)
check("unknown problem is a usage error",
      run("kernelize", "--problem", "mis", "--in", tri, "--k", "1").returncode == 4)
check("missing file is a usage error",
      run("kernelize", "--problem", "vc", "--in", str(WORK / "absent.gr"), "--k", "1").returncode == 4)
check("bad flag is a usage error",
      run("kernelize", "--problem", "vc", "--wat", "1").returncode == 4)

# ------------------------------- enumerate ----------------------------------

c4 = write_graph("c4.gr", "p 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n")
r = run("enumerate", "--problem", "fvs", "--in", c4, "--k", "2", "--countOnly")
check("enumerate fvs C4 k=2 countOnly",
      r.returncode == 0 and r.stdout == "" and report_of(r).get("count") == "10")

r = run("enumerate", "--problem", "vc", "--in", p3, "--k", "2")
lines = r.stdout.splitlines()
check("enumerate vc P3 k=2 four lines",
      r.returncode == 0 and len(lines) == 4 and sorted(lines) == ["1 2", "1 3", "2", "2 3"],
      repr(lines))

r = run("enumerate", "--problem", "vc", "--in", p3, "--k", "2", "--engine", "oracle")
check("oracle engine agrees", r.returncode == 0 and len(r.stdout.splitlines()) == 4)

check("unknown engine is a usage error",
      run("enumerate", "--problem", "vc", "--in", p3, "--k", "2",
          "--engine", "magic").returncode == 4)

empty_sol = write_graph("iso.gr", "p 2 0\n")
r = run("enumerate", "--problem", "vc", "--in", empty_sol, "--k", "0")
check("empty set prints as an empty line", r.returncode == 0 and r.stdout == "\n", repr(r.stdout))

r = run("enumerate", "--problem", "fvs", "--in", c4, "--k", "0")
check("enumerate NoInstance exits 2", r.returncode == 2 and r.stdout == "")

# streaming contract: >= 2^20 solutions, ask for one, finish fast
match_lines = ["p 40 20"] + [f"e {2 * i + 1} {2 * i + 2}" for i in range(20)]
match20 = write_graph("match20.gr", "\n".join(match_lines) + "\n")
t0 = time.monotonic()
r = run("enumerate", "--problem", "vc", "--in", match20, "--k", "20",
        "--maxSolutions", "1")
elapsed = time.monotonic() - t0
check("maxSolutions=1 emits one line and exits cleanly",
      r.returncode == 0 and len(r.stdout.splitlines()) == 1 and
      report_of(r).get("truncated") == "1")
check("streaming contract beats the clock", elapsed < 5.0, f"{elapsed:.2f}s")

r = run("enumerate", "--problem", "vc", "--in", match20, "--k", "20",
        "--max-solutions", "3")
check("kebab-case flag spelling accepted",
      r.returncode == 0 and len(r.stdout.splitlines()) == 3)

# -------------------------------- verify ------------------------------------

for name, problem, path, k in [("vc P3", "vc", p3, 2), ("fvs C4", "fvs", c4, 2),
                               ("fvs multigraph", "fvs", dbl, 1)]:
    r = run("verify", "--problem", problem, "--in", path, "--k", str(k))
    check(f"verify {name} Equal", r.returncode == 0 and r.stdout.strip() == "Equal",
          f"rc={r.returncode}")

r = run("verify", "--problem", "fvs", "--in", c4, "--k", "0")
check("verify NoInstance on both sides is Equal",
      r.returncode == 0 and r.stdout.strip() == "Equal")

r = run("verify", "--problem", "vc", "--in", p3, "--k", "2", "--dropFirst")
check("verify mutated engine reports Diff with witness",
      r.returncode == 3 and r.stdout.strip() == "Diff" and "witness" in report_of(r),
      f"rc={r.returncode}")

# ------------------------------ bench-delay ---------------------------------

r = run("bench-delay", "--problem", "vc", "--in", p3, "--k", "2")
rep = report_of(r)
check("bench-delay vc P3 k=2 reports counts",
      r.returncode == 0 and rep.get("outputs") == "4" and
      int(rep.get("max_delay_steps", "-1")) >= 0 and "precalc_steps" in rep)

r = run("bench-delay", "--problem", "fvs", "--in", c4, "--k", "0")
rep = report_of(r)
check("bench-delay NoInstance reports precalculation only",
      r.returncode == 2 and rep.get("outputs") == "0" and
      rep.get("max_delay_steps") == "0" and rep.get("postcalc_steps") == "0")

# ----------------------------------------------------------------------------

print(f"{'FAILED' if FAILURES else 'passed'}: {len(FAILURES)} failures")
sys.exit(1 if FAILURES else 0)
