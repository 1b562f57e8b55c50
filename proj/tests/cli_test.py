"""Exit codes, outputs and determinism of the wcre command line."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

BIN, SCHEMA, DATA = sys.argv[1], sys.argv[2], sys.argv[3]
EXP1 = '{"family":"exponential","lambda":1}'
ONE = '{"kind":"constant","c":1}'

failures = []


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True)


def expect(name, cond, extra=""):
    print(("ok   " if cond else "FAIL ") + name + (f"  {extra}" if extra else ""))
    if not cond:
        failures.append(name)


schema = json.load(open(SCHEMA))
tmp = tempfile.mkdtemp()

r = run("compute", "--quantity", "wcre", "--model", EXP1, "--weight", ONE)
out = json.loads(r.stdout)
expect("compute wcre exit 0", r.returncode == 0)
expect("compute wcre value", abs(out["value"] - 1.0) < 1e-9, out["value"])
expect("compute echoes inputs", out["inputs"]["model"]["lambda"] == 1)

r = run("compute", "--quantity", "relative", "--model", f"[{EXP1},{EXP1}]", "--weight", ONE)
expect("compute relative identical", r.returncode == 0 and json.loads(r.stdout)["value"] == 0.0)

r = run("compute", "--quantity", "wcre", "--model", '{"family":"lomax","alpha":0.8}', "--weight", ONE)
expect("divergence exit 2", r.returncode == 2, r.returncode)
expect("divergence not finite", json.loads(r.stdout)["finite"] is False)

expect("unknown quantity exit 64", run("compute", "--quantity", "bogus", "--model", EXP1).returncode == 64)
expect("bad family exit 1", run("compute", "--quantity", "wcre", "--model", '{"family":"nope"}').returncode == 1)
expect("missing file exit 1", run("compute", "--quantity", "wcre", "--model", os.path.join(tmp, "absent.json")).returncode == 1)
expect("no subcommand exit 64", run().returncode == 64)

bad = {"check_id": "GIBBS", "models": [{"family": "gamma", "k": 0.5, "theta": 1}, {"family": "exponential", "lambda": 2}],
       "weight": {"kind": "constant", "c": 1}, "spec": {"max_subdivisions": 1, "rel_tol": 1e-14}}
r = run("check", "--catalog", json.dumps(bad))
expect("quadrature failure exit 3", r.returncode == 3, r.returncode)
jsonschema.validate(json.loads(r.stdout), schema)

gibbs_eq = [{"id": "eq", "check_id": "GIBBS", "models": [json.loads(EXP1)] * 2, "weight": json.loads(ONE)},
            {"id": "hnm", "check_id": "GIBBS", "models": [{"family": "exponential", "lambda": 2}, json.loads(EXP1)],
             "weight": json.loads(ONE)}]
cat = os.path.join(tmp, "gibbs.json")
json.dump(gibbs_eq, open(cat, "w"))
r = run("suite", "--catalog", cat)
rep = json.loads(r.stdout)
expect("suite with HNM exit 0", r.returncode == 0)
expect("equality slack", abs(rep[0]["slack"]) <= 1e-10)
expect("HNM counted", rep[1]["verdict"] == "HYPOTHESIS_NOT_MET" and "HYPOTHESIS_NOT_MET=1" in r.stderr)

r = run("suite", "--catalog", os.path.join(DATA, "ky_fan_counterexamples.json"))
expect("suite with FAIL exit 1", r.returncode == 1, r.returncode)

a, b = os.path.join(tmp, "a.json"), os.path.join(tmp, "b.json")
ra = run("suite", "--default", "--out", a, "--seed", "0")
rb = run("suite", "--default", "--out", b, "--seed", "0", "--jobs", "2")
expect("default suite exit 0", ra.returncode == 0 and rb.returncode == 0, ra.stdout[-200:])
expect("default suite byte-identical", open(a, "rb").read() == open(b, "rb").read())
expect("sidecar written", os.path.exists(a + ".meta.json"))
reports = json.load(open(a))
jsonschema.validate(reports, schema)
expect("default suite no FAIL", all(x["verdict"] != "FAIL" for x in reports))
expect("one summary line per check", len([l for l in ra.stdout.splitlines() if not l.startswith("total")])
       == len({x["check_id"] for x in reports}))

csv = os.path.join(tmp, "two.csv")
open(csv, "w").write("# two points\n1\n2\n")
r = run("estimate", "--sample", csv, "--weight", ONE)
expect("estimate two rows", abs(json.loads(r.stdout)["value"] - 0.34657359027997264) < 1e-12)
open(csv, "w").write("3.5\n")
expect("estimate one row", json.loads(run("estimate", "--sample", csv, "--weight", ONE).stdout)["value"] == 0.0)
open(csv, "w").write("1\nx\n")
r = run("estimate", "--sample", csv, "--weight", ONE)
expect("bad csv exit 1", r.returncode == 1 and "2" in r.stderr, r.stderr.strip())

r = run("estimate", "--experiment", "--model", EXP1, "--weight", ONE, "--sizes", "100,1000", "--reps", "20")
lines = r.stdout.strip().splitlines()
expect("experiment header", lines[0] == "n,mean_abs_err,sd", lines[0])
errs = [float(l.split(",")[1]) for l in lines[1:]]
expect("experiment monotone", len(errs) == 2 and errs[1] < errs[0], errs)

r = run("report", "--catalog", a, "--format", "csv")
expect("report csv", r.returncode == 0 and r.stdout.splitlines()[0].startswith("check_id"), r.stdout[:80])

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
