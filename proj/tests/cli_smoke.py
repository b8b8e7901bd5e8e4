"""Exit codes and key outputs of the olb command-line tool."""

import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

OLB = sys.argv[1]
SPECS = Path(sys.argv[2])
failures = []


def run(*args):
    return subprocess.run([OLB, *map(str, args)], capture_output=True, text=True)


def check(name, cond, detail=""):
    print(("PASS " if cond else "FAIL ") + name + (f" ({detail})" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def values(stdout):
    out = {}
    for line in stdout.splitlines():
        if " = " in line:
            key, val = line.split(" = ", 1)
            out[key.strip()] = val.split()[0]
    return out


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    r = run("curve-info", "--spec", SPECS / "circle.json")
    v = values(r.stdout)
    check("curve-info circle", r.returncode == 0 and abs(float(v["length"]) - 6.283185307179586) < 1e-12
          and abs(float(v["isoperimetric_defect"])) < 1e-10, r.stderr)
    r = run("curve-info", "--spec", SPECS / "ellipse.json")
    check("curve-info ellipse", r.returncode == 0 and values(r.stdout)["length"].startswith("9.6884482205"))
    r = run("curve-info", "--spec", SPECS / "nonconvex.json")
    check("non-convex spec exits 2", r.returncode == 2 and "NonConvex" in r.stderr, r.stderr)
    r = run("curve-info", "--spec", tmp / "missing.json")
    check("missing spec exits 2", r.returncode == 2)

    out = tmp / "orbit.csv"
    r = run("orbit", "--spec", SPECS / "circle.json", "--s0", 0, "--s1", 1.2566370614359172, "--steps", 5, "--out", out)
    rows = list(csv.DictReader(out.open()))
    check("pentagon orbit", r.returncode == 0 and len(rows) == 6
          and all(abs(float(x["residual"])) < 1e-12 for x in rows[:-1]) and rows[-1]["residual"] == ""
          and abs(float(rows[5]["Px"]) - float(rows[0]["Px"])) < 1e-12)
    r = run("orbit", "--spec", SPECS / "circle.json", "--px", 0.1, "--py", 0.0, "--steps", 5)
    check("inside point exits 3", r.returncode == 3 and "InsidePoint" in r.stderr, r.stderr)
    r = run("orbit", "--spec", SPECS / "circle.json", "--s0", 0, "--steps", 5)
    check("incomplete pair exits 1", r.returncode == 1)

    out = tmp / "beta.json"
    r = run("beta", "--spec", SPECS / "circle.json", "--qmin", 8, "--qmax", 128, "--out", out)
    report = json.loads(out.read_text())
    check("beta circle", r.returncode == 0 and report["relative_error"]["b3"] < 1e-8
          and (tmp / "beta.csv").exists(), r.stderr)
    r2 = run("beta", "--spec", SPECS / "circle.json", "--qmin", 8, "--qmax", 128, "--out", tmp / "beta2.json")
    check("beta output is deterministic", out.read_bytes() == (tmp / "beta2.json").read_bytes())
    r = run("beta", "--spec", SPECS / "ellipse.json", "--qmin", 8, "--qmax", 128)
    check("beta ellipse defect", r.returncode == 0 and json.loads(r.stdout)["isoperimetric_defect"] < 0)
    r = run("beta", "--spec", SPECS / "circle.json", "--qmin", 8, "--qmax", 64)
    check("beta four-point ladder", r.returncode == 0 and len(json.loads(r.stdout)["orbits"]) == 4, r.stderr)
    r = run("beta", "--spec", SPECS / "circle.json", "--qmin", 2, "--qmax", 128)
    check("qmin < 3 exits 1", r.returncode == 1)

    for which in ("H", "map", "lazutkin"):
        r = run("expansion-check", "--spec", SPECS / "perturbed_circle.json", "--which", which)
        check(f"expansion-check {which}", r.returncode == 0 and " PASS" in r.stdout, r.stdout + r.stderr)
    r = run("expansion-check", "--spec", SPECS / "perturbed_circle.json", "--which", "nope")
    check("unknown expansion exits 1", r.returncode == 1)

    out = tmp / "caustic.csv"
    r = run("caustic", "--a", 2, "--b", 1, "--lambda", 1, "--steps", 10000, "--out", out)
    v = values(r.stdout)
    check("caustic ellipse", r.returncode == 0 and float(v["max_deviation_over_length"]) < 1e-8
          and sum(1 for _ in out.open()) == 10002, r.stderr)
    r = run("caustic", "--a", 1, "--b", 1, "--lambda", 1, "--steps", 1000, "--out", tmp / "c2.csv")
    check("caustic circle", r.returncode == 0 and float(values(r.stdout)["max_deviation_over_length"]) < 1e-10)
    r = run("caustic", "--a", 2, "--b", 1, "--lambda", 0)
    check("lambda <= 0 exits 1", r.returncode == 1)

    out = tmp / "mather.csv"
    r = run("mather-scan", "--spec", SPECS / "circle.json", "--grid", 10, "--out", out)
    check("mather-scan circle", r.returncode == 0 and float(values(r.stdout)["max_M"]) < 0
          and sum(1 for _ in out.open()) == 101)
    r = run("mather-scan", "--spec", SPECS / "circle.json", "--grid", 1)
    check("grid < 2 exits 1", r.returncode == 1)

sys.exit(1 if failures else 0)
