#!/usr/bin/env python3
"""CLI contract checks: exit codes, JSON schemas, batch ordering, determinism.

usage: check_cli.py <reebmin binary> <schema dir>
"""

import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

BIN = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

registry = Registry()
for path in SCHEMAS.glob("*.schema.json"):
    doc = json.loads(path.read_text())
    registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))


def validator(name):
    doc = json.loads((SCHEMAS / name).read_text())
    Draft202012Validator.check_schema(doc)
    return Draft202012Validator(doc, registry=registry)


JOB = validator("job.schema.json")
REPORT = validator("report.schema.json")
failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def cli(*args, stdin=None):
    p = subprocess.run([BIN, *args], input=stdin, capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def report_ok(text, what):
    doc = json.loads(text)
    errors = list(REPORT.iter_errors(doc))
    check(not errors, what + " matches report schema" + (f" ({errors[0].message})" if errors else ""))
    if "input" in doc:
        check(not list(JOB.iter_errors(doc["input"])), what + " input echo matches job schema")
    return doc


JOBS = [
    {"command": "cone-minimize", "payload": {"n": 3, "normals": [[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]]}},
    {"command": "cone-topology", "payload": {"n": 3, "normals": [[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]]}},
    {"command": "link-check", "payload": {"exponents": [2, 3, 7, 5]}},
    {"command": "link-enumerate", "payload": {"template": "2,3,7,_", "range": [5, 41], "predicate": "bgk"}},
    {"command": "obstruct-hs", "payload": {"weights": [21, 21, 21, 2], "degree": 42}},
    {"command": "join", "payload": {"ord": [1, 1], "index": [2, 2], "n": [2, 2]}},
    {"command": "ypq", "payload": {"p": 2, "q": 1, "check_einstein": True, "samples": 3}},
    {"command": "labc", "payload": {"a": 1, "b": 3, "c": 2, "to_cone": True, "minimize": True}},
    {"command": "gale-dual", "payload": {"charges": [[2, 2, -1, -3]]}},
]

for job in JOBS:
    check(not list(JOB.iter_errors(job)), f"{job['command']} job matches job schema")

bad_jobs = [
    {"command": "link-check", "payload": {"exponents": [2, 3, 5], "colour": 1}},
    {"command": "join", "payload": {"ord": [1, 1], "index": [2, 2]}},
    {"command": "teleport", "payload": {}},
]
for job in bad_jobs:
    check(bool(list(JOB.iter_errors(job))), f"job schema rejects {json.dumps(job)}")

with tempfile.TemporaryDirectory() as tmp:
    for job in JOBS:
        path = pathlib.Path(tmp) / "job.json"
        path.write_text(json.dumps(job))
        code, out, err = cli("run", "--input", str(path))
        check(code == 0, f"run {job['command']} exits 0")
        doc = report_ok(out, f"run {job['command']}")
        check(doc["status"] == "ok", f"run {job['command']} status ok")
        code2, out2, _ = cli("run", "--input", str(path))
        check(out == out2, f"run {job['command']} is byte-identical across runs")

    cone = pathlib.Path(tmp) / "conifold.json"
    cone.write_text(json.dumps(JOBS[0]["payload"]))
    code, out, _ = cli("--exact-certify", "cone", "minimize", "--input", str(cone))
    doc = report_ok(out, "cone minimize")
    check(abs(doc["result"]["normalized_volume"] - 16 / 27) <= 1e-9, "conifold normalized volume 16/27")
    check(doc["result"]["xi_exact"] == ["3", "3/2", "3/2"], "conifold xi certified")

code, out, _ = cli("link", "check", "2,3,7,5")
doc = report_ok(out, "link check")
check(code == 0 and doc["result"]["bgk"] == "pass", "link check 2,3,7,5 bgk pass")

code, out, _ = cli("obstruct", "hs", "--weights", "21,21,21,2", "--degree", "42")
doc = report_ok(out, "obstruct hs")
check(code == 0 and doc["result"]["bishop"]["verdict"] == "obstructed", "bishop obstructed, exit 0")
code, _, _ = cli("--strict", "obstruct", "hs", "--weights", "21,21,21,2", "--degree", "42")
check(code == 2, "strict obstructed exits 2")

code, out, _ = cli("ypq", "--p", "2", "--q", "2")
doc = report_ok(out, "ypq error")
check(code == 1 and doc["status"] == "error" and doc["error"]["name"] == "BadParams", "ypq p=q exits 1 with BadParams")

code, _, _ = cli("cone", "minimize")
check(code == 1, "missing --input exits 1")

code, out, _ = cli("--version")
check(code == 0 and "0.1.0" in out, "--version")

code, out, _ = cli("ypq", "--p", "3", "--q", "1", "--check-einstein", "--samples", "4", "--seed", "9")
doc = report_ok(out, "ypq einstein")
check(doc["result"]["einstein"]["pass"], "ypq (3,1) Einstein check passes")

lines = [
    json.dumps({"command": "link-check", "payload": {"exponents": [2, 3, 7, k], "predicate": "coprime>=2&bgk"}})
    for k in range(5, 42)
]
code, out, _ = cli("--threads", "4", "batch", "--input", "-", stdin="\n".join(lines) + "\n")
rows = [json.loads(x) for x in out.splitlines()]
check(len(rows) == 37, "37-line batch returns 37 reports")
check([r["input"]["payload"]["exponents"][3] for r in rows] == list(range(5, 42)), "batch output in input order")
check(sum(r["outcome"] == "pass" for r in rows) == 27, "27 pass lines")
check(all(not list(REPORT.iter_errors(r)) for r in rows), "batch reports match report schema")
check(code == 0, "batch exits 0")

code, out, _ = cli("batch", "--input", "-", stdin=lines[0] + "\n{oops\n" + lines[2] + "\n")
rows = [json.loads(x) for x in out.splitlines()]
check(len(rows) == 3 and rows[1]["error"]["name"] == "SchemaError", "malformed line reports SchemaError")
check(rows[0]["status"] == "ok" and rows[2]["status"] == "ok", "other lines unaffected")
check(code == 1, "batch with an error line exits 1")

code, out, _ = cli("batch", "--input", "-", stdin="")
check(code == 0 and out == "", "empty batch: empty output, exit 0")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
