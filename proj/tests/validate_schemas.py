"""Runs each pnormconc command and validates its JSON output against schemas/."""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource


def main() -> int:
    exe, schema_dir, data_dir, work = (pathlib.Path(a) for a in sys.argv[1:5])
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)

    schemas = {}
    registry = Registry()
    for path in sorted(schema_dir.glob("*.schema.json")):
        schema = json.loads(path.read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        schemas[path.name.removesuffix(".schema.json")] = schema
        registry = registry.with_resource(schema["$id"], Resource.from_contents(schema))

    def run(*args, expect=0):
        proc = subprocess.run([str(exe), *map(str, args)], capture_output=True, text=True)
        if proc.returncode != expect:
            raise SystemExit(f"{' '.join(map(str, args))}: exit {proc.returncode}\n{proc.stderr}")
        return proc.stdout

    def check(name, document, label):
        validator = jsonschema.Draft202012Validator(
            schemas[name], registry=registry, format_checker=jsonschema.FormatChecker())
        errors = sorted(validator.iter_errors(document), key=lambda e: list(e.path))
        for e in errors:
            print(f"FAIL {label}: {'/'.join(map(str, e.path))}: {e.message}")
        if not errors:
            print(f"ok   {label}")
        return not errors

    ok = True
    for args in (["--p", "2", "--d", "10000"],
                 ["--p", "2", "--d", "10000", "--epsilon", "0.1", "--support-C", "1"],
                 ["--dist", "mixture", "--p", "0.5", "--d", "100", "--epsilon", "0.2"],
                 ["--dist", "empirical", "--data", data_dir / "values.csv", "--p", "3", "--d", "50"]):
        ok &= check("predict", json.loads(run("predict", *args)), "predict " + " ".join(map(str, args)))

    sim = work / "sim"
    run("simulate", "--statistic", "normalized-range-yu", "--p", "2", "--d", "1000",
        "--n-exponent", "0.3", "--replicates", "200", "--seed", "3", "--out-dir", sim)
    ok &= check("simulate", json.loads((sim / "summary.json").read_text()), "simulate summary")
    ok &= check("manifest", json.loads((sim / "manifest.json").read_text()), "simulate manifest")
    sched = work / "sched"
    out = run("simulate", "--statistic", "relative-contrast", "--dist", "empirical", "--data",
              data_dir / "values.csv", "--p", "1", "--d", "10,100,1000,10000", "--n", "4",
              "--replicates", "50", "--seed", "4", "--out-dir", sched)
    ok &= check("simulate", json.loads(out), "simulate schedule (stdout)")

    report = work / "verify.json"
    run("verify", "mixture-ordering", "--json", report)
    ok &= check("verify", json.loads(report.read_text()), "verify")

    ok &= check("diagnose", json.loads(run("diagnose", data_dir / "two_points.csv")), "diagnose")

    for law, extra in (("gumbel-sum", []), ("normal-range", ["--n", "5"]),
                       ("ratio", ["--n", "3", "--samples", "100000"])):
        out_dir = work / law
        run("table", "--law", law, *extra, "--points", "101", "--out-dir", out_dir)
        ok &= check("table", json.loads((out_dir / "table.json").read_text()), f"table {law}")

    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
