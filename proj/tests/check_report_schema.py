"""Run the CLI on the shipped window files and validate every JSON report."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main() -> int:
    cli, schema_dir, data_dir = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    window_schema = json.loads((schema_dir / "window.schema.json").read_text())
    report_schema = json.loads((schema_dir / "report.schema.json").read_text())
    for schema in (window_schema, report_schema):
        jsonschema.Draft202012Validator.check_schema(schema)
    window_v = jsonschema.Draft202012Validator(window_schema)
    report_v = jsonschema.Draft202012Validator(report_schema)

    failures = 0

    def check(validator, doc, what):
        nonlocal failures
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors:
            print(f"FAIL {what}: {'/'.join(map(str, e.path))}: {e.message}")
        failures += bool(errors)

    windows = sorted(data_dir.glob("*.json"))
    for path in windows:
        check(window_v, json.loads(path.read_text()), path.name)

    def run(args, expect=(0,)):
        nonlocal failures
        proc = subprocess.run([cli, *args], capture_output=True, text=True)
        if proc.returncode not in expect:
            print(f"FAIL exit {proc.returncode}: {' '.join(args)}\n{proc.stderr}")
            failures += 1
            return None
        return json.loads(proc.stdout)

    small = ["--grid", "16x16", "--sizes", "1,2", "--x-samples", "16", "--timing"]
    runs = [
        (["analyze", "--window", str(data_dir / "gaussian.json"), "--alpha", "1", "--p", "1", "--q", "1", *small], (0,)),
        (["analyze", "--window", str(data_dir / "hermite1.json"), "--alpha", "1", "--p", "1", "--q", "2", *small], (0,)),
        (["analyze", "--window", str(data_dir / "bump.json"), "--alpha", "2", "--p", "1", "--q", "2", *small], (0,)),
        (["analyze", "--window", str(data_dir / "combo.json"), "--alpha", "1", "--p", "3", "--q", "2", *small], (0,)),
        (["analyze", "--window", "gaussian", "--alpha", "1e-4", "--p", "1", "--q", "2", "--eps", "1e-300", *small], (3,)),
        (["theta", "--window", str(data_dir / "rational.json"), "--alpha", "1", "--p", "2", "--q", "3",
          "--columns", "0,2", "--x", "0.3", "--N", "1"], (0,)),
        (["theta", "--window", "hermite:2", "--alpha", "1", "--p", "1", "--q", "2", "--search", "--x-samples", "8"], (0,)),
        (["reconstruct", "--window", "gaussian", "--alpha", "1", "--p", "1", "--q", "2"], (0,)),
        (["reconstruct", "--window", "gaussian", "--alpha", "1", "--p", "1", "--q", "1"], (0,)),
    ]
    for args, expect in runs:
        report = run(args, expect)
        if report is None:
            continue
        what = " ".join(args[:1] + args[2:3])
        check(report_v, report, what)
        check(window_v, report["window"], what + " window echo")

    print(f"{len(windows)} window files, {len(runs)} reports, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
