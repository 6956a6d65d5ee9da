"""Runs every lipdisc subcommand with --out and validates the files against schema/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for path in schema_dir.glob("*.schema.json"):
        schemas[path.name] = json.loads(path.read_text())
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values()
    )
    return schemas, registry


def validate(instance, schema, registry, label):
    cls = jsonschema.validators.validator_for(schema)
    errors = sorted(cls(schema, registry=registry).iter_errors(instance), key=str)
    for e in errors:
        print(f"FAIL {label}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
    return not errors


def main():
    binary = pathlib.Path(sys.argv[1])
    root = pathlib.Path(sys.argv[2])
    schemas, registry = load_registry(root / "schema")
    benchmarks = sorted((root / "data" / "benchmarks").glob("*.json"))
    ok = True

    for spec in benchmarks:
        ok &= validate(json.loads(spec.read_text()), schemas["system-spec.schema.json"],
                       registry, spec.name)
    for golden in sorted((root / "data" / "golden").glob("*.json")):
        ok &= validate(json.loads(golden.read_text()), schemas["report.schema.json"],
                       registry, golden.name)

    commands = {
        "constants": ([], "constants.schema.json"),
        "bounds": (["--order", "2"], "bounds.schema.json"),
        "verify": (["--order", "3", "--pairs", "2000"], "report.schema.json"),
        "discretize": (["--steps", "3", "--exact"], "trajectory.schema.json"),
        "convergence": (["--samples", "4"], "convergence.schema.json"),
    }
    with tempfile.TemporaryDirectory() as tmp:
        for spec in benchmarks:
            for cmd, (extra, schema_name) in commands.items():
                out = pathlib.Path(tmp) / f"{spec.stem}.{cmd}.json"
                proc = subprocess.run([str(binary), cmd, str(spec), "--out", str(out), *extra],
                                      capture_output=True, text=True)
                if proc.returncode not in (0, 1):
                    print(f"FAIL {spec.stem} {cmd}: exit {proc.returncode}: {proc.stderr}")
                    ok = False
                    continue
                ok &= validate(json.loads(out.read_text()), schemas[schema_name], registry,
                               f"{spec.stem} {cmd}")

    print("schema validation", "passed" if ok else "failed")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
