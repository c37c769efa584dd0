#!/usr/bin/env python3
"""Run each wqc subcommand on small inputs and validate its JSON against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

INSTANCE = """# five taxa
3\t((a,b),c,(d,e));
2\t((a,c),b,(d,e));
1\t((a,d),e,(b,c));
"""

CYCLIC = """3 2
a b c
b c a
"""


def main() -> int:
    cli, schema_dir, data_dir = (pathlib.Path(p) for p in sys.argv[1:4])
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())

    def validator(name):
        return Draft202012Validator(schemas[name], registry=registry)

    failures = 0

    def check(label, schema, doc):
        nonlocal failures
        errors = sorted(validator(schema).iter_errors(doc), key=lambda e: list(e.path))
        if errors:
            failures += 1
            print(f"FAIL {label}: {errors[0].message} at {list(errors[0].path)}")
        else:
            print(f"ok   {label}")

    def run(*args):
        proc = subprocess.run([str(cli), *map(str, args)], capture_output=True, text=True, check=False)
        if proc.returncode != 0:
            raise RuntimeError(f"{' '.join(map(str, args))}: exit {proc.returncode}: {proc.stderr.strip()}")
        return [json.loads(line) for line in proc.stdout.splitlines() if line.strip()]

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        inst = tmp / "five.trees"
        inst.write_text(INSTANCE)
        co = tmp / "cyclic.txt"
        co.write_text(CYCLIC)
        gadget = tmp / "gadget.trees"

        check("profile spec", "profile_spec.schema.json", json.loads((data_dir / "no_dominant_profile.json").read_text()))
        check("score", "score.schema.json", run("score", "-i", inst, "-t", "((a,b),c,(d,e));")[0])
        check("distance", "distance.schema.json", run("distance", "-i", inst)[0])
        for method in ("best-tree", "derand", "half"):
            check(f"consensus {method}", "approx.schema.json", run("consensus", "-i", inst, "--method", method)[0])
        check("consensus exact", "exact.schema.json", run("consensus", "-i", inst, "--method", "exact")[0])
        check("consensus fpt", "fpt.schema.json", run("consensus", "-i", inst, "--method", "fpt")[0])
        check("exact", "exact.schema.json", run("exact", "-i", inst)[0])
        check("exact threshold met", "decision.schema.json", run("exact", "-i", inst, "--threshold", 1)[0])
        check("exact threshold missed", "decision.schema.json", run("exact", "-i", inst, "--threshold", 10**6)[0])
        check("fpt", "fpt.schema.json", run("fpt", "-i", inst, "--budget-d", 2, "--budget-k2", 3, "--budget-k3", 3)[0])
        check("fpt empty", "fpt.schema.json", run("fpt", "-i", inst, "--budget-d", 0, "--budget-k2", 0, "--budget-k3", 0)[0])
        check("gen-cyclic", "gen_cyclic.schema.json", run("gen-cyclic", "-i", co, "--w-size", 1, "-o", gadget)[0])
        check("gadget sidecar", "gadget_sidecar.schema.json", json.loads(pathlib.Path(f"{gadget}.json").read_text()))
        check("verify-gadget", "verify_gadget.schema.json",
              run("verify-gadget", "-g", gadget, "-t", "(w1,a,(b,(c,z1)));")[0])
        for line in run("lab", "verify", "-i", inst):
            check(f"lab verify {line.get('conjecture')}", "conjecture_report.schema.json", line)
        witness = tmp / "witness.trees"
        realized = run("lab", "realize", "-s", data_dir / "no_dominant_profile.json", "-o", witness)[0]
        check("lab realize", "realize.schema.json", realized)
        for line in run("lab", "verify", "-i", witness):
            check(f"lab verify witness {line.get('conjecture')}", "conjecture_report.schema.json", line)
        lines = run("lab", "search", "--conjecture", 1, "--taxa", 5, "--trees", 3, "--trials", 5, "--seed", 7, "--pool", witness)
        if len(lines) < 2:
            failures += 1
            print("FAIL lab search: the realized witness was not reported")
        for line in lines[:-1]:
            check("lab search report", "conjecture_report.schema.json", line)
        check("lab search summary", "search_summary.schema.json", lines[-1])

    print("all outputs match their schemas" if failures == 0 else f"{failures} schema violation(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
