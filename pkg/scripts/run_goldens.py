"""Run every fixture through the CLI and diff against its golden report.

Usage, from the repository root:

    python3 scripts/run_goldens.py

Exit status 0 when every fixture reproduces its golden byte-for-byte
(timestamp excluded), 1 otherwise.
"""
import os
import sys
import tempfile

from cauchydual import cli

FIXTURES = os.path.abspath(
    os.path.join(os.path.dirname(__file__), os.pardir, "fixtures"))


def strip_timestamp(text: str) -> list:
    return [line for line in text.splitlines() if '"timestamp"' not in line]


def main() -> int:
    names = sorted(
        name[:-len(".golden.json")] for name in os.listdir(FIXTURES)
        if name.endswith(".golden.json"))
    if not names:
        print("no goldens found; run scripts/make_goldens.py first")
        return 1
    failures = 0
    for name in names:
        in_path = os.path.join(FIXTURES, f"{name}.json")
        golden_path = os.path.join(FIXTURES, f"{name}.golden.json")
        with tempfile.TemporaryDirectory() as tmp:
            out_path = os.path.join(tmp, "report.json")
            code = cli.main(["--input", in_path, "--report", out_path])
            with open(out_path) as handle:
                produced = handle.read()
        with open(golden_path) as handle:
            golden = handle.read()
        ok = strip_timestamp(produced) == strip_timestamp(golden)
        print(f"{name}: exit {code} {'MATCH' if ok else 'MISMATCH'}")
        failures += 0 if ok else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
