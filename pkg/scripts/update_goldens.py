#!/usr/bin/env python3
"""
Regenerate the CLI golden corpus.

Runs every case of tests/golden/cli_cases.json and stores its exact stdout
under "output". Without --write the differences are only reported.

Usage:
    python scripts/update_goldens.py
    python scripts/update_goldens.py --write
"""
import io
import json
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))
sys.path.insert(0, str(Path(__file__).parent.parent))

from cli import run
from config import GOLDEN_DIR
from utils.logging_config import get_logger

logger = get_logger("update_goldens")

CASES_FILE = GOLDEN_DIR / "cli_cases.json"


def capture(argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(argv, stdout=stdout, stderr=stderr)
    return code, stdout.getvalue().rstrip("\n")


def main(write: bool) -> int:
    cases = json.loads(CASES_FILE.read_text(encoding="utf-8"))
    changed = 0
    for case in cases:
        code, output = capture(case["argv"])
        if code != case["exit_code"]:
            logger.error(f"{case['name']}: exit code {code}, expected {case['exit_code']}")
        if code == 0 and case.get("output") != output:
            changed += 1
            print(f"{case['name']}: {'updated' if write else 'differs'}")
            case["output"] = output
    if write and changed:
        CASES_FILE.write_text(json.dumps(cases, indent=2) + "\n", encoding="utf-8")
    print(f"{changed} of {len(cases)} cases {'rewritten' if write else 'differ'}")
    return 0


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="Regenerate CLI golden outputs")
    parser.add_argument("--write", action="store_true", help="Write the new outputs into the corpus")
    args = parser.parse_args()
    sys.exit(main(args.write))
