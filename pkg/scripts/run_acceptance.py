"""Run the acceptance criteria outside pytest, one line per criterion.

    python3 scripts/run_acceptance.py [criterion ...]
"""
import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "tests"))

from test_acceptance import CRITERIA, run_criterion  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("which", nargs="*", type=int, default=list(CRITERIA))
    args = ap.parse_args()
    ok = True
    for i in args.which:
        passed, line = run_criterion(i)
        print(line, flush=True)
        ok &= passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
