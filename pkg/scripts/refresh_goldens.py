"""Regenerate the CLI golden files in tests/golden from tests/golden/cases.json.

Run from the repository root after an intentional change of report format:

    python3 scripts/refresh_goldens.py
"""
import io
import json
import sys
from pathlib import Path

from lckforge.shell.cli import run

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"


def render(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def main():
    cases = json.loads((GOLDEN / "cases.json").read_text())
    changed = 0
    for name, argv in cases.items():
        code, text, err = render(argv)
        if code != 0:
            print(f"{name}: exit {code}\n{err}", file=sys.stderr)
            return 1
        path = GOLDEN / f"{name}.json"
        if not path.exists() or path.read_text() != text:
            path.write_text(text)
            changed += 1
            print(f"wrote {path.relative_to(ROOT)}")
    print(f"{len(cases)} cases, {changed} updated")
    return 0


if __name__ == "__main__":
    import os

    os.chdir(ROOT)
    sys.exit(main())
