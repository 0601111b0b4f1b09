"""Regenerate tests/golden/cli/*.json from the CLI test cases."""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from test_cli import CASES, invoke  # noqa: E402


def main():
    out_dir = ROOT / "tests" / "golden" / "cli"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, argv in CASES:
        code, stdout, _ = invoke(argv)
        record = {"argv": argv, "exit_code": code, "stdout": stdout}
        (out_dir / f"{name}.json").write_text(json.dumps(record, indent=2) + "\n")
        print(f"{name}: exit {code}")


if __name__ == "__main__":
    main()
