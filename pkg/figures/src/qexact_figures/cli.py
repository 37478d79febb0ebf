"""`qexact-figures`: batch-render campaign figure CSVs into images.

Exit codes: 0 all requested families rendered, 2 schema mismatch or missing
input, 1 other I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FAMILY_FILES, FigureSpec, SchemaMismatch, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="qexact-figures")
    parser.add_argument("--in", dest="in_dir", type=Path, required=True,
                        help="directory holding the fig_*.csv files")
    parser.add_argument("--out", type=Path, required=True,
                        help="directory for the rendered images")
    parser.add_argument("--family", choices=sorted(FAMILY_FILES), default=None,
                        help="render one family instead of all five")
    args = parser.parse_args(argv)

    families = [args.family] if args.family else sorted(FAMILY_FILES)
    failures = 0
    for family in families:
        src = args.in_dir / FAMILY_FILES[family]
        spec = FigureSpec(src, family, args.out / f"{family}.png")
        if not src.exists():
            print(f"{family}: missing input {src}", file=sys.stderr)
            failures += 1
            continue
        try:
            result = render(spec)
        except SchemaMismatch as exc:
            print(f"{family}: {exc}", file=sys.stderr)
            failures += 1
            continue
        except OSError as exc:
            print(f"{family}: I/O error: {exc}", file=sys.stderr)
            return 1
        print(f"{family}: wrote {result.path}")
    return 2 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
