"""plotkit render --kind {dist|variance|scar|ks} --in file.csv --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .io import EmptyData, SchemaMismatch
from .render import RENDERERS, render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="plotkit",
                                 description="render torusq CSVs to static figures")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render")
    p.add_argument("--kind", required=True, choices=sorted(RENDERERS))
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    args = ap.parse_args(argv)
    try:
        render(args.kind, args.in_path, args.out)
    except (SchemaMismatch, EmptyData, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
