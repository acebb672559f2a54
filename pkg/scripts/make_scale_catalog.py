#!/usr/bin/env python3
"""Write the deterministic synthetic 60-tag / 850-pattern catalog to disk."""

import argparse
import sys

from fidelbot.intents import catalog_stats, save_catalog
from fidelbot.synthetic import generate_catalog


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", default="scale_catalog.json")
    args = ap.parse_args()

    catalog = generate_catalog(seed=args.seed)
    save_catalog(catalog, args.out)
    stats = catalog_stats(catalog)
    print(
        f"wrote {args.out}: {stats.tag_count} tags, "
        f"{stats.pattern_count} patterns, {stats.response_count} responses"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
