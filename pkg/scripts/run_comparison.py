#!/usr/bin/env python3
"""Train all three classifiers on one split and print the comparison table.

Defaults to the bundled sample catalog; pass --scale to use the synthetic
60-tag catalog instead.
"""

import argparse
import sys
from datetime import datetime, timezone

from fidelbot.evaluation import compare_classifiers, write_report
from fidelbot.intents import load_catalog, sample_catalog_path
from fidelbot.synthetic import generate_catalog
from fidelbot.textproc import default_config, load_config


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--catalog", help="intent catalog path")
    ap.add_argument("--scale", action="store_true", help="use the synthetic 60-tag catalog")
    ap.add_argument("--rules-dir")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", default="comparison_report.json")
    args = ap.parse_args()

    config = load_config(args.rules_dir) if args.rules_dir else default_config()
    if args.scale:
        catalog = generate_catalog(seed=args.seed)
    else:
        catalog = load_catalog(args.catalog or sample_catalog_path())

    report = compare_classifiers(catalog, config, seed=args.seed)
    report.created_at = datetime.now(timezone.utc).isoformat()
    print(report.table())
    write_report(report, args.out)
    print(f"\nreport written: {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
