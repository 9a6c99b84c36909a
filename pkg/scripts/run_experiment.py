#!/usr/bin/env python3
"""Run the desk-scale genericity experiment and write the report.

Samples points of a rank-one graded-Tate triple (default: graded
Q(0) + Q(1) + Q(3), weights 0, -2, -6), checks at every weight cut
whether the unipotent-radical block is large, and appends three
all-rational control points, which are expected to be degenerate.
"""

import argparse
import sys

sys.path.insert(0, "src")  # allow running from a source checkout

from mhslab import corpus, serialize, unipotent  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--triple", help="triple JSON file (default: the "
                        "three-step Tate triple)")
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--seed", default="0")
    parser.add_argument("--height", type=int, default=10)
    parser.add_argument("--out", help="report path (default: stdout)")
    args = parser.parse_args()

    if args.triple:
        import json
        with open(args.triple) as fh:
            mu = serialize.triple_from_json(json.load(fh))
    else:
        mu = corpus.tate3_triple()

    report = unipotent.genericity_experiment(mu, args.samples, args.seed,
                                             args.height)
    text = serialize.dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    n = report["n_samples"]
    print(f"samples: {n}, all-large: {report['all_large_count']}, "
          f"degenerate controls failing: "
          f"{[d['failing_p'] for d in report['degenerate']]}",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
