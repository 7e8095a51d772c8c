"""Print the smallest excluded dimension per family and q, with the p-rank comparison."""

import argparse

from polarcert.certify.bounds import FAMILIES, bounds, klein_threshold, threshold

ap = argparse.ArgumentParser()
ap.add_argument("--qmax", type=int, default=9)
args = ap.parse_args()

for fam in FAMILIES:
    rep = bounds(fam, args.qmax)
    print(f"\n{fam}")
    for q in rep.qs:
        rows = [r for r in rep.rows if r.q == q]
        first = next(r for r in rows if r.combinatorial)
        line = f"  q={q:<2} threshold {str(threshold(fam, q)):>5}  first excluded {first.space}"
        if fam == "hermitian":
            line += f"  (Klein: d > {klein_threshold(q)})"
        prank = [r.d for r in rows if r.moorhouse and r.moorhouse[2]]
        if prank:
            line += f"  p-rank excludes d in {prank[0]}..{prank[-1]}" if len(prank) > 1 else f"  p-rank excludes d={prank[0]}"
        print(line)
