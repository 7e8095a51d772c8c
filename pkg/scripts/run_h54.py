"""Run the H(5,4) orbit certificate and write the full JSON report."""

import argparse
import json

from polarcert.certify.h54 import h54_certificate
from polarcert.cli import to_jsonable

ap = argparse.ArgumentParser()
ap.add_argument("--out", default="h54_report.json")
args = ap.parse_args()

rep = h54_certificate()
with open(args.out, "w") as fh:
    json.dump(to_jsonable(rep.to_dict()), fh, indent=1, sort_keys=True)
for st in rep.stages:
    print(f"stage {st.number} {st.name:<22} {'ok' if st.ok else 'FAILED'}")
print("final equation:", rep.final_equation)
for d in rep.discrepancies:
    print("discrepancy:", d)
print("justification of the W5 orbits:", rep.stage(6).details["emptiness_justification"])
