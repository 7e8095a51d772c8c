"""Print the pass/fail matrix of the acceptance suite."""

import sys

from polarcert.acceptance import run_all

results = run_all()
for r in results:
    print(r.line())
sys.exit(0 if all(r.ok for r in results) else 1)
