"""Exhaustive ovoid search in H(5,4), resumable through a checkpoint file.

Expect an UNSAT verdict after roughly half a million nodes."""

import argparse
import time

from polarcert.search import checkpointed_search

ap = argparse.ArgumentParser()
ap.add_argument("--checkpoint", default="h54_search.json")
args = ap.parse_args()

t0 = time.monotonic()
st = checkpointed_search("hermitian", 6, 2, args.checkpoint)
print(f"{st['space']}: {st['result']} after {st['nodes']} nodes over {st['branches']} branches "
      f"({time.monotonic() - t0:.1f}s this session)")
print(st["assumption"])
