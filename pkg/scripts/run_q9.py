"""Verify the Q+(9,2) line configuration for the default choice and N random ones."""

import argparse
import json

from polarcert.certify.q9 import q9_choices, q9_report

ap = argparse.ArgumentParser()
ap.add_argument("--choices", type=int, default=3)
ap.add_argument("--seed", type=int, default=0)
args = ap.parse_args()

rep = q9_report(2)
print(json.dumps({k: v for k, v in rep.items() if k != "config"}, indent=1, default=str))
for c in q9_choices(args.choices, 2, args.seed):
    print(f"seed {c['seed']}: {'ok' if c['ok'] else 'FAILED'}")
