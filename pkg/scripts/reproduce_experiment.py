#!/usr/bin/env python3
"""Run the default repeated-sampling study (Maxwell, n = 200 and n = 2000,
200 replications, all three bandwidth rules) and write reports + curve CSVs.

Any extra arguments are passed through to the CLI, e.g.
    python3 scripts/reproduce_experiment.py --out results --jobs 4
    python3 scripts/reproduce_experiment.py --config my_config.json

Takes a few minutes single-threaded at the default scale.
"""

import sys

from gammakde.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", *sys.argv[1:]]))
