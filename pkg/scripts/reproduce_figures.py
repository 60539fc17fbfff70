"""Regenerate every CSV, manifest and SVG from the bundled scenarios.

Usage: python3 scripts/reproduce_figures.py [OUT_DIR]
"""

import sys
from pathlib import Path

from acouswarm.cli import main

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"

RUNS = [
    ("power-profile", "table_robot", []),
    ("cross-sections", "table_robot", []),
    ("swarm-profile", "swarm_1e11", []),
    ("sweep", "swarm_1e11", []),
    ("mitigate", "power_cap", []),
    ("mitigate", "split_frequency", []),
    ("mitigate", "lung", []),
    ("mitigate", "sync_duty_cycle", []),
]


def reproduce(out: Path) -> int:
    worst = 0
    for command, scenario, overrides in RUNS:
        target = out / f"{command}_{scenario}"
        argv = [command, "--scenario", str(SCENARIOS / f"{scenario}.json"), "--out", str(target), "--plot"]
        for item in overrides:
            argv += ["--set", item]
        code = main(argv)
        print(f"{command:15s} {scenario:16s} -> {target}  exit {code}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(reproduce(Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "figures"))
