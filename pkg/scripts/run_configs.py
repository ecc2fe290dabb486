"""Run `dyadlab verify` on every config in scripts/configs and summarize.

    python scripts/run_configs.py [--threads 4]

bad_exponent.yaml is expected to be rejected (exit 2); bench.yaml goes
through `dyadlab bench` instead of `verify`.
"""

import argparse
import sys
from pathlib import Path

from dyadlab.cli import main

HERE = Path(__file__).resolve().parent / "configs"
EXPECTED = {"bad_exponent.yaml": 2}


def run(path: Path, threads: int) -> int:
    command = "bench" if path.name == "bench.yaml" else "verify"
    return main([command, "--config", str(path), "--threads", str(threads)])


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()
    bad = []
    for path in sorted(HERE.glob("*.yaml")):
        code = run(path, args.threads)
        want = EXPECTED.get(path.name, 0)
        print(f"{path.name:20s} exit {code} (expected {want})")
        if code != want:
            bad.append(path.name)
    sys.exit(1 if bad else 0)
