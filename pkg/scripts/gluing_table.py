"""Trace polynomials P_2m(N, r) for every r up to a bound, with timings.

    python3 scripts/gluing_table.py --m 2 --r-max 16
"""

import argparse
import time
from dataclasses import dataclass

from hypercat.gluing import trace_polynomial


@dataclass(frozen=True)
class Config:
    m: int = 1
    r_max: int = 12
    method: str = "memo"
    time_limit: float | None = None


def run(cfg: Config) -> None:
    for r in range(0, cfg.r_max + 1, 2 * cfg.m):
        t0 = time.perf_counter()
        p = trace_polynomial(cfg.m, r, method=cfg.method, time_limit=cfg.time_limit)
        print(f"r={r:3d}  {p}    ({time.perf_counter() - t0:.2f} s)")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=Config.m)
    ap.add_argument("--r-max", type=int, default=Config.r_max)
    ap.add_argument("--method", choices=("memo", "expand"), default=Config.method)
    ap.add_argument("--time-limit", type=float, default=None)
    a = ap.parse_args()
    run(Config(a.m, a.r_max, a.method, a.time_limit))


if __name__ == "__main__":
    main()
