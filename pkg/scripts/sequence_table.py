"""Print C_n^(m) for a range of m by both routes and time each.

    python3 scripts/sequence_table.py --m-max 5 --n-max 8
"""

import argparse
import time
from dataclasses import dataclass

from hypercat.series import hypercat_sequence
from hypercat.tours import hypercatalan


@dataclass(frozen=True)
class Config:
    m_max: int = 7
    n_max: int = 6
    jobs: int = 1


def run(cfg: Config) -> None:
    for m in range(1, cfg.m_max + 1):
        t0 = time.perf_counter()
        tree = [hypercatalan(n, m, jobs=cfg.jobs) for n in range(cfg.n_max + 1)]
        t1 = time.perf_counter()
        gf = hypercat_sequence(m, cfg.n_max)
        t2 = time.perf_counter()
        flag = "" if tree == gf else "  ROUTES DISAGREE"
        print(f"m={m}: {', '.join(map(str, tree))}{flag}")
        print(f"      tree sum {t1 - t0:.2f} s, series {t2 - t1:.2f} s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=Config.m_max)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--jobs", type=int, default=Config.jobs)
    a = ap.parse_args()
    run(Config(a.m_max, a.n_max, a.jobs))


if __name__ == "__main__":
    main()
