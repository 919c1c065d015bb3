"""Track the empirical growth constants as the number of terms grows.

For each m and each term count, prints the differences between the
accelerated estimates of A, rho, K and their closed forms.

    python3 scripts/conjecture_check.py --ms 2 3 --terms 40 80 120
"""

import argparse
from dataclasses import dataclass

import mpmath

from hypercat.asymptotics import conjectured_constants, estimate_growth
from hypercat.series import hypercat_sequence


@dataclass(frozen=True)
class Config:
    ms: tuple[int, ...] = (2, 3, 4)
    terms: tuple[int, ...] = (40, 80, 120)
    accel_power: int = 16
    precision_bits: int = 768


def run(cfg: Config) -> None:
    print("m terms |A-A*| |rho-rho*| |K-K*|")
    for m in cfg.ms:
        values = hypercat_sequence(m, max(cfg.terms))  # one series solve per m
        conj = conjectured_constants(m, cfg.precision_bits)
        for terms in cfg.terms:
            est = estimate_growth(m, terms, cfg.accel_power, cfg.precision_bits, values=values)
            diffs = [abs(est.A - conj.A), abs(est.rho - conj.rho), abs(est.K - conj.K)]
            print(m, terms, *(mpmath.nstr(d, 3) for d in diffs))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ms", type=int, nargs="+", default=list(Config.ms))
    ap.add_argument("--terms", type=int, nargs="+", default=list(Config.terms))
    ap.add_argument("--accel-power", type=int, default=Config.accel_power)
    ap.add_argument("--precision", type=int, default=Config.precision_bits)
    a = ap.parse_args()
    run(Config(tuple(a.ms), tuple(a.terms), a.accel_power, a.precision))


if __name__ == "__main__":
    main()
