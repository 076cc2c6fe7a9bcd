"""Sup-distance between the running-max CDF (lam = c^2) and the half-normal law."""
import argparse
from dataclasses import dataclass

from telegraph_max.verification.checks import kac_check


@dataclass
class KacConfig:
    c_values: tuple = (3.0, 10.0, 30.0, 100.0, 300.0)
    t: float = 1.0
    grid_size: int = 801


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=float, nargs="+", default=list(KacConfig.c_values))
    ap.add_argument("--t", type=float, default=KacConfig.t)
    ap.add_argument("--grid-size", type=int, default=KacConfig.grid_size)
    args = ap.parse_args(argv)
    cfg = KacConfig(tuple(args.c), args.t, args.grid_size)

    rows = kac_check(cfg.c_values, cfg.t, cfg.grid_size)
    print(f"{'c':>8} {'v0':>3} {'sup|F - F_BM|':>14} {'c * dist':>10}")
    for c, v0, dist in rows:
        print(f"{c:8g} {v0:+3d} {dist:14.4e} {c * dist:10.4f}")


if __name__ == "__main__":
    main()
