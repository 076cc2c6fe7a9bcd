"""Conditional mean and second moment of the running maximum versus the reversal count."""
import argparse
from dataclasses import dataclass

from telegraph_max import conditional as cond


@dataclass
class MeansConfig:
    n_max: int = 12
    c: float = 1.0
    t: float = 1.0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=MeansConfig.n_max)
    ap.add_argument("--c", type=float, default=MeansConfig.c)
    ap.add_argument("--t", type=float, default=MeansConfig.t)
    cfg = MeansConfig(**{k.replace("-", "_"): v for k, v in vars(ap.parse_args(argv)).items()})

    print(f"{'n':>3} {'E[max|+c]':>12} {'E[max^2|+c]':>12} {'E[max|-c]':>12} {'P{max=0|-c}':>12}")
    for n in range(cfg.n_max + 1):
        plus = [cond.max_moment(m, n, 1, cfg.c, cfg.t) for m in (1, 2)]
        minus = cond.max_moment(1, n, -1, cfg.c, cfg.t)
        atom = cond.atom_at_zero(n)
        print(f"{n:3d} {plus[0]:12.8f} {plus[1]:12.8f} {minus:12.8f} {atom:12.8f}")


if __name__ == "__main__":
    main()
