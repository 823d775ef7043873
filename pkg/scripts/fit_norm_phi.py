"""Fit the Mallows norm-phi that best matches a dataset (average normalized positionwise distance).

With no dataset given, fits against fresh Mallows samples as a self-check.

    python scripts/fit_norm_phi.py --dataset results/real --grid-step 0.01
"""

import argparse

from electmap.core import frequency_matrix
from electmap.cultures import CultureSpec, make_rng, sample
from electmap.io import fit_norm_phi, load_dataset


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dataset", help="dataset directory (index.csv); omit for a self-check")
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--samples", type=int, default=20, help="Mallows elections per grid point")
    p.add_argument("-n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--true-phi", type=float, default=0.3, help="norm-phi used for the self-check")
    a = p.parse_args()
    rng = make_rng(a.seed)
    if a.dataset:
        target = [it.matrix for it in load_dataset(a.dataset)]
    else:
        spec = CultureSpec("mallows", {"normphi": a.true_phi})
        target = [frequency_matrix(sample(spec, 8, a.n, rng)) for _ in range(10)]
    phi, mean, std = fit_norm_phi(target, a.grid_step, a.samples, a.n, rng)
    print(f"norm-phi {phi:.3f}  mean normalized distance {mean:.4f}  std {std:.4f}")


if __name__ == "__main__":
    main()
