"""Approximation ratios of Sequential-CC and Removal-CC against the exact optimum.

    python scripts/approx_ratios.py --map results/culture_map -k 2
"""

import argparse
import math
from pathlib import Path

import numpy as np

from electmap.compass import election_from_frequency_matrix
from electmap.embed import Embedding
from electmap.io import load_dataset
from electmap.rules import OPTIMAL_ZERO, approximation_ratio
from electmap.svg import render_map_svg


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--map", default="results/culture_map")
    p.add_argument("-k", type=int, help="committee size (default ceil(m/10))")
    p.add_argument("--voters", type=int, default=100)
    a = p.parse_args()
    root = Path(a.map)
    items = load_dataset(root / "dataset")
    coords = root / "coords_kk.csv"
    emb = Embedding.from_csv(coords.read_text()) if coords.exists() else None
    for algo in ("sequential", "removal"):
        ratios, skipped = {}, 0
        for it in items:
            e = it.election if it.election is not None else election_from_frequency_matrix(it.matrix, a.voters)
            k = a.k or math.ceil(e.num_candidates / 10)
            r = approximation_ratio(e, k, algo)
            if r == OPTIMAL_ZERO:
                skipped += 1
            else:
                ratios[it.label] = r
        vals = np.array(list(ratios.values()))
        print(f"{algo:10s} mean {vals.mean():.4f}  max {vals.max():.4f}  optimal share "
              f"{np.mean(vals == 1.0):.1%}  skipped (optimum 0) {skipped}")
        if emb is not None:
            (root / f"map_kk_cc_{algo}.svg").write_text(render_map_svg(emb, ratios))


if __name__ == "__main__":
    main()
