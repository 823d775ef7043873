"""Colour an existing map by Borda, Copeland and Condorcet features.

Expects the output directory of culture_map.py.

    python scripts/score_maps.py --map results/culture_map
"""

import argparse
from pathlib import Path

from electmap.compass import election_from_frequency_matrix
from electmap.embed import Embedding
from electmap.io import load_dataset
from electmap.rules import winner_scores
from electmap.svg import render_map_svg


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--map", default="results/culture_map")
    p.add_argument("--algo", choices=("kk", "fr"), default="kk")
    p.add_argument("--voters", type=int, default=100, help="voters used to realize matrix-only items")
    a = p.parse_args()
    root = Path(a.map)
    items = load_dataset(root / "dataset")
    emb = Embedding.from_csv((root / f"coords_{a.algo}.csv").read_text())
    features = {}
    for it in items:
        e = it.election if it.election is not None else election_from_frequency_matrix(it.matrix, a.voters)
        features[it.label] = winner_scores(e)
    for key in ("borda_winner_score", "copeland_winner_score", "has_condorcet"):
        coloring = {label: float(f[key]) for label, f in features.items() if label in emb.labels}
        (root / f"map_{a.algo}_{key}.svg").write_text(render_map_svg(emb, coloring))
    share = sum(f["has_condorcet"] for f in features.values()) / len(features)
    print(f"{len(features)} items; Condorcet winner in {share:.1%}; maps written to {root}")


if __name__ == "__main__":
    main()
