"""Backbone map: the four compass matrices and the six paths between them.

    python scripts/backbone_map.py -m 10 --out results/backbone
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from electmap.distance import distance_matrix
from electmap.embed import kamada_kawai
from electmap.eval import EmbeddingSummary, pcc
from electmap.io import ALL_PATHS, DatasetRecipe, build_dataset
from electmap.svg import render_map_svg


@dataclass
class BackboneConfig:
    m: int = 10
    steps: int = 20
    seed: int = 0
    out: str = "results/backbone"


def run(cfg: BackboneConfig) -> dict:
    items = build_dataset(DatasetRecipe([], m=cfg.m, compass=True, paths=list(ALL_PATHS), path_steps=cfg.steps))
    d = distance_matrix([it.matrix for it in items], labels=[it.label for it in items])
    emb = kamada_kawai(d, rng=np.random.default_rng(cfg.seed))
    q = EmbeddingSummary.build(d, emb.distances())
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "distances.csv").write_text(d.to_csv())
    (out / "coords.csv").write_text(emb.to_csv())
    coloring = {it.label: it.label.rsplit("-", 1)[0] if it.family == "path" else it.label for it in items}
    (out / "map.svg").write_text(render_map_svg(emb, coloring))
    return {"items": len(items), "pcc": pcc(q), "stress": emb.stress}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("-m", type=int, default=BackboneConfig.m)
    p.add_argument("--steps", type=int, default=BackboneConfig.steps)
    p.add_argument("--seed", type=int, default=BackboneConfig.seed)
    p.add_argument("--out", default=BackboneConfig.out)
    a = p.parse_args()
    res = run(BackboneConfig(a.m, a.steps, a.seed, a.out))
    print(f"{res['items']} items  PCC {res['pcc']:.4f}  stress {res['stress']:.4f}  -> {a.out}")


if __name__ == "__main__":
    main()
