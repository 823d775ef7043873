"""Map of synthetic elections from the standard culture mix, embedded with KK and FR.

    python scripts/culture_map.py --scale 0.25 --out results/culture_map
"""

import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from electmap.distance import distance_matrix
from electmap.embed import fruchterman_reingold, kamada_kawai
from electmap.eval import EmbeddingSummary, evaluation_report, pcc
from electmap.io import DatasetRecipe, build_dataset, family_average_distances, save_dataset
from electmap.svg import render_map_svg


@dataclass
class CultureMapConfig:
    m: int = 10
    n: int = 100
    seed: int = 0
    scale: float = 1.0
    workers: int = 1
    out: str = "results/culture_map"


def run(cfg: CultureMapConfig) -> dict:
    out = Path(cfg.out)
    items = build_dataset(DatasetRecipe.standard(cfg.m, cfg.n, cfg.seed, cfg.scale))
    save_dataset(items, out / "dataset")
    d = distance_matrix([it.matrix for it in items], labels=[it.label for it in items], workers=cfg.workers)
    (out / "distances.csv").write_text(d.to_csv())

    families, avg = family_average_distances(items, d)
    with open(out / "family_averages.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["family", *families])
        for f, row in zip(families, avg):
            w.writerow([f, *(f"{x:.4f}" for x in row)])

    coloring = {it.label: it.family for it in items}
    res = {}
    for name, algo in (("kk", kamada_kawai), ("fr", fruchterman_reingold)):
        emb = algo(d, rng=np.random.default_rng(cfg.seed))
        q = EmbeddingSummary.build(d, emb.distances())
        (out / f"coords_{name}.csv").write_text(emb.to_csv())
        (out / f"report_{name}.csv").write_text(evaluation_report(q))
        (out / f"map_{name}.svg").write_text(render_map_svg(emb, coloring))
        res[name] = pcc(q)
    res["items"] = len(items)
    return res


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in ("m", "n", "seed", "workers"):
        p.add_argument(f"--{f}", type=int, default=getattr(CultureMapConfig, f))
    p.add_argument("--scale", type=float, default=CultureMapConfig.scale)
    p.add_argument("--out", default=CultureMapConfig.out)
    a = p.parse_args()
    res = run(CultureMapConfig(a.m, a.n, a.seed, a.scale, a.workers, a.out))
    print(f"{res['items']} items  PCC kk {res['kk']:.4f}  fr {res['fr']:.4f}  -> {a.out}")


if __name__ == "__main__":
    main()
