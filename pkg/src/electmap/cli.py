"""Command-line interface: ``electmap <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from . import io as eio
from .compass import election_from_frequency_matrix
from .cultures import CultureSpec, make_rng, sample
from .distance import DistanceMatrix, distance_matrix
from .embed import EmbedConfig, Embedding, fruchterman_reingold, kamada_kawai
from .eval import EmbeddingSummary, evaluation_report
from .rules import OPTIMAL_ZERO, approximation_ratio, winner_scores
from .svg import render_map_svg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, newline="\n")


def cmd_generate(args) -> None:
    rng = make_rng(args.seed)
    e = sample(eio.resolve_spec(CultureSpec.parse(args.spec), rng), args.m, args.n, rng)
    _write(args.output, eio.write_election(e))


def cmd_dataset(args) -> None:
    if args.recipe == "standard":
        recipe = eio.DatasetRecipe.standard(args.m or 10, args.n or 100, args.seed or 0, args.scale)
    else:
        recipe = eio.DatasetRecipe.parse(Path(args.recipe).read_text())
        recipe.m = args.m or recipe.m
        recipe.n = args.n or recipe.n
        recipe.seed = recipe.seed if args.seed is None else args.seed
    eio.save_dataset(eio.build_dataset(recipe), args.output)


def cmd_distance(args) -> None:
    items = eio.load_dataset(args.input)
    d = distance_matrix([it.matrix for it in items], normalize=args.normalize,
                        labels=[it.label for it in items], workers=args.workers)
    _write(args.output, d.to_csv())


def cmd_embed(args) -> None:
    d = DistanceMatrix.from_csv(Path(args.dist).read_text())
    config = EmbedConfig(tol=args.tol, max_iter=args.max_iter, restarts=args.restarts)
    algo = kamada_kawai if args.algo == "kk" else fruchterman_reingold
    _write(args.output, algo(d, config, make_rng(args.seed)).to_csv())


def cmd_evaluate(args) -> None:
    d = DistanceMatrix.from_csv(Path(args.dist).read_text())
    emb = Embedding.from_csv(Path(args.coords).read_text())
    order = [emb.labels.index(l) for l in d.labels]
    emb = Embedding(d.labels, emb.coords[order], emb.stress, emb.iterations)
    q = EmbeddingSummary.build(d, emb.distances(), args.id_label, args.un_label)
    _write(args.output, evaluation_report(q))


def cmd_score(args) -> None:
    items = eio.load_dataset(args.input)
    features = [f.strip() for f in args.features.split(",") if f.strip()]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["label"]
    base = [f for f in features if f != "cc"]
    names = {"borda": "borda_winner_score", "copeland": "copeland_winner_score", "condorcet": "has_condorcet"}
    header += [names[f] for f in base if f in names]
    if "cc" in features:
        header += ["cc_seq_ratio", "cc_rem_ratio"]
    w.writerow(header)
    for it in items:
        e = it.election if it.election is not None else election_from_frequency_matrix(it.matrix, args.voters)
        row = [it.label]
        scores = winner_scores(e, base)
        for f in base:
            v = scores[names[f]]
            row.append(str(v) if not isinstance(v, bool) else str(int(v)))
        if "cc" in features:
            k = args.k or math.ceil(e.num_candidates / 10)
            for algo in ("sequential", "removal"):
                r = approximation_ratio(e, k, algo)
                row.append(r if r == OPTIMAL_ZERO else f"{r:.6f}")
        w.writerow(row)
    _write(args.output, buf.getvalue())


def cmd_map(args) -> None:
    emb = Embedding.from_csv(Path(args.coords).read_text())
    coloring = {}
    if args.color_by:
        text = Path(args.color_by).read_text()
        if Path(args.color_by).name == "index.csv":
            coloring = {r["label"]: r["family"] for r in csv.DictReader(io.StringIO(text))}
        elif args.column:
            rows = list(csv.DictReader(io.StringIO(text)))
            coloring = eio.read_coloring("\n".join(f"{r['label']},{r[args.column]}" for r in rows))
        else:
            coloring = eio.read_coloring(text)
    _write(args.output, render_map_svg(emb, coloring))


def cmd_ingest(args) -> None:
    text = Path(args.input).read_text()
    rng = make_rng(args.seed)
    items = []
    base = Path(args.input).stem
    for s in range(args.samples):
        e = eio.ingest(text, rng, top_k=args.top_k, resample=args.resample)
        items.append(eio.DatasetItem(f"{base}_{s:03d}", base, eio.frequency_matrix(e), e, "ingested"))
    eio.save_dataset(items, args.output)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="electmap", description="Maps of elections.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample one election from a culture")
    g.add_argument("--spec", required=True, help="e.g. mallows:normphi=0.5, urn:alpha=0.1, cube:dim=3, gs:balanced")
    g.add_argument("-m", type=int, required=True)
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("dataset", help="build a dataset directory from a recipe ('standard' for the built-in one)")
    d.add_argument("--recipe", required=True)
    d.add_argument("-m", type=int)
    d.add_argument("-n", type=int)
    d.add_argument("--seed", type=int)
    d.add_argument("--scale", type=float, default=1.0, help="scale counts of the built-in recipe")
    d.add_argument("-o", "--output", required=True)
    d.set_defaults(func=cmd_dataset)

    s = sub.add_parser("distance", help="pairwise positionwise distances of a dataset")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--normalize", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_distance)

    e = sub.add_parser("embed", help="2D embedding of a distance matrix")
    e.add_argument("--dist", required=True)
    e.add_argument("--algo", choices=("kk", "fr"), default="kk")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--tol", type=float, default=1e-6)
    e.add_argument("--max-iter", type=int, default=5000)
    e.add_argument("--restarts", type=int, default=4)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_embed)

    v = sub.add_parser("evaluate", help="PCC, distortion and monotonicity of an embedding")
    v.add_argument("--dist", required=True)
    v.add_argument("--coords", required=True)
    v.add_argument("--id-label", default="ID")
    v.add_argument("--un-label", default="UN")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("score", help="winner scores and CC approximation ratios")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--features", default="borda,copeland,condorcet,cc")
    c.add_argument("--k", type=int, help="committee size (default ceil(m/10))")
    c.add_argument("--voters", type=int, default=100, help="voters used to realize matrix-only items")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_score)

    mp = sub.add_parser("map", help="render an embedding as SVG")
    mp.add_argument("--coords", required=True)
    mp.add_argument("--color-by", help="dataset index.csv (colour by family) or label,value CSV")
    mp.add_argument("--column", help="column of a feature CSV to colour by")
    mp.add_argument("-o", "--output")
    mp.set_defaults(func=cmd_map)

    i = sub.add_parser("ingest", help="preprocess a real-life election file into a dataset")
    i.add_argument("--in", dest="input", required=True)
    i.add_argument("--tie-break", action="store_true", default=True,
                   help="break ties uniformly at random (always applied)")
    i.add_argument("--complete", action="store_true", default=True,
                   help="complete incomplete votes from matching prefixes (always applied)")
    i.add_argument("--top-k", type=int)
    i.add_argument("--resample", type=int)
    i.add_argument("--samples", type=int, default=1)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("-o", "--output", required=True)
    i.set_defaults(func=cmd_ingest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, KeyError, FileNotFoundError, OSError) as exc:
        print(f"electmap {args.command}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
