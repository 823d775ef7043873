"""File formats, real-life preprocessing, dataset recipes and Mallows fitting.

Election files are plain text::

    4,3            # m, optionally followed by n
    a              # m candidate names
    b
    c
    d
    2: 1,2,3,4     # count: 1-based candidates from best to worst
    1: 4,2,3,1

Files fed to ingestion may also hold incomplete orders and ties written as
braces, e.g. ``1: 2,{1,4}``.
"""

from __future__ import annotations

import csv
import io
import os
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .compass import COMPASS, compass_matrix, convex_path
from .core import Election, FrequencyMatrix, frequency_matrix
from .cultures import CultureSpec, child_rng, make_rng, sample
from .distance import normalized_positionwise
from .rules import borda_scores

IncompleteVote = list[list[int]]  # tie groups from best to worst; singletons when strict


class ElectionFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _parse_order(text: str, lineno: int) -> IncompleteVote:
    groups: IncompleteVote = []
    buf = ""
    depth = 0
    tokens: list[str] = []
    for ch in text:
        if ch == "{":
            if depth:
                raise ElectionFormatError("nested braces", lineno)
            depth = 1
            buf = "{"
        elif ch == "}":
            if not depth:
                raise ElectionFormatError("unbalanced braces", lineno)
            depth = 0
            tokens.append(buf + "}")
            buf = ""
        elif ch == "," and not depth:
            if buf.strip():
                tokens.append(buf)
            buf = ""
        else:
            buf += ch
    if depth:
        raise ElectionFormatError("unbalanced braces", lineno)
    if buf.strip():
        tokens.append(buf)
    for tok in tokens:
        tok = tok.strip()
        if not tok:
            continue
        inner = tok[1:-1].split(",") if tok.startswith("{") else [tok]
        try:
            groups.append([int(x) - 1 for x in inner if x.strip()])
        except ValueError:
            raise ElectionFormatError(f"bad candidate number in {tok!r}", lineno) from None
    return groups


def read_ballots(text: str) -> tuple[int, list[str], list[tuple[int, IncompleteVote]]]:
    """Parse the election file format, allowing incomplete votes and ties."""
    m, names, ballots = _read_ballots(text)
    return m, names, [(count, groups) for count, groups, _ in ballots]


def _read_ballots(text: str):
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ElectionFormatError("empty file")
    lineno, head = lines[0]
    try:
        parts = [int(x) for x in head.split(",")]
    except ValueError:
        raise ElectionFormatError(f"expected candidate count, got {head!r}", lineno) from None
    m, declared_n = parts[0], (parts[1] if len(parts) > 1 else None)
    if m < 1 or len(parts) > 2:
        raise ElectionFormatError("header must be 'm' or 'm,n' with m >= 1", lineno)
    if len(lines) < m + 1:
        raise ElectionFormatError(f"expected {m} candidate names", lines[-1][0])
    names = [ln for _, ln in lines[1:m + 1]]
    ballots = []
    for lineno, ln in lines[m + 1:]:
        count_text, sep, order = ln.partition(":")
        if not sep:
            raise ElectionFormatError("expected 'count: order'", lineno)
        try:
            count = int(count_text)
        except ValueError:
            raise ElectionFormatError(f"bad vote count {count_text!r}", lineno) from None
        if count <= 0:
            raise ElectionFormatError("vote counts must be positive", lineno)
        groups = _parse_order(order, lineno)
        flat = [c for g in groups for c in g]
        if len(set(flat)) != len(flat):
            raise ElectionFormatError("a candidate appears twice in a vote", lineno)
        if any(not 0 <= c < m for c in flat):
            raise ElectionFormatError(f"candidate numbers must lie in 1..{m}", lineno)
        ballots.append((count, groups, lineno))
    if not ballots:
        raise ElectionFormatError("no votes", lines[-1][0])
    total = sum(c for c, _, _ in ballots)
    if declared_n is not None and declared_n != total:
        raise ElectionFormatError(f"header declares {declared_n} voters but counts sum to {total}", lines[0][0])
    return m, names, ballots


def parse_election(text: str) -> Election:
    """Parse a file of complete strict orders."""
    m, names, ballots = _read_ballots(text)
    votes = []
    for count, groups, lineno in ballots:
        if any(len(g) != 1 for g in groups) or len(groups) != m:
            raise ElectionFormatError("vote is not a complete strict order", lineno)
        votes.extend([[g[0] for g in groups]] * count)
    return Election(np.asarray(votes, dtype=np.int64), tuple(names))


def write_election(e: Election) -> str:
    """Serialize, grouping consecutive identical votes (order is preserved)."""
    m, n = e.num_candidates, e.num_voters
    names = e.labels or tuple(f"c{i + 1}" for i in range(m))
    out = [f"{m},{n}", *names]
    i = 0
    while i < n:
        j = i
        while j + 1 < n and np.array_equal(e.votes[j + 1], e.votes[i]):
            j += 1
        out.append(f"{j - i + 1}: " + ",".join(str(int(c) + 1) for c in e.votes[i]))
        i = j + 1
    return "\n".join(out) + "\n"


def write_frequency_matrix(x: FrequencyMatrix) -> str:
    rows = [str(x.m)]
    for row in x.fractions():
        rows.append(",".join(f"{f.numerator}/{f.denominator}" for f in row))
    return "\n".join(rows) + "\n"


def parse_frequency_matrix(text: str, label: str | None = None) -> FrequencyMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    m = int(lines[0])
    rows = [ln.split(",") for ln in lines[1:]]
    if len(rows) != m or any(len(r) != m for r in rows):
        raise ValueError(f"expected a {m}x{m} matrix")
    return FrequencyMatrix.from_fractions(rows, label)


# Real-life preprocessing.

def break_ties(v: IncompleteVote, rng: np.random.Generator) -> IncompleteVote:
    out: IncompleteVote = []
    for g in v:
        for c in rng.permutation(np.asarray(g, dtype=np.int64)) if len(g) > 1 else g:
            out.append([int(c)])
    return out


def complete_votes(votes: Sequence[Sequence[int]], m: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Complete strict prefixes by copying the next candidate of a random original extending vote.

    ``votes`` are strict (possibly incomplete) orders given as candidate
    lists. The reference set is always the original collection.
    """
    votes = [[int(c) for c in v] for v in votes]
    nexts: dict[tuple, list[int]] = defaultdict(list)
    for v in votes:
        for k in range(len(v)):
            nexts[tuple(v[:k])].append(v[k])
    out = []
    for v in votes:
        cur = list(v)
        while len(cur) < m:
            refs = nexts.get(tuple(cur))
            if refs:
                cur.append(refs[int(rng.integers(len(refs)))])
            else:
                missing = sorted(set(range(m)) - set(cur))
                cur.append(missing[int(rng.integers(len(missing)))])
        out.append(np.asarray(cur, dtype=np.int64))
    return out


def select_top_candidates(e: Election, k: int, rng: np.random.Generator | None = None) -> Election:
    """Restrict ``e`` to its ``k`` highest-Borda candidates (random tie-breaking), keeping their order."""
    m = e.num_candidates
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    scores = borda_scores(e)
    noise = rng.random(m) if rng is not None else np.zeros(m)
    ranked = sorted(range(m), key=lambda c: (-int(scores[c]), noise[c]))
    keep = sorted(ranked[:k])
    new_id = {c: i for i, c in enumerate(keep)}
    votes = [[new_id[int(c)] for c in v if int(c) in new_id] for v in e.votes]
    labels = tuple(e.labels[c] for c in keep) if e.labels else None
    return Election(np.asarray(votes, dtype=np.int64), labels)


def resample_votes(e: Election, n_target: int, rng: np.random.Generator) -> Election:
    if n_target < 1:
        raise ValueError("n_target must be positive")
    idx = rng.integers(e.num_voters, size=n_target)
    return Election(e.votes[idx], e.labels)


def ingest(text: str, rng: np.random.Generator, top_k: int | None = None,
           resample: int | None = None) -> Election:
    """Ties broken uniformly, then prefixes completed, then top-k selection and resampling."""
    m, names, ballots = read_ballots(text)
    strict = []
    for count, groups in ballots:
        for _ in range(count):
            strict.append([g[0] for g in break_ties(groups, rng)])
    e = Election(np.asarray(complete_votes(strict, m, rng), dtype=np.int64), tuple(names))
    if top_k is not None and top_k < m:
        e = select_top_candidates(e, top_k, rng)
    if resample is not None:
        e = resample_votes(e, resample, rng)
    return e


# Datasets.

STANDARD_COMPOSITION = [
    ("ic", 20), ("conitzer", 20), ("walsh", 20), ("spoc", 20), ("single_crossing", 20),
    ("cube:dim=1", 20), ("cube:dim=2", 20), ("cube:dim=3", 20),
    ("cube:dim=5", 20), ("cube:dim=10", 20), ("cube:dim=20", 20),
    ("sphere:dim=2", 20), ("sphere:dim=3", 20), ("sphere:dim=4", 20),
    ("gs:balanced", 20), ("gs:caterpillar", 20),
    ("urn:alpha=gamma", 80), ("mallows:normphi=uniform", 80),
]

STANDARD_PATHS = [("ID", "AN"), ("ID", "ST"), ("UN", "AN"), ("UN", "ST")]
ALL_PATHS = [(a, b) for i, a in enumerate(COMPASS) for b in COMPASS[i + 1:]]


_RECIPE_KEYS = ("m", "n", "seed", "compass", "paths", "path_steps")


@dataclass
class DatasetRecipe:
    entries: list[tuple[CultureSpec, int]] = field(default_factory=list)
    m: int = 10
    n: int = 100
    seed: int = 0
    compass: bool = False
    paths: list[tuple[str, str]] = field(default_factory=list)
    path_steps: int = 20

    def __post_init__(self):
        if any(c <= 0 for _, c in self.entries):
            raise ValueError("recipe counts must be positive")

    @classmethod
    def standard(cls, m: int = 10, n: int = 100, seed: int = 0, scale: float = 1.0) -> "DatasetRecipe":
        """The synthetic composition of the culture map, optionally scaled down."""
        entries = [(CultureSpec.parse(s), max(1, round(c * scale))) for s, c in STANDARD_COMPOSITION]
        return cls(entries, m, n, seed, True, list(STANDARD_PATHS), 20)

    @classmethod
    def parse(cls, text: str) -> "DatasetRecipe":
        r = cls()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            ln = raw.split("#", 1)[0].strip()
            if not ln:
                continue
            key = ln.split("=", 1)[0].strip()
            if key in _RECIPE_KEYS or ("," not in ln and "=" in ln):
                value = ln.split("=", 1)[1].strip()
                if key in ("m", "n", "seed", "path_steps"):
                    setattr(r, key, int(value))
                elif key == "compass":
                    r.compass = value.lower() in ("1", "yes", "true")
                elif key == "paths":
                    r.paths = [] if value.lower() in ("", "none") else [
                        tuple(p.strip().upper().split("-")) for p in value.split(",")]
                else:
                    raise ValueError(f"line {lineno}: unknown recipe key {key!r}")
                continue
            spec_text, _, count = ln.rpartition(",")
            try:
                r.entries.append((CultureSpec.parse(spec_text), int(count)))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        r.__post_init__()
        return r

    def to_text(self) -> str:
        lines = [f"m={self.m}", f"n={self.n}", f"seed={self.seed}",
                 f"compass={'yes' if self.compass else 'no'}",
                 "paths=" + (",".join(f"{a}-{b}" for a, b in self.paths) or "none"),
                 f"path_steps={self.path_steps}"]
        lines += [f"{spec},{count}" for spec, count in self.entries]
        return "\n".join(lines) + "\n"


@dataclass
class DatasetItem:
    label: str
    family: str
    matrix: FrequencyMatrix
    election: Election | None = None
    params: str = ""


def resolve_spec(spec: CultureSpec, rng: np.random.Generator) -> CultureSpec:
    """Replace recipe placeholders: urn ``alpha=gamma`` draws Gamma(0.8, 1), mallows ``normphi=uniform`` U[0,1]."""
    p = dict(spec.params)
    if spec.kind == "urn" and p.get("alpha") == "gamma":
        p["alpha"] = float(rng.gamma(0.8, 1.0))
    if spec.kind == "mallows" and p.get("normphi") == "uniform":
        p["normphi"] = float(rng.random())
    return CultureSpec(spec.kind, p)


def build_dataset(recipe: DatasetRecipe) -> list[DatasetItem]:
    """Sample every recipe entry (one RNG stream per election), then append compass and path matrices."""
    items = []
    stream = 0
    for spec, count in recipe.entries:
        family = str(spec)
        for i in range(count):
            rng = child_rng(recipe.seed, stream)
            stream += 1
            concrete = resolve_spec(spec, rng)
            e = sample(concrete, recipe.m, recipe.n, rng)
            label = f"{family.replace(':', '_').replace('=', '').replace(';', '_')}_{i:03d}"
            items.append(DatasetItem(label, family, frequency_matrix(e), e, str(concrete)))
    compass = {k: compass_matrix(k, recipe.m) for k in COMPASS if k != "ST" or recipe.m % 2 == 0}
    if recipe.compass:
        for k, x in compass.items():
            items.append(DatasetItem(k, "compass", x))
    for a, b in recipe.paths:
        if a not in compass or b not in compass:
            raise ValueError(f"cannot build path {a}-{b} for m={recipe.m}")
        for z in convex_path(compass[a], compass[b], recipe.path_steps):
            items.append(DatasetItem(z.label, "path", z))
    return items


def save_dataset(items: Sequence[DatasetItem], directory: str | os.PathLike) -> None:
    root = Path(directory)
    (root / "elections").mkdir(parents=True, exist_ok=True)
    (root / "matrices").mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "family", "params", "file"])
    for it in items:
        if it.election is not None:
            rel = f"elections/{it.label}.soc"
            (root / rel).write_text(write_election(it.election), newline="\n")
        else:
            rel = f"matrices/{it.label}.csv"
            (root / rel).write_text(write_frequency_matrix(it.matrix), newline="\n")
        w.writerow([it.label, it.family, it.params, rel])
    (root / "index.csv").write_text(buf.getvalue(), newline="\n")


def load_dataset(directory: str | os.PathLike) -> list[DatasetItem]:
    root = Path(directory)
    items = []
    with open(root / "index.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            text = (root / row["file"]).read_text()
            if row["file"].endswith(".soc"):
                e = parse_election(text)
                items.append(DatasetItem(row["label"], row["family"], frequency_matrix(e).with_label(row["label"]),
                                         e, row.get("params", "")))
            else:
                x = parse_frequency_matrix(text, row["label"])
                items.append(DatasetItem(row["label"], row["family"], x, None, row.get("params", "")))
    return items


def family_average_distances(items: Sequence[DatasetItem], d) -> tuple[list[str], np.ndarray]:
    """Mean distance between members of every pair of families (first-seen order).

    Diagonal entries average over distinct members; NaN where a family has a single member.
    """
    fam_of = {it.label: it.family for it in items}
    labels = list(d.labels)
    families = list(dict.fromkeys(fam_of[l] for l in labels))
    idx = np.array([families.index(fam_of[l]) for l in labels])
    off = ~np.eye(len(labels), dtype=bool)
    rows, cols = np.nonzero(off)
    f = len(families)
    total, count = np.zeros((f, f)), np.zeros((f, f))
    np.add.at(total, (idx[rows], idx[cols]), d.values[rows, cols])
    np.add.at(count, (idx[rows], idx[cols]), 1)
    out = np.full((f, f), np.nan)
    np.divide(total, count, out=out, where=count > 0)
    return families, out


def fit_norm_phi(
    target: Sequence[FrequencyMatrix],
    grid_step: float = 0.001,
    samples_per_point: int = 100,
    n: int = 100,
    rng: np.random.Generator | None = None,
) -> tuple[float, float, float]:
    """Grid search for the Mallows norm-phi whose samples are closest (on average) to ``target``.

    Returns ``(norm_phi, mean normalized distance, its standard deviation)``.
    """
    target = list(target)
    if not target:
        raise ValueError("target dataset is empty")
    m = target[0].m
    if any(x.m != m for x in target):
        raise ValueError("all target matrices must share m")
    rng = rng if rng is not None else make_rng(0)
    steps = int(round(1.0 / grid_step))
    best = None
    for k in range(steps + 1):
        phi = k / steps
        spec = CultureSpec("mallows", {"normphi": phi})
        ds = []
        for _ in range(samples_per_point):
            x = frequency_matrix(sample(spec, m, n, rng))
            ds.extend(float(normalized_positionwise(x, t)) for t in target)
        mean = float(np.mean(ds))
        if best is None or mean < best[1]:
            best = (phi, mean, float(np.std(ds)))
    return best


def read_coloring(text: str) -> dict[str, object]:
    """``label,value`` CSV (header optional); numeric values become floats."""
    out: dict[str, object] = {}
    rows = list(csv.reader(io.StringIO(text)))
    if rows and rows[0] and rows[0][0] == "label":
        rows = rows[1:]
    for row in rows:
        if len(row) < 2:
            continue
        try:
            out[row[0]] = float(row[1])
        except ValueError:
            out[row[0]] = row[1]
    return out

