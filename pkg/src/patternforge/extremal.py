"""Exact extremal values by branch and bound over ones-sets.

Two quantities, one engine: the maximum number of ones in an n x ... x n
matrix avoiding a pattern under ordinary containment, and the same under
interval-minor containment.  Cells are considered in lexicographic order,
include branch first, so the search and its reported witness are fully
deterministic.  Budgets turn an unfinished search into a first-class
lower-bound-only record instead of an error; records persist to append-only
JSONL and later runs resume from the cached best.
"""

from __future__ import annotations

import itertools
import json
import time
from bisect import bisect_left
from dataclasses import dataclass, replace
from pathlib import Path

from .containment import contains_pattern, has_interval_minor
from .errors import PreconditionError, StructureError, VerificationError
from .tensor import (
    Coord,
    TensorMatrix,
    tensor_from_json,
    tensor_to_json,
)

_ALGO = "bnb-lex-1"

RECORDS_FILENAME = "records.jsonl"


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the branch-and-bound search.

    node_budget / time_budget of None mean unlimited.  reflection_pruning
    enables a symmetry cut that may only ever change which witness is found,
    never the value.  parallel_width is accepted for interface stability; the
    search result is defined to be identical for every width.
    """

    node_budget: int | None = None
    time_budget: float | None = None
    cache_dir: str | Path | None = None
    parallel_width: int = 1
    verify: bool = True
    reflection_pruning: bool = False

    def __post_init__(self):
        if self.node_budget is not None and self.node_budget < 1:
            raise PreconditionError("node budget must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise PreconditionError("time budget must be positive")
        if self.parallel_width < 1:
            raise PreconditionError("parallel width must be positive")

    def fingerprint(self) -> str:
        """Digest of everything that can influence the found witness."""
        import hashlib

        payload = json.dumps(
            {"algo": _ALGO, "reflect": self.reflection_pruning}, sort_keys=True
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ExtremalRecord:
    """One computed extremal value with its attaining witness.

    kind is 'f' (ordinary containment) or 'm' (interval minor) in records and
    on the wire.  status 'exact' means value is the true maximum; status
    'lower-bound-only' means the budget ran out and value is only attained,
    not proven maximal.
    """

    kind: str
    n: int
    d: int
    pattern: TensorMatrix
    value: int
    witness: TensorMatrix
    status: str
    elapsed: float
    fingerprint: str

    def verify(self) -> None:
        """Internal consistency; raises VerificationError on any breach."""
        if self.kind not in ("f", "m"):
            raise VerificationError(f"unknown record kind {self.kind!r}")
        if self.status not in ("exact", "lower-bound-only"):
            raise VerificationError(f"unknown record status {self.status!r}")
        if self.witness.dims != (self.n,) * self.d:
            raise VerificationError(
                f"witness extents {self.witness.dims} do not match n={self.n}, d={self.d}"
            )
        if self.witness.ones_count != self.value:
            raise VerificationError(
                f"witness has {self.witness.ones_count} ones, record says {self.value}"
            )
        if self.kind == "f":
            if contains_pattern(self.witness, self.pattern):
                raise VerificationError("stored witness contains the pattern")
            if (
                self.status == "exact"
                and self.pattern.ones_count >= 2
                and not self.n ** (self.d - 1) <= self.value <= self.n**self.d
            ):
                raise VerificationError(
                    f"value {self.value} breaks the trivial bounds for n={self.n}, d={self.d}"
                )
        else:
            if has_interval_minor(self.witness, self.pattern):
                raise VerificationError(
                    "stored witness contains the pattern as an interval minor"
                )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "d": self.d,
            "pattern": tensor_to_json(self.pattern),
            "value": self.value,
            "witness": tensor_to_json(self.witness),
            "status": self.status,
            "elapsed": self.elapsed,
            "fingerprint": self.fingerprint,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExtremalRecord":
        try:
            return cls(
                kind=data["kind"],
                n=int(data["n"]),
                d=int(data["d"]),
                pattern=tensor_from_json(data["pattern"]),
                value=int(data["value"]),
                witness=tensor_from_json(data["witness"]),
                status=data["status"],
                elapsed=float(data["elapsed"]),
                fingerprint=data["fingerprint"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise StructureError(f"malformed record: {exc}") from None


def _canonical_pattern(P: TensorMatrix) -> str:
    return json.dumps(tensor_to_json(P), sort_keys=True, separators=(",", ":"))


def _record_key(rec: ExtremalRecord) -> tuple:
    return (rec.kind, rec.n, rec.d, _canonical_pattern(rec.pattern), rec.fingerprint)


# ---------------------------------------------------------------------------
# avoidance checkers consulted by the search
# ---------------------------------------------------------------------------


class _SubmatrixChecker:
    """Incremental ordinary-containment check: would adding `cell` to a set
    that avoids P create an embedding of P?  Only embeddings through the new
    cell are searched."""

    def __init__(self, dims: tuple[int, ...], P: TensorMatrix):
        self.dims = dims
        self.pat = sorted(P.ones)
        self.kdims = P.dims
        self.d = len(dims)

    def creates_containment(self, chosen: list[Coord], cell: Coord) -> bool:
        if any(k > n for k, n in zip(self.kdims, self.dims)):
            return False
        dims, kdims, d = self.dims, self.kdims, self.d
        pat = self.pat
        maps: list[dict[int, int]] = [dict() for _ in range(d)]

        def compatible(pc: Coord, hc: Coord) -> bool:
            for ax in range(d):
                p, v = pc[ax], hc[ax]
                if not p <= v <= dims[ax] - (kdims[ax] - p):
                    return False
                got = maps[ax].get(p)
                if got is not None:
                    if got != v:
                        return False
                    continue
                for q, w in maps[ax].items():
                    if q < p:
                        if v - w < p - q:
                            return False
                    elif w - v < q - p:
                        return False
            return True

        def assign(pc: Coord, hc: Coord) -> list[int]:
            touched = []
            for ax in range(d):
                if pc[ax] not in maps[ax]:
                    maps[ax][pc[ax]] = hc[ax]
                    touched.append(ax)
            return touched

        def rec(order: list[Coord], i: int) -> bool:
            if i == len(order):
                return True
            pc = order[i]
            for hc in chosen:
                if not compatible(pc, hc):
                    continue
                touched = assign(pc, hc)
                if rec(order, i + 1):
                    return True
                for ax in touched:
                    del maps[ax][pc[ax]]
            # the new cell may serve several pattern ones at once
            if compatible(pc, cell):
                touched = assign(pc, cell)
                if rec(order, i + 1):
                    return True
                for ax in touched:
                    del maps[ax][pc[ax]]
            return False

        for j, pinned in enumerate(self.pat):
            if not compatible(pinned, cell):
                continue
            touched = assign(pinned, cell)
            rest = pat[:j] + pat[j + 1 :]
            if rec(rest, 0):
                return True
            for ax in touched:
                del maps[ax][pinned[ax]]
        return False


class _MinorChecker:
    """Interval-minor avoidance check after adding a cell.

    All-ones targets get a precomputed partition scan (every block of some
    full axis-partition must be nonempty); other targets rebuild the tensor
    and rerun the exact decider.
    """

    def __init__(self, dims: tuple[int, ...], B: TensorMatrix):
        self.dims = dims
        self.B = B
        self.d = len(dims)
        self.all_ones = B.ones_count == B.cell_count
        if self.all_ones:
            ks = B.dims
            self.fits = all(k <= n for k, n in zip(ks, dims))
            self.need = B.ones_count
            # per axis: list of cut tuples, each mapped to part-index lookup
            self.axis_charts: list[list[list[int]]] = []
            for n, k in zip(dims, ks):
                charts = []
                for mids in itertools.combinations(range(1, n), k - 1):
                    bounds = mids + (n,)
                    # chart[c-1] = 0-based part index of coordinate c
                    chart = [bisect_left(bounds, c) for c in range(1, n + 1)]
                    charts.append(chart)
                self.axis_charts.append(charts)
            self.ks = ks
            self.full = (1 << self.need) - 1

    def creates_containment(self, chosen: list[Coord], cell: Coord) -> bool:
        ones = chosen + [cell]
        if self.all_ones:
            if not self.fits or len(ones) < self.need:
                return False
            return self._partition_scan(ones)
        host = TensorMatrix(self.dims, ones)
        return has_interval_minor(host, self.B)

    def _partition_scan(self, ones: list[Coord]) -> bool:
        ks = self.ks
        placings = [
            [
                [chart[c[ax] - 1] for c in ones]
                for chart in self.axis_charts[ax]
            ]
            for ax in range(self.d)
        ]
        full = self.full
        for combo in itertools.product(*placings):
            seen = 0
            for i in range(len(ones)):
                flat = 0
                for ax in range(self.d):
                    flat = flat * ks[ax] + combo[ax][i]
                seen |= 1 << flat
            if seen == full:
                return True
        return False


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------


class _Stop(Exception):
    pass


def _branch_and_bound(
    dims: tuple[int, ...],
    checker,
    cfg: SearchConfig,
    seed_value: int,
    seed_ones: frozenset[Coord] | None,
):
    cells = sorted(itertools.product(*(range(1, n + 1) for n in dims)))
    total = len(cells)
    best_value = max(seed_value, 0)
    best_ones: frozenset[Coord] = (
        seed_ones if seed_ones is not None else frozenset()
    )
    chosen: list[Coord] = []
    nodes = 0
    deadline = (
        time.perf_counter() + cfg.time_budget if cfg.time_budget is not None else None
    )
    half = dims[0] // 2
    lower_cells_after = [0] * (total + 1)
    for i in range(total - 1, -1, -1):
        lower_cells_after[i] = lower_cells_after[i + 1] + (cells[i][0] <= half)
    use_reflect = cfg.reflection_pruning and _reflect_axis1_invariant(checker)
    lower_count = 0
    upper_count = 0

    def rec(i: int) -> None:
        nonlocal nodes, best_value, best_ones, lower_count, upper_count
        nodes += 1
        if cfg.node_budget is not None and nodes > cfg.node_budget:
            raise _Stop
        if deadline is not None and nodes % 256 == 0 and time.perf_counter() > deadline:
            raise _Stop
        if len(chosen) > best_value:
            best_value = len(chosen)
            best_ones = frozenset(chosen)
        if i == total or len(chosen) + (total - i) <= best_value:
            return
        if use_reflect and lower_count + lower_cells_after[i] < upper_count:
            return
        cell = cells[i]
        if not checker.creates_containment(chosen, cell):
            chosen.append(cell)
            is_lower = cell[0] <= half
            is_upper = cell[0] > dims[0] - half
            lower_count += is_lower
            upper_count += is_upper
            rec(i + 1)
            lower_count -= is_lower
            upper_count -= is_upper
            chosen.pop()
        rec(i + 1)

    status = "exact"
    try:
        rec(0)
    except _Stop:
        status = "lower-bound-only"
    return best_value, best_ones, status, nodes


def _reflect_axis1_invariant(checker) -> bool:
    """The symmetry cut is sound only when reversing axis 1 maps avoiders to
    avoiders, i.e. the pattern reversed along axis 1 equals the pattern."""
    if isinstance(checker, _MinorChecker):
        P = checker.B
    else:
        P = TensorMatrix(checker.kdims, checker.pat)
    n1 = P.dims[0]
    flipped = {(n1 + 1 - c[0],) + c[1:] for c in P.ones}
    return flipped == set(P.ones)


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def records_path(cache_dir: str | Path) -> Path:
    return Path(cache_dir) / RECORDS_FILENAME


def load_records(cache_dir: str | Path) -> list[ExtremalRecord]:
    path = records_path(cache_dir)
    if not path.exists():
        return []
    out = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            out.append(ExtremalRecord.from_json(json.loads(line)))
        except (json.JSONDecodeError, StructureError) as exc:
            raise StructureError(f"{path}:{lineno}: {exc}") from None
    return out


def append_record(cache_dir: str | Path, rec: ExtremalRecord) -> None:
    path = records_path(cache_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a") as fh:
        fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")


def _cached_lookup(cfg: SearchConfig, key: tuple):
    """(exact record, best lower-bound record) already stored for this key."""
    if cfg.cache_dir is None:
        return None, None
    exact = None
    seed = None
    for rec in load_records(cfg.cache_dir):
        if _record_key(rec) != key:
            continue
        if rec.status == "exact":
            exact = rec
        elif seed is None or rec.value > seed.value:
            seed = rec
    return exact, seed


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def _run(kind: str, n: int, P: TensorMatrix, cfg: SearchConfig) -> ExtremalRecord:
    if P.is_zero:
        raise PreconditionError("pattern must contain at least one 1")
    if P.d < 2:
        raise PreconditionError("pattern must be at least 2-dimensional")
    if n < 1:
        raise PreconditionError(f"need n >= 1, got {n}")
    d = P.d
    dims = (n,) * d
    key = (kind, n, d, _canonical_pattern(P), cfg.fingerprint())
    exact, seed = _cached_lookup(cfg, key)
    if exact is not None:
        if cfg.verify:
            exact.verify()
        return exact
    seed_value, seed_ones = -1, None
    if seed is not None:
        if cfg.verify:
            seed.verify()
        seed_value, seed_ones = seed.value, seed.witness.ones

    checker = (
        _SubmatrixChecker(dims, P) if kind == "f" else _MinorChecker(dims, P)
    )
    start = time.perf_counter()
    value, ones, status, _nodes = _branch_and_bound(
        dims, checker, cfg, seed_value, seed_ones
    )
    elapsed = time.perf_counter() - start
    rec = ExtremalRecord(
        kind=kind,
        n=n,
        d=d,
        pattern=P,
        value=value,
        witness=TensorMatrix(dims, ones),
        status=status,
        elapsed=elapsed,
        fingerprint=cfg.fingerprint(),
    )
    if cfg.verify:
        rec.verify()
    if cfg.cache_dir is not None:
        append_record(cfg.cache_dir, rec)
    return rec


def max_ones_avoiding(n: int, P: TensorMatrix, cfg: SearchConfig | None = None) -> ExtremalRecord:
    """Maximum ones in an n x ... x n matrix avoiding P as a submatrix
    (ordinary containment), with an attaining witness."""
    return _run("f", n, P, cfg or SearchConfig())


def max_ones_avoiding_minor(
    n: int, B: TensorMatrix, cfg: SearchConfig | None = None
) -> ExtremalRecord:
    """Maximum ones in an n x ... x n matrix avoiding B as an interval
    minor, with an attaining witness."""
    return _run("m", n, B, cfg or SearchConfig())


@dataclass(frozen=True)
class RatioPoint:
    n: int
    value: int
    ratio: float
    status: str


def ratio_sequence(
    P: TensorMatrix,
    n_range,
    cfg: SearchConfig | None = None,
    kind: str = "f",
) -> list[RatioPoint]:
    """Exact values of the extremal function over a range of n together with
    value / n^(d-1), the scaling the trivial bounds sandwich."""
    if kind not in ("f", "m"):
        raise PreconditionError(f"kind must be 'f' or 'm', got {kind!r}")
    run = max_ones_avoiding if kind == "f" else max_ones_avoiding_minor
    out = []
    for n in n_range:
        rec = run(n, P, cfg)
        out.append(
            RatioPoint(
                n=n,
                value=rec.value,
                ratio=rec.value / n ** (P.d - 1),
                status=rec.status,
            )
        )
    return out
