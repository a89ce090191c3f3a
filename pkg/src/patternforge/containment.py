"""Exact deciders for two containment orders on 0-1 tensors.

Ordinary containment: A contains P when strictly increasing per-axis index
maps carry every 1 of P onto a 1 of A.

Interval-minor containment: B is an interval minor of A when contracting
consecutive cross sections of A can produce a matrix containing B.  The
decider here works with the equivalent grid-witness form: per-axis systems of
disjoint increasing intervals such that every block selected by a 1 of B
contains a 1 of A.  A literal breadth-first search over contraction sequences
(`contains_via_contraction_oracle`) exists purely to cross-check that
equivalence on tiny instances.

Both deciders are exact and deterministic; an optional node budget turns
runaway searches into an explicit undecided error instead of a wrong answer.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BudgetExceededError,
    PreconditionError,
    RangeError,
    StructureError,
)
from .tensor import Coord, TensorMatrix

# contains_via_contraction_oracle refuses hosts above this many cells
ORACLE_CELL_LIMIT = 512


class GridWitness:
    """Interval-minor certificate: one ordered list of disjoint increasing
    1-based inclusive intervals per axis.

    Interval j on axis l selects the l-th block slab; the witness asserts
    that every block required by a 1 of the target pattern meets a 1 of the
    host.  Validity against a concrete (host, pattern) pair is checked by
    `verify_witness`, not the constructor.
    """

    __slots__ = ("_axes",)

    def __init__(self, axes: Iterable[Iterable[Sequence[int]]]):
        cleaned = []
        for ax_no, intervals in enumerate(axes, start=1):
            prev_end = 0
            row = []
            for iv in intervals:
                if len(iv) != 2:
                    raise StructureError(
                        f"axis {ax_no}: interval {tuple(iv)} is not a pair"
                    )
                a, b = int(iv[0]), int(iv[1])
                if a < 1 or b < a:
                    raise StructureError(f"axis {ax_no}: bad interval [{a},{b}]")
                if a <= prev_end:
                    raise StructureError(
                        f"axis {ax_no}: interval [{a},{b}] overlaps or precedes "
                        f"the one ending at {prev_end}"
                    )
                row.append((a, b))
                prev_end = b
            if not row:
                raise StructureError(f"axis {ax_no}: empty interval list")
            cleaned.append(tuple(row))
        if not cleaned:
            raise StructureError("witness needs at least one axis")
        self._axes = tuple(cleaned)

    @property
    def axes(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        return self._axes

    @property
    def d(self) -> int:
        return len(self._axes)

    def flattened(self) -> tuple[int, ...]:
        """Interval endpoints in axis order; the lex-least contract refers to
        this sequence."""
        out: list[int] = []
        for intervals in self._axes:
            for a, b in intervals:
                out.extend((a, b))
        return tuple(out)

    def check_against(self, A: TensorMatrix, B: TensorMatrix) -> None:
        """Structural validity for this host/pattern pair; raises StructureError."""
        if A.d != B.d:
            raise StructureError(
                f"dimension mismatch: host is {A.d}-dimensional, pattern {B.d}"
            )
        if self.d != A.d:
            raise StructureError(
                f"witness has {self.d} axes, tensors have {A.d}"
            )
        for ax, (intervals, k, n) in enumerate(
            zip(self._axes, B.dims, A.dims), start=1
        ):
            if len(intervals) != k:
                raise StructureError(
                    f"axis {ax}: {len(intervals)} intervals, pattern extent is {k}"
                )
            if intervals[-1][1] > n:
                raise StructureError(
                    f"axis {ax}: interval end {intervals[-1][1]} exceeds extent {n}"
                )

    def block(self, coord: Coord) -> tuple[Coord, Coord]:
        """(lo, hi) corners of the host block selected by a pattern coordinate."""
        lo = []
        hi = []
        for ax, j in enumerate(coord):
            if not 1 <= j <= len(self._axes[ax]):
                raise RangeError(f"no interval {j} on axis {ax + 1}")
            a, b = self._axes[ax][j - 1]
            lo.append(a)
            hi.append(b)
        return tuple(lo), tuple(hi)

    def locate(self, coord: Coord) -> Coord | None:
        """Block coordinate a host cell falls in, or None if any axis misses."""
        out = []
        for ax, c in enumerate(coord):
            hit = None
            for j, (a, b) in enumerate(self._axes[ax], start=1):
                if a <= c <= b:
                    hit = j
                    break
            if hit is None:
                return None
            out.append(hit)
        return tuple(out)

    def to_json(self) -> dict:
        return {"axes": [[[a, b] for a, b in ivs] for ivs in self._axes]}

    @classmethod
    def from_json(cls, data: dict) -> "GridWitness":
        if not isinstance(data, dict) or "axes" not in data:
            raise StructureError("witness JSON needs an 'axes' key")
        return cls(data["axes"])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridWitness):
            return NotImplemented
        return self._axes == other._axes

    def __hash__(self) -> int:
        return hash(self._axes)

    def __repr__(self) -> str:
        return f"GridWitness({list(map(list, self._axes))})"


def extend_to_partition(W: GridWitness, dims: Sequence[int]) -> GridWitness:
    """Stretch witness intervals into a full partition of each axis.

    Each gap joins the interval before it; indices before the first interval
    join the first.  The block every host cell belongs to is then total.
    """
    axes = []
    for intervals, n in zip(W.axes, dims):
        if intervals[-1][1] > n:
            raise StructureError(
                f"witness interval {intervals[-1]} exceeds axis extent {n}"
            )
        ext = []
        for j, (a, b) in enumerate(intervals):
            lo = 1 if j == 0 else ext[-1][1] + 1
            hi = n if j == len(intervals) - 1 else intervals[j + 1][0] - 1
            ext.append((lo, hi))
        axes.append(ext)
    return GridWitness(axes)


def verify_witness(A: TensorMatrix, B: TensorMatrix, W: GridWitness) -> bool:
    """Certificate check, no search: every block a 1 of B selects must
    contain a 1 of A.  Structurally invalid witnesses raise, they are not
    merely 'false'."""
    W.check_against(A, B)
    for coord in B.ones:
        lo, hi = W.block(coord)
        if not A.any_in_box(lo, hi):
            return False
    return True


# ---------------------------------------------------------------------------
# ordinary containment
# ---------------------------------------------------------------------------


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int | None):
        self.left = limit

    def spend(self) -> None:
        if self.left is None:
            return
        self.left -= 1
        if self.left < 0:
            raise BudgetExceededError(
                "node budget exhausted before the search finished; undecided"
            )


def find_embedding(
    A: TensorMatrix, P: TensorMatrix, node_budget: int | None = None
) -> list[tuple[Coord, Coord]] | None:
    """First embedding of P into A in lexicographic search order, as
    (pattern one, host one) pairs; None when A avoids P.

    An embedding assigns host coordinates to pattern coordinates so that some
    strictly increasing extension to whole axes exists.  That holds exactly
    when, per axis: equal pattern coordinates get equal host coordinates,
    host gaps are at least the pattern gaps, and both ends leave room
    (p <= v <= n - (k - p)).
    """
    if A.d != P.d:
        raise StructureError(
            f"dimension mismatch: {A.d}-dimensional vs {P.d}-dimensional"
        )
    if any(k > n for k, n in zip(P.dims, A.dims)):
        return None
    pat = sorted(P.ones)
    if not pat:
        return []
    host = A.ones_sorted()
    if len(host) < _distinct_requirement(pat):
        return None
    budget = _Budget(node_budget)
    d = A.d
    dims = A.dims
    kdims = P.dims
    # per-axis partial maps pattern coordinate -> host coordinate
    maps: list[dict[int, int]] = [dict() for _ in range(d)]

    def compatible(pc: Coord, hc: Coord) -> bool:
        for ax in range(d):
            p, v = pc[ax], hc[ax]
            if not p <= v <= dims[ax] - (kdims[ax] - p):
                return False
            m = maps[ax]
            got = m.get(p)
            if got is not None:
                if got != v:
                    return False
                continue
            for q, w in m.items():
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

    def unassign(pc: Coord, touched: list[int]) -> None:
        for ax in touched:
            del maps[ax][pc[ax]]

    chosen: list[Coord] = []

    def rec(i: int) -> bool:
        if i == len(pat):
            return True
        pc = pat[i]
        for hc in host:
            budget.spend()
            if not compatible(pc, hc):
                continue
            touched = assign(pc, hc)
            chosen.append(hc)
            if rec(i + 1):
                return True
            chosen.pop()
            unassign(pc, touched)
        return False

    if rec(0):
        return list(zip(pat, chosen))
    return None


def _distinct_requirement(pat: list[Coord]) -> int:
    # an embedding needs at least one host 1 per pattern 1
    return len(pat)


def contains_pattern(
    A: TensorMatrix, P: TensorMatrix, node_budget: int | None = None
) -> bool:
    """Ordinary containment decision.  A pattern with no ones is contained
    exactly when its extents fit (the empty embedding extends)."""
    return find_embedding(A, P, node_budget) is not None


# ---------------------------------------------------------------------------
# interval-minor containment
# ---------------------------------------------------------------------------


def _cut_tuples(n: int, k: int):
    """All boundary tuples (0, c_1, ..., c_{k-1}, n) cutting 1..n into k
    consecutive nonempty parts."""
    for mids in itertools.combinations(range(1, n), k - 1):
        yield (0,) + mids + (n,)


def _allones_minor_decision(A: TensorMatrix, ks: tuple[int, ...]) -> bool:
    """Does A contain the all-ones pattern of extents `ks` as an interval
    minor?

    For an all-ones target, witness intervals may always be widened into full
    axis partitions (blocks only grow), so it is enough to scan partitions
    into consecutive nonempty parts.  Axes are cut one by one with numpy
    block-sum collapsing; the final axis is checked for all cut choices at
    once against the prefix sums.
    """
    ns = A.dims
    d = A.d
    if any(k > n for k, n in zip(ks, ns)):
        return False
    if A.ones_count < math.prod(ks):
        return False
    arr = np.zeros(ns, dtype=np.int64)
    for c in A.ones:
        arr[tuple(i - 1 for i in c)] = 1

    last_k = ks[-1]
    last_bounds = np.array(list(_cut_tuples(ns[-1], last_k)), dtype=np.intp)

    def rec(block: np.ndarray, ax: int) -> bool:
        if ax == d - 1:
            pref = np.concatenate(
                [np.zeros(block.shape[:-1] + (1,), dtype=np.int64), block.cumsum(axis=-1)],
                axis=-1,
            )
            # counts[..., cut_choice, part] for every last-axis cut at once
            counts = pref[..., last_bounds[:, 1:]] - pref[..., last_bounds[:, :-1]]
            ok = (counts >= 1).all(axis=tuple(range(ax)) + (-1,))
            return bool(ok.any())
        n = block.shape[ax]
        for bounds in _cut_tuples(n, ks[ax]):
            slab = np.add.reduceat(block, bounds[:-1], axis=ax)
            rest = tuple(i for i in range(d) if i != ax)
            if (slab.sum(axis=rest) == 0).any():
                continue
            if rec(slab, ax + 1):
                return True
        return False

    return rec(arr, 0)


def _witness_search(
    A: TensorMatrix, B: TensorMatrix, node_budget: int | None
) -> GridWitness | None:
    """Depth-first search for the flattened-lex-least grid witness.

    Intervals are placed axis by axis in flattened order, both endpoints
    ascending, so the first complete witness found is the lexicographic
    minimum.  After each placement a relaxation is checked: every block a 1
    of B requires, widened to the loosest range still-unplaced intervals
    could occupy, must contain a 1 of A.
    """
    ns = A.dims
    ks = B.dims
    d = A.d
    if any(k > n for k, n in zip(ks, ns)):
        return None
    bones = B.ones_sorted()
    budget = _Budget(node_budget)
    placed: list[list[tuple[int, int]]] = [[] for _ in range(d)]

    def feasible() -> bool:
        for bc in bones:
            lo = []
            hi = []
            for ax in range(d):
                j = bc[ax]
                row = placed[ax]
                if j <= len(row):
                    a, b = row[j - 1]
                else:
                    prev_end = row[-1][1] if row else 0
                    a = prev_end + (j - len(row) - 1) + 1
                    b = ns[ax] - (ks[ax] - j)
                    if a > b:
                        return False
                lo.append(a)
                hi.append(b)
            if not A.any_in_box(tuple(lo), tuple(hi)):
                return False
        return True

    def place(ax: int, idx: int) -> GridWitness | None:
        if ax == d:
            return GridWitness(placed)
        if idx == ks[ax]:
            return place(ax + 1, 0)
        n = ns[ax]
        after = ks[ax] - idx - 1
        prev_end = placed[ax][idx - 1][1] if idx else 0
        for a in range(prev_end + 1, n - after + 1):
            for b in range(a, n - after + 1):
                budget.spend()
                placed[ax].append((a, b))
                if feasible():
                    got = place(ax, idx + 1)
                    if got is not None:
                        return got
                placed[ax].pop()
        return None

    if not feasible():
        return None
    return place(0, 0)


def _is_all_ones(B: TensorMatrix) -> bool:
    return B.ones_count == B.cell_count


def has_interval_minor(
    A: TensorMatrix, B: TensorMatrix, node_budget: int | None = None
) -> bool:
    """Interval-minor decision without certificate construction.

    All-ones targets take the vectorized partition scan, which is what makes
    exhaustive refutation on hosts like 9x9x9 practical; other targets run
    the witness search.
    """
    if A.d != B.d:
        raise StructureError(
            f"dimension mismatch: {A.d}-dimensional vs {B.d}-dimensional"
        )
    if _is_all_ones(B) and A.cell_count <= 1 << 24:
        return _allones_minor_decision(A, B.dims)
    return _witness_search(A, B, node_budget) is not None


def contains_interval_minor(
    A: TensorMatrix, B: TensorMatrix, node_budget: int | None = None
) -> GridWitness | None:
    """Lex-least grid witness that B is an interval minor of A, or None.

    The returned witness is minimal in the flattened-endpoint lexicographic
    order over all valid witnesses.
    """
    if A.d != B.d:
        raise StructureError(
            f"dimension mismatch: {A.d}-dimensional vs {B.d}-dimensional"
        )
    if _is_all_ones(B) and A.cell_count <= 1 << 24:
        if not _allones_minor_decision(A, B.dims):
            return None
    return _witness_search(A, B, node_budget)


# ---------------------------------------------------------------------------
# contraction-sequence oracle
# ---------------------------------------------------------------------------


def contains_via_contraction_oracle(A: TensorMatrix, B: TensorMatrix) -> bool:
    """Literal definition of interval minors: breadth-first search over all
    contraction sequences, testing ordinary containment of B at every stage.

    Deliberately unoptimized; refuses hosts above ORACLE_CELL_LIMIT cells.
    """
    if A.d != B.d:
        raise StructureError(
            f"dimension mismatch: {A.d}-dimensional vs {B.d}-dimensional"
        )
    if A.cell_count > ORACLE_CELL_LIMIT:
        raise PreconditionError(
            f"oracle limited to {ORACLE_CELL_LIMIT} cells, host has {A.cell_count}"
        )
    from .tensor import contract

    seen = {A}
    queue = deque([A])
    while queue:
        M = queue.popleft()
        if contains_pattern(M, B):
            return True
        for ax in range(1, M.d + 1):
            for lo in range(1, M.dims[ax - 1]):
                nxt = contract(M, ax, lo, lo + 1)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return False
