"""
Enumeration of string degree matrices and vanishing sweeps.

A degree matrix D (t x s, no zero rows) is string-admissible for n when
D^t D = diag(n_1 + 1, ..., n_s + 1) and every column has m_q + 2 <= n_q nonzero
entries. Matrices are enumerated up to row permutations and whole-row sign flips:
each row is normalized so that its first nonzero entry is positive, and a
matrix is a non-increasing sequence of rows in a fixed order.

Depth-first search:
- candidate rows have |d_q| <= isqrt(n_q + 1)
- a branch is cut when a column norm exceeds its target, a column has too many
  nonzero entries, or the remaining rows cannot close the norm deficit
- a matrix is emitted when all norms hit their targets and the columns are
  orthogonal; such a matrix is never extended
"""
from __future__ import annotations

import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.core.errors import InstanceError
from src.core.geometry import CompleteIntersection, evaluate_genus, gram_matrix, landweber_stong
from src.core.series import QSeries

LOGGER = logging.getLogger(__name__)

Row = Tuple[int, ...]


@dataclass(frozen=True)
class SearchBounds:
    s: int
    t_max: int
    n: Optional[Tuple[int, ...]] = None
    n_max: Optional[int] = None
    allow_odd_dim: bool = False

    def __post_init__(self):
        if self.s < 1:
            raise InstanceError(f"search bounds need s >= 1, got {self.s}")
        if self.t_max < 1:
            raise InstanceError(f"search bounds need t_max >= 1, got {self.t_max}")
        if (self.n is None) == (self.n_max is None):
            raise InstanceError("search bounds take exactly one of n or n_max")
        if self.n is not None:
            object.__setattr__(self, "n", tuple(self.n))
            if len(self.n) != self.s:
                raise InstanceError(f"n has {len(self.n)} entries, expected s={self.s}")
            if any(v < 1 for v in self.n):
                raise InstanceError(f"search bounds need every n_q >= 1, got {self.n}")
        elif self.n_max < 1:
            raise InstanceError(f"search bounds need n_max >= 1, got {self.n_max}")


def _row_key(row: Row) -> Tuple[Tuple[int, ...], Row]:
    return tuple(abs(d) for d in row), row


def _normalize_row(row: Sequence[int]) -> Row:
    for d in row:
        if d != 0:
            return tuple(row) if d > 0 else tuple(-x for x in row)
    raise InstanceError("degenerate divisor: zero row")


@dataclass(frozen=True)
class CanonicalMatrix:
    """Degree matrix with sign-normalized rows in descending row order"""

    rows: Tuple[Row, ...]

    @property
    def t(self) -> int:
        return len(self.rows)

    def gram(self) -> np.ndarray:
        return gram_matrix(self.rows, len(self.rows[0]) if self.rows else 0)

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.rows]


def canonicalize(D: Sequence[Sequence[int]]) -> CanonicalMatrix:
    rows = [_normalize_row(row) for row in D]
    return CanonicalMatrix(tuple(sorted(rows, key=_row_key, reverse=True)))


def iterate_ambient_dims(bounds: SearchBounds) -> Iterator[Tuple[int, ...]]:
    if bounds.n is not None:
        yield bounds.n
        return
    yield from itertools.product(range(1, bounds.n_max + 1), repeat=bounds.s)


def _candidate_rows(n: Sequence[int]) -> List[Row]:
    ranges = [range(-math.isqrt(v + 1), math.isqrt(v + 1) + 1) for v in n]
    rows = {_normalize_row(r) for r in itertools.product(*ranges) if any(r)}
    return sorted(rows, key=_row_key, reverse=True)


@dataclass
class _SearchState:
    targets: Tuple[int, ...]
    limits: Tuple[int, ...]
    caps: Tuple[int, ...]
    t_max: int
    norms: List[int]
    nonzero: List[int]
    gram: Dict[Tuple[int, int], int]
    rows: List[Row] = field(default_factory=list)
    visited: int = 0
    pruned: int = 0


def _admissible(state: _SearchState) -> bool:
    remaining = state.t_max - len(state.rows)
    for q, target in enumerate(state.targets):
        if state.norms[q] > target or state.nonzero[q] > state.limits[q]:
            return False
        if target - state.norms[q] > remaining * state.caps[q]:
            return False
    return True


def _complete(state: _SearchState) -> bool:
    return list(state.targets) == state.norms and all(v == 0 for v in state.gram.values())


def _apply(state: _SearchState, row: Row, sign: int):
    for q, d in enumerate(row):
        state.norms[q] += sign * d * d
        if d != 0:
            state.nonzero[q] += sign
    for key in state.gram:
        u, v = key
        state.gram[key] += sign * row[u] * row[v]


def _search(state: _SearchState, candidates: List[Row], start: int) -> Iterator[CanonicalMatrix]:
    state.visited += 1
    if state.rows and _complete(state):
        yield CanonicalMatrix(tuple(state.rows))
        return
    if len(state.rows) == state.t_max:
        return
    for index in range(start, len(candidates)):
        row = candidates[index]
        _apply(state, row, 1)
        state.rows.append(row)
        if _admissible(state):
            yield from _search(state, candidates, index)
        else:
            state.pruned += 1
        state.rows.pop()
        _apply(state, row, -1)


def string_matrices_for(n: Sequence[int], t_max: int) -> Iterator[CanonicalMatrix]:
    """All canonical string-admissible matrices for one ambient vector n"""
    n = tuple(n)
    s = len(n)
    state = _SearchState(
        targets=tuple(v + 1 for v in n),
        limits=tuple(v - 2 for v in n),
        caps=tuple(math.isqrt(v + 1) ** 2 for v in n),
        t_max=t_max,
        norms=[0] * s,
        nonzero=[0] * s,
        gram={(u, v): 0 for u in range(s) for v in range(u + 1, s)},
    )
    if any(limit < 1 for limit in state.limits):
        return
    yield from _search(state, _candidate_rows(n), 0)
    LOGGER.debug("search n=%s t_max=%d: %d nodes visited, %d pruned", n, t_max, state.visited, state.pruned)


def _dimension_allowed(n: Sequence[int], matrix: CanonicalMatrix, allow_odd_dim: bool) -> bool:
    return allow_odd_dim or (sum(n) - matrix.t) % 2 == 0


def enumerate_string_matrices(bounds: SearchBounds) -> Iterator[Tuple[Tuple[int, ...], CanonicalMatrix]]:
    for n in iterate_ambient_dims(bounds):
        for matrix in string_matrices_for(n, bounds.t_max):
            if _dimension_allowed(n, matrix, bounds.allow_odd_dim):
                yield n, matrix


def brute_force_string_matrices(n: int, t_max: int, allow_odd_dim: bool = True) -> Set[CanonicalMatrix]:
    """Every single-column matrix with entries bounded by isqrt(n + 1), filtered directly"""
    bound = math.isqrt(n + 1)
    values = [d for d in range(-bound, bound + 1) if d != 0]
    found: Set[CanonicalMatrix] = set()
    for t in range(1, t_max + 1):
        if t + 2 > n:
            break
        for column in itertools.product(values, repeat=t):
            if sum(d * d for d in column) != n + 1:
                continue
            matrix = canonicalize([(d,) for d in column])
            if _dimension_allowed((n,), matrix, allow_odd_dim):
                found.add(matrix)
    return found


@dataclass(frozen=True)
class SweepRecord:
    n: Tuple[int, ...]
    matrix: CanonicalMatrix
    complex_dim: int
    value: QSeries
    elapsed: float
    landweber_stong: bool

    @property
    def vanishes(self) -> bool:
        return self.value.is_zero()

    @property
    def section(self) -> str:
        return "main" if self.complex_dim % 2 == 0 else "odd_dimension"


@dataclass
class SweepReport:
    bounds: SearchBounds
    trunc_order: int
    records: List[SweepRecord] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def instance_count(self) -> int:
        return len(self.records)

    @property
    def failures(self) -> List[SweepRecord]:
        return [r for r in self.records if not r.vanishes]

    @property
    def ok(self) -> bool:
        return not self.failures

    def section(self, name: str) -> List[SweepRecord]:
        if name == "landweber_stong":
            return [r for r in self.records if r.landweber_stong]
        return [r for r in self.records if r.section == name]


def _witten_value(task: Tuple[Tuple[int, ...], Tuple[Row, ...], int]) -> Tuple[QSeries, float]:
    n, rows, trunc_order = task
    started = time.perf_counter()
    report = evaluate_genus(CompleteIntersection(n, rows), "witten", trunc_order)
    return report.value, time.perf_counter() - started


def verify_theorem(bounds: SearchBounds, trunc_order: int, threads: int = 1) -> SweepReport:
    """Witten genus of every enumerated instance, checked for exact vanishing through q^{2K}"""
    started = time.perf_counter()
    instances = list(enumerate_string_matrices(bounds))
    tasks = [(n, matrix.rows, trunc_order) for n, matrix in instances]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_witten_value, tasks))
    else:
        results = [_witten_value(task) for task in tasks]

    report = SweepReport(bounds=bounds, trunc_order=trunc_order)
    for (n, matrix), (value, elapsed) in zip(instances, results):
        ci = CompleteIntersection(n, matrix.rows)
        record = SweepRecord(
            n=n,
            matrix=matrix,
            complex_dim=ci.complex_dim,
            value=value,
            elapsed=elapsed,
            landweber_stong=landweber_stong(ci),
        )
        if not record.vanishes:
            LOGGER.error("nonzero Witten genus for n=%s D=%s: %s", n, matrix.rows, value)
        report.records.append(record)
    report.elapsed = time.perf_counter() - started
    LOGGER.info("sweep: %d instances, %d failures in %.2fs",
                report.instance_count, len(report.failures), report.elapsed)
    return report
