"""Observability and controllability machinery.

Everything works on 1-based delta indices. Observability matrices are
integer numpy arrays whose column ``i`` is the output index sequence
starting from state ``i``.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .network import Bcn, simulate


class NotABnError(ValueError):
    pass


class NotABcnError(ValueError):
    pass


class CoverageError(RuntimeError):
    """Some (input, state) pairs cannot be reached from the start state."""

    def __init__(self, uncovered, inputs, states):
        self.uncovered = frozenset(uncovered)
        self.inputs = tuple(inputs)
        self.states = tuple(states)
        super().__init__(f"{len(self.uncovered)} (input, state) pairs are unreachable")


def _require_bn(sys: Bcn):
    if sys.m != 0:
        raise NotABnError("operation is defined for Boolean networks (m = 0)")


def _require_bcn(sys: Bcn):
    if sys.m < 1:
        raise NotABcnError("operation needs at least one input node")


# ---------------------------------------------------------------------------
# pair indexing


def pair_count(size: int) -> int:
    """``N = size choose 2``; for ``size = 2**n`` this is ``2**(2n-1) - 2**(n-1)``."""
    return comb(size, 2)


def pair_index(i: int, i2: int, size: int) -> int:
    """Slot of the unordered pair ``(i, i2)``, ``i < i2``, in ``[1, size choose 2]``."""
    if not 1 <= i < i2 <= size:
        raise ValueError(f"need 1 <= i < i2 <= {size}, got ({i}, {i2})")
    if i == 1:
        return i2 - i
    return sum(size - j for j in range(1, i)) + i2 - i


def pair_of_index(s: int, size: int) -> tuple[int, int]:
    for i in range(1, size):
        width = size - i
        if s <= width:
            return i, i + s
        s -= width
    raise ValueError("pair slot out of range")


# ---------------------------------------------------------------------------
# Boolean networks


def observability_matrix_bn(sys: Bcn, window: int | None = None) -> np.ndarray:
    """Rows ``P H F^t`` for ``t < window`` (default ``2**n``)."""
    _require_bn(sys)
    window = sys.nstates if window is None else window
    out = np.zeros((window, sys.nstates), dtype=np.int64)
    cur = list(range(1, sys.nstates + 1))
    for t in range(window):
        out[t] = [sys.output(x) for x in cur]
        cur = [sys.next_state(1, x) for x in cur]
    return out


def effective_output_sequence(sys: Bcn, i: int) -> tuple[int, ...]:
    _require_bn(sys)
    return tuple(int(v) for v in observability_matrix_bn(sys)[:, i - 1])


def _columns_distinct(o: np.ndarray) -> bool:
    return len({tuple(c) for c in o.T}) == o.shape[1]


def is_observable_bn(sys: Bcn, window: int | None = None) -> bool:
    """All effective output sequences distinct; default window ``2**n - 1``."""
    _require_bn(sys)
    window = max(sys.nstates - 1, 1) if window is None else window
    return _columns_distinct(observability_matrix_bn(sys, window))


# ---------------------------------------------------------------------------
# controllability


def _successors(sys: Bcn, x: int) -> set[int]:
    return {sys.next_state(u, x) for u in range(1, sys.ninputs + 1)}


def _bfs(sys: Bcn, sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for y in _successors(sys, x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def reachable_set(sys: Bcn, p0: Iterable[int]) -> set[int]:
    """States reachable from ``p0`` in zero or more steps."""
    _require_bcn(sys)
    p0 = set(p0)
    if not p0:
        raise ValueError("initial state set is empty")
    return _bfs(sys, p0)


def is_controllable(sys: Bcn) -> bool:
    """Every state reaches every state (strong connectivity of the transition graph)."""
    _require_bcn(sys)
    everything = set(range(1, sys.nstates + 1))
    return all(_bfs(sys, [x]) == everything for x in everything)


def reach_walks(sys: Bcn, x0: int) -> dict[int, tuple[int, ...]]:
    """Shortest input sequence from ``x0`` to every reachable state (BFS tree)."""
    walks = {x0: ()}
    queue = deque([x0])
    while queue:
        x = queue.popleft()
        for u in range(1, sys.ninputs + 1):
            y = sys.next_state(u, x)
            if y not in walks:
                walks[y] = walks[x] + (u,)
                queue.append(y)
    return walks


def build_cover_sequence(sys: Bcn, x0: int, strict: bool = True) -> tuple[list[int], list[int]]:
    """A walk from ``x0`` whose ``(u(t), x(t))`` pairs cover every reachable pair.

    Greedy: use the smallest unused input at the current state; when none is
    left, travel the shortest path to the nearest state that still has one.
    Returns ``(inputs, states)`` with ``len(states) == len(inputs) + 1``.
    Pairs the walk cannot visit (unreachable states, or states the walk
    cannot return to) raise :class:`CoverageError` unless ``strict=False``.
    """
    U = sys.ninputs
    unused = {x: list(range(1, U + 1)) for x in _bfs(sys, [x0])}
    inputs: list[int] = []
    states = [x0]
    x = x0
    while any(unused.values()):
        if unused[x]:
            u = unused[x].pop(0)
        else:
            # nearest state with an unused input
            prev = {x: None}
            queue = deque([x])
            target = None
            while queue and target is None:
                s = queue.popleft()
                for v in range(1, U + 1):
                    t = sys.next_state(v, s)
                    if t not in prev:
                        prev[t] = (s, v)
                        if unused[t]:
                            target = t
                            break
                        queue.append(t)
            if target is None:
                break
            path = []
            while prev[target] is not None:
                s, v = prev[target]
                path.append(v)
                target = s
            for v in reversed(path):
                if v in unused[x]:
                    unused[x].remove(v)
                inputs.append(v)
                x = sys.next_state(v, x)
                states.append(x)
            continue
        inputs.append(u)
        x = sys.next_state(u, x)
        states.append(x)
    visited = set(zip(inputs, states))
    missing = {(u, s) for s in range(1, sys.nstates + 1) for u in range(1, U + 1)} - visited
    if missing and strict:
        raise CoverageError(missing, inputs, states)
    return inputs, states


def covered_pairs(sys: Bcn, x0: int, inputs: Sequence[int]) -> set[tuple[int, int]]:
    traj = simulate(sys, x0, inputs)
    return set(zip(traj.inputs, traj.states))


# ---------------------------------------------------------------------------
# pairwise distinguishability


@lru_cache(maxsize=64)
def _pair_table(sys: Bcn) -> dict[tuple[int, int], tuple[int, int | None, tuple[int, int] | None]]:
    """For every distinguishable pair: (depth, first input, next pair)."""
    N, U = sys.nstates, sys.ninputs
    table = {}
    pairs = list(itertools.combinations(range(1, N + 1), 2))
    for p in pairs:
        if sys.output(p[0]) != sys.output(p[1]):
            table[p] = (0, None, None)
    depth = 0
    while True:
        depth += 1
        added = {}
        for p in pairs:
            if p in table:
                continue
            for u in range(1, U + 1):
                a, b = sys.next_state(u, p[0]), sys.next_state(u, p[1])
                if a == b:
                    continue
                q = (min(a, b), max(a, b))
                if q in table:
                    added[p] = (depth, u, q)
                    break
        if not added:
            return table
        table.update(added)


def distinguishing_sequence(sys: Bcn, i: int, i2: int, max_len: int | None = None) -> tuple[int, ...] | None:
    """Shortest input sequence after which states ``i`` and ``i2`` have produced
    different outputs, or ``None`` if there is none of length ``<= max_len``."""
    if i == i2:
        raise ValueError("states must differ")
    table = _pair_table(sys)
    p = (min(i, i2), max(i, i2))
    if p not in table or (max_len is not None and table[p][0] > max_len):
        return None
    seq = []
    while table[p][0] > 0:
        _, u, p = table[p]
        seq.append(u)
    return tuple(seq)


def indistinguishable_pairs(sys: Bcn) -> list[tuple[int, int]]:
    table = _pair_table(sys)
    return [p for p in itertools.combinations(range(1, sys.nstates + 1), 2) if p not in table]


def is_o1_observable(sys: Bcn) -> bool:
    return not indistinguishable_pairs(sys)


# ---------------------------------------------------------------------------
# O1-tests


@dataclass(frozen=True)
class O1Test:
    """One input sequence per unordered state pair, slot ``s`` = :func:`pair_index`."""

    n: int
    m: int
    tests: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "tests", tuple(tuple(int(u) for u in t) for t in self.tests))
        lengths = {len(t) for t in self.tests}
        if len(lengths) > 1:
            raise ValueError("all test sequences must share one length")
        if lengths == {0}:
            raise ValueError("test sequences must be nonempty")
        for t in self.tests:
            for u in t:
                if not 1 <= u <= 2**self.m:
                    raise ValueError(f"input index {u} outside [1, {2**self.m}]")

    @property
    def N(self) -> int:
        return len(self.tests)

    @property
    def p(self) -> int:
        return len(self.tests[0]) - 1 if self.tests else -1

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "p": self.p, "tests": [list(t) for t in self.tests]}

    @classmethod
    def from_dict(cls, d: dict) -> O1Test:
        t = cls(int(d["n"]), int(d["m"]), tuple(tuple(x) for x in d["tests"]))
        if "p" in d and int(d["p"]) != t.p:
            raise ValueError(f"declared p = {d['p']} but tests have length {t.p + 1}")
        return t

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> O1Test:
        return cls.from_dict(json.loads(Path(path).read_text()))


def build_o1_test(sys: Bcn) -> O1Test | None:
    """Shortest distinguishing sequence for every pair, right-padded with input 1.

    ``None`` when some pair is indistinguishable (the system is not
    O1-observable); :func:`indistinguishable_pairs` names the culprits.
    """
    size = sys.nstates
    seqs = []
    for s in range(1, pair_count(size) + 1):
        seq = distinguishing_sequence(sys, *pair_of_index(s, size))
        if seq is None:
            return None
        seqs.append(seq)
    width = max([1, *map(len, seqs)])
    return O1Test(sys.n, sys.m, tuple(seq + (1,) * (width - len(seq)) for seq in seqs))


def _check_test(sys: Bcn, test: O1Test):
    if (test.n, test.m) != (sys.n, sys.m):
        raise ValueError(f"test is for (n, m) = {(test.n, test.m)}, system has {(sys.n, sys.m)}")
    if test.N != pair_count(sys.nstates):
        raise ValueError(f"test has {test.N} sequences, expected {pair_count(sys.nstates)}")


def data_arrays(sys: Bcn, test: O1Test) -> list[tuple[tuple[int, ...], ...]]:
    """``D_i``: the outputs from state ``i`` under each test, for all ``i``."""
    if (test.n, test.m) != (sys.n, sys.m):
        raise ValueError("test dimensions do not match the system")
    return [
        tuple(simulate(sys, i, seq).outputs for seq in test.tests)
        for i in range(1, sys.nstates + 1)
    ]


def validate_o1_test(sys: Bcn, test: O1Test) -> bool:
    _check_test(sys, test)
    arrays = data_arrays(sys, test)
    return len(set(arrays)) == len(arrays)


# ---------------------------------------------------------------------------
# O3-tests


def observability_matrix_bcn(sys: Bcn, test_inputs: Sequence[int]) -> np.ndarray:
    """``(p+2) x 2**n`` matrix of output indices under one fixed input sequence."""
    _require_bcn(sys)
    cols = [simulate(sys, i, test_inputs).outputs for i in range(1, sys.nstates + 1)]
    return np.array(cols, dtype=np.int64).T


def find_o3_test(sys: Bcn, max_len: int | None = None) -> tuple[int, ...] | None:
    """First input sequence, in length-lexicographic order, that separates all states.

    Deciding O3-observability is NP-hard, so the search is bounded by
    ``max_len`` (default ``2**n``); ``None`` only means nothing was found
    within the bound. Prefixes are merged when they induce the same current
    states and the same partition of initial states, and dropped once two
    still-confused initial states have collapsed onto one state.
    """
    _require_bcn(sys)
    N, U = sys.nstates, sys.ninputs
    max_len = N if max_len is None else max_len

    def key(cur, blocks):
        return cur, blocks

    def split(cur, blocks):
        out = []
        for block in blocks:
            groups: dict[int, list[int]] = {}
            for i in block:
                groups.setdefault(sys.output(cur[i - 1]), []).append(i)
            out.extend(tuple(g) for g in groups.values() if len(g) > 1)
        return tuple(sorted(out))

    start = tuple(range(1, N + 1))
    frontier = [((), start, split(start, (start,)))]
    seen = {key(start, frontier[0][2])}
    for _ in range(max_len):
        nxt = []
        for seq, cur, blocks in frontier:
            for u in range(1, U + 1):
                cur2 = tuple(sys.next_state(u, x) for x in cur)
                if any(len({cur2[i - 1] for i in b}) < len(b) for b in blocks):
                    continue
                blocks2 = split(cur2, blocks)
                if not blocks2:
                    return seq + (u,)
                k = key(cur2, blocks2)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append((seq + (u,), cur2, blocks2))
        frontier = nxt
        if not frontier:
            return None
    return None
