"""Boolean control networks in algebraic form.

``x(t+1) = F u(t) x(t)``, ``y(t) = H x(t)``. States, inputs and outputs are
handled as 1-based delta indices (plain ints); column ``(u, x)`` of ``F`` sits
at position ``(u - 1) * 2**n + x``. A Boolean network is the ``m = 0`` case,
whose only input is ``u = 1``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .stp import DeltaVector, LogicalMatrix, index_row


@dataclass(frozen=True)
class Bcn:
    n: int
    m: int
    l: int
    F: LogicalMatrix
    H: LogicalMatrix

    def __post_init__(self):
        for name in ("n", "m", "l"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if not isinstance(self.F, LogicalMatrix):
            object.__setattr__(self, "F", LogicalMatrix(2**self.n, tuple(self.F)))
        if not isinstance(self.H, LogicalMatrix):
            object.__setattr__(self, "H", LogicalMatrix(2**self.l, tuple(self.H)))
        if self.F.shape != (self.nstates, self.ninputs * self.nstates):
            raise ValueError(f"F has shape {self.F.shape}, expected {(self.nstates, self.ninputs * self.nstates)}")
        if self.H.shape != (self.noutputs, self.nstates):
            raise ValueError(f"H has shape {self.H.shape}, expected {(self.noutputs, self.nstates)}")

    @property
    def nstates(self) -> int:
        return 2**self.n

    @property
    def ninputs(self) -> int:
        return 2**self.m

    @property
    def noutputs(self) -> int:
        return 2**self.l

    def next_state(self, u: int, x: int) -> int:
        return self.F.cols[(u - 1) * self.nstates + x - 1]

    def output(self, x: int) -> int:
        return self.H.cols[x - 1]

    # JSON -------------------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "l": self.l, "F": index_row(self.F), "H": index_row(self.H)}

    @classmethod
    def from_dict(cls, d: dict) -> Bcn:
        n, m, l = int(d["n"]), int(d.get("m", 0)), int(d["l"])
        F, H = list(d["F"]), list(d["H"])
        if len(F) != 2 ** (m + n) or len(H) != 2**n:
            raise ValueError(f"expected |F| = {2 ** (m + n)} and |H| = {2**n}, got {len(F)} and {len(H)}")
        return cls(n, m, l, LogicalMatrix(2**n, F), LogicalMatrix(2**l, H))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> Bcn:
        return cls.from_dict(json.loads(Path(path).read_text()))


def bn(F: Sequence[int], H: Sequence[int], l: int | None = None) -> Bcn:
    """Boolean network from column-index lists; ``l`` defaults to the smallest fit."""
    from .stp import power_of_two

    n = power_of_two(len(F))
    if l is None:
        l = max(max(H) - 1, 0).bit_length()
    return Bcn(n, 0, l, LogicalMatrix(2**n, F), LogicalMatrix(2**l, H))


def bcn(F: Sequence[int], H: Sequence[int], n: int, l: int | None = None) -> Bcn:
    from .stp import power_of_two

    m = power_of_two(len(F)) - n
    if l is None:
        l = max(max(H) - 1, 0).bit_length()
    return Bcn(n, m, l, LogicalMatrix(2**n, F), LogicalMatrix(2**l, H))


def _index(v, dim: int, what: str) -> int:
    if isinstance(v, DeltaVector):
        if v.dim != dim:
            raise ValueError(f"{what} lives in Δ_{v.dim}, expected Δ_{dim}")
        return v.index
    v = int(v)
    if not 1 <= v <= dim:
        raise ValueError(f"{what} index {v} outside [1, {dim}]")
    return v


def step(sys: Bcn, u, x) -> int:
    """One transition ``F u x``. Accepts ints or :class:`DeltaVector`."""
    return sys.next_state(_index(u, sys.ninputs, "input"), _index(x, sys.nstates, "state"))


@dataclass(frozen=True)
class Trajectory:
    states: tuple[int, ...]
    outputs: tuple[int, ...]
    inputs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if len(self.outputs) != len(self.states) or len(self.inputs) != len(self.states) - 1:
            raise ValueError("trajectory lengths are inconsistent")


def simulate(sys: Bcn, x0, inputs: Iterable = ()) -> Trajectory:
    x = _index(x0, sys.nstates, "state")
    us = tuple(_index(u, sys.ninputs, "input") for u in inputs)
    states = [x]
    for u in us:
        x = sys.next_state(u, x)
        states.append(x)
    return Trajectory(tuple(states), tuple(sys.output(s) for s in states), us)


def free_run(sys: Bcn, x0, steps: int) -> Trajectory:
    """Autonomous run of ``steps`` transitions under the constant input 1."""
    return simulate(sys, x0, [1] * steps)


@dataclass(frozen=True)
class PermutationMap:
    """Coordinate change ``w = G x`` with ``G = delta[perm]``: state ``i`` becomes ``perm[i-1]``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError("not a permutation of 1..size")

    @property
    def size(self) -> int:
        return len(self.perm)

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    def inverse(self) -> PermutationMap:
        inv = [0] * self.size
        for i, p in enumerate(self.perm, start=1):
            inv[p - 1] = i
        return PermutationMap(tuple(inv))

    def matrix(self) -> LogicalMatrix:
        return LogicalMatrix(self.size, self.perm)

    @classmethod
    def identity(cls, size: int) -> PermutationMap:
        return cls(tuple(range(1, size + 1)))


def transform(sys: Bcn, g: PermutationMap) -> Bcn:
    """``(G F (I ⊗ G^T), H G^T)`` computed on indices."""
    if g.size != sys.nstates:
        raise ValueError(f"permutation size {g.size} does not match {sys.nstates} states")
    inv = g.inverse()
    N = sys.nstates
    F = [g(sys.next_state(u, inv(w))) for u in range(1, sys.ninputs + 1) for w in range(1, N + 1)]
    H = [sys.output(inv(w)) for w in range(1, N + 1)]
    return Bcn(sys.n, sys.m, sys.l, LogicalMatrix(N, F), LogicalMatrix(sys.noutputs, H))


def _refined_colors(a: Bcn, b: Bcn) -> tuple[list[int], list[int]]:
    """Moore-style partition refinement over the disjoint union of ``a`` and ``b``."""
    N, U = a.nstates, a.ninputs
    nodes = [(a, x) for x in range(1, N + 1)] + [(b, x) for x in range(1, N + 1)]
    color = [s.output(x) for s, x in nodes]
    while True:
        keys = [
            (color[k], tuple(color[(k // N) * N + s.next_state(u, x) - 1] for u in range(1, U + 1)))
            for k, (s, x) in enumerate(nodes)
        ]
        relabel = {key: i for i, key in enumerate(sorted(set(keys)))}
        new = [relabel[key] for key in keys]
        if len(set(new)) == len(set(color)):
            return new[:N], new[N:]
        color = new


def equivalent(a: Bcn, b: Bcn) -> PermutationMap | None:
    """A coordinate change ``g`` with ``transform(a, g) == b``, or ``None``.

    Backtracking over state bijections. Candidates for a state are limited to
    states of ``b`` with the same refined output color; every assignment is
    propagated forward through all inputs before branching again.
    """
    if (a.n, a.m, a.l) != (b.n, b.m, b.l):
        raise ValueError("systems have different dimensions")
    N, U = a.nstates, a.ninputs
    ca, cb = _refined_colors(a, b)
    if sorted(ca) != sorted(cb):
        return None

    def assign(phi: dict[int, int], used: set[int], x: int, y: int) -> bool:
        queue = deque([(x, y)])
        while queue:
            x, y = queue.popleft()
            if x in phi:
                if phi[x] != y:
                    return False
                continue
            if y in used or ca[x - 1] != cb[y - 1] or a.output(x) != b.output(y):
                return False
            phi[x] = y
            used.add(y)
            for u in range(1, U + 1):
                queue.append((a.next_state(u, x), b.next_state(u, y)))
        return True

    def search(phi: dict[int, int], used: set[int]) -> dict[int, int] | None:
        free = [x for x in range(1, N + 1) if x not in phi]
        if not free:
            return phi
        # most constrained state first
        x = min(free, key=lambda s: sum(1 for y in range(1, N + 1) if cb[y - 1] == ca[s - 1] and y not in used))
        for y in range(1, N + 1):
            if y in used or cb[y - 1] != ca[x - 1]:
                continue
            phi2, used2 = dict(phi), set(used)
            if assign(phi2, used2, x, y):
                found = search(phi2, used2)
                if found is not None:
                    return found
        return None

    phi = search({}, set())
    if phi is None:
        return None
    g = PermutationMap(tuple(phi[x] for x in range(1, N + 1)))
    return g if transform(a, g) == b else None
