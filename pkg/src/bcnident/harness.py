"""Experiment side: a hidden plant, the Case 1-4 sampling protocols, and random plants.

The harness knows the true system; identifiers never see it. Covering
walks and reach walks are designed here, with plant knowledge, and only
the resulting input/output logs cross over to :mod:`bcnident.ident`.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Sequence

from .analysis import (
    O1Test,
    build_cover_sequence,
    find_o3_test,
    is_controllable,
    is_o1_observable,
    is_observable_bn,
    reach_walks,
)
from .ident import Member, SampleGroup, SampleSet
from .network import Bcn, simulate
from .stp import LogicalMatrix


class UnknownGroupError(KeyError):
    pass


class Plant:
    """Query oracle over a hidden system.

    Each group is bound to one hidden initial state at registration; every
    query on that group starts from it again, like portions of one sample.
    """

    def __init__(self, hidden: Bcn):
        self._hidden = hidden
        self._registry: dict[str, int] = {}

    @property
    def dims(self) -> tuple[int, int, int]:
        return self._hidden.n, self._hidden.m, self._hidden.l

    def register(self, group: str, x0: int) -> None:
        if not 1 <= x0 <= self._hidden.nstates:
            raise ValueError(f"initial state {x0} outside [1, {self._hidden.nstates}]")
        if group in self._registry and self._registry[group] != x0:
            raise ValueError(f"group {group!r} is already bound to another state")
        self._registry[group] = x0

    def groups(self) -> list[str]:
        return list(self._registry)

    def query(self, group: str, inputs: Sequence[int] = ()) -> tuple[int, ...]:
        if group not in self._registry:
            raise UnknownGroupError(group)
        return simulate(self._hidden, self._registry[group], inputs).outputs


def query(plant: Plant, group: str, inputs: Sequence[int] = ()) -> tuple[int, ...]:
    return plant.query(group, inputs)


@dataclass
class ExperimentLog:
    samples: SampleSet
    protocol: str
    test: O1Test | tuple[int, ...] | None = None
    cover: tuple[int, ...] | None = None
    initial_states: dict[str, int] = field(default_factory=dict)

    def provenance(self) -> dict:
        test = self.test.to_dict() if isinstance(self.test, O1Test) else self.test and list(self.test)
        return {
            "protocol": self.protocol,
            "test": test,
            "cover": None if self.cover is None else list(self.cover),
        }

    def replays(self, plant: Plant) -> bool:
        return all(plant.query(gid, mem.inputs) == mem.outputs for gid, _, mem in self.samples.members())

    def save(self, path: str | Path) -> None:
        self.samples.save(path, provenance=self.provenance())


def _sample(plant: Plant, case: str, groups: list[tuple[str, list[tuple[int, ...]]]]) -> SampleSet:
    n, m, l = plant.dims
    return SampleSet(
        case, m, l,
        [SampleGroup(gid, [Member(u, plant.query(gid, u)) for u in inputs]) for gid, inputs in groups],
        n=n,
    )


def _states(plant: Plant, x0) -> list[int]:
    N = plant._hidden.nstates
    if x0 is None or x0 == "all":
        return list(range(1, N + 1))
    if isinstance(x0, int):
        return [x0]
    return [int(x) for x in x0]


def gen_case1(plant: Plant, x0: int = 1, length: int | None = None) -> ExperimentLog:
    """One BN output sequence of ``length`` transitions (default ``2 * 2**n``)."""
    sys = plant._hidden
    if sys.m:
        raise ValueError("Case 1 samples a BN")
    length = 2 * sys.nstates if length is None else length
    plant.register("g1", x0)
    data = SampleSet("Case1", 0, sys.l, [SampleGroup("g1", [Member((), plant.query("g1", (1,) * length))])], n=sys.n)
    return ExperimentLog(data, "case1-single-trajectory", initial_states={"g1": x0})


def gen_case2(plant: Plant, x0=None, length: int | None = None) -> ExperimentLog:
    """One BN output sequence per initial state (default: every state)."""
    sys = plant._hidden
    if sys.m:
        raise ValueError("Case 2 samples a BN")
    length = 2 * sys.nstates if length is None else length
    groups = []
    initial = {}
    for k, x in enumerate(_states(plant, x0), start=1):
        gid = f"g{k}"
        plant.register(gid, x)
        initial[gid] = x
        groups.append(SampleGroup(gid, [Member((), plant.query(gid, (1,) * length))]))
    data = SampleSet("Case2", 0, sys.l, groups, n=sys.n)
    return ExperimentLog(data, "case2-multiple-trajectories", initial_states=initial)


def gen_case3(
    plant: Plant,
    test: O1Test | Sequence[int],
    cover: Sequence[int] | str = "auto",
    x0: int = 1,
) -> ExperimentLog:
    """Single sample split into portions: member ``(j, s)`` runs ``cover[:j]`` then test ``s``.

    ``test`` is an :class:`O1Test` or a single O3-test sequence. With
    ``cover="auto"`` a covering walk is designed on the hidden system.
    Members are ordered ``j``-major, ``j = 0 .. len(cover)``.
    """
    if cover == "auto":
        cover, _ = build_cover_sequence(plant._hidden, x0)
    cover = tuple(int(u) for u in cover)
    tests = test.tests if isinstance(test, O1Test) else (tuple(test),)
    plant.register("g1", x0)
    inputs = [cover[:j] + t for j in range(len(cover) + 1) for t in tests]
    data = _sample(plant, "Case3", [("g1", inputs)])
    protocol = "case3-o1" if isinstance(test, O1Test) else "case3-o3"
    return ExperimentLog(data, protocol, test if isinstance(test, O1Test) else tuple(test), cover, {"g1": x0})


def gen_case4(plant: Plant, test: O1Test, x0=None, walks: bool = False) -> ExperimentLog:
    """Many samples, one group per initial state (default: all states).

    Default layout: bare tests ``U_s``, then one-step probes ``(j, U_s)``,
    member index ``j N + s - 1``. With ``walks=True`` each group instead
    runs, for every state reachable from its initial state, the shortest
    walk there followed by each test, bare and after each probe input.
    """
    sys = plant._hidden
    U = range(1, sys.ninputs + 1)
    groups = []
    initial = {}
    for k, x in enumerate(_states(plant, x0), start=1):
        gid = f"g{k}"
        plant.register(gid, x)
        initial[gid] = x
        if walks:
            prefixes = []
            for w in reach_walks(sys, x).values():
                prefixes.append(w)
                prefixes.extend(w + (j,) for j in U)
        else:
            prefixes = [()] + [(j,) for j in U]
        prefixes = list(dict.fromkeys(prefixes))
        groups.append((gid, [pre + t for pre in prefixes for t in test.tests]))
    data = _sample(plant, "Case4", groups)
    return ExperimentLog(data, "case4-walks" if walks else "case4-probes", test, None, initial)


def gen_case(plant: Plant, case: str | int, **params) -> ExperimentLog:
    case = str(case).removeprefix("Case")
    gens = {"1": gen_case1, "2": gen_case2, "3": gen_case3, "4": gen_case4}
    if case not in gens:
        raise ValueError(f"unknown case {case!r}")
    return gens[case](plant, **params)


# ---------------------------------------------------------------------------
# sufficiency


@dataclass
class SufficiencyReport:
    visited: set[tuple[int, int]]
    missing: set[tuple[int, int]]
    ambiguous_groups: list[str]

    @property
    def sufficient(self) -> bool:
        return not self.missing

    def to_dict(self) -> dict:
        return {
            "sufficient": self.sufficient,
            "visited": sorted(map(list, self.visited)),
            "missing": sorted(map(list, self.missing)),
            "ambiguous_groups": self.ambiguous_groups,
        }


def check_sufficiency(data: SampleSet, sys: Bcn) -> SufficiencyReport:
    """Which ``(u, x)`` pairs the logged trajectories are sure to have visited.

    The hidden initial state of each group is recovered by trying every
    state against all of the group's members. When several states fit, only
    pairs visited under every candidate are counted.
    """
    visited: set[tuple[int, int]] = set()
    ambiguous = []
    for g in data.groups:
        runs = [(mem.inputs or (1,) * (len(mem.outputs) - 1), mem.outputs) for mem in g.members]
        candidates = [x for x in range(1, sys.nstates + 1) if all(simulate(sys, x, u).outputs == y for u, y in runs)]
        if len(candidates) > 1:
            ambiguous.append(g.id)
        sure = None
        for x in candidates:
            pairs = set()
            for u, _ in runs:
                traj = simulate(sys, x, u)
                pairs.update(zip(traj.inputs, traj.states))
            sure = pairs if sure is None else sure & pairs
        visited |= sure or set()
    everything = set(product(range(1, sys.ninputs + 1), range(1, sys.nstates + 1)))
    return SufficiencyReport(visited, everything - visited, ambiguous)


# ---------------------------------------------------------------------------
# random plants


def random_bcn(rng: random.Random, n: int, m: int = 0, l: int | None = None) -> Bcn:
    l = n if l is None else l
    N = 2**n
    F = [rng.randint(1, N) for _ in range(2**m * N)]
    H = [rng.randint(1, 2**l) for _ in range(N)]
    return Bcn(n, m, l, LogicalMatrix(N, F), LogicalMatrix(2**l, H))


def _rejection(rng: random.Random, make, accept, tries: int):
    for _ in range(tries):
        sys = make()
        if accept(sys):
            return sys
    raise RuntimeError(f"no acceptable system in {tries} draws")


def random_observable_bn(rng: random.Random, n: int, l: int = 1, tries: int = 100_000) -> Bcn:
    """Random BN whose effective output sequences are pairwise distinct."""
    return _rejection(rng, lambda: random_bcn(rng, n, 0, l), is_observable_bn, tries)


def random_o1_bcn(rng: random.Random, n: int, m: int, l: int = 1, tries: int = 100_000) -> Bcn:
    """Random controllable, O1-observable BCN."""
    return _rejection(
        rng, lambda: random_bcn(rng, n, m, l), lambda s: is_controllable(s) and is_o1_observable(s), tries
    )


def random_o3_bcn(rng: random.Random, n: int, m: int, l: int = 1, tries: int = 100_000) -> Bcn:
    """Random controllable BCN with an O3-test within the default bound."""
    return _rejection(
        rng, lambda: random_bcn(rng, n, m, l), lambda s: is_controllable(s) and find_o3_test(s) is not None, tries
    )


def random_permutation(rng: random.Random, size: int) -> tuple[int, ...]:
    perm = list(range(1, size + 1))
    rng.shuffle(perm)
    return tuple(perm)


def load_log_provenance(path: str | Path) -> dict:
    return json.loads(Path(path).read_text()).get("provenance", {})
