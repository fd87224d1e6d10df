"""Identification of (F, H) from logged input/output samples.

Every identifier follows the same recipe: collect one *signature* per
observed state (a window of outputs, or an array of such windows), label
signatures ``1, 2, ...`` in order of first appearance, decode each data
position into a label, and read the columns of F and H off consecutive
decoded positions. Columns never witnessed stay unknown (stored as 0).

BCN data (Cases 3 and 4) is decoded by *probes*: each member's inputs are a
prefix followed by one test sequence, so the member's outputs from
``len(prefix)`` onward are the test response of the state the prefix leads
to. All members sharing a prefix within a group together give that state's
signature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .analysis import O1Test
from .network import Bcn
from .stp import LogicalMatrix

CASES = ("Case1", "Case2", "Case3", "Case4")


class InconsistentDataError(ValueError):
    """Two observations assign different values to the same column."""


class ProtocolError(ValueError):
    """The data does not follow the sampling protocol the identifier expects."""


# ---------------------------------------------------------------------------
# data containers


@dataclass(frozen=True)
class Member:
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(u) for u in self.inputs))
        object.__setattr__(self, "outputs", tuple(int(y) for y in self.outputs))
        if not self.outputs:
            raise ValueError("a member needs at least one output")
        # autonomous (BN) members log outputs only
        if self.inputs and len(self.outputs) != len(self.inputs) + 1:
            raise ValueError(f"{len(self.inputs)} inputs need {len(self.inputs) + 1} outputs, got {len(self.outputs)}")


@dataclass
class SampleGroup:
    """Members that share one hidden initial state."""

    id: str
    members: list[Member] = field(default_factory=list)


@dataclass
class SampleSet:
    case: str
    m: int
    l: int
    groups: list[SampleGroup]
    n: int | None = None

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case!r}")
        if self.case in ("Case1", "Case2"):
            if self.m != 0:
                raise ValueError(f"{self.case} data comes from a BN (m = 0)")
            if any(mem.inputs for g in self.groups for mem in g.members):
                raise ValueError(f"{self.case} members carry no inputs")
        if self.case in ("Case3", "Case4"):
            for g in self.groups:
                for k, mem in enumerate(g.members):
                    if len(mem.outputs) != len(mem.inputs) + 1:
                        raise ValueError(f"member {k} of group {g.id}: {len(mem.inputs)} inputs need {len(mem.inputs) + 1} outputs")
        if self.case in ("Case1", "Case3") and len(self.groups) != 1:
            raise ValueError(f"{self.case} is a single sample: exactly one group")
        if not self.groups:
            raise ValueError("no sample groups")
        ids = [g.id for g in self.groups]
        if len(set(ids)) != len(ids):
            raise ValueError("group ids must be unique")
        for g in self.groups:
            for mem in g.members:
                if any(not 1 <= u <= 2**self.m for u in mem.inputs):
                    raise ValueError(f"input index outside [1, {2**self.m}] in group {g.id}")
                if any(not 1 <= y <= 2**self.l for y in mem.outputs):
                    raise ValueError(f"output index outside [1, {2**self.l}] in group {g.id}")

    def group(self, gid: str) -> SampleGroup:
        for g in self.groups:
            if g.id == gid:
                return g
        raise KeyError(gid)

    def members(self) -> Iterable[tuple[str, int, Member]]:
        for g in self.groups:
            for k, mem in enumerate(g.members):
                yield g.id, k, mem

    def to_dict(self) -> dict:
        d = {"case": self.case, "m": self.m, "l": self.l}
        if self.n is not None:
            d["n"] = self.n
        d["groups"] = [
            {"id": g.id, "members": [{"inputs": list(mem.inputs), "outputs": list(mem.outputs)} for mem in g.members]}
            for g in self.groups
        ]
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> SampleSet:
        groups = [
            SampleGroup(str(g["id"]), [Member(tuple(mem.get("inputs", ())), tuple(mem["outputs"])) for mem in g["members"]])
            for g in d["groups"]
        ]
        n = d.get("n")
        return cls(d["case"], int(d.get("m", 0)), int(d["l"]), groups, None if n is None else int(n))

    def save(self, path: str | Path, **extra) -> None:
        Path(path).write_text(json.dumps({**self.to_dict(), **extra}) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> SampleSet:
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class SignatureTable:
    """Distinct state signatures; position ``i`` (1-based) is the label of state ``i``."""

    kind: str  # "EffectiveBN", "O3Window" or "O1DataArray"
    signatures: list = field(default_factory=list)

    def __post_init__(self):
        self.signatures = [_freeze(s) for s in self.signatures]
        self._labels = {}
        for i, s in enumerate(self.signatures, start=1):
            if s in self._labels:
                raise ValueError("signatures must be pairwise distinct")
            self._labels[s] = i

    def __len__(self):
        return len(self.signatures)

    def label(self, sig) -> int | None:
        return self._labels.get(_freeze(sig))

    def add(self, sig) -> int:
        sig = _freeze(sig)
        if sig not in self._labels:
            self.signatures.append(sig)
            self._labels[sig] = len(self.signatures)
        return self._labels[sig]

    def copy(self) -> SignatureTable:
        return SignatureTable(self.kind, list(self.signatures))


def _freeze(x) -> Hashable:
    if isinstance(x, (list, tuple)):
        return tuple(_freeze(v) for v in x)
    return int(x)


def _thaw(x):
    if isinstance(x, tuple):
        return [_thaw(v) for v in x]
    return x


@dataclass
class IdentResult:
    """Reconstructed ``(F, H)``; an entry 0 marks a column nothing in the data witnessed.

    ``decoded`` maps ``(group id, member index)`` to the decoded label of
    every time position of that member (``None`` where undecodable).
    """

    n: int
    m: int
    l: int
    F: list[int]
    H: list[int]
    table: SignatureTable
    decoded: dict[tuple[str, int], tuple[int | None, ...]] = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return 0 not in self.F and 0 not in self.H

    def system(self) -> Bcn:
        if not self.complete:
            raise ValueError(f"identification is partial: {len(self.unknown_columns())} F columns unknown")
        return Bcn(self.n, self.m, self.l, LogicalMatrix(2**self.n, self.F), LogicalMatrix(2**self.l, self.H))

    def unknown_columns(self) -> list[tuple[int, int]]:
        N = 2**self.n
        return [(k // N + 1, k % N + 1) for k, v in enumerate(self.F) if v == 0]

    def known_columns(self) -> dict[tuple[int, int], int]:
        N = 2**self.n
        return {(k // N + 1, k % N + 1): v for k, v in enumerate(self.F) if v}

    def initial_state(self, gid: str, k: int) -> int | None:
        seq = self.decoded.get((gid, k))
        return seq[0] if seq else None

    def reduced(self) -> dict:
        """Low-dimensional export: only the labels that carry a signature."""
        N = 2**self.n
        labels = [x for x in range(1, N + 1) if self.H[x - 1]]
        cols = [[u, x] for u in range(1, 2**self.m + 1) for x in labels]
        return {
            "states": labels,
            "F": [self.F[(u - 1) * N + x - 1] for u, x in cols],
            "F_columns": cols,
            "H": [self.H[x - 1] for x in labels],
        }

    def to_dict(self) -> dict:
        return {
            "n": self.n, "m": self.m, "l": self.l,
            "F": list(self.F), "H": list(self.H),
            "complete": self.complete,
            "kind": self.table.kind,
            "labeling": [_thaw(s) for s in self.table.signatures],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> IdentResult:
        table = SignatureTable(d.get("kind", "EffectiveBN"), list(d.get("labeling", [])))
        return cls(int(d["n"]), int(d.get("m", 0)), int(d["l"]), list(d["F"]), list(d["H"]), table)


class _Columns:
    def __init__(self, n: int, m: int, l: int):
        if n > 20:
            raise ValueError(f"state space 2**{n} is beyond desk scale")
        self.n, self.m, self.l = n, m, l
        self.N = 2**n
        self.F = [0] * (2**m * self.N)
        self.H = [0] * self.N

    def set_f(self, u: int, x: int, y: int, where: str = ""):
        k = (u - 1) * self.N + x - 1
        if self.F[k] not in (0, y):
            raise InconsistentDataError(
                f"column (u={u}, x={x}) of F observed as both {self.F[k]} and {y}{where}"
            )
        self.F[k] = y

    def set_h(self, x: int, y: int, where: str = ""):
        if self.H[x - 1] not in (0, y):
            raise InconsistentDataError(f"column {x} of H observed as both {self.H[x - 1]} and {y}{where}")
        self.H[x - 1] = y

    def result(self, table, decoded) -> IdentResult:
        return IdentResult(self.n, self.m, self.l, self.F, self.H, table, decoded)


def _state_bits(count: int) -> int:
    """Smallest ``n`` with ``2**n >= count``."""
    return max(count - 1, 0).bit_length()


def _check_size(n: int, table: SignatureTable):
    if len(table) > 2**n:
        raise InconsistentDataError(
            f"{len(table)} distinct signatures cannot label 2**{n} states; window too short or data corrupt"
        )


# ---------------------------------------------------------------------------
# Boolean networks (Cases 1 and 2)


def _bn_window(data: SampleSet, window: int | None) -> int:
    if window is not None:
        return window
    if data.n is None:
        raise ValueError("window is required when the data does not record n")
    return 2**data.n


def _require_case(data: SampleSet, *cases: str):
    if data.case not in cases:
        raise ProtocolError(f"expected {' or '.join(cases)} data, got {data.case}")


def retrieve_effective_sequences(data: SampleSet, window: int | None = None, table: SignatureTable | None = None) -> SignatureTable:
    """Every distinct length-``window`` output window, in order of first appearance.

    Windows are scanned group by group, member by member, left to right; a
    window already in the table is skipped and scanning continues.
    """
    _require_case(data, "Case1", "Case2")
    window = _bn_window(data, window)
    table = SignatureTable("EffectiveBN") if table is None else table.copy()
    for gid, k, mem in data.members():
        ys = mem.outputs
        if len(ys) < window:
            raise ValueError(f"member {k} of group {gid} has {len(ys)} outputs, shorter than window {window}")
        for t in range(len(ys) - window + 1):
            table.add(ys[t:t + window])
    return table


def identify_bn(
    data: SampleSet,
    window: int | None = None,
    n: int | None = None,
    table: SignatureTable | None = None,
    twins: Mapping[int, int] | None = None,
) -> IdentResult:
    """Identify a BN from output sequences by effective-output-sequence decoding.

    ``window`` defaults to ``2**n``. The state count is ``data.n`` if
    recorded, else ``n``, else the smallest power of two that fits the
    window. Position ``t`` of a member decodes to the label of the window
    starting at ``t``; consecutive decoded positions give columns of F, and
    the head of each signature gives the matching column of H.

    ``twins`` maps an extra label to an existing one whose signature it
    shares. This is outside knowledge about an unobservable system: the
    extra state copies its twin's columns.
    """
    window = _bn_window(data, window)
    table = retrieve_effective_sequences(data, window, table)
    n = n if n is not None else data.n if data.n is not None else _state_bits(window)
    _check_size(n, table)
    cols = _Columns(n, 0, data.l)
    decoded = {}
    for gid, k, mem in data.members():
        ys = mem.outputs
        labels = [table.label(ys[t:t + window]) for t in range(len(ys) - window + 1)]
        for t, (a, b) in enumerate(zip(labels, labels[1:])):
            cols.set_f(1, a, b, f" (group {gid}, member {k}, t={t})")
        decoded[(gid, k)] = tuple(labels) + (None,) * (window - 1)
    for i, sig in enumerate(table.signatures, start=1):
        cols.set_h(i, sig[0])
    for extra, twin in (twins or {}).items():
        if not len(table) < extra <= cols.N:
            raise ValueError(f"twin label {extra} must be a free label in ({len(table)}, {cols.N}]")
        cols.set_h(extra, cols.H[twin - 1])
        if cols.F[twin - 1]:
            cols.set_f(1, extra, cols.F[twin - 1])
    return cols.result(table, decoded)


def identify_bn_state_observed(data: SampleSet, n: int | None = None) -> IdentResult:
    """Identify a BN whose outputs are its states (``H = I``)."""
    _require_case(data, "Case1", "Case2")
    n = n if n is not None else data.n if data.n is not None else data.l
    if data.l != n:
        raise ValueError("state-observed data needs l == n")
    cols = _Columns(n, 0, n)
    decoded = {}
    for gid, k, mem in data.members():
        ys = mem.outputs
        for t, (a, b) in enumerate(zip(ys, ys[1:])):
            cols.set_f(1, a, b, f" (group {gid}, member {k}, t={t})")
        decoded[(gid, k)] = tuple(ys)
    cols.H = list(range(1, cols.N + 1))
    table = SignatureTable("EffectiveBN", [(x,) for x in range(1, cols.N + 1)])
    return cols.result(table, decoded)


def identify_bn_overlap(table: SignatureTable, n: int | None = None, l: int | None = None) -> IdentResult:
    """Link effective output sequences directly: ``F i = j`` iff ``Y_i[1:] == Y_j[:-1]``."""
    if table.kind != "EffectiveBN" or not len(table):
        raise ValueError("need a nonempty table of effective output sequences")
    width = len(table.signatures[0])
    n = _state_bits(width) if n is None else n
    l = _state_bits(max(y for sig in table.signatures for y in sig)) if l is None else l
    _check_size(n, table)
    heads = {}
    for j, sig in enumerate(table.signatures, start=1):
        heads.setdefault(sig[:-1], []).append(j)
    cols = _Columns(n, 0, l)
    for i, sig in enumerate(table.signatures, start=1):
        matches = heads.get(sig[1:], [])
        if len(matches) != 1:
            raise InconsistentDataError(
                f"signature {i} has {len(matches)} possible successors; windows are too short to link"
            )
        cols.set_f(1, i, matches[0])
        cols.set_h(i, sig[0])
    return cols.result(table, {})


# ---------------------------------------------------------------------------
# probe decoding (Cases 3 and 4)


def _probe_responses(data: SampleSet, tests: Sequence[Sequence[int]], groups: Sequence[SampleGroup]):
    """Per group: ordered ``prefix -> [window per test slot]`` and member prefixes."""
    L = len(tests[0])
    slots: dict[tuple[int, ...], list[int]] = {}
    for s, t in enumerate(tests):
        slots.setdefault(tuple(t), []).append(s)
    out = {}
    for g in groups:
        arrays: dict[tuple[int, ...], list] = {}
        prefixes = []
        for k, mem in enumerate(g.members):
            cut = len(mem.inputs) - L
            suffix = mem.inputs[cut:] if cut >= 0 else None
            if suffix not in slots:
                raise ProtocolError(f"member {k} of group {g.id} does not end with a test sequence")
            prefix, window = mem.inputs[:cut], mem.outputs[cut:]
            entry = arrays.setdefault(prefix, [None] * len(tests))
            for s in slots[suffix]:
                if entry[s] is not None and entry[s] != window:
                    raise InconsistentDataError(
                        f"group {g.id}: repeated probe (prefix {list(prefix)}, test {s + 1}) gave different outputs"
                    )
                entry[s] = window
            prefixes.append(prefix)
        out[g.id] = (arrays, prefixes)
    return out


def _probe_decode(
    data: SampleSet,
    tests: Sequence[Sequence[int]],
    kind: str,
    n: int | None,
    table: SignatureTable | None,
    groups: Sequence[SampleGroup] | None = None,
) -> IdentResult:
    groups = data.groups if groups is None else groups
    responses = _probe_responses(data, tests, groups)
    table = SignatureTable(kind) if table is None else table.copy()

    def signature(entry):
        if any(w is None for w in entry):
            return None
        return entry[0] if kind == "O3Window" else tuple(entry)

    for g in groups:
        arrays, _ = responses[g.id]
        for entry in arrays.values():
            sig = signature(entry)
            if sig is not None:
                table.add(sig)

    n = n if n is not None else data.n if data.n is not None else _state_bits(len(table))
    _check_size(n, table)
    cols = _Columns(n, data.m, data.l)
    decoded = {}
    for g in groups:
        arrays, prefixes = responses[g.id]
        state = {}
        for prefix, entry in arrays.items():
            sig = signature(entry)
            if sig is not None:
                state[prefix] = table.label(sig)
                cols.set_h(state[prefix], entry[0][0], f" (group {g.id})")
        for prefix, x in state.items():
            parent = state.get(prefix[:-1]) if prefix else None
            if parent is not None:
                cols.set_f(prefix[-1], parent, x, f" (group {g.id}, prefix {list(prefix)})")
        for k, mem in enumerate(g.members):
            decoded[(g.id, k)] = tuple(state.get(mem.inputs[:t]) for t in range(len(mem.outputs)))
    return cols.result(table, decoded)


def _single_group(data: SampleSet) -> SampleGroup:
    _require_case(data, "Case3")
    return data.groups[0]


def _check_cover(group: SampleGroup, test_len: int, cover: Sequence[int] | None):
    if cover is None:
        return
    cover = tuple(cover)
    for k, mem in enumerate(group.members):
        prefix = mem.inputs[: len(mem.inputs) - test_len]
        if cover[: len(prefix)] != prefix:
            raise ProtocolError(f"member {k}: prefix {list(prefix)} is not a prefix of the cover sequence")


def _o3_test(group: SampleGroup, test_len: int | None) -> tuple[int, ...]:
    if not group.members:
        raise ProtocolError("no members")
    if test_len is None:
        test_len = min(len(mem.inputs) for mem in group.members)
    if test_len < 1:
        raise ProtocolError("the O3-test must contain at least one input")
    tests = {mem.inputs[len(mem.inputs) - test_len:] for mem in group.members}
    if len(tests) != 1:
        raise ProtocolError("members do not share one O3-test suffix")
    return tests.pop()


def retrieve_o3_signatures(data: SampleSet, test_len: int | None = None, table: SignatureTable | None = None) -> SignatureTable:
    """Distinct test-response windows, in member order (window of member ``j`` starts at ``j``)."""
    return identify_bcn_o3(data, test_len=test_len, table=table).table


def identify_bcn_o3(
    data: SampleSet,
    cover_inputs: Sequence[int] | None = None,
    test_len: int | None = None,
    n: int | None = None,
    table: SignatureTable | None = None,
) -> IdentResult:
    """Identify a controllable, O3-observable BCN from single-sample data.

    Member ``j`` is driven by the first ``j`` cover inputs followed by the
    O3-test. ``test_len`` defaults to the shortest member's input length
    (the member with no prefix); ``cover_inputs``, when given, is checked
    against the member prefixes.
    """
    group = _single_group(data)
    test = _o3_test(group, test_len)
    _check_cover(group, len(test), cover_inputs)
    return _probe_decode(data, [test], "O3Window", n, table)


def retrieve_o1_arrays(data: SampleSet, test: O1Test, table: SignatureTable | None = None) -> SignatureTable:
    """Distinct data arrays, in order of the first member of each prefix."""
    _require_case(data, "Case3", "Case4")
    return _probe_decode(data, test.tests, "O1DataArray", test.n, table).table


def identify_bcn_o1_single(
    data: SampleSet,
    test: O1Test,
    cover_inputs: Sequence[int] | None = None,
    table: SignatureTable | None = None,
) -> IdentResult:
    """Identify a controllable, O1-observable BCN from one sample split into portions.

    Member ``(j, s)`` is driven by the first ``j`` cover inputs followed by
    test ``s``; the member order does not matter.
    """
    group = _single_group(data)
    _check_cover(group, test.p + 1, cover_inputs)
    return _probe_decode(data, test.tests, "O1DataArray", test.n, table)


def identify_bcn_o1_multi(data: SampleSet, test: O1Test, table: SignatureTable | None = None) -> IdentResult:
    """Identify an O1-observable BCN from many samples.

    In each group, members carry either a bare test ``U_s`` or a one-step
    probe ``(j, U_s)``. Data arrays are labelled group by group, bare array
    first, then probes ``j = 1, 2, ...``; pass ``table`` to impose another
    labeling.
    """
    _require_case(data, "Case4")
    return _probe_decode(data, test.tests, "O1DataArray", test.n, table)


def identify_from_p0(
    data: SampleSet,
    test: O1Test,
    p0_groups: Iterable[str] | None = None,
    table: SignatureTable | None = None,
) -> IdentResult:
    """Identify what the reach of the initial-state set allows.

    Members of each group are walks from the group's initial state, each
    followed by a test sequence; a walk extended by one probe input
    witnesses one column of F. Columns at states no walk reaches stay
    unknown.
    """
    _require_case(data, "Case4")
    if p0_groups is None:
        groups = data.groups
    else:
        wanted = set(p0_groups)
        groups = [g for g in data.groups if g.id in wanted]
        missing = wanted - {g.id for g in groups}
        if missing:
            raise KeyError(f"unknown groups {sorted(missing)}")
    return _probe_decode(data, test.tests, "O1DataArray", test.n, table, groups)
