"""``bcnident`` command line."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .analysis import (
    O1Test,
    build_o1_test,
    find_o3_test,
    is_controllable,
    is_o1_observable,
    is_observable_bn,
)
from .harness import Plant, gen_case
from .ident import (
    SampleSet,
    identify_bcn_o1_single,
    identify_bcn_o3,
    identify_bn,
    identify_from_p0,
)
from .logic import NetworkSyntaxError, compile_network
from .network import Bcn, equivalent, simulate


def _csv(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def _emit(obj, path: str | None):
    text = json.dumps(obj)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def cmd_compile(args) -> int:
    sys_ = compile_network(Path(args.src).read_text())
    _emit(sys_.to_dict(), args.output)
    return 0


def cmd_simulate(args) -> int:
    net = Bcn.load(args.net)
    inputs = _csv(args.inputs) if args.inputs else [1] * args.steps
    traj = simulate(net, args.x0, inputs)
    print(json.dumps({"states": list(traj.states), "outputs": list(traj.outputs)}))
    return 0


def cmd_check(args) -> int:
    net = Bcn.load(args.net)
    report = {"property": args.property}
    if args.property == "observable-bn":
        ok = is_observable_bn(net)
    elif args.property == "controllable":
        ok = is_controllable(net)
    elif args.property == "o1":
        ok = is_o1_observable(net)
    else:
        test = find_o3_test(net, args.max_len)
        ok = test is not None
        report["test"] = list(test) if ok else None
        report["max_len"] = args.max_len if args.max_len is not None else net.nstates
    report["holds"] = ok
    print(json.dumps(report))
    return 0 if ok else 1


def cmd_o1test(args) -> int:
    test = build_o1_test(Bcn.load(args.net))
    if test is None:
        print("error: the network is not O1-observable", file=sys.stderr)
        return 1
    _emit(test.to_dict(), args.output)
    return 0


def _load_test(path: str | None):
    return None if path is None else O1Test.load(path)


def cmd_gen_data(args) -> int:
    net = Bcn.load(args.net)
    rng = random.Random(args.seed)
    plant = Plant(net)
    case = args.case
    if args.x0 is None:
        x0 = rng.randint(1, net.nstates) if case in ("1", "3") else "all"
    elif args.x0 == "all":
        if case in ("1", "3"):
            raise ValueError(f"Case {case} is a single sample: give one --x0")
        x0 = "all"
    else:
        x0 = int(args.x0)
    if case in ("1", "2"):
        log = gen_case(plant, case, x0=x0, length=args.len)
    else:
        test = _load_test(args.test) or build_o1_test(net)
        if test is None:
            raise ValueError("the network is not O1-observable; pass --test")
        if case == "3":
            cover = "auto" if args.cover in (None, "auto") else _csv(args.cover)
            probe = test.tests[0] if test.N == 1 else test
            log = gen_case(plant, case, test=probe, cover=cover, x0=x0)
        else:
            # a single initial state gets the reach-walk layout
            log = gen_case(plant, case, test=test, x0=x0, walks=x0 != "all")
    log.save(args.output)
    return 0


def cmd_identify(args) -> int:
    path = Path(args.data)
    data = SampleSet.load(path)
    provenance = json.loads(path.read_text()).get("provenance") or {}
    expected = f"Case{args.case}"
    if data.case != expected:
        raise ValueError(f"data is {data.case}, not {expected}")
    test = _load_test(args.test)
    if test is None and isinstance(provenance.get("test"), dict):
        test = O1Test.from_dict(provenance["test"])
    cover = _csv(args.cover) if args.cover else None
    if args.case in ("1", "2"):
        result = identify_bn(data, window=args.window)
    elif args.case == "3":
        if test is None or test.N == 1:
            result = identify_bcn_o3(data, cover, test_len=None if test is None else test.p + 1)
        else:
            result = identify_bcn_o1_single(data, test, cover)
    else:
        if test is None:
            raise ValueError("Case 4 identification needs --test")
        result = identify_from_p0(data, test)
    _emit(result.to_dict(), args.output)
    unknown = len(result.unknown_columns())
    status = "complete" if result.complete else f"partial ({unknown} F columns unknown)"
    print(f"identified {len(result.table)} states: {status}", file=sys.stderr)
    return 0


def cmd_equiv(args) -> int:
    a, b = Bcn.load(args.a), Bcn.load(args.b)
    if (a.n, a.m, a.l) != (b.n, b.m, b.l):
        print("not equivalent: dimensions differ")
        return 1
    g = equivalent(a, b)
    if g is None:
        print("not equivalent")
        return 1
    print(json.dumps({"equivalent": True, "G": list(g.perm)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bcnident", description="Identify Boolean control networks from input/output data.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("compile", help="compile logical equations to structure matrices")
    s.add_argument("src")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("simulate", help="run a network from one initial state")
    s.add_argument("net")
    s.add_argument("--x0", type=int, required=True)
    s.add_argument("--inputs", default="")
    s.add_argument("--steps", type=int, default=0, help="autonomous steps when --inputs is empty")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("check", help="test observability or controllability")
    s.add_argument("net")
    s.add_argument("--property", required=True, choices=["observable-bn", "controllable", "o1", "o3"])
    s.add_argument("--max-len", type=int, default=None, help="O3-test search bound (default 2**n)")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("o1test", help="build an O1-test")
    s.add_argument("net")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_o1test)

    s = sub.add_parser("gen-data", help="sample a network under a Case 1-4 protocol")
    s.add_argument("net")
    s.add_argument("--case", required=True, choices=["1", "2", "3", "4"])
    s.add_argument("--test")
    s.add_argument("--cover")
    s.add_argument("--x0")
    s.add_argument("--len", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_gen_data)

    s = sub.add_parser("identify", help="reconstruct (F, H) from sampled data")
    s.add_argument("--case", required=True, choices=["1", "2", "3", "4"])
    s.add_argument("--data", required=True)
    s.add_argument("--window", type=int, default=None)
    s.add_argument("--test")
    s.add_argument("--cover")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_identify)

    s = sub.add_parser("equiv", help="search for a coordinate change between two networks")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_equiv)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NetworkSyntaxError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
