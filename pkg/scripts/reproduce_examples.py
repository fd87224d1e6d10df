"""Reproduce the worked examples: two-trajectory BN, O3 single sample, unobservable witness, lac operon.

Usage: python scripts/reproduce_examples.py
"""

from pathlib import Path

from bcnident import (
    O1Test,
    Plant,
    Bcn,
    compile_network,
    equivalent,
    find_o3_test,
    gen_case,
    identify_bcn_o1_multi,
    identify_bcn_o3,
    identify_bn,
    identify_from_p0,
    is_observable_bn,
)
from bcnident.ident import Member, SampleGroup, SampleSet

NETWORKS = Path(__file__).resolve().parent.parent / "networks"


def show(title, result, original):
    witness = equivalent(original, result.system()) if result.complete else None
    print(f"== {title}")
    print(f"  F = {result.F}")
    print(f"  H = {result.H}")
    print(f"  complete: {result.complete}, equivalent to plant: {witness is not None}")
    if witness is not None:
        print(f"  G = {list(witness.perm)}")


def two_trajectories():
    sys = Bcn.load(NETWORKS / "example1.json")
    plant = Plant(sys)
    # two runs, from states 1 and 7, together visit every state
    log = gen_case(plant, 2, x0=[1, 7])
    show("BN from two output sequences", identify_bn(log.samples), sys)


def single_sample_o3():
    sys = Bcn.load(NETWORKS / "example2.json")
    test = find_o3_test(sys)
    log = gen_case(Plant(sys), 3, test=test, cover=(1, 1, 1, 2, 2, 1, 1, 1, 2, 2, 2), x0=1)
    print(f"O3 test: {test}")
    show("BCN from one sample with an O3 test", identify_bcn_o3(log.samples, log.cover, len(test)), sys)


def unobservable_witness():
    sys = Bcn.load(NETWORKS / "unobservable_bn.json")
    print(f"== unobservable BN (observable: {is_observable_bn(sys)})")
    data = SampleSet("Case1", 0, 1, [SampleGroup("g1", [Member((), (1, 2, 1, 1, 1, 1, 1, 1, 1))])])
    show("BN with twin states merged", identify_bn(data, window=4, twins={4: 1}), sys)


def lac_operon():
    # the stored test matches the tabulated system, whose H differs from the compiled formulas
    sys = Bcn.load(NETWORKS / "lac_operon.json")
    compiled = compile_network((NETWORKS / "lac_operon.bnl").read_text())
    print(f"== compiled lac F matches: {compiled.F == sys.F}, H matches: {compiled.H == sys.H}")
    test = O1Test.load(NETWORKS / "lac_operon_o1test.json")
    log = gen_case(Plant(sys), 4, test=test)
    show("lac operon from all initial states", identify_bcn_o1_multi(log.samples, test), sys)
    log = gen_case(Plant(sys), 4, test=test, x0=8, walks=True)
    partial = identify_from_p0(log.samples, test, ["g1"])
    print(f"== lac operon from state 8 only: {len(partial.unknown_columns())} F columns unknown")


if __name__ == "__main__":
    two_trajectories()
    single_sample_o3()
    unobservable_witness()
    lac_operon()
