import random
from fractions import Fraction

import pytest

import oracles
from ordbubble import (
    Carrier,
    FiniteTopology,
    Loset,
    NotOpen,
    TooLarge,
    bubble_compose,
    bubble_decompose,
    connectivity_report,
    continuity_check,
    derived_parts,
    diagonal_relation,
    full_relation,
    gaps,
    generalized_utility,
    generate_topology,
    interval_topology,
    is_base,
    make_relation,
    open_intervals,
    order_completeness_report,
    projection_check,
)
from ordbubble.topology import unique_extents
from ordbubble.sweep import random_bubble_system

AB = Carrier(("a", "b"))
ABC = Carrier(("a", "b", "c"))


def preorder(carrier, pairs):
    return make_relation(carrier, [(x, x) for x in carrier.elements] + list(pairs))


def chain(labels):
    return Loset.chain(labels).relation()


# ---------------------------------------------------------------------------
# intervals

def test_two_chain_interval_listing():
    listing = open_intervals(chain(("a", "b")))
    described = [(iv.describe(), set(iv.extent)) for iv in listing]
    assert described == [
        ("(a,b)", set()),
        ("(<-,a)", set()),
        ("(a,->)", {"b"}),
        ("(<-,b)", {"a"}),
        ("(b,->)", set()),
    ]
    assert [iv.empty for iv in listing] == [True, True, False, False, True]


def test_single_bubble_intervals_all_empty():
    listing = open_intervals(full_relation(ABC))
    assert listing and all(iv.empty for iv in listing)


def test_coproduct_interval_extents():
    carrier = Carrier(("x1", "x2", "y"))
    r = preorder(carrier, [("x1", "y"), ("x2", "y")])
    by_name = {iv.describe(): set(iv.extent) for iv in open_intervals(r)}
    assert by_name["(<-,y)"] == {"x1", "x2"}
    assert by_name["(x1,->)"] == {"y"}
    assert by_name["(x2,->)"] == {"y"}


def test_loset_interval_intersections_stay_intervals():
    # pairwise intersections of interval extents are again interval extents
    rnd = random.Random(11)
    for n in range(1, 7):
        labels = tuple(f"e{i}" for i in range(n))
        order = Loset.chain(labels)
        extents = set(unique_extents(open_intervals(order.relation())))
        for a in extents:
            for b in extents:
                assert (a & b) in extents
    del rnd


# ---------------------------------------------------------------------------
# generation

def test_empty_subbase_gives_indiscrete():
    t = generate_topology(AB, [])
    assert t.sorted_opens() == [(), ("a", "b")]


def test_two_chain_topology_is_discrete():
    t = interval_topology(chain(("a", "b")))
    assert t.sorted_opens() == [(), ("a",), ("b",), ("a", "b")]


def test_three_chain_topology_is_power_set():
    t = interval_topology(chain(("a", "b", "c")))
    assert len(t.sorted_opens()) == 8


def test_generation_cap():
    labels = tuple(f"e{i}" for i in range(17))
    with pytest.raises(TooLarge):
        generate_topology(Carrier(labels), [])


def test_generation_matches_naive_fixpoint_oracle():
    rnd = random.Random(13)
    for _ in range(60):
        n = rnd.randint(1, 5)
        labels = tuple(f"e{i}" for i in range(n))
        carrier = Carrier(labels)
        pairs = [(x, y) for x in labels for y in labels if rnd.random() < 0.3]
        r = preorder(carrier, pairs)
        from ordbubble import transitive_closure

        r = transitive_closure(r)
        intervals = open_intervals(r)
        ours = {frozenset(labels_) for labels_ in interval_topology(r).sorted_opens()}
        naive = oracles.naive_generated_opens(
            carrier, [iv.extent for iv in intervals]
        )
        assert ours == naive


# ---------------------------------------------------------------------------
# bases and connectivity

def test_singletons_are_base_of_discrete():
    t = interval_topology(chain(("a", "b")))
    assert is_base([("a",), ("b",)], t).holds


def test_whole_space_alone_is_not_a_base():
    t = interval_topology(chain(("a", "b")))
    verdict = is_base([("a", "b")], t)
    assert not verdict.holds
    assert verdict.witness == ("a",)


def test_base_members_must_be_open():
    t = generate_topology(AB, [])
    with pytest.raises(NotOpen):
        is_base([("a",)], t)


def test_interval_extents_form_base_for_systems():
    rnd = random.Random(17)
    for _ in range(60):
        system = random_bubble_system(rnd, max_index=4, max_bubble=3)
        if system.index.n < 2:
            continue
        relation = bubble_compose(system)
        intervals = open_intervals(relation)
        t = generate_topology(relation.carrier, intervals)
        family = [tuple(sorted(e)) for e in unique_extents(intervals) if e]
        assert is_base(family, t).holds


def test_indiscrete_is_connected():
    assert connectivity_report(generate_topology(AB, [])).connected


def test_discrete_two_chain_is_disconnected():
    report = connectivity_report(interval_topology(chain(("a", "b"))))
    assert not report.connected
    assert report.clopen_witness == ("a",)


def test_truncated_reciprocal_chain_is_connected_with_exact_gaps():
    for n in (2, 3, 4, 5):
        relation, expected_gaps = oracles.truncated_reciprocal_instance(n)
        topology = interval_topology(relation)
        assert connectivity_report(topology).connected
        assert gaps(relation) == expected_gaps


def test_every_nontrivial_finite_loset_is_disconnected():
    for n in range(2, 9):
        order = chain(tuple(f"e{i}" for i in range(n)))
        report = connectivity_report(interval_topology(order))
        assert not report.connected and report.clopen_witness is not None
        assert gaps(order)  # a gap always exists


# ---------------------------------------------------------------------------
# gaps

def test_three_chain_gaps():
    assert gaps(chain(("a", "b", "c"))) == [("a", "b"), ("b", "c")]


def test_single_bubble_has_no_gaps():
    assert gaps(full_relation(ABC)) == []


def test_loset_gaps_are_adjacent_ranks():
    rnd = random.Random(23)
    for _ in range(30):
        n = rnd.randint(1, 8)
        labels = [f"v{i}" for i in range(n)]
        rnd.shuffle(labels)
        order = Loset.chain(tuple(labels))
        expected = [(labels[i], labels[i + 1]) for i in range(n - 1)]
        assert sorted(gaps(order.relation())) == sorted(expected)


# ---------------------------------------------------------------------------
# completeness and compactness

def test_completeness_report_small_losets():
    for n in (1, 2, 3, 6):
        order = Loset.chain(tuple(f"e{i}" for i in range(n)))
        report = order_completeness_report(order)
        assert report.all_sups and report.all_infs and report.compact
        assert report.equivalence_holds


def test_completeness_cross_check_exhaustive():
    rnd = random.Random(29)
    for n in range(1, 7):
        labels = [f"e{i}" for i in range(n)]
        ranks = list(range(n))
        rnd.shuffle(ranks)
        order = Loset(Carrier(tuple(labels)), tuple(ranks))
        report = order_completeness_report(order)
        assert report.equivalence_holds


def test_completeness_cap():
    order = Loset.chain(tuple(f"e{i}" for i in range(13)))
    with pytest.raises(TooLarge):
        order_completeness_report(order)


# ---------------------------------------------------------------------------
# projection

def test_projection_two_singleton_bubbles():
    r = preorder(AB, [("a", "b")])
    report = projection_check(bubble_decompose(r))
    assert report.all_pass()


def test_projection_two_bubble_example():
    carrier = Carrier(("x1", "x2", "y"))
    r = preorder(carrier, [("x1", "y"), ("x2", "y")])
    system = bubble_decompose(r)
    report = projection_check(system)
    assert report.all_pass()
    # the coproduct topology is exactly the pulled-back index topology
    t = interval_topology(r)
    assert t.sorted_opens() == [(), ("y",), ("x1", "x2"), ("x1", "x2", "y")]


def test_projection_single_bubble_degenerate():
    system = bubble_decompose(full_relation(ABC))
    assert projection_check(system).all_pass()


def test_projection_random_systems():
    rnd = random.Random(31)
    for _ in range(60):
        system = random_bubble_system(rnd, max_index=5, max_bubble=2)
        if system.carrier.n > 14:
            continue
        assert projection_check(system).all_pass()


# ---------------------------------------------------------------------------
# continuity

def test_identity_is_continuous():
    t = interval_topology(chain(("a", "b", "c")))
    assert continuity_check({x: x for x in ("a", "b", "c")}, t, t).holds


def test_two_bubble_utility_is_continuous_on_value_grid():
    carrier = Carrier(("x1", "x2", "y"))
    r = preorder(carrier, [("x1", "y"), ("x2", "y")])
    values = generalized_utility(r).values
    grid = Loset.chain(("0", "1"))
    grid_topology = interval_topology(grid.relation())
    assert set(map(frozenset, grid_topology.sorted_opens())) == {
        frozenset(),
        frozenset({"0"}),
        frozenset({"1"}),
        frozenset({"0", "1"}),
    }
    mapping = {x: str(v) for x, v in values.items()}
    assert continuity_check(mapping, interval_topology(r), grid_topology).holds


def test_constant_map_is_continuous():
    source = interval_topology(full_relation(ABC))
    target = interval_topology(chain(("p", "q")))
    assert continuity_check({x: "p" for x in ABC.elements}, source, target).holds


def test_discontinuous_map_detected():
    # a3-chain's topology is discrete, the indiscrete target pulls back fine,
    # but mapping an indiscrete source onto a discrete target must fail
    source = generate_topology(ABC, [])
    target = interval_topology(chain(("p", "q")))
    verdict = continuity_check({"a": "p", "b": "q", "c": "q"}, source, target)
    assert not verdict.holds
    assert verdict.witness is not None


def test_utility_continuity_small_exhaustive():
    from ordbubble import enumerate_preorders
    from ordbubble.errors import NotNegativelyTransitive

    for n in (1, 2, 3):
        for r in enumerate_preorders(n):
            try:
                values = generalized_utility(r).values
            except NotNegativelyTransitive:
                continue
            grid_labels = sorted({str(v) for v in values.values()}, key=Fraction)
            grid_topology = interval_topology(Loset.chain(tuple(grid_labels)).relation())
            mapping = {x: str(v) for x, v in values.items()}
            assert continuity_check(mapping, interval_topology(r), grid_topology).holds
