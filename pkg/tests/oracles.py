"""Independent brute-force oracles for the test suite.

Everything here quantifies explicitly over element labels with plain
loops, deliberately avoiding the package's bitmask kernels, so the two
routes can disagree when one of them is wrong.
"""

from __future__ import annotations

from itertools import product

from ordbubble import Carrier, EquivalenceRelation, Relation, make_relation
from ordbubble.structure import Bubble, BubbleSystem, Loset


# ---------------------------------------------------------------------------
# naive predicates

def naive_reflexive(r: Relation) -> bool:
    return all(r.has(x, x) for x in r.carrier.elements)


def naive_irreflexive(r: Relation) -> bool:
    return not any(r.has(x, x) for x in r.carrier.elements)


def naive_symmetric(r: Relation) -> bool:
    e = r.carrier.elements
    return all(not r.has(x, y) or r.has(y, x) for x in e for y in e)


def naive_antisymmetric(r: Relation) -> bool:
    e = r.carrier.elements
    return all(not (r.has(x, y) and r.has(y, x)) or x == y for x in e for y in e)


def naive_asymmetric(r: Relation) -> bool:
    e = r.carrier.elements
    return all(not (r.has(x, y) and r.has(y, x)) for x in e for y in e)


def naive_complete(r: Relation) -> bool:
    e = r.carrier.elements
    return all(r.has(x, y) or r.has(y, x) for x in e for y in e)


def naive_transitive(r: Relation) -> bool:
    e = r.carrier.elements
    return all(
        not (r.has(x, y) and r.has(y, z)) or r.has(x, z)
        for x in e for y in e for z in e
    )


def naive_negatively_transitive(r: Relation) -> bool:
    e = r.carrier.elements
    return all(
        not r.has(x, z) or r.has(x, y) or r.has(y, z)
        for x in e for y in e for z in e
    )


def naive_saturated(s: Relation, e: Relation, mode: str) -> bool:
    elems = s.carrier.elements
    if mode == "left":
        return all(
            not (e.has(x, y) and s.has(y, z)) or s.has(x, z)
            for x in elems for y in elems for z in elems
        )
    if mode == "right":
        return all(
            not (s.has(x, y) and e.has(y, z)) or s.has(x, z)
            for x in elems for y in elems for z in elems
        )
    if mode == "full":
        return naive_saturated(s, e, "left") and naive_saturated(s, e, "right")
    if mode == "weak":
        return all(
            not (e.has(x, y) and s.has(y, z))
            or any(e.has(z, t) and s.has(x, t) for t in elems)
            for x in elems for y in elems for z in elems
        )
    raise ValueError(mode)


def path_closure(r: Relation) -> Relation:
    """Closure by explicit path enumeration: (x, y) is in when some chain
    of 1..n steps links them."""
    elems = r.carrier.elements
    n = len(elems)
    pairs = []
    for x in elems:
        for y in elems:
            found = False
            for length in range(1, n + 1):
                for interior in product(elems, repeat=length - 1):
                    chain = (x, *interior, y)
                    if all(r.has(chain[i], chain[i + 1]) for i in range(length)):
                        found = True
                        break
                if found:
                    break
            if found:
                pairs.append((x, y))
    return make_relation(r.carrier, pairs)


# ---------------------------------------------------------------------------
# enumerators

def all_relations_on(labels: tuple[str, ...]):
    carrier = Carrier(labels)
    n = len(labels)
    cells = [(x, y) for x in labels for y in labels]
    for code in range(1 << (n * n)):
        yield make_relation(carrier, [cells[k] for k in range(n * n) if code >> k & 1])


def all_preorders_on(labels: tuple[str, ...]):
    for r in all_relations_on(labels):
        if naive_reflexive(r) and naive_transitive(r):
            yield r


def all_partial_orders_on(labels: tuple[str, ...]):
    """Reflexive + antisymmetric by construction, filtered for
    transitivity; tractable through n = 5."""
    carrier = Carrier(labels)
    n = len(labels)
    unordered = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n)]
    for states in product((0, 1, 2), repeat=len(unordered)):
        pairs = [(x, x) for x in labels]
        for (x, y), s in zip(unordered, states):
            if s == 1:
                pairs.append((x, y))
            elif s == 2:
                pairs.append((y, x))
        r = make_relation(carrier, pairs)
        if naive_transitive(r):
            yield r


def set_partitions(items: tuple):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in set_partitions(rest):
        yield ((first,),) + sub
        for k in range(len(sub)):
            yield sub[:k] + ((first,) + sub[k],) + sub[k + 1 :]


def all_equivalences_on(labels: tuple[str, ...]):
    carrier = Carrier(labels)
    for blocks in set_partitions(labels):
        pairs = [(x, y) for block in blocks for x in block for y in block]
        yield EquivalenceRelation(make_relation(carrier, pairs))


def ordered_set_partitions(items: tuple):
    if not items:
        yield ()
        return
    n = len(items)
    for mask in range(1, 1 << n):
        block = tuple(items[i] for i in range(n) if mask >> i & 1)
        rest = tuple(items[i] for i in range(n) if not mask >> i & 1)
        for tail in ordered_set_partitions(rest):
            yield (block,) + tail


def all_bubble_systems_on(labels: tuple[str, ...]):
    """Every bubble system over the fixed carrier: an ordered sequence of
    disjoint bubbles, each with any inner equivalence."""
    carrier = Carrier(labels)
    for sequence in ordered_set_partitions(labels):
        inner_choices = [list(set_partitions(block)) for block in sequence]
        for combo in product(*inner_choices):
            bubbles = []
            projection = {}
            for b, (block, blocks_of_inner) in enumerate(zip(sequence, combo)):
                sub = Carrier(block)
                pairs = [(x, y) for cls in blocks_of_inner for x in cls for y in cls]
                inner = EquivalenceRelation(make_relation(sub, pairs))
                bubbles.append(Bubble(block, inner))
                projection.update({x: f"I{b}" for x in block})
            index = Loset.chain(tuple(f"I{b}" for b in range(len(sequence))))
            yield BubbleSystem(
                carrier=carrier,
                index=index,
                bubbles=tuple(bubbles),
                projection=projection,
            )


# ---------------------------------------------------------------------------
# fixtures

def truncated_reciprocal_instance(n: int):
    """A finite cut of the reciprocal chain 0 < ... < 1/2 < 1/1 with three
    isolated extra elements; returns (relation, expected gap list)."""
    labels = ["0"] + [f"1/{i}" for i in range(n, 0, -1)] + ["r1", "r2", "r3"]
    carrier = Carrier(tuple(labels))
    pairs = [(x, x) for x in labels]
    pairs += [(f"1/{i}", f"1/{j}") for i in range(1, n + 1) for j in range(1, i)]
    pairs += [("0", f"1/{i}") for i in range(1, n + 1)]
    relation = make_relation(carrier, pairs)
    expected_gaps = [("0", f"1/{n}")] + [
        (f"1/{j+1}", f"1/{j}") for j in range(n - 1, 0, -1)
    ]
    return relation, expected_gaps


def naive_generated_opens(carrier: Carrier, extents) -> set[frozenset]:
    """Reference topology generation: pairwise intersection fixpoint, then
    pairwise union fixpoint, plus the empty set and the carrier."""
    family = {frozenset(e) for e in extents}
    changed = True
    while changed:
        changed = False
        for a in list(family):
            for b in list(family):
                c = a & b
                if c not in family:
                    family.add(c)
                    changed = True
    changed = True
    while changed:
        changed = False
        for a in list(family):
            for b in list(family):
                c = a | b
                if c not in family:
                    family.add(c)
                    changed = True
    family.add(frozenset())
    family.add(frozenset(carrier.elements))
    return family
