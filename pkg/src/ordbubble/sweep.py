"""Exhaustive and randomized invariant sweeps over small carriers.

The battery evaluates the package's logical identities on every relation of
a small carrier (or a seeded random sample of larger ones), counts
preorders two independent ways, and round-trips decompositions and linear
extensions.  Each check carries a neutral name; a sweep with any failure is
a build-breaking event for the CLI.

Fault injection (``faults={"saturation"}`` etc.) deliberately corrupts one
evaluation inside the battery so harness wiring can be tested end to end:
a corrupted check must surface as a reported failure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ValidationError
from .relations import (
    Carrier,
    Relation,
    closure_rows,
    diagonal_rows,
    transpose_rows,
)
from .structure import (
    Bubble,
    BubbleSystem,
    Loset,
    bourbaki_factor,
    bubble_compose,
    bubble_decompose,
    enumerate_preorders,
)
from .factor import EquivalenceRelation
from .order_ext import szpilrajn_extend

KNOWN_FAULTS = ("saturation", "negative-transitivity")

DEFAULT_SEED = 20645


@dataclass
class CheckTally:
    instances: int = 0
    failures: int = 0
    first_failure: tuple | None = None

    def record(self, ok: bool, witness=None):
        self.instances += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = witness


@dataclass
class SweepTallies:
    checks: dict[str, CheckTally] = field(default_factory=dict)

    def record(self, name: str, ok: bool, witness=None):
        self.checks.setdefault(name, CheckTally()).record(ok, witness)

    def failures_total(self) -> int:
        return sum(t.failures for t in self.checks.values())

    def as_dict(self) -> dict:
        return {
            name: {"instances": tally.instances, "failures": tally.failures}
            for name, tally in sorted(self.checks.items())
        }


# ---------------------------------------------------------------------------
# raw-row helpers (hot path; relations stay tuples of ints here)

def _sym(rows, tr) -> bool:
    return rows == tr


def _asym(rows, tr, n) -> bool:
    return all(rows[i] & tr[i] == 0 for i in range(n))


def _antisym(rows, tr, n) -> bool:
    return all(rows[i] & tr[i] & ~(1 << i) == 0 for i in range(n))


def _refl(rows, n) -> bool:
    return all(rows[i] >> i & 1 for i in range(n))


def _irrefl(rows, n) -> bool:
    return not any(rows[i] >> i & 1 for i in range(n))


def _complete(rows, tr, full, n) -> bool:
    return all(rows[i] | tr[i] == full for i in range(n))


def _trans(rows, n) -> bool:
    for row in rows:
        acc = 0
        r = row
        while r:
            y = (r & -r).bit_length() - 1
            acc |= rows[y]
            r &= r - 1
        if acc & ~row:
            return False
    return True


def _negtrans(rows, tr, full, n, faults=frozenset()) -> bool:
    ok = True
    for i in range(n):
        row = rows[i]
        r = row
        while r:
            z = (r & -r).bit_length() - 1
            if row | tr[z] != full:
                ok = False
                break
            r &= r - 1
        if not ok:
            break
    if "negative-transitivity" in faults:
        return not ok
    return ok


def _compose_subset(a, b, target, n) -> bool:
    """True when the composition a.b is contained in target."""
    for i in range(n):
        acc = 0
        r = a[i]
        while r:
            y = (r & -r).bit_length() - 1
            acc |= b[y]
            r &= r - 1
        if acc & ~target[i]:
            return False
    return True


def _saturated(s, e, n, faults=frozenset()) -> bool:
    """Full saturation of s for e: e.s and s.e both land inside s."""
    ok = _compose_subset(e, s, s, n) and _compose_subset(s, e, s, n)
    if "saturation" in faults:
        return not ok
    return ok


# ---------------------------------------------------------------------------
# enumerators and generators

def all_rows(n: int) -> Iterator[tuple[int, ...]]:
    """All relations on n elements as raw row tuples (2^(n*n) of them)."""
    for code in range(1 << (n * n)):
        yield tuple((code >> (i * n)) & ((1 << n) - 1) for i in range(n))


def set_partitions(items: tuple) -> Iterator[tuple[tuple, ...]]:
    """All set partitions, in restricted-growth order."""
    n = len(items)
    if n == 0:
        yield ()
        return
    codes = [0] * n

    def rec(i: int, maxcode: int):
        if i == n:
            blocks: dict[int, list] = {}
            for item, code in zip(items, codes):
                blocks.setdefault(code, []).append(item)
            yield tuple(tuple(b) for _, b in sorted(blocks.items()))
            return
        for code in range(maxcode + 2):
            codes[i] = code
            yield from rec(i + 1, max(maxcode, code))

    yield from rec(1, 0)


def equivalence_rows_from_blocks(blocks: Iterable[Iterable[int]], n: int) -> tuple[int, ...]:
    rows = [0] * n
    for block in blocks:
        mask = 0
        for i in block:
            mask |= 1 << i
        for i in block:
            rows[i] = mask
    return tuple(rows)


def all_equivalence_rows(n: int) -> Iterator[tuple[int, ...]]:
    for blocks in set_partitions(tuple(range(n))):
        yield equivalence_rows_from_blocks(blocks, n)


def all_partial_order_rows(n: int) -> Iterator[tuple[int, ...]]:
    """Every partial order on n elements: reflexive and antisymmetric by
    construction (3 states per unordered pair), filtered for transitivity."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    state = [0] * len(pairs)

    def build() -> tuple[int, ...]:
        rows = list(diagonal_rows(n))
        for (i, j), s in zip(pairs, state):
            if s == 1:
                rows[i] |= 1 << j
            elif s == 2:
                rows[j] |= 1 << i
        return tuple(rows)

    def rec(k: int):
        if k == len(pairs):
            rows = build()
            if _trans(rows, n):
                yield rows
            return
        for s in (0, 1, 2):
            state[k] = s
            yield from rec(k + 1)

    yield from rec(0)


def count_split_pairs(n: int) -> int:
    """Independent preorder count: valid (equivalence, strict) pairs where
    the strict part is asymmetric, transitive, saturated and disjoint."""
    total = 0
    for e_rows in all_equivalence_rows(n):
        free_bits = [(i, j) for i in range(n) for j in range(n) if not e_rows[i] >> j & 1]
        for code in range(1 << len(free_bits)):
            f_rows = [0] * n
            for k, (i, j) in enumerate(free_bits):
                if code >> k & 1:
                    f_rows[i] |= 1 << j
            f_rows = tuple(f_rows)
            tr = transpose_rows(f_rows, n)
            if not _asym(f_rows, tr, n):
                continue
            if not _trans(f_rows, n):
                continue
            if not _saturated(f_rows, e_rows, n):
                continue
            total += 1
    return total


def random_rows(rnd: random.Random, n: int) -> tuple[int, ...]:
    return tuple(rnd.getrandbits(n) for _ in range(n))


def random_equivalence_rows(rnd: random.Random, n: int) -> tuple[int, ...]:
    labels = list(range(n))
    rnd.shuffle(labels)
    blocks = []
    start = 0
    while start < n:
        size = rnd.randint(1, n - start)
        blocks.append(labels[start : start + size])
        start += size
    return equivalence_rows_from_blocks(blocks, n)


def random_preorder_rows(rnd: random.Random, n: int) -> tuple[int, ...]:
    """A random preorder: the reflexive-transitive closure of random pairs."""
    sparse = tuple(rnd.getrandbits(n) & rnd.getrandbits(n) for _ in range(n))
    with_diagonal = tuple(row | (1 << i) for i, row in enumerate(sparse))
    return closure_rows(with_diagonal, n)


def random_bubble_system(
    rnd: random.Random,
    max_index: int = 5,
    max_bubble: int = 3,
    prefix: str = "e",
) -> BubbleSystem:
    count = rnd.randint(1, max_index)
    sizes = [rnd.randint(1, max_bubble) for _ in range(count)]
    labels = [f"{prefix}{k}" for k in range(sum(sizes))]
    bubbles = []
    projection = {}
    start = 0
    for b, size in enumerate(sizes):
        elems = tuple(labels[start : start + size])
        start += size
        members = list(range(size))
        rnd.shuffle(members)
        blocks = []
        at = 0
        while at < size:
            take = rnd.randint(1, size - at)
            blocks.append([members[i] for i in range(at, at + take)])
            at += take
        rows = equivalence_rows_from_blocks(blocks, size)
        inner = EquivalenceRelation(Relation(Carrier(elems), rows))
        bubbles.append(Bubble(elems, inner))
        projection.update({x: f"I{b}" for x in elems})
    index = Loset.chain(tuple(f"I{b}" for b in range(count)))
    return BubbleSystem(
        carrier=Carrier(tuple(labels)),
        index=index,
        bubbles=tuple(bubbles),
        projection=projection,
    )


# ---------------------------------------------------------------------------
# the battery

def relation_battery(rows: tuple[int, ...], n: int, tallies: SweepTallies, faults=frozenset()):
    """Identities that hold for every relation, plus the preorder and
    strict-order consequences when the hypotheses apply."""
    full = (1 << n) - 1
    tr = transpose_rows(rows, n)
    comp = tuple(~r & full for r in rows)
    comp_tr = tuple(~r & full for r in tr)

    sym_r = _sym(rows, tr)
    asym_r = _asym(rows, tr, n)
    refl_r = _refl(rows, n)
    irrefl_r = _irrefl(rows, n)
    antisym_r = _antisym(rows, tr, n)
    complete_r = _complete(rows, tr, full, n)
    trans_r = _trans(rows, n)
    negtrans_r = _negtrans(rows, tr, full, n, faults)

    # symmetry/asymmetry/transitivity transfer to the inverse and complement
    tallies.record(
        "inverse-complement-symmetry",
        sym_r == _sym(tr, rows) == (comp == comp_tr),
        rows,
    )
    tallies.record(
        "inverse-asymmetry-complement-completeness",
        asym_r == _asym(tr, rows, n) == _complete(comp, comp_tr, full, n),
        rows,
    )
    tallies.record(
        "transitivity-inverse-and-complement",
        trans_r == _trans(tr, n)
        and trans_r == _negtrans(comp, comp_tr, full, n, faults),
        rows,
    )
    tallies.record(
        "negative-transitivity-inverse-and-complement",
        negtrans_r == _negtrans(tr, rows, full, n, faults)
        and negtrans_r == _trans(comp, n),
        rows,
    )

    # negative transitivity upgrades to transitivity under mild shape
    tallies.record(
        "negative-transitivity-upgrades",
        (not (refl_r and antisym_r and negtrans_r) or trans_r)
        and (not (asym_r and negtrans_r) or trans_r),
        rows,
    )
    tallies.record(
        "asymmetry-reflexivity-links",
        (not asym_r or irrefl_r)
        and (not (irrefl_r and trans_r) or asym_r)
        and (not complete_r or refl_r)
        and (not (trans_r and complete_r) or negtrans_r),
        rows,
    )
    tallies.record(
        "strict-order-two-faces",
        (asym_r and trans_r) == (irrefl_r and trans_r),
        rows,
    )

    i_rows = tuple(a & b for a, b in zip(rows, tr))
    p_rows = tuple(a & ~b for a, b in zip(rows, tr))
    u_rows = tuple(a | b for a, b in zip(rows, tr))
    e_rows = tuple(~a & full for a in u_rows)
    p_tr = transpose_rows(p_rows, n)

    tallies.record(
        "derived-part-identities",
        tuple(~a & full for a in i_rows) == tuple(a | b for a, b in zip(comp, comp_tr))
        and tuple(a & b for a, b in zip(comp, comp_tr)) == e_rows
        and tuple(~a & full for a in p_rows) == tuple(a | b for a, b in zip(comp, tr))
        and tuple(~(a | b) & full for a, b in zip(p_rows, p_tr))
        == tuple(a | b for a, b in zip(e_rows, i_rows)),
        rows,
    )
    i_tr = transpose_rows(i_rows, n)
    u_tr = transpose_rows(u_rows, n)
    e_tr = transpose_rows(e_rows, n)
    tallies.record(
        "derived-part-shapes",
        _sym(i_rows, i_tr)
        and _sym(u_rows, u_tr)
        and _sym(e_rows, e_tr)
        and _asym(p_rows, p_tr, n)
        and (not trans_r or (_trans(i_rows, n) and _trans(p_rows, n))),
        rows,
    )
    tallies.record(
        "incomparability-inherits-transitivity",
        not negtrans_r or _trans(e_rows, n),
        rows,
    )

    if refl_r and trans_r:
        preorder_battery(rows, tr, i_rows, p_rows, e_rows, n, full, tallies, faults)
    if asym_r and negtrans_r:
        strict_battery(rows, tr, e_rows, n, full, tallies, faults)


def preorder_battery(rows, tr, i_rows, p_rows, e_rows, n, full, tallies, faults=frozenset()):
    p_tr = transpose_rows(p_rows, n)
    tallies.record(
        "preorder-strict-absorption",
        _compose_subset(rows, p_rows, p_rows, n)
        and _compose_subset(p_rows, rows, p_rows, n),
        rows,
    )
    tallies.record(
        "strict-part-saturated",
        _saturated(p_rows, i_rows, n, faults),
        rows,
    )
    tallies.record(
        "preorder-saturated-for-its-equivalence",
        _saturated(rows, i_rows, n, faults),
        rows,
    )
    tallies.record(
        "preorder-parts-disjoint",
        all(
            i_rows[k] & p_rows[k] == 0
            and i_rows[k] & p_tr[k] == 0
            and p_rows[k] & p_tr[k] == 0
            for k in range(n)
        ),
        rows,
    )
    # completeness characterized through the complement of the inverse
    f_rows = tuple(~t & full for t in tr)
    f_tr = tuple(~r & full for r in rows)
    e_of_f = tuple(~(a | b) & full for a, b in zip(f_rows, f_tr))
    complete_r = _complete(rows, tr, full, n)
    side_two = _asym(f_rows, f_tr, n) and _negtrans(f_rows, f_tr, full, n, faults)
    side_three = i_rows == e_of_f and p_rows == f_rows
    tallies.record(
        "completeness-three-faces",
        complete_r == side_two == side_three,
        rows,
    )


def strict_battery(rows, tr, e_rows, n, full, tallies, faults=frozenset()):
    """Consequences for an asymmetric, negatively transitive relation: its
    incomparability is an equivalence, the union is transitive and the
    relation is saturated for the incomparability."""
    e_tr = transpose_rows(e_rows, n)
    script = tuple(a | b for a, b in zip(e_rows, rows))
    tallies.record(
        "incomparability-equivalence",
        _refl(e_rows, n) and _sym(e_rows, e_tr) and _trans(e_rows, n),
        rows,
    )
    tallies.record(
        "incomparability-union-transitive",
        _trans(script, n),
        rows,
    )
    tallies.record(
        "strict-saturated-for-incomparability",
        _saturated(rows, e_rows, n, faults),
        rows,
    )


def pair_battery(e_rows, f_rows, n, tallies, faults=frozenset()):
    """Joining an equivalence with a disjoint relation: reflexivity is
    free, transitivity and saturation trade places, and completeness
    matches relative completeness."""
    full = (1 << n) - 1
    r_rows = tuple(a | b for a, b in zip(e_rows, f_rows))
    r_tr = transpose_rows(r_rows, n)
    f_tr = transpose_rows(f_rows, n)
    trans_r = _trans(r_rows, n)
    f_sat_e = _saturated(f_rows, e_rows, n, faults)
    tallies.record("join-reflexive", _refl(r_rows, n), (e_rows, f_rows))
    tallies.record("join-transitive-saturates", not trans_r or f_sat_e, (e_rows, f_rows))
    tallies.record(
        "saturated-strict-saturates-join",
        not f_sat_e or _saturated(r_rows, e_rows, n, faults),
        (e_rows, f_rows),
    )
    tallies.record(
        "join-completeness-relative",
        _complete(r_rows, r_tr, full, n)
        == all(f_rows[i] | f_tr[i] == (full & ~e_rows[i]) for i in range(n)),
        (e_rows, f_rows),
    )
    if _trans(f_rows, n):
        f_sat_r = _compose_subset(r_rows, f_rows, f_rows, n) and _compose_subset(
            f_rows, r_rows, f_rows, n
        )
        if "saturation" in faults:
            f_sat_r = not f_sat_r
        agree = f_sat_r == trans_r == f_sat_e
        tallies.record("saturation-transitivity-equivalence", agree, (e_rows, f_rows))
        partitions = all(
            e_rows[i] & f_rows[i] == 0
            and e_rows[i] & f_tr[i] == 0
            and f_rows[i] & f_tr[i] == 0
            and e_rows[i] | f_rows[i] | f_tr[i] == full
            for i in range(n)
        )
        tallies.record(
            "partition-forces-saturation",
            not partitions or (f_sat_r and trans_r and f_sat_e),
            (e_rows, f_rows),
        )


# ---------------------------------------------------------------------------
# sweep assembly

def exhaustive_logic_sweep(n: int, tallies: SweepTallies, faults=frozenset()):
    for rows in all_rows(n):
        relation_battery(rows, n, tallies, faults)
    for e_rows in all_equivalence_rows(n):
        free = [(i, j) for i in range(n) for j in range(n) if not e_rows[i] >> j & 1]
        for code in range(1 << len(free)):
            f_rows = [0] * n
            for k, (i, j) in enumerate(free):
                if code >> k & 1:
                    f_rows[i] |= 1 << j
            pair_battery(e_rows, tuple(f_rows), n, tallies, faults)


def random_logic_sweep(
    total: int, sizes: Iterable[int], seed: int, tallies: SweepTallies, faults=frozenset()
):
    rnd = random.Random(seed)
    sizes = tuple(sizes)
    for _ in range(total):
        n = rnd.choice(sizes)
        rows = random_rows(rnd, n)
        relation_battery(rows, n, tallies, faults)
        preorder = random_preorder_rows(rnd, n)
        relation_battery(preorder, n, tallies, faults)
        e_rows = random_equivalence_rows(rnd, n)
        f_rows = tuple(r & ~e for r, e in zip(random_rows(rnd, n), e_rows))
        pair_battery(e_rows, f_rows, n, tallies, faults)


def decomposition_sweep(n: int, tallies: SweepTallies):
    """Round-trip every preorder of the carrier through bubbles, or through
    the linear factor when the strict part is not negatively transitive."""
    from .errors import NotNegativelyTransitive

    for relation in enumerate_preorders(n):
        try:
            system = bubble_decompose(relation)
        except NotNegativelyTransitive as exc:
            witness = exc.witness
            strict_ok = _witness_violates(relation, witness)
            factored = bourbaki_factor(relation)
            tallies.record("fallback-linear-factor", factored.order.n >= 1, relation.rows)
            tallies.record("refusal-witness-valid", strict_ok, relation.rows)
            continue
        rebuilt = bubble_compose(system)
        tallies.record("decomposition-round-trip", rebuilt.rows == relation.rows, relation.rows)


def _witness_violates(relation: Relation, witness: tuple[str, ...]) -> bool:
    from .relations import derived_parts

    if len(witness) != 3:
        return False
    x, y, z = witness
    strict = derived_parts(relation).asymmetric_part
    return strict.has(x, z) and not strict.has(x, y) and not strict.has(y, z)


def extension_sweep(n: int, tallies: SweepTallies):
    for rows in all_partial_order_rows(n):
        carrier = Carrier(tuple(f"e{i}" for i in range(n)))
        relation = Relation(carrier, rows)
        order = szpilrajn_extend(relation)
        extended = order.relation()
        grows = all(a | b == a for a, b in zip(extended.rows, rows))
        tallies.record("extension-contains-input", grows, rows)
        linear_input = _complete(rows, transpose_rows(rows, n), (1 << n) - 1, n)
        if linear_input:
            tallies.record("linear-fixed-point", extended.rows == rows, rows)


def system_roundtrip_sweep(count: int, seed: int, tallies: SweepTallies):
    rnd = random.Random(seed)
    for _ in range(count):
        system = random_bubble_system(rnd)
        relation = bubble_compose(system)
        again = bubble_decompose(relation)
        tallies.record("system-round-trip", again.same_shape(system), None)


def run_sweep(n: int, seed: int = DEFAULT_SEED, faults: Iterable[str] = ()) -> dict:
    """The full exhaustive suite for carrier size n (n <= 4)."""
    faults = frozenset(faults)
    unknown = faults - set(KNOWN_FAULTS)
    if unknown:
        raise ValidationError(f"unknown fault(s): {sorted(unknown)}")
    if not 1 <= n <= 4:
        from .errors import TooLarge

        raise TooLarge(
            f"exhaustive sweep supports 1 <= n <= 4, got {n}; "
            "use the randomized battery for larger carriers"
        )
    tallies = SweepTallies()
    exhaustive_logic_sweep(n, tallies, faults)
    filter_count = sum(1 for _ in enumerate_preorders(n))
    pair_count = count_split_pairs(n)
    tallies.record("preorder-counts-agree", filter_count == pair_count, (filter_count, pair_count))
    decomposition_sweep(n, tallies)
    extension_sweep(n, tallies)
    system_roundtrip_sweep(50, seed, tallies)
    return {
        "n": n,
        "seed": seed,
        "faults": sorted(faults),
        "preorder_count_filter": filter_count,
        "preorder_count_pairs": pair_count,
        "checks": tallies.as_dict(),
        "failures_total": tallies.failures_total(),
    }
