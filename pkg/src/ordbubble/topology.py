"""Finite interval topologies over a preorder's strict part.

Open sets are stored as bit-vectors in a frozenset; generation intersects
the subbase family to a fixpoint and then takes all unions, which for a
finite carrier produces exactly the generated topology.  Empty intervals
stay in listings (flagged) because gap detection is defined by their
emptiness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NotOpen, TooLarge, UnknownLabel, ValidationError
from .relations import Carrier, Relation, derived_parts, transpose_rows
from .structure import BubbleSystem, Loset, _require_preorder, bubble_compose

_GENERATION_CAP = 16
_COMPLETENESS_CAP = 12
_PROJECTION_CAP = 14


@dataclass(frozen=True)
class Interval:
    """An open interval of a strict part: bounded, or one of the two rays.

    ``extent`` is the realized subset; it is recomputable from the
    endpoints against the relation the interval was read from.
    """

    kind: str  # bounded | left_ray | right_ray
    lower: str | None
    upper: str | None
    extent: frozenset[str]

    @property
    def empty(self) -> bool:
        return not self.extent

    def describe(self) -> str:
        if self.kind == "bounded":
            return f"({self.lower},{self.upper})"
        if self.kind == "left_ray":
            return f"(<-,{self.upper})"
        return f"({self.lower},->)"


@dataclass(frozen=True)
class FiniteTopology:
    """A carrier plus the full family of open sets as bitmasks.

    Closure under pairwise union and intersection is validated at
    construction for families up to 1024 opens; beyond that (possible only
    near the 16-element generation cap) the generator's construction is
    the guarantee.
    """

    carrier: Carrier
    opens: frozenset[int]
    subbase: tuple[Interval, ...] = ()

    def __post_init__(self):
        full = (1 << self.carrier.n) - 1
        if 0 not in self.opens or full not in self.opens:
            raise ValidationError("a topology must contain the empty set and the carrier")
        for a in self.opens:
            if a & ~full:
                raise ValidationError("open set out of carrier range")
        if len(self.opens) <= 1024:
            members = tuple(self.opens)
            for a in members:
                for b in members:
                    if a & b not in self.opens or a | b not in self.opens:
                        raise ValidationError("open-set family not closed under union/intersection")

    def mask_of(self, labels: Iterable[str]) -> int:
        mask = 0
        for x in labels:
            mask |= 1 << self.carrier.position(x)
        return mask

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(e for j, e in enumerate(self.carrier.elements) if mask >> j & 1)

    def is_open(self, labels: Iterable[str]) -> bool:
        return self.mask_of(labels) in self.opens

    def sorted_opens(self) -> list[tuple[str, ...]]:
        """Opens ordered by size then lexicographically by label list."""
        return sorted((self.labels_of(m) for m in self.opens), key=lambda s: (len(s), s))


@dataclass(frozen=True)
class CheckOutcome:
    holds: bool
    witness: tuple[str, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    clopen_witness: tuple[str, ...] | None = None


@dataclass(frozen=True)
class CompletenessReport:
    all_sups: bool
    all_infs: bool
    compact: bool
    equivalence_holds: bool


@dataclass(frozen=True)
class ProjectionReport:
    """The six projection facts for a bubble coproduct and its index."""

    extent_bijection: bool
    extents_form_base: bool
    continuous_and_open: bool
    preimage_topology: bool
    connectedness_match: bool
    dense_image: bool

    def all_pass(self) -> bool:
        return all(
            (
                self.extent_bijection,
                self.extents_form_base,
                self.continuous_and_open,
                self.preimage_topology,
                self.connectedness_match,
                self.dense_image,
            )
        )


# ---------------------------------------------------------------------------
# intervals

def open_intervals(relation: Relation) -> list[Interval]:
    """All open intervals of the strict part: bounded ones over strictly
    related pairs, then the two rays of every element.  Intervals with an
    empty extent are retained and flagged via ``Interval.empty``."""
    _require_preorder(relation)
    strict = derived_parts(relation).asymmetric_part
    n = strict.n
    elems = relation.carrier.elements
    rows = strict.rows
    cols = transpose_rows(rows, n)

    def labels(mask: int) -> frozenset[str]:
        return frozenset(elems[j] for j in range(n) if mask >> j & 1)

    out: list[Interval] = []
    for i in range(n):
        for j in range(n):
            if rows[i] >> j & 1:
                out.append(Interval("bounded", elems[i], elems[j], labels(rows[i] & cols[j])))
    for i in range(n):
        out.append(Interval("left_ray", None, elems[i], labels(cols[i])))
        out.append(Interval("right_ray", elems[i], None, labels(rows[i])))
    return out


def unique_extents(intervals: Iterable[Interval]) -> list[frozenset[str]]:
    """Distinct interval extents in first-seen order."""
    seen: list[frozenset[str]] = []
    for interval in intervals:
        if interval.extent not in seen:
            seen.append(interval.extent)
    return seen


def generate_topology(carrier: Carrier, subbase: Sequence[Interval]) -> FiniteTopology:
    """The topology generated by the subbase: all unions of finite
    intersections of subbase extents, plus the empty set and the carrier."""
    n = carrier.n
    if n > _GENERATION_CAP:
        raise TooLarge(f"topology generation capped at {_GENERATION_CAP} elements, got {n}")
    full = (1 << n) - 1
    base_masks = []
    for interval in subbase:
        mask = 0
        for x in interval.extent:
            mask |= 1 << carrier.position(x)
        if mask not in base_masks:
            base_masks.append(mask)

    # close under pairwise intersection with the subbase (reaches every
    # finite intersection because s1 n ... n sk builds up incrementally)
    family = set(base_masks)
    worklist = list(base_masks)
    while worklist:
        current = worklist.pop()
        for s in base_masks:
            joined = current & s
            if joined not in family:
                family.add(joined)
                worklist.append(joined)

    # all unions of the intersection-closed family: every union is a union
    # of minimal neighbourhoods, of which there are at most n
    neighbourhood: dict[int, int] = {}
    for i in range(n):
        bit = 1 << i
        covering = [m for m in family if m & bit]
        if covering:
            acc = full
            for m in covering:
                acc &= m
            neighbourhood[i] = acc
    # every union of family members is a union of minimal neighbourhoods
    # (each point's smallest covering member), so the union closure is the
    # union DP over the <= n distinct neighbourhoods
    distinct = sorted(set(neighbourhood.values()))
    opens = {0, full}
    opens.update(family)
    k = len(distinct)
    union_of: list[int] = [0] * (1 << k)
    for code in range(1, 1 << k):
        low = (code & -code).bit_length() - 1
        union_of[code] = union_of[code & (code - 1)] | distinct[low]
    opens.update(union_of)

    topology = FiniteTopology(carrier, frozenset(opens), tuple(subbase))
    for mask in base_masks:
        if mask not in topology.opens:
            raise ValidationError("subbase extent escaped its own topology")
    return topology


def interval_topology(relation: Relation) -> FiniteTopology:
    return generate_topology(relation.carrier, open_intervals(relation))


# ---------------------------------------------------------------------------
# checks

def is_base(family: Sequence[Iterable[str]], topology: FiniteTopology) -> CheckOutcome:
    """True when every open set is a union of family members; the witness
    is the least open (size, then labels) that is not."""
    masks = []
    for member in family:
        mask = topology.mask_of(member)
        if mask not in topology.opens:
            raise NotOpen("family member is not open", tuple(sorted(member)))
        masks.append(mask)
    for labels in topology.sorted_opens():
        target = topology.mask_of(labels)
        acc = 0
        for mask in masks:
            if mask & ~target == 0:
                acc |= mask
        if acc != target:
            return CheckOutcome(False, labels)
    return CheckOutcome(True)


def connectivity_report(topology: FiniteTopology) -> ConnectivityReport:
    """Connected iff no proper nonempty open has an open complement."""
    full = (1 << topology.carrier.n) - 1
    for labels in topology.sorted_opens():
        mask = topology.mask_of(labels)
        if mask in (0, full):
            continue
        if (full & ~mask) in topology.opens:
            return ConnectivityReport(False, labels)
    return ConnectivityReport(True)


def gaps(relation: Relation) -> list[tuple[str, str]]:
    """Strictly related pairs whose open interval is empty, in carrier
    order."""
    _require_preorder(relation)
    strict = derived_parts(relation).asymmetric_part
    n = strict.n
    rows = strict.rows
    cols = transpose_rows(rows, n)
    elems = relation.carrier.elements
    out = []
    for i in range(n):
        for j in range(n):
            if rows[i] >> j & 1 and not rows[i] & cols[j]:
                out.append((elems[i], elems[j]))
    return out


def order_completeness_report(order: Loset) -> CompletenessReport:
    """Exhaustive subset sweep for suprema and infima, and a constructive
    compactness check on the interval topology.

    The empty subset requires a least and a greatest element (its supremum
    is the least element, its infimum the greatest).  Compactness of a
    finite space is witnessed, not assumed: from each canonical open cover
    a finite subcover is actually extracted.
    """
    n = order.n
    if n > _COMPLETENESS_CAP:
        raise TooLarge(f"completeness sweep capped at {_COMPLETENESS_CAP} elements, got {n}")
    ranks = [order.rank_of(x) for x in order.carrier.elements]

    def sup_exists(mask: int) -> bool:
        # supremum = least element of the upper-bound set; the empty subset
        # asks for a least element of the whole loset
        members = [i for i in range(n) if mask >> i & 1]
        uppers = [u for u in range(n) if all(ranks[b] <= ranks[u] for b in members)]
        return any(all(ranks[u] <= ranks[v] for v in uppers) for u in uppers)

    def inf_exists(mask: int) -> bool:
        members = [i for i in range(n) if mask >> i & 1]
        lowers = [u for u in range(n) if all(ranks[u] <= ranks[b] for b in members)]
        return any(all(ranks[v] <= ranks[u] for v in lowers) for u in lowers)

    all_sups = all(sup_exists(mask) for mask in range(1 << n))
    all_infs = all(inf_exists(mask) for mask in range(1 << n))

    topology = interval_topology(order.relation())
    compact = _finite_subcover_exists(topology)
    return CompletenessReport(
        all_sups=all_sups,
        all_infs=all_infs,
        compact=compact,
        equivalence_holds=compact == (all_sups and all_infs),
    )


def _finite_subcover_exists(topology: FiniteTopology) -> bool:
    """Extract a subcover of size <= n from the cover by all opens; any
    open cover of a finite space admits one by the same point-wise pick."""
    n = topology.carrier.n
    full = (1 << n) - 1
    ordered = [topology.mask_of(labels) for labels in topology.sorted_opens()]
    chosen = []
    for i in range(n):
        bit = 1 << i
        for mask in ordered:
            if mask & bit:
                chosen.append(mask)
                break
        else:
            return False
    acc = 0
    for mask in chosen:
        acc |= mask
    return acc == full and len(chosen) <= n


def continuity_check(
    mapping: Mapping[str, str], source: FiniteTopology, target: FiniteTopology
) -> CheckOutcome:
    """True iff the preimage of every open of the target is open in the
    source; the witness is the first failing target open."""
    for x in source.carrier.elements:
        if x not in mapping:
            raise ValidationError(f"map is not total: {x!r} has no image", (x,))
        if mapping[x] not in target.carrier:
            raise UnknownLabel(f"image {mapping[x]!r} not in target carrier", (x,))
    for labels in target.sorted_opens():
        members = set(labels)
        preimage = [x for x in source.carrier.elements if mapping[x] in members]
        if not source.is_open(preimage):
            return CheckOutcome(False, labels)
    return CheckOutcome(True)


# ---------------------------------------------------------------------------
# projections of bubble coproducts

def projection_check(system: BubbleSystem) -> ProjectionReport:
    """Verify the six topological facts tying a bubble coproduct to its
    index: extents correspond, extents form a base, the projection is
    continuous and open, the topology is the preimage topology, the two
    spaces agree on connectedness, and a minimal dense subset projects
    onto a dense subset."""
    system.validate()
    if system.carrier.n > _PROJECTION_CAP:
        raise TooLarge(f"projection check capped at {_PROJECTION_CAP} elements")
    relation = bubble_compose(system)
    projection = system.projection
    index_relation = system.index.relation()

    intervals_a = open_intervals(relation)
    intervals_i = open_intervals(index_relation)
    top_a = generate_topology(relation.carrier, intervals_a)
    top_i = generate_topology(index_relation.carrier, intervals_i)

    extents_a = {e for e in unique_extents(intervals_a) if e}
    extents_i = {e for e in unique_extents(intervals_i) if e}

    def project(subset: frozenset[str]) -> frozenset[str]:
        return frozenset(projection[x] for x in subset)

    def pull_back(subset: frozenset[str]) -> frozenset[str]:
        return frozenset(x for x in system.carrier.elements if projection[x] in subset)

    bijection = (
        {project(e) for e in extents_a} == extents_i
        and {pull_back(k) for k in extents_i} == extents_a
        and all(pull_back(project(e)) == e for e in extents_a)
        and all(project(pull_back(k)) == k for k in extents_i)
    )

    if system.index.n == 1:
        # a single bubble has no nonempty intervals; both spaces are the
        # indiscrete pair and the base question degenerates
        base = top_a.opens == frozenset({0, (1 << system.carrier.n) - 1})
    else:
        base = is_base(sorted(extents_a, key=sorted), top_a).holds

    continuous = all(
        top_a.mask_of(pull_back(frozenset(labels))) in top_a.opens
        for labels in top_i.sorted_opens()
    )
    open_map = all(
        top_i.mask_of(project(frozenset(labels))) in top_i.opens
        for labels in top_a.sorted_opens()
    )

    preimage_topology = top_a.opens == frozenset(
        top_a.mask_of(pull_back(frozenset(labels))) for labels in top_i.sorted_opens()
    )

    connected_match = (
        connectivity_report(top_a).connected == connectivity_report(top_i).connected
    )

    dense = _minimal_dense_subset(top_a)
    dense_image = _is_dense(top_i, {projection[x] for x in dense})

    return ProjectionReport(
        extent_bijection=bijection,
        extents_form_base=base,
        continuous_and_open=continuous and open_map,
        preimage_topology=preimage_topology,
        connectedness_match=connected_match,
        dense_image=dense_image,
    )


def _is_dense(topology: FiniteTopology, subset: Iterable[str]) -> bool:
    mask = topology.mask_of(subset)
    return all(
        mask & topology.mask_of(labels)
        for labels in topology.sorted_opens()
        if labels
    )


def _minimal_dense_subset(topology: FiniteTopology) -> set[str]:
    """A deterministic inclusion-minimal dense subset: hit every minimal
    nonempty open with its least element, then drop redundant picks."""
    nonempty = [topology.mask_of(labels) for labels in topology.sorted_opens() if labels]
    minimal = [
        m for m in nonempty if not any(other != m and other & ~m == 0 for other in nonempty)
    ]
    picks: set[str] = set()
    for mask in minimal:
        least = (mask & -mask).bit_length() - 1
        picks.add(topology.carrier.elements[least])
    for label in sorted(picks, reverse=True):
        trimmed = picks - {label}
        if trimmed and _is_dense(topology, trimmed):
            picks = trimmed
    return picks
