"""Reductions between finite prefixes, finite-reduction sets and homogeneous search.

Infinite sequences are represented by finite prefixes, and every search takes
explicit bounds.  ``None`` from a search means "nothing within these bounds",
never a statement about the infinite sequence.

The workhorse is ``reachable``: a dynamic program over triples
``(value, first, last)`` that records, for every value some term can produce
from a subsequence of the prefix starting at ``first`` and ending at
``last``, the fewest nodes needed and one term/index witness achieving it.
Children of a node occupy disjoint, ordered index ranges, so minimum node
counts compose and the table is exact for any node cap.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Hashable, Sequence

from .errors import ArityMismatch, IndexOutOfRange, ScheduleError
from .terms import Interpretation, Node, Term, X, evaluate_term, substitute

Prefix = tuple


@dataclass(frozen=True)
class ReductionSchedule:
    """``entries[k] = (term, indices)`` produces ``b[k] = term(a[indices])``."""

    entries: tuple[tuple[Term, tuple[int, ...]], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple((t, tuple(int(i) for i in idx)) for t, idx in self.entries)
        )

    def __len__(self):
        return len(self.entries)

    def flat_indices(self) -> tuple[int, ...]:
        return tuple(i for _, idx in self.entries for i in idx)

    @property
    def node_count(self) -> int:
        return sum(t.size for t, _ in self.entries)

    def validate(self, source_length: int | None = None) -> None:
        for t, idx in self.entries:
            if len(idx) != t.arity:
                raise ArityMismatch(f"term of arity {t.arity} given {len(idx)} indices")
        flat = self.flat_indices()
        if any(a >= b for a, b in zip(flat, flat[1:])):
            raise ScheduleError(f"index blocks are not strictly increasing: {flat}")
        if flat and flat[0] < 0:
            raise IndexOutOfRange(f"negative index {flat[0]}")
        if source_length is not None and flat and flat[-1] >= source_length:
            raise IndexOutOfRange(f"index {flat[-1]} outside prefix of length {source_length}")


def identity_schedule(length: int) -> ReductionSchedule:
    return ReductionSchedule(tuple((X, (i,)) for i in range(length)))


def apply_schedule(s: ReductionSchedule, a: Sequence, interp: Interpretation) -> Prefix:
    s.validate(len(a))
    return tuple(evaluate_term(t, interp, [a[i] for i in idx]) for t, idx in s.entries)


def compose_schedules(outer: ReductionSchedule, inner: ReductionSchedule) -> ReductionSchedule:
    """If ``inner`` maps ``a`` to ``b`` and ``outer`` maps ``b`` to ``c``, map ``a`` to ``c``."""
    entries = []
    for t, idx in outer.entries:
        if idx and idx[-1] >= len(inner):
            raise IndexOutOfRange(f"outer schedule reads index {idx[-1]} of a {len(inner)}-prefix")
        leaves = [inner.entries[j][0] for j in idx]
        flat = tuple(i for j in idx for i in inner.entries[j][1])
        entries.append((substitute(t, leaves), flat))
    return ReductionSchedule(tuple(entries))


@dataclass(frozen=True)
class Reach:
    value: Hashable
    first: int
    last: int
    cost: int
    term: Term
    indices: tuple[int, ...]


def _cost_splits(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for c in range(total + 1):
        for rest in _cost_splits(total - c, parts - 1):
            yield (c,) + rest


class _Layer:
    """Reach records of one cost, sorted by first index for range queries."""

    def __init__(self, items):
        self.items = sorted(items, key=lambda r: (r.first, r.last))
        self.firsts = [r.first for r in self.items]

    def after(self, pos: int):
        return self.items[bisect_right(self.firsts, pos) :]


def reachable(a: Sequence, interp: Interpretation, node_cap: int | None) -> dict[tuple, Reach]:
    """Min-node witnesses for every ``(value, first, last)`` producible from ``a``.

    With ``node_cap=None`` the closure is computed without a node bound, which
    terminates only when the value space is finite.
    """
    sig = interp.signature
    fns = interp.functions
    best: dict[tuple, Reach] = {}
    layer0 = []
    for i, v in enumerate(a):
        r = Reach(v, i, i, 0, X, (i,))
        best[(v, i, i)] = r
        layer0.append(r)
    if node_cap is None:
        return _closure(best, layer0, interp)
    layers = [_Layer(layer0)]
    for cost in range(1, node_cap + 1):
        fresh = []
        for op, (_, k) in enumerate(sig.ops):
            fn = fns[op]
            for split in _cost_splits(cost - 1, k):
                for kids in _ordered_choices([layers[c] for c in split], -1):
                    value = fn(*(r.value for r in kids))
                    key = (value, kids[0].first, kids[-1].last)
                    if key in best:
                        continue
                    r = Reach(
                        value,
                        kids[0].first,
                        kids[-1].last,
                        cost,
                        Node(op, tuple(c.term for c in kids)),
                        tuple(i for c in kids for i in c.indices),
                    )
                    best[key] = r
                    fresh.append(r)
        layers.append(_Layer(fresh))
    return best


def _ordered_choices(layers, after):
    if not layers:
        yield ()
        return
    for r in layers[0].after(after):
        for rest in _ordered_choices(layers[1:], r.last):
            yield (r,) + rest


def _closure(best, seed, interp):
    sig = interp.signature
    fns = interp.functions
    frontier = seed
    while frontier:
        everything = _Layer(best.values())
        fresh_layer = _Layer(frontier)
        fresh = []
        for op, (_, k) in enumerate(sig.ops):
            fn = fns[op]
            # every new combination uses at least one record from the last round
            for pos in range(k):
                choice = [everything] * k
                choice[pos] = fresh_layer
                for kids in _ordered_choices(choice, -1):
                    value = fn(*(r.value for r in kids))
                    key = (value, kids[0].first, kids[-1].last)
                    if key in best:
                        continue
                    r = Reach(
                        value,
                        kids[0].first,
                        kids[-1].last,
                        1 + sum(c.cost for c in kids),
                        Node(op, tuple(c.term for c in kids)),
                        tuple(i for c in kids for i in c.indices),
                    )
                    best[key] = r
                    fresh.append(r)
        frontier = fresh
    return best


def finite_reductions(a: Sequence, interp: Interpretation, node_cap: int | None = 3) -> tuple:
    """Values ``f(b)`` for terms ``f`` with at most ``node_cap`` nodes and subsequences ``b`` of ``a``."""
    return tuple(sorted({key[0] for key in reachable(a, interp, node_cap)}))


def fs_oracle(a: Sequence[int]) -> tuple[int, ...]:
    """Nonempty finite subset sums, by direct subset enumeration."""
    sums = set()
    for k in range(1, len(a) + 1):
        for c in combinations(a, k):
            sums.add(sum(c))
    return tuple(sorted(sums))


def is_reduction_prefix(
    b: Sequence, a: Sequence, interp: Interpretation, node_cap: int = 3
) -> ReductionSchedule | None:
    """A schedule producing ``b`` from ``a`` with each term using at most ``node_cap`` nodes.

    Among valid schedules, returns one with the fewest total nodes, breaking
    ties by the leftmost index blocks.  ``None`` certifies that no schedule
    exists within the bound.
    """
    b = tuple(b)
    by_value: dict = {}
    for r in reachable(a, interp, node_cap).values():
        by_value.setdefault(r.value, []).append(r)
    for rs in by_value.values():
        rs.sort(key=lambda r: (r.first, r.last))
    inf = float("inf")

    @lru_cache(maxsize=None)
    def cost(k, after):
        if k == len(b):
            return 0
        out = inf
        for r in by_value.get(b[k], ()):
            if r.first > after:
                out = min(out, r.cost + cost(k + 1, r.last))
        return out

    if cost(0, -1) == inf:
        return None
    entries = []
    after = -1
    for k in range(len(b)):
        target = cost(k, after)
        chosen = min(
            (r for r in by_value[b[k]] if r.first > after and r.cost + cost(k + 1, r.last) == target),
            key=lambda r: (r.first, r.last),
        )
        entries.append((chosen.term, chosen.indices))
        after = chosen.last
    return ReductionSchedule(tuple(entries))


@dataclass(frozen=True)
class HomogeneousHit:
    prefix: Prefix
    schedule: ReductionSchedule
    color: int
    fr: tuple


def search_homogeneous(
    a: Sequence,
    interp: Interpretation,
    coloring: Callable[[object], int],
    target_len: int,
    node_cap: int = 3,
    fr_cap: int | None = None,
    want_color: int | None = None,
) -> HomogeneousHit | None:
    """First reduction of ``a`` of length ``target_len`` whose bounded FR set is monochromatic.

    Candidates are tried in order of total node count, then leftmost index
    blocks.  Each entry uses at most ``node_cap`` nodes; the FR set of a
    candidate is computed with ``fr_cap`` (defaults to ``node_cap``).  With
    ``want_color`` only that color counts as a hit.
    """
    if target_len < 1:
        raise ValueError("target_len must be positive")
    if fr_cap is None:
        fr_cap = node_cap
    records = sorted(reachable(a, interp, node_cap).values(), key=lambda r: (r.first, r.last, r.cost))
    firsts = [r.first for r in records]
    verdicts: dict[tuple, tuple | None] = {}

    def check(values):
        if values not in verdicts:
            fr = finite_reductions(values, interp, fr_cap)
            colors = {coloring(v) for v in fr}
            hit = None
            if len(colors) == 1:
                (c,) = colors
                if want_color is None or c == want_color:
                    hit = (c, fr)
            verdicts[values] = hit
        return verdicts[values]

    def dfs(chosen, after, budget):
        if len(chosen) == target_len:
            if budget == 0:
                yield chosen
            return
        for r in records[bisect_right(firsts, after) :]:
            if r.cost <= budget:
                yield from dfs(chosen + (r,), r.last, budget - r.cost)

    for total in range(target_len * node_cap + 1):
        for chosen in dfs((), -1, total):
            values = tuple(r.value for r in chosen)
            hit = check(values)
            if hit is not None:
                schedule = ReductionSchedule(tuple((r.term, r.indices) for r in chosen))
                return HomogeneousHit(values, schedule, hit[0], hit[1])
    return None
