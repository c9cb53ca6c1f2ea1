"""Exact Ramsey decisions for finite algebras, unary algebras and residue-shift systems.

Finite algebras are decided through generated subuniverses: an algebra is
Ramsey exactly when every one-generated subuniverse contains an idempotent.
All-unary algebras are decided through reachability of the common fixed
point set ``S``.  Every verdict carries a certificate that ``verify_*``
re-checks from scratch.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .algebra import (
    ElementSet,
    FiniteAlgebra,
    Operation,
    all_subuniverses,
    generated_subuniverse,
    idempotents,
    validate_algebra,
)
from .errors import CarrierTooLarge, EquivalenceViolation, FixedPointPresent, InvalidResidueSystem
from .reductions import ReductionSchedule, apply_schedule, search_homogeneous
from .terms import Identity, Node, Term, X, evaluate_term


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    ``certificates`` maps each element (or residue class) to its evidence:
    ``(idempotent, term)`` for finite algebras, a word of operation indices
    for unary algebras.  ``counterexample`` is the element whose generated
    set or orbit misses the target when the verdict is negative.
    """

    ramsey: bool
    certificates: dict = field(default_factory=dict)
    counterexample: int | None = None
    detail: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "Ramsey" if self.ramsey else "NotRamsey"


def generation_terms(alg: FiniteAlgebra, a: int) -> dict[int, Term]:
    """A term ``t_v`` for each ``v`` generated by ``a``, with ``t_v(a, ..., a) == v``.

    Breadth-first, so each element gets a term built from the earliest-found
    elements; ties follow operation order and then argument order.
    """
    terms: dict[int, Term] = {a: X}
    order = [a]
    changed = True
    while changed:
        changed = False
        known = list(order)
        for i, op in enumerate(alg.ops):
            for args in product(known, repeat=op.arity):
                v = alg.apply(i, *args)
                if v not in terms:
                    terms[v] = Node(i, tuple(terms[x] for x in args))
                    order.append(v)
                    changed = True
    return terms


def decide_finite_ramsey(alg: FiniteAlgebra) -> Verdict:
    idem = set(idempotents(alg))
    certs = {}
    for a in alg.elements:
        gen = generated_subuniverse(alg, a)
        hits = [e for e in gen if e in idem]
        if not hits:
            return Verdict(False, certs, a, {"generated": gen, "idempotents": tuple(sorted(idem))})
        e = hits[0]
        certs[a] = (e, generation_terms(alg, a)[e])
    return Verdict(True, certs, None, {"idempotents": tuple(sorted(idem))})


def verify_finite_verdict(alg: FiniteAlgebra, v: Verdict) -> bool:
    idem = set(idempotents(alg))
    interp = alg.interpretation()
    if v.ramsey:
        for a in alg.elements:
            e, t = v.certificates[a]
            if e not in idem or evaluate_term(t, interp, [a] * t.arity) != e:
                return False
        return True
    return idem.isdisjoint(generated_subuniverse(alg, v.counterexample))


def degenerate_schedule(term: Term, copies: int) -> ReductionSchedule:
    """``copies`` consecutive applications of ``term`` to a constant prefix."""
    k = term.arity
    return ReductionSchedule(tuple((term, tuple(range(j * k, (j + 1) * k))) for j in range(copies)))


@dataclass(frozen=True)
class CrosscheckReport:
    carrier_size: int
    verdicts: dict
    sampled: dict
    agree: bool


def crosscheck_finite_theorem(
    alg: FiniteAlgebra, cap: int = 6, sample_prefix_cap: int = 12
) -> CrosscheckReport:
    """Evaluate the equivalent conditions of the finite characterization separately.

    * generated subuniverses of single elements contain idempotents;
    * every constant sequence reduces to a constant idempotent sequence,
      checked by re-applying an explicit schedule;
    * every subuniverse contains an idempotent;
    * sampled: bounded homogeneous search on constant prefixes with the
      discrete coloring.  Recorded, and compared only where it completed.

    Raises EquivalenceViolation on disagreement.
    """
    n = alg.carrier_size
    if n > cap:
        raise CarrierTooLarge(f"carrier of size {n} exceeds crosscheck cap {cap}")
    idem = set(idempotents(alg))
    interp = alg.interpretation()

    cond_generated = all(idem & set(generated_subuniverse(alg, a)) for a in alg.elements)

    cond_degenerate = True
    terms_for = {}
    for a in alg.elements:
        terms = generation_terms(alg, a)
        terms_for[a] = terms
        found = False
        for e in sorted(set(terms) & idem):
            t = terms[e]
            prefix = [a] * (2 * t.arity)
            out = apply_schedule(degenerate_schedule(t, 2), prefix, interp)
            if out == (e, e):
                found = True
                break
        cond_degenerate = cond_degenerate and found

    cond_subalgebras = all(idem & set(u) for u in all_subuniverses(alg, size_cap=cap))

    sampled = {}
    target = max((op.arity for op in alg.ops), default=1)
    for a in alg.elements:
        reach = [terms_for[a][e] for e in sorted(set(terms_for[a]) & idem)]
        if reach:
            t = min(reach, key=lambda s: (s.size, s.arity))
            length, node_cap = target * t.arity, max(t.size, 1)
        else:
            length, node_cap = target, 1
        if length > sample_prefix_cap or node_cap > 4:
            sampled[a] = None
            continue
        hit = search_homogeneous([a] * length, interp, lambda v: v, target, node_cap=node_cap)
        sampled[a] = hit is not None
    conclusive = [s for s in sampled.values() if s is not None]
    cond_sampled = all(conclusive) if conclusive else None

    verdicts = {
        "generated": cond_generated,
        "degenerate": cond_degenerate,
        "subalgebras": cond_subalgebras,
    }
    agree = len(set(verdicts.values())) == 1
    if cond_sampled is not None:
        # a completed sample is exact here: discrete coloring, target = max arity
        agree = agree and cond_sampled == cond_generated
    if not agree:
        raise EquivalenceViolation(f"conditions disagree: {verdicts}, sampled={sampled}")
    return CrosscheckReport(n, verdicts, sampled, agree)


def random_algebra(rng: random.Random, max_n: int = 5, max_ops: int = 2, max_arity: int = 2) -> FiniteAlgebra:
    n = rng.randint(1, max_n)
    ops = []
    for i in range(rng.randint(1, max_ops)):
        k = rng.randint(1, max_arity)
        ops.append(Operation(f"f{i}", k, tuple(rng.randrange(n) for _ in range(n**k))))
    return validate_algebra(FiniteAlgebra(n, tuple(ops)))


# --- three-part partitions ---------------------------------------------------

Partition3 = tuple[int, ...]


def partition_blocks(labels: Partition3) -> tuple[ElementSet, ElementSet, ElementSet]:
    return tuple(tuple(x for x, p in enumerate(labels) if p == part) for part in (1, 2, 3))


def katetov_partition(n: int, table: Sequence[int]) -> Partition3:
    """Label each point 1, 2 or 3 so that ``x`` and ``T(x)`` always differ.

    Each component of the functional graph of ``T`` has exactly one cycle.
    Cycles get alternating labels 1/2 (with a single 3 closing an odd cycle);
    tree vertices are labelled after their image, alternating away from it.
    """
    if len(table) != n:
        raise ValueError(f"map table needs {n} entries, got {len(table)}")
    for x, y in enumerate(table):
        if not 0 <= y < n:
            raise ValueError(f"T({x}) = {y} outside 0..{n - 1}")
        if x == y:
            raise FixedPointPresent(x)
    labels = [0] * n
    state = [0] * n  # 0 unseen, 1 on current walk, 2 done
    for start in range(n):
        if state[start]:
            continue
        walk = []
        x = start
        while state[x] == 0:
            state[x] = 1
            walk.append(x)
            x = table[x]
        if state[x] == 1:
            cycle = walk[walk.index(x) :]
            for j, c in enumerate(cycle):
                labels[c] = 1 if j % 2 == 0 else 2
            if len(cycle) % 2:
                labels[cycle[-1]] = 3
            tail = walk[: walk.index(x)]
        else:
            tail = walk
        for y in reversed(tail):
            labels[y] = 2 if labels[table[y]] == 1 else 1
        for y in walk:
            state[y] = 2
    return tuple(labels)


def build_discriminating_partition(alg: FiniteAlgebra, unary_ops: Sequence[int] | None = None) -> Partition3:
    """Partition moving every non-fixed element out of its part under some unary op.

    Adjoins a point ``alpha = n``: fixed points map to ``alpha``, ``alpha`` maps
    to ``0``, and everything else goes to its image under the first unary op
    that moves it.  That map has no fixed point; its three-part partition,
    restricted to the carrier, is returned.
    """
    if unary_ops is None:
        unary_ops = alg.unary_indices()
    for i in unary_ops:
        if alg.ops[i].arity != 1:
            raise ValueError(f"operation {alg.ops[i].name!r} is not unary")
    n = alg.carrier_size
    alpha = n
    table = []
    for a in alg.elements:
        movers = [alg.apply(i, a) for i in unary_ops if alg.apply(i, a) != a]
        table.append(movers[0] if movers else alpha)
    table.append(0)
    return katetov_partition(n + 1, table)[:n]


def fixed_set(alg: FiniteAlgebra, unary_ops: Sequence[int] | None = None) -> ElementSet:
    if unary_ops is None:
        unary_ops = alg.unary_indices()
    return tuple(a for a in alg.elements if all(alg.apply(i, a) == a for i in unary_ops))


def discriminates(alg: FiniteAlgebra, labels: Partition3, unary_ops: Sequence[int] | None = None) -> bool:
    if unary_ops is None:
        unary_ops = alg.unary_indices()
    s = set(fixed_set(alg, unary_ops))
    return all(
        any(labels[alg.apply(i, a)] != labels[a] for i in unary_ops) for a in alg.elements if a not in s
    )


def _backward_words(n: int, targets: set[int], step) -> dict[int, tuple[int, ...]]:
    """Shortest op-index words leading each point into ``targets`` (BFS on reversed edges)."""
    preds: dict[int, list[tuple[int, int]]] = {x: [] for x in range(n)}
    for x in range(n):
        for op, y in step(x):
            preds[y].append((x, op))
    words = {t: () for t in sorted(targets)}
    queue = deque(sorted(targets))
    while queue:
        y = queue.popleft()
        for x, op in sorted(preds[y]):
            if x not in words:
                words[x] = (op,) + words[y]
                queue.append(x)
    return words


def decide_unary_finite(alg: FiniteAlgebra) -> Verdict:
    if any(op.arity != 1 for op in alg.ops):
        raise ValueError("decide_unary_finite needs an algebra whose operations are all unary")
    s = set(fixed_set(alg))
    words = _backward_words(
        alg.carrier_size, s, lambda x: [(i, alg.apply(i, x)) for i in range(len(alg.ops))]
    )
    for a in alg.elements:
        if a not in words:
            return Verdict(False, {}, a, {"fixed": tuple(sorted(s))})
    return Verdict(True, dict(sorted(words.items())), None, {"fixed": tuple(sorted(s))})


def verify_unary_verdict(alg: FiniteAlgebra, v: Verdict) -> bool:
    s = set(fixed_set(alg))
    if v.ramsey:
        for a in alg.elements:
            x = a
            for i in v.certificates[a]:
                x = alg.apply(i, x)
            if x not in s:
                return False
        return True
    # the orbit of the counterexample avoids S
    seen = {v.counterexample}
    stack = [v.counterexample]
    while stack:
        x = stack.pop()
        for i in range(len(alg.ops)):
            y = alg.apply(i, x)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return s.isdisjoint(seen)


@dataclass(frozen=True)
class ResidueUnarySystem:
    """Unary maps on the naturals acting on class ``r (mod m)`` as ``x -> x + shifts[r]``."""

    modulus: int
    ops: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(tuple(int(c) for c in op) for op in self.ops))
        m = self.modulus
        if m < 1:
            raise InvalidResidueSystem(f"modulus must be positive, got {m}")
        if not self.ops:
            raise InvalidResidueSystem("need at least one operation")
        for j, shifts in enumerate(self.ops):
            if len(shifts) != m:
                raise InvalidResidueSystem(f"operation {j} has {len(shifts)} shifts, expected {m}")
            for r, c in enumerate(shifts):
                if r + c < 0:
                    raise InvalidResidueSystem(
                        f"operation {j} sends {r} to {r + c}, outside the naturals"
                    )

    def apply(self, op: int, x: int) -> int:
        return x + self.ops[op][x % self.modulus]

    def fixed_classes(self) -> tuple[int, ...]:
        return tuple(r for r in range(self.modulus) if all(op[r] == 0 for op in self.ops))


def decide_unary_residue(sys: ResidueUnarySystem) -> Verdict:
    """Every class must reach a class fixed by all ops.

    Because ``S`` is a union of whole classes, reaching a fixed class lands
    the integer itself in ``S``, so the class graph decides the question.
    """
    m = sys.modulus
    s = set(sys.fixed_classes())
    words = _backward_words(
        m, s, lambda r: [(j, (r + op[r]) % m) for j, op in enumerate(sys.ops)]
    )
    for r in range(m):
        if r not in words:
            return Verdict(False, {}, r, {"fixed_classes": tuple(sorted(s))})
    return Verdict(True, dict(sorted(words.items())), None, {"fixed_classes": tuple(sorted(s))})


def verify_residue_verdict(sys: ResidueUnarySystem, v: Verdict, samples_per_class: int = 3) -> bool:
    """Re-execute class words on actual integers ``r, r + m, r + 2m, ...``."""
    m = sys.modulus
    s = set(sys.fixed_classes())
    if v.ramsey:
        for r in range(m):
            for k in range(samples_per_class):
                x = r + k * m
                for j in v.certificates[r]:
                    x = sys.apply(j, x)
                    if x < 0:
                        return False
                if x % m not in s:
                    return False
        return True
    seen = {v.counterexample}
    stack = [v.counterexample]
    while stack:
        r = stack.pop()
        for op in sys.ops:
            t = (r + op[r]) % m
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return s.isdisjoint(seen)
