"""Monotone polynomials over the integers and the witness constructions built on them.

A monotone monomial is a strictly increasing tuple of positive variable
indices; a monotone polynomial is a finite set of such tuples (the empty set
is the zero polynomial).  Orderly terms over ``{add, mul}`` translate to
these, and on a suitable witness sequence distinct polynomials take distinct
integer values.  That injectivity is what lets the integral-domain census
and the sum/product checker work on polynomial *shapes* instead of values.
"""
from __future__ import annotations

import math
import operator
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .errors import (
    DegenerateEquation,
    IndexOutOfRange,
    IndexOverlap,
    InsufficientVectors,
    ModeScaleExceeded,
    OverlappingMonomials,
    ScaleExceeded,
)
from .terms import Identity, Interpretation, Node, Signature, Term, X, enumerate_terms, term_arity

Monomial = tuple[int, ...]

RING_SIGNATURE = Signature.of(("add", 2), ("mul", 2))
ADD, MUL = 0, 1
INTEGER_RING = Interpretation(RING_SIGNATURE, (operator.add, operator.mul))


def monomial_key(m: Monomial):
    return (len(m), m)


@dataclass(frozen=True)
class MonotonePolynomial:
    monomials: tuple[Monomial, ...] = ()

    def __post_init__(self):
        mons = tuple(tuple(int(i) for i in m) for m in self.monomials)
        for m in mons:
            if not m:
                raise ValueError("monomials must be nonempty")
            if m[0] < 1 or any(a >= b for a, b in zip(m, m[1:])):
                raise ValueError(f"monomial {m} is not a strictly increasing tuple of positive indices")
        if len(set(mons)) != len(mons):
            raise OverlappingMonomials("repeated monomial in polynomial")
        object.__setattr__(self, "monomials", tuple(sorted(mons, key=monomial_key)))

    @classmethod
    def of(cls, *monomials: Iterable[int]) -> "MonotonePolynomial":
        return cls(tuple(tuple(m) for m in monomials))

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, m):
        return tuple(m) in self.monomials

    def is_zero(self) -> bool:
        return not self.monomials

    def variables(self) -> tuple[int, ...]:
        return tuple(sorted({i for m in self.monomials for i in m}))

    def max_index(self) -> int:
        return max((m[-1] for m in self.monomials), default=0)

    def min_index(self) -> int:
        return min((m[0] for m in self.monomials), default=0)

    def total_length(self) -> int:
        return sum(len(m) for m in self.monomials)

    def shift(self, offset: int) -> "MonotonePolynomial":
        return MonotonePolynomial(tuple(tuple(i + offset for i in m) for m in self.monomials))

    def reindex(self, indices: Sequence[int]) -> "MonotonePolynomial":
        """Rename variable ``x_k`` to ``x_{indices[k-1]}`` (``indices`` strictly increasing)."""
        return MonotonePolynomial(tuple(tuple(indices[i - 1] for i in m) for m in self.monomials))

    def __str__(self):
        if not self.monomials:
            return "0"
        return " + ".join("*".join(f"x{i}" for i in m) for m in self.monomials)


ZERO = MonotonePolynomial()


def mp_add(p: MonotonePolynomial, q: MonotonePolynomial) -> MonotonePolynomial:
    common = set(p.monomials) & set(q.monomials)
    if common:
        raise OverlappingMonomials(f"shared monomials {sorted(common)}")
    return MonotonePolynomial(p.monomials + q.monomials)


def mp_mul(p: MonotonePolynomial, q: MonotonePolynomial) -> MonotonePolynomial:
    if p.is_zero() or q.is_zero():
        return ZERO
    if p.max_index() >= q.min_index():
        raise IndexOverlap(
            f"left factor reaches x{p.max_index()} but right factor starts at x{q.min_index()}"
        )
    return MonotonePolynomial(tuple(a + b for a in p.monomials for b in q.monomials))


def translate_term_to_poly(t: Term, start_index: int = 1) -> MonotonePolynomial:
    """The monotone polynomial computed by a term over ``{add, mul}``.

    The variables are exactly ``x_start .. x_{start+arity-1}``.
    """
    if isinstance(t, Identity):
        return MonotonePolynomial(((start_index,),))
    left, right = t.children
    p = translate_term_to_poly(left, start_index)
    q = translate_term_to_poly(right, start_index + left.arity)
    return mp_add(p, q) if t.op == ADD else mp_mul(p, q)


def evaluate_poly(p: MonotonePolynomial, args: Sequence[int]) -> int:
    """Evaluate with ``args[0]`` bound to ``x_1``."""
    if p.max_index() > len(args):
        raise IndexOutOfRange(f"polynomial uses x{p.max_index()} but only {len(args)} arguments given")
    return sum(math.prod(args[i - 1] for i in m) for m in p.monomials)


def all_monomials(n: int) -> list[Monomial]:
    return sorted(
        (c for k in range(1, n + 1) for c in combinations(range(1, n + 1), k)), key=monomial_key
    )


def all_polynomials(n: int) -> list[MonotonePolynomial]:
    """All of MP_n: ``2 ** (2 ** n - 1)`` polynomials."""
    mons = all_monomials(n)
    out = []
    for mask in range(1 << len(mons)):
        out.append(MonotonePolynomial(tuple(m for j, m in enumerate(mons) if mask >> j & 1)))
    return out


@dataclass(frozen=True)
class SplitDecomposition:
    """Splitting ``M`` at its top variable ``x_top``.

    ``lower`` holds monomials not ending in ``top``; ``prefixes`` holds the
    nonempty ``alpha`` with ``alpha + (top,)`` in ``M``; ``has_singleton``
    records whether ``(top,)`` itself is in ``M``.
    """

    top: int
    lower: MonotonePolynomial
    prefixes: MonotonePolynomial
    has_singleton: bool

    def reassemble(self) -> MonotonePolynomial:
        mons = list(self.lower.monomials) + [a + (self.top,) for a in self.prefixes.monomials]
        if self.has_singleton:
            mons.append((self.top,))
        return MonotonePolynomial(tuple(mons))


def split(p: MonotonePolynomial, top: int) -> SplitDecomposition:
    if p.max_index() > top:
        raise IndexOutOfRange(f"polynomial uses x{p.max_index()} above split index {top}")
    lower = tuple(m for m in p.monomials if m[-1] < top)
    prefixes = tuple(m[:-1] for m in p.monomials if m[-1] == top and len(m) > 1)
    return SplitDecomposition(
        top, MonotonePolynomial(lower), MonotonePolynomial(prefixes), (top,) in p.monomials
    )


def solve_forbidden_b(
    m: MonotonePolynomial, n: MonotonePolynomial, prefix: Sequence[int], epsilon: int
) -> int | None:
    """The unique ``b`` with ``m(prefix, b) == n(prefix, b) + epsilon``, if any.

    Both sides are affine in ``b``, so the equation reads
    ``(s_m'' - s_n'' + d) * b == s_n' - s_m' + epsilon``.
    """
    top = len(prefix) + 1
    if m == n:
        raise ValueError("polynomials must be distinct")
    sm, sn = split(m, top), split(n, top)
    coef = (
        evaluate_poly(sm.prefixes, prefix)
        - evaluate_poly(sn.prefixes, prefix)
        + int(sm.has_singleton)
        - int(sn.has_singleton)
    )
    rhs = evaluate_poly(sn.lower, prefix) - evaluate_poly(sm.lower, prefix) + epsilon
    if coef == 0:
        if rhs == 0:
            raise DegenerateEquation(
                f"{m} = {n} + {epsilon} holds for every b; prefix {list(prefix)} is not a witness"
            )
        return None
    if rhs % coef:
        return None
    return rhs // coef


GREEDY_MAX = 3
POWERS_MAX = 8


@dataclass(frozen=True)
class WitnessSequence:
    values: tuple[int, ...]
    mode: str

    def __len__(self):
        return len(self.values)


def forbidden_values(prefix: Sequence[int]) -> set[int]:
    """Every ``b`` that would break injectivity (or create a difference of +-1) in MP_{n+1}."""
    polys = all_polynomials(len(prefix) + 1)
    bad = set()
    for m, n in permutations(polys, 2):
        for eps in (0, 1):
            b = solve_forbidden_b(m, n, prefix, eps)
            if b is not None:
                bad.add(b)
    return bad


def build_witness(length: int, mode: str = "powers") -> WitnessSequence:
    if mode == "powers":
        if not 1 <= length <= POWERS_MAX:
            raise ModeScaleExceeded(f"powers mode supports 1..{POWERS_MAX} terms, got {length}")
        return WitnessSequence(tuple(2 ** (3**i) for i in range(1, length + 1)), mode)
    if mode == "greedy":
        if not 1 <= length <= GREEDY_MAX:
            raise ModeScaleExceeded(f"greedy mode supports 1..{GREEDY_MAX} terms, got {length}")
        # smallest candidate avoiding 0 and the unit +-1
        values = [2]
        while len(values) < length:
            bad = forbidden_values(values)
            b = 2
            while b in bad:
                b += 1
            values.append(b)
        return WitnessSequence(tuple(values), mode)
    raise ValueError(f"unknown witness mode {mode!r}")


def ordered_blocks(length: int, sizes: Sequence[int]):
    """Yield index tuples (0-based) for consecutive blocks of the given sizes drawn in order."""
    total = sum(sizes)
    for idx in combinations(range(length), total):
        blocks = []
        pos = 0
        for s in sizes:
            blocks.append(idx[pos : pos + s])
            pos += s
        yield blocks


def _terms_by_arity(node_cap: int, max_arity: int) -> dict[int, list[Term]]:
    return {k: enumerate_terms(RING_SIGNATURE, k, node_cap) for k in range(1, max_arity + 1)}


def two_block_instances(length: int, node_cap: int):
    """Yield ``(f, idx1, g, idx2)`` with ``idx1`` entirely before ``idx2``."""
    terms = _terms_by_arity(node_cap, length)
    for k1 in range(1, length):
        for k2 in range(1, length - k1 + 1):
            if not terms[k1] or not terms[k2]:
                continue
            for b1, b2 in ordered_blocks(length, (k1, k2)):
                for f in terms[k1]:
                    for g in terms[k2]:
                        yield f, b1, g, b2


@dataclass(frozen=True)
class SumProductReport:
    prefix: tuple[int, ...]
    node_cap: int
    sum_instances: int
    product_instances: int
    violations: int
    example: tuple | None


def check_sum_product_distinct(values: Sequence[int], node_cap: int) -> SumProductReport:
    """Count coincidences ``f(a1) + g(a2) == f'(a1') * g'(a2')`` over ordered block pairs."""
    values = tuple(values)
    if len(values) > 4 or node_cap > 4:
        raise ScaleExceeded("sum/product census is limited to 4 values and node cap 4")
    sums: Counter = Counter()
    prods: Counter = Counter()
    first_sum: dict[int, tuple] = {}
    first_prod: dict[int, tuple] = {}
    for f, b1, g, b2 in two_block_instances(len(values), node_cap):
        u = _eval_at(f, values, b1)
        v = _eval_at(g, values, b2)
        s, p = u + v, u * v
        sums[s] += 1
        prods[p] += 1
        first_sum.setdefault(s, (f, b1, g, b2))
        first_prod.setdefault(p, (f, b1, g, b2))
    violations = 0
    example = None
    for v, c in sorted(sums.items()):
        if v in prods:
            violations += c * prods[v]
            if example is None:
                example = (v, first_sum[v], first_prod[v])
    return SumProductReport(
        values, node_cap, sum(sums.values()), sum(prods.values()), violations, example
    )


def _eval_at(t: Term, values: Sequence[int], idx: Sequence[int]) -> int:
    from .terms import evaluate_term

    return evaluate_term(t, INTEGER_RING, [values[i] for i in idx])


def is_sum_shape(p: MonotonePolynomial) -> bool:
    """Whether ``p`` splits into two nonempty parts, every index of the first below the second."""
    if len(p) < 2:
        return False
    for cut in p.variables()[:-1]:
        low = [m for m in p.monomials if m[-1] <= cut]
        high = [m for m in p.monomials if m[0] > cut]
        if low and high and len(low) + len(high) == len(p):
            return True
    return False


@dataclass(frozen=True)
class NonHomogeneityReport:
    length: int
    node_cap: int
    prefix: tuple[int, ...]
    pairs: int
    sum_in_x: int
    product_not_in_x: int
    numeric_agreement: int
    exceptions: tuple

    @property
    def holds(self) -> bool:
        return not self.exceptions and self.sum_in_x == self.pairs == self.product_not_in_x

    @property
    def verdict(self) -> str:
        if self.pairs == 0:
            return "vacuous: no two-entry reductions at this scale"
        if self.holds:
            return "no homogeneous reduction at this scale"
        return "property violated"


def nonhomogeneity_report(length: int, node_cap: int) -> NonHomogeneityReport:
    """Census over all bounded two-entry reductions ``(b0, b1)`` of the powers witness.

    ``X`` is the set of values ``f(a1) + g(a2)``.  Each reduction contributes
    ``b0 + b1`` (always in ``X``) and ``b0 * b1`` (never in ``X``) to its FR
    set, so no reduction is homogeneous.  Membership is decided on polynomial
    shape; the numeric column double-checks that the product's value is not
    the value of any enumerated sum.
    """
    if not 1 <= length <= 4 or not 0 <= node_cap <= 4:
        raise ScaleExceeded("census is limited to length 1..4 and node cap 0..4")
    prefix = build_witness(length, "powers").values
    pairs = sum_in = prod_out = numeric_ok = 0
    exceptions = []
    sum_values = set()
    records = []
    for f, b1, g, b2 in two_block_instances(length, node_cap):
        p0 = translate_term_to_poly(f).reindex([i + 1 for i in b1])
        p1 = translate_term_to_poly(g).reindex([i + 1 for i in b2])
        s_poly, p_poly = mp_add(p0, p1), mp_mul(p0, p1)
        pairs += 1
        ok_sum = is_sum_shape(s_poly)
        ok_prod = not is_sum_shape(p_poly)
        sum_in += ok_sum
        prod_out += ok_prod
        if not (ok_sum and ok_prod):
            exceptions.append((f, b1, g, b2))
        v0, v1 = evaluate_poly(p0, prefix), evaluate_poly(p1, prefix)
        sum_values.add(v0 + v1)
        records.append(v0 * v1)
    for prod_value in records:
        numeric_ok += prod_value not in sum_values
    return NonHomogeneityReport(
        length, node_cap, prefix, pairs, sum_in, prod_out, numeric_ok, tuple(exceptions)
    )


# --- the F_2 direct sum -------------------------------------------------------

def f2_term() -> Term:
    """``x * (y + z)``."""
    return Node(MUL, (X, Node(ADD, (X, X))))


def f2_interpretation() -> Interpretation:
    # vectors are ints used as bitmasks; + is xor and * is coordinatewise and
    return Interpretation(RING_SIGNATURE, (operator.xor, operator.and_))


def parse_bits(text: str) -> int:
    """``"0110"`` -> bitmask with coordinate 1 (leftmost) in bit 0."""
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"not a 0/1 string: {text!r}")
    return sum(1 << i for i, ch in enumerate(text) if ch == "1")


def format_bits(v: int, width: int) -> str:
    return "".join("1" if v >> i & 1 else "0" for i in range(width))


def f2_reduce(vectors: Sequence[int], width: int):
    """Reduce a sequence of F_2 vectors to all zeros with ``x * (y + z)`` triples.

    Each step takes the next unused vector as ``x`` and the first pair of
    later vectors agreeing on the first ``width`` coordinates as ``y, z``.
    Returns ``(schedule, output)``.
    """
    from .reductions import ReductionSchedule

    mask = (1 << width) - 1
    for i, v in enumerate(vectors):
        if v & ~mask:
            raise ValueError(f"vector {i} has support beyond the first {width} coordinates")
    term = f2_term()
    entries = []
    k = 0
    while k < len(vectors):
        seen: dict[int, int] = {}
        hit = None
        for j in range(k + 1, len(vectors)):
            key = vectors[j] & mask
            if key in seen:
                hit = (seen[key], j)
                break
            seen[key] = j
        if hit is None:
            break
        entries.append((term, (k, hit[0], hit[1])))
        k = hit[1] + 1
    if not entries:
        raise InsufficientVectors(f"{len(vectors)} vectors admit no collision at width {width}")
    schedule = ReductionSchedule(tuple(entries))
    out = tuple((vectors[k] & (vectors[i] ^ vectors[j])) for _, (k, i, j) in entries)
    return schedule, out
