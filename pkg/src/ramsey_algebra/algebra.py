"""Finite algebras given by explicit operation tables."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .errors import CarrierTooLarge, EntryOutOfRange, NullaryOperation, TableSize
from .terms import Interpretation, Signature

ElementSet = tuple[int, ...]


@dataclass(frozen=True)
class Operation:
    """A ``k``-ary table, row-major: index = sum(arg_i * n**(k-1-i))."""

    name: str
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    carrier_size: int
    ops: tuple[Operation, ...]

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __eq__(self, other):
        # operations are positional: equal tables under different names still differ
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self.carrier_size == other.carrier_size and self.ops == other.ops

    def __hash__(self):
        return hash((self.carrier_size, self.ops))

    @property
    def elements(self) -> range:
        return range(self.carrier_size)

    @property
    def signature(self) -> Signature:
        return Signature(tuple((op.name, op.arity) for op in self.ops))

    def apply(self, i: int, *args: int) -> int:
        op = self.ops[i]
        n = self.carrier_size
        idx = 0
        for a in args:
            idx = idx * n + a
        return op.table[idx]

    def interpretation(self) -> Interpretation:
        fns = tuple(_table_function(op, self.carrier_size) for op in self.ops)
        return Interpretation(self.signature, fns)

    def unary_indices(self) -> tuple[int, ...]:
        return tuple(i for i, op in enumerate(self.ops) if op.arity == 1)


def _table_function(op: Operation, n: int):
    table = op.table

    def f(*args):
        idx = 0
        for a in args:
            idx = idx * n + a
        return table[idx]

    f.__name__ = op.name
    return f


def make_algebra(n: int, *ops: tuple[str, int, Sequence[int]]) -> FiniteAlgebra:
    """Build and validate an algebra from ``(name, arity, table)`` triples."""
    return validate_algebra(FiniteAlgebra(n, tuple(Operation(nm, k, tuple(t)) for nm, k, t in ops)))


def from_function(name: str, n: int, arity: int, fn) -> Operation:
    return Operation(name, arity, tuple(fn(*args) for args in product(range(n), repeat=arity)))


def validate_algebra(alg: FiniteAlgebra) -> FiniteAlgebra:
    n = alg.carrier_size
    if n < 1:
        raise TableSize(f"carrier size must be positive, got {n}")
    for op in alg.ops:
        if op.arity < 1:
            raise NullaryOperation(f"operation {op.name!r} is nullary", op.name)
        if len(op.table) != n**op.arity:
            raise TableSize(
                f"operation {op.name!r} needs {n ** op.arity} entries, got {len(op.table)}", op.name
            )
        for v in op.table:
            if not 0 <= v < n:
                raise EntryOutOfRange(f"operation {op.name!r} has entry {v} outside 0..{n - 1}", op.name)
    return alg


def is_closed(alg: FiniteAlgebra, subset) -> bool:
    s = set(subset)
    for i, op in enumerate(alg.ops):
        for args in product(sorted(s), repeat=op.arity):
            if alg.apply(i, *args) not in s:
                return False
    return True


def generated_subuniverse(alg: FiniteAlgebra, a: int) -> ElementSet:
    if not 0 <= a < alg.carrier_size:
        raise ValueError(f"element {a} not in carrier 0..{alg.carrier_size - 1}")
    found = {a}
    frontier = {a}
    while frontier:
        new = set()
        for i, op in enumerate(alg.ops):
            for args in product(sorted(found), repeat=op.arity):
                # only tuples touching the previous frontier can produce something new
                if frontier.isdisjoint(args):
                    continue
                v = alg.apply(i, *args)
                if v not in found:
                    new.add(v)
        found |= new
        frontier = new
    return tuple(sorted(found))


def idempotents(alg: FiniteAlgebra) -> ElementSet:
    return tuple(
        a for a in alg.elements if all(alg.apply(i, *([a] * op.arity)) == a for i, op in enumerate(alg.ops))
    )


def all_subuniverses(alg: FiniteAlgebra, size_cap: int = 16) -> list[ElementSet]:
    """Every nonempty closed subset, ordered by size and then lexicographically."""
    n = alg.carrier_size
    if n > size_cap:
        raise CarrierTooLarge(f"carrier of size {n} exceeds cap {size_cap}")
    out = []
    for k in range(1, n + 1):
        for subset in combinations(range(n), k):
            if is_closed(alg, subset):
                out.append(subset)
    return out
