"""Orderly terms: compositions that feed consecutive argument blocks to sub-terms.

A term is either the identity ``X`` or a ``Node`` whose children consume
consecutive, non-overlapping blocks of the argument list, left to right.
Terms never reorder, duplicate or drop arguments, so projections are not
terms.  Terms refer to operations by position in a ``Signature`` and are
evaluated against an ``Interpretation``, which lets the same term run over
finite tables and over Python integers.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence, Union

from .errors import ArityMismatch, ParseError


@dataclass(frozen=True)
class Signature:
    """Operation names and arities, independent of any carrier."""

    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for name, arity in self.ops:
            if arity < 1:
                raise ValueError(f"operation {name!r} must have positive arity, got {arity}")

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "Signature":
        return cls(tuple((str(n), int(k)) for n, k in pairs))

    def __len__(self):
        return len(self.ops)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.ops)

    def arity(self, op: int) -> int:
        return self.ops[op][1]

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.ops):
            if n == name:
                return i
        raise KeyError(name)

    @property
    def max_arity(self) -> int:
        return max((k for _, k in self.ops), default=1)


@dataclass(frozen=True)
class Interpretation:
    """A signature together with one Python callable per operation."""

    signature: Signature
    functions: tuple[Callable, ...]

    def __post_init__(self):
        if len(self.functions) != len(self.signature):
            raise ValueError("need exactly one function per signature operation")


@dataclass(frozen=True)
class Identity:
    @property
    def arity(self) -> int:
        return 1

    @property
    def size(self) -> int:
        return 0

    def __repr__(self):
        return "X"


X = Identity()


@dataclass(frozen=True)
class Node:
    op: int
    children: tuple["Term", ...]
    arity: int = field(init=False, compare=False, repr=False)
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not self.children:
            raise ValueError("a Node needs at least one child")
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "arity", sum(c.arity for c in self.children))
        object.__setattr__(self, "size", 1 + sum(c.size for c in self.children))


Term = Union[Identity, Node]


def term_arity(t: Term) -> int:
    return t.arity


def node_count(t: Term) -> int:
    return t.size


def check_term(t: Term, sig: Signature) -> None:
    """Raise ArityMismatch unless every node has as many children as its op's arity."""
    if isinstance(t, Identity):
        return
    if not 0 <= t.op < len(sig):
        raise ArityMismatch(f"operation index {t.op} not in signature")
    if len(t.children) != sig.arity(t.op):
        raise ArityMismatch(
            f"{sig.ops[t.op][0]} expects {sig.arity(t.op)} children, got {len(t.children)}"
        )
    for c in t.children:
        check_term(c, sig)


def preorder_key(t: Term) -> tuple[int, ...]:
    """Token sequence used for the canonical order (identity sorts first)."""
    out: list[int] = []
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Identity):
            out.append(0)
        else:
            out.append(s.op + 1)
            stack.extend(reversed(s.children))
    return tuple(out)


def canonical_key(t: Term) -> tuple:
    return (t.size, preorder_key(t))


def evaluate_term(t: Term, interp: Interpretation, args: Sequence):
    if len(args) != t.arity:
        raise ArityMismatch(f"term of arity {t.arity} applied to {len(args)} arguments")
    fns = interp.functions
    sig = interp.signature

    def ev(s, lo):
        if isinstance(s, Identity):
            return args[lo]
        if len(s.children) != sig.arity(s.op):
            raise ArityMismatch(f"{sig.ops[s.op][0]} expects {sig.arity(s.op)} children")
        vals = []
        for c in s.children:
            vals.append(ev(c, lo))
            lo += c.arity
        return fns[s.op](*vals)

    return ev(t, 0)


def substitute(t: Term, leaves: Sequence[Term]) -> Term:
    """Replace the identity leaves of ``t``, left to right, by ``leaves``.

    This is how reductions compose: if ``c(k) = t(b[j1], ..., b[jm])`` and each
    ``b[j] = f_j(...)``, the composite term is ``substitute(t, [f_j1, ..., f_jm])``.
    """
    if len(leaves) != t.arity:
        raise ArityMismatch(f"term has {t.arity} leaves, got {len(leaves)} replacements")
    it = iter(leaves)

    def sub(s):
        if isinstance(s, Identity):
            return next(it)
        return Node(s.op, tuple(sub(c) for c in s.children))

    return sub(t)


@lru_cache(maxsize=None)
def _exact(sig: Signature, nodes: int, arity: int) -> tuple[Term, ...]:
    if nodes == 0:
        return (X,) if arity == 1 else ()
    out = []
    for op, (_, k) in enumerate(sig.ops):
        if k > arity:
            continue
        for kids in _forests(sig, k, nodes - 1, arity):
            out.append(Node(op, kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(sig: Signature, count: int, nodes: int, arity: int) -> tuple[tuple[Term, ...], ...]:
    # ordered lists of `count` terms with the given total node count and total arity
    if count == 0:
        return ((),) if nodes == 0 and arity == 0 else ()
    out = []
    for n1 in range(nodes + 1):
        for a1 in range(1, arity - count + 2):
            heads = _exact(sig, n1, a1)
            if not heads:
                continue
            tails = _forests(sig, count - 1, nodes - n1, arity - a1)
            for h in heads:
                for rest in tails:
                    out.append((h,) + rest)
    return tuple(out)


def terms_with_size(sig: Signature, nodes: int, arity: int) -> list[Term]:
    """All terms with exactly ``nodes`` nodes and the given arity, canonically ordered."""
    return sorted(_exact(sig, nodes, arity), key=preorder_key)


def enumerate_terms(sig: Signature, target_arity: int, node_cap: int) -> list[Term]:
    """Every term of the given arity with at most ``node_cap`` nodes.

    Ordered by node count, then lexicographically on the preorder token
    sequence.  The list is complete for the bounds.
    """
    if target_arity < 1 or node_cap < 0:
        return []
    out: list[Term] = []
    for k in range(node_cap + 1):
        out.extend(terms_with_size(sig, k, target_arity))
    return out


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\(|\)|,)")


def parse_term(text: str, sig: Signature) -> Term:
    """Parse ``x`` / ``name(t1, ..., tk)`` into a term over ``sig``."""
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line=1, column=pos + 1)
        tokens.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    i = 0

    def expect(tok):
        nonlocal i
        if i >= len(tokens) or tokens[i][0] != tok:
            col = tokens[i][1] if i < len(tokens) else len(text) + 1
            raise ParseError(f"expected {tok!r}", line=1, column=col)
        i += 1

    def parse():
        nonlocal i
        if i >= len(tokens):
            raise ParseError("unexpected end of term", line=1, column=len(text) + 1)
        name, col = tokens[i]
        i += 1
        if name == "x":
            return X
        try:
            op = sig.index(name)
        except KeyError:
            raise ParseError(f"unknown operation {name!r}", line=1, column=col) from None
        expect("(")
        kids = [parse()]
        while i < len(tokens) and tokens[i][0] == ",":
            i += 1
            kids.append(parse())
        expect(")")
        if len(kids) != sig.arity(op):
            raise ParseError(
                f"{name} takes {sig.arity(op)} arguments, got {len(kids)}", line=1, column=col
            )
        return Node(op, tuple(kids))

    t = parse()
    if i != len(tokens):
        raise ParseError("trailing input after term", line=1, column=tokens[i][1])
    return t


def format_term(t: Term, sig: Signature) -> str:
    if isinstance(t, Identity):
        return "x"
    inner = ",".join(format_term(c, sig) for c in t.children)
    return f"{sig.ops[t.op][0]}({inner})"


def is_orderly_definable(p, var_count: int) -> bool:
    """Decide whether some orderly term over ``{add, mul}`` translates to ``p``.

    Any generating term needs at most ``len(p) - 1`` additions and at most
    ``total_length(p) - 1`` multiplications, so enumerating up to
    ``2 * total_length(p)`` nodes is complete and ``False`` is a proof.
    """
    from .monotone import RING_SIGNATURE, translate_term_to_poly

    if var_count < 1 or not p.monomials:
        return False
    if p.variables() != tuple(range(1, var_count + 1)):
        return False
    cap = 2 * p.total_length()
    assert (len(p) - 1) + (p.total_length() - 1) <= cap
    return any(
        translate_term_to_poly(t) == p for t in enumerate_terms(RING_SIGNATURE, var_count, cap)
    )
