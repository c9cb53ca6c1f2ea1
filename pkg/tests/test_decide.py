import random
from itertools import product

import pytest

from conftest import NOT, unary, zmod_add, zmod_ring
from ramsey_algebra.algebra import FiniteAlgebra, Operation, from_function, generated_subuniverse, idempotents
from ramsey_algebra.decide import (
    ResidueUnarySystem,
    build_discriminating_partition,
    crosscheck_finite_theorem,
    decide_finite_ramsey,
    decide_unary_finite,
    decide_unary_residue,
    discriminates,
    fixed_set,
    katetov_partition,
    partition_blocks,
    random_algebra,
    verify_finite_verdict,
    verify_residue_verdict,
    verify_unary_verdict,
)
from ramsey_algebra.errors import CarrierTooLarge, FixedPointPresent, InvalidResidueSystem
from ramsey_algebra.terms import evaluate_term

F_SHIFTS = (0, -1, 3)
G_SHIFTS = (0, 3, -2)


def test_finite_examples():
    v = decide_finite_ramsey(zmod_ring(4))
    assert v.ramsey and verify_finite_verdict(zmod_ring(4), v)
    assert all(e == 0 for e, _ in v.certificates.values())
    v = decide_finite_ramsey(NOT)
    assert not v.ramsey
    assert v.counterexample == 0
    assert v.detail["generated"] == (0, 1) and v.detail["idempotents"] == ()
    assert verify_finite_verdict(NOT, v)
    assert decide_finite_ramsey(zmod_add(3)).ramsey


def test_finite_certificates_evaluate(z4_ring):
    interp = z4_ring.interpretation()
    v = decide_finite_ramsey(z4_ring)
    for a, (e, t) in v.certificates.items():
        assert evaluate_term(t, interp, [a] * t.arity) == e


@pytest.mark.parametrize("alg", [zmod_ring(4), NOT, zmod_add(3), unary(3, (0, 0, 1))])
def test_crosscheck_examples(alg):
    r = crosscheck_finite_theorem(alg)
    assert r.agree
    assert len(set(r.verdicts.values())) == 1


def test_crosscheck_random():
    rng = random.Random(2024)
    for _ in range(50):
        alg = random_algebra(rng, max_n=5, max_ops=2, max_arity=2)
        r = crosscheck_finite_theorem(alg)
        assert r.verdicts["generated"] == decide_finite_ramsey(alg).ramsey


def test_crosscheck_cap():
    with pytest.raises(CarrierTooLarge):
        crosscheck_finite_theorem(zmod_add(7))


def test_crosscheck_sample_not_skipped_for_counterexample():
    r = crosscheck_finite_theorem(NOT)
    assert r.sampled == {0: False, 1: False}


def brute_three_colorable(n, table):
    return any(all(c[x] != c[table[x]] for x in range(n)) for c in product(range(3), repeat=n))


def test_katetov_examples():
    labels = katetov_partition(3, (1, 2, 0))
    assert sorted(map(len, partition_blocks(labels))) == [1, 1, 1]
    assert partition_blocks(katetov_partition(4, (1, 2, 3, 0))) == ((0, 2), (1, 3), ())
    with pytest.raises(FixedPointPresent) as exc:
        katetov_partition(3, (1, 1, 0))
    assert exc.value.point == 1


def test_katetov_triangle_matches_exhaustive():
    # the proper colorings of a 3-cycle are exactly the bijections to {1,2,3}
    proper = [c for c in product((1, 2, 3), repeat=3) if all(c[x] != c[(x + 1) % 3] for x in range(3))]
    assert len(proper) == 6
    assert katetov_partition(3, (1, 2, 0)) in proper


@pytest.mark.parametrize("n", range(1, 6))
def test_katetov_exhaustive(n):
    for table in product(range(n), repeat=n):
        if any(table[x] == x for x in range(n)):
            continue
        labels = katetov_partition(n, table)
        assert set(labels) <= {1, 2, 3}
        assert all(labels[x] != labels[table[x]] for x in range(n))
        assert brute_three_colorable(n, table)


def test_discriminating_examples():
    labels = build_discriminating_partition(NOT)
    assert discriminates(NOT, labels)
    assert labels[0] != labels[1]
    z3 = unary(3, (1, 2, 0))
    labels = build_discriminating_partition(z3)
    assert sorted(map(len, partition_blocks(labels))) == [1, 1, 1]
    ident = unary(4, (0, 1, 2, 3))
    assert fixed_set(ident) == (0, 1, 2, 3)
    assert discriminates(ident, build_discriminating_partition(ident))


def test_discriminating_random():
    rng = random.Random(9)
    for _ in range(300):
        n = rng.randint(1, 8)
        tables = [tuple(rng.randrange(n) for _ in range(n)) for _ in range(rng.randint(1, 3))]
        ops = [Operation(f"u{i}", 1, t) for i, t in enumerate(tables)]
        ops.append(from_function("m", n, 2, lambda a, b: (a * b) % n))
        alg = FiniteAlgebra(n, tuple(ops))
        unary_ops = alg.unary_indices()
        assert discriminates(alg, build_discriminating_partition(alg, unary_ops), unary_ops)


def test_discriminating_rejects_non_unary(z4):
    with pytest.raises(ValueError):
        build_discriminating_partition(z4, [0])


def test_unary_examples():
    v = decide_unary_finite(NOT)
    assert not v.ramsey and v.detail["fixed"] == ()
    alg = unary(3, (0, 0, 1))
    v = decide_unary_finite(alg)
    assert v.ramsey and v.detail["fixed"] == (0,)
    assert v.certificates == {0: (), 1: (0,), 2: (0, 0)}
    assert verify_unary_verdict(alg, v)
    ident = unary(3, (0, 1, 2))
    v = decide_unary_finite(ident)
    assert v.ramsey and v.detail["fixed"] == (0, 1, 2)


def test_unary_requires_unary(z4):
    with pytest.raises(ValueError):
        decide_unary_finite(z4)


def test_unary_agrees_with_finite_exhaustive():
    for n in range(1, 5):
        tables = list(product(range(n), repeat=n))
        for t in tables:
            alg = unary(n, t)
            vu, vf = decide_unary_finite(alg), decide_finite_ramsey(alg)
            assert vu.ramsey == vf.ramsey
            assert verify_unary_verdict(alg, vu) and verify_finite_verdict(alg, vf)
            if not vf.ramsey:
                assert set(idempotents(alg)).isdisjoint(generated_subuniverse(alg, vf.counterexample))
    rng = random.Random(4)
    for n in range(1, 5):
        for _ in range(100):
            t1 = tuple(rng.randrange(n) for _ in range(n))
            t2 = tuple(rng.randrange(n) for _ in range(n))
            alg = unary(n, t1, t2)
            assert decide_unary_finite(alg).ramsey == decide_finite_ramsey(alg).ramsey


def test_residue_two_maps_example():
    f = ResidueUnarySystem(3, (F_SHIFTS,))
    g = ResidueUnarySystem(3, (G_SHIFTS,))
    fg = ResidueUnarySystem(3, (F_SHIFTS, G_SHIFTS))
    vf, vg, vfg = decide_unary_residue(f), decide_unary_residue(g), decide_unary_residue(fg)
    assert not vf.ramsey and vf.counterexample == 2
    assert not vg.ramsey and vg.counterexample == 1
    assert vfg.ramsey
    assert vfg.certificates == {0: (), 1: (0,), 2: (1,)}
    for sys_, v in ((f, vf), (g, vg), (fg, vfg)):
        assert verify_residue_verdict(sys_, v)


def test_residue_maps_match_the_piecewise_definitions():
    fg = ResidueUnarySystem(3, (F_SHIFTS, G_SHIFTS))

    def f(x):
        return x if x % 3 == 0 else (x - 1 if x % 3 == 1 else x + 3)

    def g(x):
        return x if x % 3 == 0 else (x + 3 if x % 3 == 1 else x - 2)

    for x in range(60):
        assert fg.apply(0, x) == f(x) and fg.apply(1, x) == g(x)


def test_residue_all_zero():
    v = decide_unary_residue(ResidueUnarySystem(4, ((0, 0, 0, 0),)))
    assert v.ramsey and v.detail["fixed_classes"] == (0, 1, 2, 3)


def test_residue_validation():
    with pytest.raises(InvalidResidueSystem):
        ResidueUnarySystem(3, ((0, -2, 0),))
    with pytest.raises(InvalidResidueSystem):
        ResidueUnarySystem(3, ())
    with pytest.raises(InvalidResidueSystem):
        ResidueUnarySystem(3, ((0, 0),))


def test_residue_agrees_with_truncated_simulation():
    # BFS on actual integers 0..bound must agree with the class-graph verdict
    rng = random.Random(12)
    for _ in range(200):
        m = rng.randint(1, 5)
        ops = tuple(
            tuple(rng.choice([0, 0, rng.randint(-r, 2 * m)]) for r in range(m)) for _ in range(rng.randint(1, 2))
        )
        sys_ = ResidueUnarySystem(m, ops)
        v = decide_unary_residue(sys_)
        fixed = set(sys_.fixed_classes())
        for start in range(m):
            seen, frontier, hit = {start}, [start], start % m in fixed
            while frontier and not hit:
                nxt = []
                for x in frontier:
                    for j in range(len(ops)):
                        y = sys_.apply(j, x)
                        if y not in seen and y < 50 * m:
                            seen.add(y)
                            nxt.append(y)
                            hit = hit or y % m in fixed
                frontier = nxt
            if v.ramsey:
                assert hit
