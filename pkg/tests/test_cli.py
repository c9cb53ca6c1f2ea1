import io
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramsey_algebra.algebra import FiniteAlgebra
from ramsey_algebra.cli import parse_values, run
from ramsey_algebra.decide import ResidueUnarySystem, katetov_partition, random_algebra
from ramsey_algebra.errors import EntryOutOfRange, NullaryOperation, ParseError
from ramsey_algebra.formats import format_spec, parse_coloring, parse_spec, parse_structured
from ramsey_algebra.monotone import RING_SIGNATURE, f2_interpretation, parse_bits
from ramsey_algebra.reductions import ReductionSchedule, apply_schedule
from ramsey_algebra.terms import evaluate_term, parse_term

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def cli(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


def structured(*argv):
    code, text = cli(*argv, "--format", "structured")
    fields, cert = parse_structured(text)
    assert fields["exit_code"] == str(code)
    return code, fields, cert


def test_parse_algebra_example():
    alg = parse_spec("carrier 2\nop not 1\n1 0\n")
    assert isinstance(alg, FiniteAlgebra)
    assert alg.ops[0].table == (1, 0)


def test_parse_residue_example():
    sys_ = parse_spec((SAMPLES / "fg.res").read_text())
    assert sys_ == ResidueUnarySystem(3, ((0, -1, 3), (0, 3, -2)))


def test_parse_wrong_table_length():
    with pytest.raises(ParseError) as exc:
        parse_spec("carrier 2\nop f 2\n0 1 1\n")
    assert exc.value.line is not None


def test_parse_error_positions():
    with pytest.raises(ParseError) as exc:
        parse_spec("carrier 2\nop f 1\n1 x\n")
    assert (exc.value.line, exc.value.column) == (3, 3)
    with pytest.raises(ParseError):
        parse_spec("")
    with pytest.raises(ParseError):
        parse_spec("modulus 3\nshifts 0 1\n")
    with pytest.raises(ParseError):
        parse_spec("algebra 3\n")


def test_parse_validation_passthrough():
    with pytest.raises(EntryOutOfRange):
        parse_spec("carrier 2\nop f 1\n2 0\n")
    with pytest.raises(NullaryOperation):
        parse_spec("carrier 2\nop c 0\n1\n")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_algebra_roundtrip(seed):
    alg = random_algebra(random.Random(seed), max_n=5, max_ops=3, max_arity=3)
    assert parse_spec(format_spec(alg)) == alg


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.data())
def test_residue_roundtrip(m, data):
    ops = tuple(
        tuple(data.draw(st.integers(-r, 9)) for r in range(m)) for _ in range(data.draw(st.integers(1, 3)))
    )
    sys_ = ResidueUnarySystem(m, ops)
    assert parse_spec(format_spec(sys_)) == sys_


def test_parse_values():
    assert parse_values("1,2,4") == (1, 2, 4)
    assert parse_values("1 2  4") == (1, 2, 4)
    assert parse_values("1..5") == (1, 2, 3, 4, 5)


def test_colorings():
    assert [parse_coloring("even")(v) for v in (1, 2)] == [0, 1]
    assert parse_coloring("odd")(3) == 1
    assert parse_coloring("mod 3 == 1")(7) == 1 and parse_coloring("mod 3==1")(6) == 0
    assert parse_coloring("mod 3")(8) == 2
    assert parse_coloring("in 1, 5")(5) == 1
    with pytest.raises(ParseError):
        parse_coloring("prime")


def test_decide_finite_verbs():
    code, fields, cert = structured("decide-finite", SAMPLES / "z4ring.alg")
    assert code == 0 and fields["verdict"] == "Ramsey" and fields["verified"] == "true"
    code, fields, cert = structured("decide-finite", SAMPLES / "not.alg")
    assert code == 2 and fields["verdict"] == "NotRamsey" and cert["counterexample"] == 0


def test_decide_finite_certificates_reverify():
    alg = parse_spec((SAMPLES / "z4ring.alg").read_text())
    interp = alg.interpretation()
    _, _, cert = structured("decide-finite", SAMPLES / "z4ring.alg")
    for a, entry in cert["generators"].items():
        t = parse_term(entry["term"], alg.signature)
        assert evaluate_term(t, interp, [int(a)] * t.arity) == entry["idempotent"]


def test_residue_verbs():
    assert structured("decide-residue", SAMPLES / "fg.res")[0] == 0
    assert structured("decide-residue", SAMPLES / "f.res")[0] == 2
    assert structured("decide-residue", SAMPLES / "g.res")[0] == 2
    code, fields, cert = structured("decide-residue", SAMPLES / "fg.res")
    assert cert["words"] == {"0": [], "1": [0], "2": [1]}


def test_unary_and_partition_verbs():
    code, fields, cert = structured("decide-unary", SAMPLES / "chain.alg")
    assert code == 0 and cert["words"] == {"0": [], "1": ["f"], "2": ["f", "f"]}
    assert structured("decide-unary", SAMPLES / "not.alg")[0] == 2
    code, fields, cert = structured("katetov", SAMPLES / "cycle4.alg")
    assert code == 0 and fields["parts"] == "[[0, 2], [1, 3], []]"
    labels = cert["labels"]
    assert all(labels[x] != labels[(x + 1) % 4] for x in range(4))
    code, fields, cert = structured("partition-discriminating", SAMPLES / "not.alg")
    assert code == 0 and fields["verified"] == "true"


def test_katetov_fixed_point_is_an_error(tmp_path):
    p = tmp_path / "fix.alg"
    p.write_text("carrier 3\nop t 1\n1 1 0\n")
    code, fields, _ = structured("katetov", p)
    assert code == 1 and fields["error"] == "FixedPointPresent"


def test_crosscheck_verb():
    code, fields, _ = structured("crosscheck", SAMPLES / "z4ring.alg")
    assert code == 0 and fields["agree"] == "true"
    code, fields, _ = structured("crosscheck", SAMPLES / "not.alg")
    assert code == 2 and fields["agree"] == "true"


def test_fr_verb():
    code, fields, _ = structured("fr", "--values", "1,2,4")
    assert fields["fr"] == "[1, 2, 3, 4, 5, 6, 7]" and fields["node_cap"] == "3"
    code, fields, _ = structured("fr", "--values", "2,3", "--ops", "add,mul")
    assert fields["fr"] == "[2, 3, 5, 6]"
    code, fields, _ = structured("fr", SAMPLES / "z4ring.alg", "--values", "2,2", "--cap", "2")
    assert fields["fr"] == "[0, 2]"


def test_reduce_check_verb_and_schedule_reapplies():
    code, fields, cert = structured("reduce-check", "--values", "1,2,3,4", "--target", "3,7")
    assert code == 0
    from ramsey_algebra.cli import integer_interpretation

    interp = integer_interpretation("add")
    s = ReductionSchedule(
        tuple((parse_term(e["term"], interp.signature), tuple(e["indices"])) for e in cert["schedule"])
    )
    assert apply_schedule(s, (1, 2, 3, 4), interp) == (3, 7)
    assert structured("reduce-check", "--values", "1,2,3", "--target", "10")[0] == 2


def test_search_homogeneous_verb():
    code, fields, cert = structured(
        "search-homogeneous", "--values", "1..12", "--coloring", "even", "--target-len", "3"
    )
    assert code == 0 and fields["reduction"] == "[2, 4, 6]"
    code, fields, _ = structured(
        "search-homogeneous", "--values", "1,1,1", "--coloring", "even", "--target-len", "1", "--color", "1"
    )
    assert fields["reduction"] == "[2]"


def test_witness_and_sum_product_verbs():
    code, fields, cert = structured("witness", "--mode", "powers", "--n", "3")
    assert cert["values"] == ["8", "512", "134217728"]
    assert structured("sum-product-check", "--n", "3", "--cap", "3")[0] == 0
    code, fields, cert = structured("sum-product-check", "--values", "1,1,1")
    assert code == 2 and int(fields["violations"]) >= 1 and cert["value"] == "2"
    code, fields, _ = structured("witness", "--mode", "greedy", "--n", "5")
    assert code == 1 and fields["error"] == "ModeScaleExceeded"


def test_demo_verbs():
    code, fields, _ = structured("demo-integral-domain", "--n", "3", "--cap", "3")
    assert code == 0 and fields["homogeneity_violations"] == "0" and fields["percent"] == "100.0"
    code, fields, cert = structured("demo-f2", "--width", "1", "--vectors", "1,1,1")
    assert code == 0 and fields["output"] == "[0]"
    code, fields, cert = structured("demo-f2", "--width", "3", "--random", "60", "--seed", "4")
    assert fields["all_zero"] == "true"
    vecs = [parse_bits(v) for v in ("101", "011", "011", "110", "000", "000")]
    code, fields, cert = structured("demo-f2", "--width", "3", "--vectors", "101 011 011 110 000 000")
    s = ReductionSchedule(
        tuple((parse_term(e["term"], RING_SIGNATURE), tuple(e["indices"])) for e in cert["schedule"])
    )
    assert all(v == 0 for v in apply_schedule(s, vecs, f2_interpretation()))


def test_missing_file_is_error(tmp_path):
    code, out = cli("decide-finite", tmp_path / "nope.alg")
    assert code == 1 and "error" in out


def test_wrong_file_kind():
    code, fields, _ = structured("decide-finite", SAMPLES / "f.res")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("decide-finite", SAMPLES / "z4ring.alg"),
        ("search-homogeneous", "--values", "1..12", "--coloring", "mod 3", "--target-len", "3"),
        ("demo-f2", "--width", "4", "--random", "100", "--seed", "1"),
        ("crosscheck", SAMPLES / "chain.alg"),
    ],
)
def test_output_is_deterministic(argv):
    first = cli(*argv, "--format", "structured")
    second = cli(*argv, "--format", "structured")
    assert first == second
