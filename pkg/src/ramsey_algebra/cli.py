"""Command line front end.

Exit codes: 0 when the command completed with a positive result, 2 when it
completed with a negative verdict or found a violation, 1 on errors.
"""
from __future__ import annotations

import argparse
import operator
import random
import sys

from . import decide, monotone, reductions
from .algebra import FiniteAlgebra
from .decide import ResidueUnarySystem
from .errors import RamseyAlgebraError
from .formats import Report, parse_coloring, parse_spec_file
from .terms import Interpretation, Signature, format_term

DEFAULT_NODE_CAP = 3
DEFAULT_CROSSCHECK_CAP = 6
DISPLAY_LIMIT = 64

INTEGER_OPS = {"add": operator.add, "mul": operator.mul}


class UsageError(RamseyAlgebraError):
    pass


def parse_values(text: str) -> tuple[int, ...]:
    """``"1,2,4"``, ``"1 2 4"`` or ``"1..12"``."""
    text = text.strip()
    if ".." in text and "," not in text:
        lo, _, hi = text.partition("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(x) for x in text.replace(",", " ").split())


def integer_interpretation(ops: str) -> Interpretation:
    names = [] if ops.strip() in ("", "none") else [o.strip() for o in ops.split(",")]
    for nm in names:
        if nm not in INTEGER_OPS:
            raise UsageError(f"unknown integer operation {nm!r}; choose from add, mul")
    sig = Signature.of(*((nm, 2) for nm in names))
    return Interpretation(sig, tuple(INTEGER_OPS[nm] for nm in names))


def _show(prefix):
    prefix = list(prefix)
    if len(prefix) > DISPLAY_LIMIT:
        return prefix[:DISPLAY_LIMIT] + ["..."]
    return prefix


def schedule_json(s: reductions.ReductionSchedule, sig: Signature):
    return [{"term": format_term(t, sig), "indices": list(idx)} for t, idx in s.entries]


def _load(path, kind):
    spec = parse_spec_file(path)
    if not isinstance(spec, kind):
        want = "algebra (carrier ...)" if kind is FiniteAlgebra else "residue system (modulus ...)"
        raise UsageError(f"{path}: expected an {want} file")
    return spec


def _structure(args):
    """The interpretation and its label for fr / reduce-check / search-homogeneous."""
    if args.path:
        alg = _load(args.path, FiniteAlgebra)
        return alg.interpretation(), f"algebra {args.path}"
    interp = integer_interpretation(args.ops)
    return interp, "integers with {" + ",".join(interp.signature.names) + "}"


# --- verbs --------------------------------------------------------------------

def cmd_decide_finite(args) -> Report:
    alg = _load(args.path, FiniteAlgebra)
    v = decide.decide_finite_ramsey(alg)
    sig = alg.signature
    if v.ramsey:
        cert = {
            "generators": {
                str(a): {"idempotent": e, "term": format_term(t, sig)} for a, (e, t) in v.certificates.items()
            }
        }
    else:
        cert = {
            "counterexample": v.counterexample,
            "generated": list(v.detail["generated"]),
            "idempotents": list(v.detail["idempotents"]),
        }
    fields = {
        "input": args.path,
        "carrier": alg.carrier_size,
        "ops": [f"{op.name}/{op.arity}" for op in alg.ops],
        "verdict": v.status,
        "idempotents": list(v.detail["idempotents"]),
        "verified": decide.verify_finite_verdict(alg, v),
    }
    return Report("decide-finite", fields, cert, 0 if v.ramsey else 2)


def cmd_crosscheck(args) -> Report:
    alg = _load(args.path, FiniteAlgebra)
    cap = args.cap if args.cap is not None else DEFAULT_CROSSCHECK_CAP
    r = decide.crosscheck_finite_theorem(alg, cap=cap)
    ramsey = r.verdicts["generated"]
    fields = {
        "input": args.path,
        "carrier_cap": cap,
        "generated_subuniverses": r.verdicts["generated"],
        "degenerate_reduction": r.verdicts["degenerate"],
        "all_subalgebras": r.verdicts["subalgebras"],
        "sampled_search": [_scalar_sample(r.sampled[a]) for a in sorted(r.sampled)],
        "agree": r.agree,
        "verdict": "Ramsey" if ramsey else "NotRamsey",
        "note": "homogeneous search is bounded sampling on constant prefixes",
    }
    return Report("crosscheck", fields, None, 0 if ramsey else 2)


def _scalar_sample(s):
    return "skipped" if s is None else ("found" if s else "none")


def cmd_decide_unary(args) -> Report:
    alg = _load(args.path, FiniteAlgebra)
    v = decide.decide_unary_finite(alg)
    names = [op.name for op in alg.ops]
    if v.ramsey:
        cert = {"words": {str(a): [names[i] for i in w] for a, w in v.certificates.items()}}
    else:
        cert = {"stuck": v.counterexample}
    fields = {
        "input": args.path,
        "carrier": alg.carrier_size,
        "fixed_set": list(v.detail["fixed"]),
        "verdict": v.status,
        "verified": decide.verify_unary_verdict(alg, v),
    }
    return Report("decide-unary", fields, cert, 0 if v.ramsey else 2)


def cmd_decide_residue(args) -> Report:
    sys_ = _load(args.path, ResidueUnarySystem)
    v = decide.decide_unary_residue(sys_)
    if v.ramsey:
        cert = {"words": {str(r): list(w) for r, w in v.certificates.items()}}
    else:
        cert = {"stuck_class": v.counterexample}
    fields = {
        "input": args.path,
        "modulus": sys_.modulus,
        "ops": len(sys_.ops),
        "fixed_classes": list(v.detail["fixed_classes"]),
        "verdict": v.status,
        "verified": decide.verify_residue_verdict(sys_, v),
    }
    return Report("decide-residue", fields, cert, 0 if v.ramsey else 2)


def cmd_katetov(args) -> Report:
    alg = _load(args.path, FiniteAlgebra)
    unary = alg.unary_indices()
    if args.op:
        matches = [i for i in unary if alg.ops[i].name == args.op]
        if not matches:
            raise UsageError(f"no unary operation named {args.op!r}")
        i = matches[0]
    elif unary:
        i = unary[0]
    else:
        raise UsageError("algebra has no unary operation")
    table = alg.ops[i].table
    labels = decide.katetov_partition(alg.carrier_size, table)
    ok = all(labels[x] != labels[table[x]] for x in alg.elements)
    fields = {
        "input": args.path,
        "map": alg.ops[i].name,
        "parts": [list(b) for b in decide.partition_blocks(labels)],
        "verified": ok,
    }
    return Report("katetov", fields, {"labels": list(labels)}, 0 if ok else 2)


def cmd_partition_discriminating(args) -> Report:
    alg = _load(args.path, FiniteAlgebra)
    unary = alg.unary_indices()
    labels = decide.build_discriminating_partition(alg, unary)
    ok = decide.discriminates(alg, labels, unary)
    fields = {
        "input": args.path,
        "unary_ops": [alg.ops[i].name for i in unary],
        "fixed_set": list(decide.fixed_set(alg, unary)),
        "parts": [list(b) for b in decide.partition_blocks(labels)],
        "verified": ok,
        "note": "partition only; no finite certificate of a Ramsey verdict when non-unary ops are present",
    }
    return Report("partition-discriminating", fields, {"labels": list(labels)}, 0 if ok else 2)


def _require_values(args):
    if args.values is None:
        raise UsageError("--values is required")
    return parse_values(args.values)


def cmd_fr(args) -> Report:
    interp, label = _structure(args)
    a = _require_values(args)
    cap = args.cap if args.cap is not None else DEFAULT_NODE_CAP
    fr = reductions.finite_reductions(a, interp, cap)
    fields = {
        "structure": label,
        "prefix": _show(a),
        "node_cap": cap,
        "display_limit": DISPLAY_LIMIT,
        "size": len(fr),
        "fr": _show(fr),
        "note": "bounded: terms with at most node_cap nodes on subsequences of the prefix",
    }
    return Report("fr", fields)


def cmd_reduce_check(args) -> Report:
    interp, label = _structure(args)
    a = _require_values(args)
    if args.target is None:
        raise UsageError("--target is required")
    b = parse_values(args.target)
    cap = args.cap if args.cap is not None else DEFAULT_NODE_CAP
    s = reductions.is_reduction_prefix(b, a, interp, cap)
    fields = {
        "structure": label,
        "source": _show(a),
        "target": _show(b),
        "node_cap": cap,
        "display_limit": DISPLAY_LIMIT,
        "reduction": s is not None,
    }
    if s is None:
        fields["note"] = "no schedule within the node cap (bounded certificate)"
        return Report("reduce-check", fields, None, 2)
    fields["verified"] = reductions.apply_schedule(s, a, interp) == tuple(b)
    return Report("reduce-check", fields, {"schedule": schedule_json(s, interp.signature)})


def cmd_search_homogeneous(args) -> Report:
    interp, label = _structure(args)
    a = _require_values(args)
    if not args.coloring:
        raise UsageError("--coloring is required")
    col = parse_coloring(args.coloring)
    cap = args.cap if args.cap is not None else DEFAULT_NODE_CAP
    target = args.target_len if args.target_len is not None else 2
    hit = reductions.search_homogeneous(a, interp, col, target, cap, want_color=args.color)
    fields = {
        "structure": label,
        "prefix": _show(a),
        "coloring": col.expr,
        "target_len": target,
        "node_cap": cap,
        "display_limit": DISPLAY_LIMIT,
        "found": hit is not None,
        "note": "homogeneity is checked on the node-capped FR set of the found prefix",
    }
    if hit is None:
        return Report("search-homogeneous", fields, None, 2)
    fields["reduction"] = list(hit.prefix)
    fields["color"] = hit.color
    fields["fr"] = _show(hit.fr)
    fields["verified"] = reductions.apply_schedule(hit.schedule, a, interp) == hit.prefix
    return Report("search-homogeneous", fields, {"schedule": schedule_json(hit.schedule, interp.signature)})


def cmd_witness(args) -> Report:
    n = args.n if args.n is not None else 3
    w = monotone.build_witness(n, args.mode)
    fields = {"mode": w.mode, "n": n, "values": [str(v) for v in w.values]}
    return Report("witness", fields, {"values": [str(v) for v in w.values]})


def cmd_sum_product_check(args) -> Report:
    cap = args.cap if args.cap is not None else DEFAULT_NODE_CAP
    if args.values:
        values = parse_values(args.values)
        source = "explicit"
    else:
        n = args.n if args.n is not None else 3
        values = monotone.build_witness(n, args.mode).values
        source = f"{args.mode} witness"
    r = monotone.check_sum_product_distinct(values, cap)
    fields = {
        "source": source,
        "prefix": [str(v) for v in values],
        "node_cap": cap,
        "sum_instances": r.sum_instances,
        "product_instances": r.product_instances,
        "violations": r.violations,
    }
    cert = None
    if r.example is not None:
        v, (f, b1, g, b2), (f2, c1, g2, c2) = r.example
        sig = monotone.RING_SIGNATURE
        cert = {
            "value": str(v),
            "sum": [format_term(f, sig), list(b1), format_term(g, sig), list(b2)],
            "product": [format_term(f2, sig), list(c1), format_term(g2, sig), list(c2)],
        }
    return Report("sum-product-check", fields, cert, 2 if r.violations else 0)


def cmd_demo_integral_domain(args) -> Report:
    n = args.n if args.n is not None else 3
    cap = args.cap if args.cap is not None else DEFAULT_NODE_CAP
    r = monotone.nonhomogeneity_report(n, cap)
    pct = 100.0 if r.pairs == 0 else 100.0 * min(r.sum_in_x, r.product_not_in_x) / r.pairs
    fields = {
        "ring": "integers",
        "n": n,
        "node_cap": cap,
        "witness": [str(v) for v in r.prefix],
        "two_entry_reductions": r.pairs,
        "sum_in_X": r.sum_in_x,
        "product_not_in_X": r.product_not_in_x,
        "numeric_product_not_a_sum": r.numeric_agreement,
        "percent": f"{pct:.1f}",
        "homogeneity_violations": len(r.exceptions),
        "verdict": r.verdict,
    }
    return Report("demo-integral-domain", fields, None, 0 if r.holds or r.pairs == 0 else 2)


def cmd_demo_f2(args) -> Report:
    width = args.width if args.width is not None else 2
    if args.vectors:
        vectors = [monotone.parse_bits(t) for t in args.vectors.replace(",", " ").split()]
        source = "explicit"
    else:
        length = args.random if args.random else 50
        rng = random.Random(args.seed)
        vectors = [rng.getrandbits(width) for _ in range(length)]
        source = f"random length {length} seed {args.seed}"
    schedule, out = monotone.f2_reduce(vectors, width)
    reapplied = reductions.apply_schedule(schedule, vectors, monotone.f2_interpretation())
    fields = {
        "source": source,
        "width": width,
        "vectors": len(vectors),
        "triples": len(schedule),
        "output": [monotone.format_bits(v, width) for v in out][:DISPLAY_LIMIT],
        "all_zero": all(v == 0 for v in out),
        "verified": reapplied == out,
    }
    return Report(
        "demo-f2", fields, {"schedule": schedule_json(schedule, monotone.RING_SIGNATURE)}
    )


COMMANDS = {
    "decide-finite": (cmd_decide_finite, "decide the Ramsey property of a finite algebra"),
    "crosscheck": (cmd_crosscheck, "evaluate the equivalent finite conditions separately"),
    "decide-unary": (cmd_decide_unary, "decide a finite algebra with only unary operations"),
    "decide-residue": (cmd_decide_residue, "decide a residue-shift system on the naturals"),
    "katetov": (cmd_katetov, "three-part partition for a fixed-point-free unary map"),
    "partition-discriminating": (cmd_partition_discriminating, "partition moved by the unary ops"),
    "fr": (cmd_fr, "bounded finite-reduction set of a prefix"),
    "reduce-check": (cmd_reduce_check, "search a schedule reducing one prefix to another"),
    "search-homogeneous": (cmd_search_homogeneous, "bounded search for a monochromatic reduction"),
    "witness": (cmd_witness, "print a witness sequence for monotone polynomials"),
    "sum-product-check": (cmd_sum_product_check, "count sum = product coincidences"),
    "demo-integral-domain": (cmd_demo_integral_domain, "non-homogeneity census over the integers"),
    "demo-f2": (cmd_demo_f2, "degenerate reduction in the F_2 direct sum"),
}

PATH_VERBS = {
    "decide-finite", "crosscheck", "decide-unary", "decide-residue", "katetov", "partition-discriminating",
}
OPTIONAL_PATH_VERBS = {"fr", "reduce-check", "search-homogeneous"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ramsey-algebra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, (_, help_) in COMMANDS.items():
        p = sub.add_parser(verb, help=help_)
        if verb in PATH_VERBS:
            p.add_argument("path")
        elif verb in OPTIONAL_PATH_VERBS:
            p.add_argument("path", nargs="?", help="algebra file (default: the integers)")
            p.add_argument("--ops", default="add", help="integer operations, e.g. add,mul or none")
            p.add_argument("--values", help="source prefix, e.g. 1,2,4 or 1..12")
        p.add_argument("--cap", type=int, help="node cap (carrier cap for crosscheck)")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        if verb == "reduce-check":
            p.add_argument("--target", help="target prefix")
        if verb == "search-homogeneous":
            p.add_argument("--coloring", help='even | odd | "mod m" | "mod m == r" | "in a,b"')
            p.add_argument("--target-len", type=int)
            p.add_argument("--color", type=int, help="only accept this color")
        if verb == "katetov":
            p.add_argument("--op", help="name of the unary map (default: first unary op)")
        if verb in ("witness", "sum-product-check"):
            p.add_argument("--mode", choices=("greedy", "powers"), default="powers")
        if verb in ("witness", "sum-product-check", "demo-integral-domain"):
            p.add_argument("--n", type=int)
        if verb == "sum-product-check":
            p.add_argument("--values", help="explicit prefix instead of a witness")
        if verb == "demo-f2":
            p.add_argument("--width", type=int)
            p.add_argument("--vectors", help="0/1 strings, leftmost = coordinate 1")
            p.add_argument("--random", type=int, help="length of a random sequence")
            p.add_argument("--seed", type=int, default=0)
    return parser


def _check_bounds(args):
    for name in ("cap", "n", "width", "target_len", "random"):
        v = getattr(args, name, None)
        if v is not None and v < (0 if name == "cap" else 1):
            raise UsageError(f"--{name.replace('_', '-')} must be positive")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    fmt = args.format
    try:
        _check_bounds(args)
        report = COMMANDS[args.verb][0](args)
    except (RamseyAlgebraError, OSError, ValueError) as exc:
        err = Report(args.verb, {"error": type(exc).__name__, "message": str(exc)}, None, 1)
        out.write(err.render(fmt))
        return 1
    out.write(report.render(fmt))
    return report.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
