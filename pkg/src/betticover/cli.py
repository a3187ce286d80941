"""Command-line front end: ``betticover <command> ...``.

Exit codes: 0 success / verified, 1 semantically negative result (no cover,
disagreement, counterexample), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .errors import BudgetExceeded, FieldTooSmall, StructuralError
from .graded import find_nzd_linear_form, isoc_via_socle
from .koszul import BettiTable, betti_table, isoc_via_betti
from .linalg import PrimeField, rank_of_vectors
from .matroid import LinearMatroid, is_Dt
from .points import is_nondegenerate, load_config
from .stanley_reisner import (SimplicialComplex, cycle_complex, cycle_section_points, hochster_table,
                              sr_betti_via_koszul)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("betticover")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=1) if args.json else text)


def _crop(table: BettiTable, max_i: int | None, max_j: int | None) -> BettiTable:
    keep = {k: v for k, v in table.values.items()
            if (max_i is None or k[0] <= max_i) and (max_j is None or k[1] <= max_j)}
    return BettiTable(keep, table.nvars, [k for k in table.window if k in keep])


def cmd_betti(args) -> int:
    x = load_config(args.input)
    nondeg = is_nondegenerate(x)
    table = _crop(betti_table(x), args.max_i, args.max_j)
    n = x.n
    payload = {"n": n, "p": x.p, "points": len(x), "nondegenerate": nondeg, **table.to_json()}
    lines = [f"n={n} p={x.p} |X|={len(x)}", table.render((n, n + 1))]
    if nondeg:
        payload["beta_n_n1"] = table[(n, n + 1)]
        lines.append(f"beta_{{{n},{n + 1}}} = {table[(n, n + 1)]}")
    else:
        msg = "warning: configuration is degenerate (lies on a hyperplane); cover predicate not applicable"
        payload["warning"] = msg
        print(msg, file=sys.stderr)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_cover(args) -> int:
    x = load_config(args.input)
    if len(x) < 2:
        raise StructuralError("the cover property is undefined for fewer than two points")
    t = x.n if args.t is None else args.t
    cert = is_Dt(LinearMatroid.from_points(x), t)
    if cert is None:
        _emit(args, {"t": t, "cover": False}, f"no cover: X is not D_{t}")
        return EXIT_NEGATIVE
    payload = {"t": t, "cover": True, "certificate": cert.to_json()}
    lines = [f"X is D({cert.a},{cert.b}) with a+b = {cert.a + cert.b} < {t}",
             f"  part 1 (a={cert.a}): points {list(cert.part1)}",
             f"  part 2 (b={cert.b}): points {list(cert.part2)}",
             f"  basis 1: {[list(v) for v in cert.basis1]}",
             f"  basis 2: {[list(v) for v in cert.basis2]}"]
    if is_nondegenerate(x) and t == x.n:
        # spans of dimensions r1, r2 with r1 + r2 = n + 1 filling k^{n+1} must meet only in 0
        spans_sum = rank_of_vectors(list(cert.basis1) + list(cert.basis2), x.field)
        disjoint = cert.r1 + cert.r2 == x.n + 1 and spans_sum == x.n + 1
        payload["normalized"] = {"a_plus_b": cert.a + cert.b, "disjoint": disjoint}
        lines.append(f"  normalization: a+b = {cert.a + cert.b} (= n-1), "
                     f"planes disjoint: {'yes' if disjoint else 'NO'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_isoc(args) -> int:
    x = load_config(args.input)
    if not is_nondegenerate(x):
        raise StructuralError("isoc needs a nondegenerate configuration")
    via_betti = isoc_via_betti(x)
    payload: dict = {"isoc_betti": via_betti, "isoc_socle": None, "form": None}
    lines = [f"isoc (Betti numbers): {via_betti}"]
    try:
        ell = find_nzd_linear_form(x)
    except FieldTooSmall:
        payload["note"] = "socle oracle unavailable: field too small"
        lines.append(payload["note"])
        _emit(args, payload, "\n".join(lines))
        return EXIT_OK
    via_socle = isoc_via_socle(x, ell)
    payload.update(isoc_socle=via_socle, form=list(ell.coefficients), agree=via_socle == via_betti)
    lines.append(f"isoc (socle, l = {ell}): {via_socle if via_socle is not None else 'none'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if via_socle == via_betti else EXIT_NEGATIVE


def cmd_verify_main(args) -> int:
    offsets = tuple(args.sizes)
    if len(offsets) != 2 or not 0 <= offsets[0] <= offsets[1]:
        raise UsageError("--sizes takes two offsets lo,hi with 0 <= lo <= hi")
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    for p in args.p:
        PrimeField(p)
    try:
        mix = harness.parse_mix(args.mix)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    repro = Path(args.json_report).parent if args.json_report else None
    report = harness.verify_main(args.n, args.p, offsets, args.trials, args.seed, mix,
                                 with_socle=not args.no_socle, repro_dir=repro)
    if args.json_report:
        report.dump(args.json_report)
    s = report.summary
    text = (f"trials: {s['trials']}  agreements: {s['agreements']}  disagreements: {s['disagreements']}  "
            f"predicate true: {s['predicate_true']}  elapsed: {s['elapsed_seconds']}s")
    _emit(args, s, text)
    return EXIT_OK if s["disagreements"] == 0 else EXIT_NEGATIVE


def cmd_verify_matroid(args) -> int:
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    for p in args.p:
        PrimeField(p)
    result = harness.verify_matroid(args.n, args.p, args.elements, args.trials, args.seed)
    s = result["summary"]
    lines = [f"instances: {s['instances']}  verdicts: {s['verdicts']}",
             f"moment-curve instances uniform: {s['moment_uniform']}",
             f"planted instances fail the hypothesis: {s['planted_hypothesis_fails']}"]
    for rec in s["counterexamples"]:
        lines.append(f"COUNTEREXAMPLE: {rec}")
    if args.json_report:
        Path(args.json_report).write_text(json.dumps(result, indent=1))
    _emit(args, s, "\n".join(lines))
    ok = not s["counterexamples"] and s["moment_uniform"]
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_hochster(args) -> int:
    field = PrimeField(args.p)
    if args.cycle is not None:
        c = cycle_complex(args.cycle)
    else:
        try:
            c = SimplicialComplex.from_json(Path(args.complex).read_text())
        except OSError as exc:
            raise StructuralError(f"cannot read {args.complex}: {exc}") from None
    hoch = hochster_table(c, field)
    kosz = sr_betti_via_koszul(c, field)
    agree = hoch == kosz
    payload: dict = {"vertices": c.vertices, "p": field.p, "hochster": hoch.to_json(),
                     "koszul": kosz.to_json(), "agree": agree}
    lines = ["Hochster's formula:", hoch.render(), "Koszul homology of the Stanley-Reisner ring:",
             kosz.render(), f"tables agree: {agree}"]
    if args.cycle is not None:
        n = args.cycle - 2
        section = betti_table(cycle_section_points(n, field))
        same = section == kosz
        payload.update(section_agree=same, beta_n_n1=kosz[(n, n + 1)], beta_n_n2=kosz[(n, n + 2)])
        lines.append(f"hyperplane-section points in P^{n} have the same table: {same}")
        lines.append(f"beta_{{{n},{n + 1}}} = {kosz[(n, n + 1)]}, beta_{{{n},{n + 2}}} = {kosz[(n, n + 2)]}")
        agree = agree and same
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if agree else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="random seed (campaign commands)")

    parser = _Parser(prog="betticover", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("betti", parents=[common], help="graded Betti table of S/I(X)")
    p.add_argument("input")
    p.add_argument("--max-i", type=int)
    p.add_argument("--max-j", type=int)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("cover", parents=[common], help="decide the two-plane cover property D_t")
    p.add_argument("input")
    p.add_argument("--t", type=int)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("isoc", parents=[common], help="initial socle degree, two ways")
    p.add_argument("input")
    p.set_defaults(func=cmd_isoc)

    p = sub.add_parser("verify-main", parents=[common], help="randomized Betti/cover equivalence campaign")
    p.add_argument("--n", type=_int_list, default=[2, 3, 4])
    p.add_argument("--p", type=_int_list, default=[101, 32003])
    p.add_argument("--sizes", type=_int_list, default=[1, 6], help="lo,hi: |X| ranges over n+lo..n+hi")
    p.add_argument("--trials", type=int, default=500, help="trials per (n, p)")
    p.add_argument("--mix", default="default", help="preset or kind=weight,...")
    p.add_argument("--no-socle", action="store_true", help="skip the socle-degree cross-check")
    p.add_argument("--json-report", metavar="PATH")
    p.set_defaults(func=cmd_verify_main)

    p = sub.add_parser("verify-matroid", parents=[common], help="single-element deletion campaign")
    p.add_argument("--n", type=_int_list, default=[1, 2, 3, 4])
    p.add_argument("--p", type=_int_list, default=[2, 3, 5, 101])
    p.add_argument("--elements", type=int, default=10, help="maximum ground-set size")
    p.add_argument("--trials", type=int, default=300)
    p.add_argument("--json-report", metavar="PATH")
    p.set_defaults(func=cmd_verify_matroid)

    p = sub.add_parser("hochster", parents=[common], help="Stanley-Reisner Betti tables, two ways")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--cycle", type=int, metavar="M")
    src.add_argument("--complex", metavar="PATH")
    p.add_argument("--p", type=int, default=101)
    p.set_defaults(func=cmd_hochster)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (StructuralError, BudgetExceeded, FieldTooSmall, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
