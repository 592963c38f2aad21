"""Command-line front end.

Every verb writes one JSON document (stdout or ``--out``) and a short
human summary on stderr.  Exit codes: 0 pass, 1 a check failed, 2 usage
or I/O error, 3 inconclusive (basepoint-freeness not certified).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .bezoutian import bezout_slice, bezoutian, power_bezoutian_expected
from .exact_linalg import DEFAULT_FIELD, FieldSpec
from .koszul import (
    apolarity_check,
    apolarity_matrix,
    bezout_syzygy,
    dual_quotient_basis,
    generation_check,
    koszul_duality_check,
    koszul_setup,
    syzygy_duality_check,
    syzygy_space,
)
from .poly import Polynomial, parse_form
from .report import Report
from .tate import (
    BasepointError,
    SubspaceError,
    TateConfig,
    TateWindow,
    build_window,
    verify_complex,
    verify_exactness,
    window_cone_check,
    window_generator_checks,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
VERBS = ("bezoutian", "tate", "verify", "syzygies", "duality", "selftest")
WINDOW_CHECKS = ("complex", "exactness", "generators", "cone")


class UsageError(Exception):
    pass


@dataclass
class Command:
    verb: str
    options: dict = field(default_factory=dict)
    field: FieldSpec = DEFAULT_FIELD
    out: str | None = None
    quiet: bool = False
    timing: bool = False


@dataclass
class Outcome:
    code: int
    payload: dict
    summary: str = ""


def _field_arg(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", type=_field_arg, default=DEFAULT_FIELD,
                        help="q for the rationals or p:MODULUS (default p:32003)")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--quiet", action="store_true", help="no summary on stderr")
    common.add_argument("--timing", action="store_true", help="include per-check seconds")

    parser = _Parser(prog="beztate", description="Bezoutians, Tate resolution slices and syzygy dualities.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    b = sub.add_parser("bezoutian", parents=[common], help="Bezoutian of n+1 forms")
    b.add_argument("--forms", required=True)
    b.add_argument("--n", type=int)
    b.add_argument("--d", type=int)
    b.add_argument("--slices", action="store_true", help="also emit the bidegree slices")

    t = sub.add_parser("tate", parents=[common], help="build a window of degree slices")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--ell", type=int, required=True)
    t.add_argument("--p-min", type=int, required=True)
    t.add_argument("--p-max", type=int, required=True)
    t.add_argument("--t-min", type=int)
    t.add_argument("--t-max", type=int)
    t.add_argument("--subspace")

    v = sub.add_parser("verify", parents=[common], help="check a window file")
    v.add_argument("--check", action="append", choices=WINDOW_CHECKS + ("all",))
    v.add_argument("window")

    s = sub.add_parser("syzygies", parents=[common], help="syzygies of m+1 forms in one degree")
    s.add_argument("--forms", required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--bezout", action="store_true", help="list Bezout syzygies (m = n+1)")
    s.add_argument("--check", choices=("duality", "generation", "koszul-duality"))
    s.add_argument("--b-max", type=int)

    du = sub.add_parser("duality", parents=[common], help="apolarity pairing of a regular sequence")
    du.add_argument("--forms", required=True)
    du.add_argument("--n", type=int)
    du.add_argument("--check", choices=("apolarity",), default="apolarity")
    du.add_argument("--a", type=int)

    sub.add_parser("selftest", parents=[common], help="run the built-in fixtures")
    return parser


def parse(argv) -> Command:
    """Parse argv into a Command; raises UsageError naming the problem."""
    ns = _build_parser().parse_args(list(argv))
    opts = {k: v for k, v in vars(ns).items() if k not in ("verb", "field", "out", "quiet", "timing")}
    if ns.verb == "tate" and ns.p_min > ns.p_max:
        raise UsageError("--p-min must not exceed --p-max")
    if ns.verb == "tate" and (ns.t_min is None) != (ns.t_max is None):
        raise UsageError("--t-min and --t-max go together")
    return Command(ns.verb, opts, ns.field, ns.out, ns.quiet, ns.timing)


# ---------------------------------------------------------------------------
# input


def read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def load_forms(path: str, fld: FieldSpec, n: int | None = None) -> list[Polynomial]:
    """Forms file: a JSON array of Polynomial objects or of strings like "x0^2 + x1^2"."""
    data = read_json(path)
    if isinstance(data, dict) and "forms" in data:
        data = data["forms"]
    if not isinstance(data, list) or not data:
        raise UsageError(f"{path} must hold a nonempty array of forms")
    forms = []
    try:
        for item in data:
            if isinstance(item, str):
                if n is None:
                    raise UsageError("string forms need --n")
                forms.append(parse_form(fld, n, item))
            else:
                forms.append(Polynomial.from_json(fld, item))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad form in {path}: {exc}") from None
    if n is not None and any(f.nvars != n + 1 for f in forms):
        raise UsageError(f"forms in {path} are not in {n + 1} variables")
    return forms


# ---------------------------------------------------------------------------
# verbs


def _report_outcome(rep: Report, timing: bool, **extra) -> Outcome:
    code = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[rep.status]
    return Outcome(code, dict(extra, report=rep.to_json(timing)), rep.summary())


def run_bezoutian(c: Command) -> Outcome:
    o = c.options
    forms = load_forms(o["forms"], c.field, o["n"])
    try:
        B = bezoutian(forms, d=o["d"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {"n": B.n, "d": B.d, "rho": B.rho, "delta": B.delta.to_json()}
    if o["slices"]:
        payload["slices"] = [{"a": a, "matrix": bezout_slice(B, a).to_json()} for a in range(B.rho + 1)]
    return Outcome(EXIT_PASS, payload, f"Bezoutian of {len(forms)} forms, degree {B.rho}, {len(B.delta.terms)} terms")


def run_tate(c: Command) -> Outcome:
    o = c.options
    sub = None
    if o["subspace"]:
        sub = tuple(load_forms(o["subspace"], c.field, o["n"]))
    try:
        cfg = TateConfig(c.field, o["n"], o["d"], o["ell"], (o["p_min"], o["p_max"]), sub)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t_range = None if o["t_min"] is None else (o["t_min"], o["t_max"])
    try:
        w = build_window(cfg, t_range)
    except SubspaceError as exc:
        raise UsageError(f"subspace rejected: {exc}") from None
    except BasepointError as exc:
        rep = Report()
        rep.add("basepoint_free", (), None, str(exc))
        return _report_outcome(rep, c.timing)
    shapes = sorted({M.shape for M in w.slices.values()}, reverse=True)
    return Outcome(EXIT_PASS, w.to_json(),
                   f"window p in {cfg.p_range}, t in {w.t_range}: {len(w.slices)} slices, largest {shapes[0]}")


def run_verify(c: Command) -> Outcome:
    o = c.options
    data = read_json(o["window"])
    try:
        w = TateWindow.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad window file: {exc}") from None
    checks = o["check"] or ["complex"]
    if "all" in checks:
        checks = list(WINDOW_CHECKS)
    rep = Report()
    for name in dict.fromkeys(checks):
        if name == "complex":
            rep.extend(verify_complex(w))
        elif name == "exactness":
            rep.extend(verify_exactness(w))
        elif name == "generators":
            if w.config.subspace is not None:
                raise UsageError("generator checks need a full-W window")
            rep.extend(window_generator_checks(w))
        elif name == "cone":
            rep.extend(window_cone_check(w))
    return _report_outcome(rep, c.timing)


def _setup_or_outcome(forms, timing: bool):
    try:
        setup = koszul_setup(forms)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cert = setup.certificate()
    if not cert.certified:
        rep = Report()
        rep.add("basepoint_free", (), None,
                f"no vanishing graded piece of S/I up to degree {cert.t_max}")
        return setup, _report_outcome(rep, timing)
    return setup, None


def run_syzygies(c: Command) -> Outcome:
    o = c.options
    try:
        setup = koszul_setup(load_forms(o["forms"], c.field, o["n"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    b = o["degree"]
    space = syzygy_space(setup, b)
    payload = {"syzygies": space.to_json()}
    summary = f"Syz_{b}: dim {len(space.basis)}, Koszul part {len(space.koszul_subspace)}"
    needs_pencil = o["bezout"] or o["check"] in ("duality", "generation")
    if needs_pencil and setup.m != setup.n + 1:
        raise UsageError("Bezout syzygies need exactly n+2 forms")
    if o["bezout"]:
        a = b - setup.d
        phis = dual_quotient_basis(setup.forms, setup.rho - a) if 0 <= a <= setup.rho else []
        payload["bezout"] = [[A.to_json() for A in bezout_syzygy(setup, a, phi)] for phi in phis]
        summary += f", {len(phis)} Bezout syzygies"
    if o["check"] is None:
        return Outcome(EXIT_PASS, payload, summary)
    if o["check"] == "koszul-duality" and setup.m < setup.n:
        raise UsageError("Koszul duality needs at least n+1 forms")
    _, early = _setup_or_outcome(setup.forms, c.timing)
    if early is not None:
        early.payload.update(payload)
        return early
    rep = Report()
    if o["check"] == "duality":
        rep.extend(syzygy_duality_check(setup, b))
    elif o["check"] == "generation":
        rep.extend(generation_check(setup, o["b_max"] if o["b_max"] is not None else b))
    else:
        for i in range(setup.m - setup.n + 1):
            rep.extend(koszul_duality_check(setup, i, b))
    out = _report_outcome(rep, c.timing, **payload)
    out.summary = summary + "\n" + out.summary
    return out


def run_duality(c: Command) -> Outcome:
    o = c.options
    forms = load_forms(o["forms"], c.field, o["n"])
    setup, early = _setup_or_outcome(forms, c.timing)
    if early is not None:
        return early
    if setup.m != setup.n:
        raise UsageError("the apolarity pairing needs exactly n+1 forms")
    rep = apolarity_check(setup, o["a"])
    degrees = range(setup.rho + 1) if o["a"] is None else [o["a"]]
    mats = [{"a": a, "matrix": apolarity_matrix(setup, a).to_json()} for a in degrees]
    return _report_outcome(rep, c.timing, rho=setup.rho, matrices=mats)


def selftest_report(fld: FieldSpec = DEFAULT_FIELD) -> Report:
    """Golden fixtures: power Bezoutians, two-form apolarity, the (x^2, y^2, xy) pencil, small windows."""
    rep = Report()
    for n, d in ((1, 2), (1, 3), (2, 2), (2, 3)):
        with rep.timed("power_bezoutian", (n, d)) as box:
            forms = [Polynomial.monomial(fld, tuple(d if k == i else 0 for k in range(n + 1))) for i in range(n + 1)]
            box["ok"] = bezoutian(forms).delta == power_bezoutian_expected(fld, n, d)
    x, y = (Polynomial.variable(fld, 2, i) for i in range(2))
    rep.extend(apolarity_check(koszul_setup([x ** 2, y ** 2])))
    rep.extend(apolarity_check(koszul_setup([x ** 3, y ** 3])))
    pencil = koszul_setup([x ** 2, y ** 2, x * y])
    with rep.timed("bezout_syzygies", (3,)) as box:
        got = [bezout_syzygy(pencil, 1, phi) for phi in ([1, 0], [0, 1])]
        want = [(0 * x, -x, y), (-y, 0 * x, x)]
        box["ok"] = got == want
    for b in range(0, 7):
        rep.extend(syzygy_duality_check(pencil, b))
    rep.extend(generation_check(pencil, 6))
    for ell in (-1, 0, 1):
        w = build_window(TateConfig(fld, 1, 2, ell, (-2, 2)))
        rep.extend(verify_complex(w)).extend(verify_exactness(w)).extend(window_cone_check(w))
    wu = build_window(TateConfig(fld, 1, 2, 0, (-2, 2), (x ** 2, y ** 2)))
    rep.extend(verify_complex(wu)).extend(verify_exactness(wu))
    return rep


def run_selftest(c: Command) -> Outcome:
    return _report_outcome(selftest_report(c.field), c.timing)


RUNNERS = {"bezoutian": run_bezoutian, "tate": run_tate, "verify": run_verify,
           "syzygies": run_syzygies, "duality": run_duality, "selftest": run_selftest}


def execute(c: Command) -> tuple[int, dict]:
    """Run a command, write its JSON and summary; return (exit code, payload)."""
    try:
        outcome = RUNNERS[c.verb](c)
    except UsageError as exc:
        outcome = Outcome(EXIT_USAGE, {"error": str(exc)}, f"error: {exc}")
    text = json.dumps(outcome.payload, indent=1, sort_keys=False) + "\n"
    if c.out and outcome.code != EXIT_USAGE:
        try:
            Path(c.out).write_text(text)
        except OSError as exc:
            outcome = Outcome(EXIT_USAGE, {"error": str(exc)}, f"error: {exc}")
            sys.stdout.write(json.dumps(outcome.payload) + "\n")
    else:
        sys.stdout.write(text)
    if not c.quiet and outcome.summary:
        print(outcome.summary, file=sys.stderr)
    return outcome.code, outcome.payload


def main(argv=None) -> int:
    try:
        cmd = parse(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return execute(cmd)[0]


if __name__ == "__main__":
    sys.exit(main())
