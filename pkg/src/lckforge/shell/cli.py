"""``lckforge`` command line.

Exit codes: 0 success, 1 domain error (invalid model, non-closed input,
failed validation, precondition of a deformation problem), 2 usage error
(bad arguments or malformed expression). Reports go to stdout, errors to
stderr. With ``--json`` each command prints a single JSON document.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

from ..cohomology import (
    NotClosedError,
    bott_chern_11,
    class_verdict,
    ddbar_check,
    dolbeault_dim,
    hopf_bc_dim,
    twisted_betti,
)
from ..deformation import (
    DeformationError,
    first_obstruction_ks,
    first_obstruction_lee,
    solve_lck_series,
)
from ..exterior import Form, wedge
from ..hodge import harmonic_basis, hodge_star, metric
from ..model import Model, ModelError, as_weight, canonical_twist, validate
from .parser import ParseError, load_model, parse_endo, parse_endo_series, parse_form, parse_form_series
from .printer import describe_form, emit_json, endo_json, form_json, format_endo, format_form

__all__ = ["main", "run", "build_parser"]


class UsageError(Exception):
    pass


def _weight(text: str) -> Fraction:
    try:
        return as_weight(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid twist weight {text!r}; expected an integer or p/q")


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _report(command: str, model: Optional[Model], inputs, results, certificates) -> Dict[str, Any]:
    return {
        "command": command,
        "model": model.name if model is not None else None,
        "inputs": inputs,
        "results": results,
        "certificates": certificates,
    }


def _named(m: Model, extra: Optional[Dict[str, Form]] = None) -> Dict[str, Form]:
    out = {"eta ^ omega": wedge(m.eta, m.omega), "eta": m.eta, "omega": m.omega}
    out.update(extra or {})
    return out


def _parse_user_form(text: str, m: Model) -> Form:
    try:
        return parse_form(text, m)
    except ParseError as e:
        raise UsageError(f"--form: {e}") from None


# ---------------------------------------------------------------------------
# commands; each returns (report, human text, exit code)


def cmd_validate(args):
    m = load_model(args.model, check=False)
    rep = validate(m)
    kappa = canonical_twist(m)
    checks = [{"name": c.name, "passed": c.passed, "witness": form_json(c.witness) if not c.passed else None}
              for c in rep.checks]
    report = _report("validate", m, {"model": args.model},
                     {"ok": rep.ok, "checks": checks,
                      "canonical_twist": _frac_str(kappa) if kappa is not None else None},
                     {"d_theta": [form_json(f) for f in m.d_theta]})
    text = str(rep) + f"\ncanonical twist: {_frac_str(kappa) if kappa is not None else 'none'}"
    return report, text, 0 if rep.ok else 1


def cmd_cohom(args):
    m = load_model(args.model)
    rep = twisted_betti(m, args.weight)
    dims = {str(k): rep.dims[k] for k in sorted(rep.dims)}
    chi = sum((-1) ** k * d for k, d in rep.dims.items())
    report = _report("cohom", m, {"weight": _frac_str(args.weight)},
                     {"dims": dims, "euler_characteristic": chi},
                     {"harmonic": {str(k): [form_json(f) for f in rep.harmonic[k]] for k in sorted(rep.harmonic)}})
    lines = [f"twisted de Rham cohomology of {m.name}, weight {_frac_str(args.weight)}", "  k  dim"]
    lines += [f"  {k}  {rep.dims[k]}" for k in sorted(rep.dims)]
    lines.append(f"  euler characteristic {chi}")
    return report, "\n".join(lines), 0


def cmd_dolbeault(args):
    m = load_model(args.model)
    dim = dolbeault_dim(m, args.p, args.q, args.weight)
    report = _report("dolbeault", m, {"p": args.p, "q": args.q, "weight": _frac_str(args.weight)},
                     {"dim": dim}, {})
    return report, str(dim), 0


def cmd_ddbar(args):
    m = load_model(args.model)
    v = ddbar_check(m, args.p, args.q, args.weight)
    certs = {"solutions": [[form_json(a), form_json(g)] for a, g in v.solutions],
             "witness": form_json(v.witness)}
    report = _report("ddbar", m, {"p": args.p, "q": args.q, "weight": _frac_str(args.weight)},
                     {"holds": v.holds, "note": v.note}, certs)
    text = "holds" if v.holds else f"fails; witness: {format_form(v.witness)}"
    if v.note:
        text += f"\nnote: {v.note}"
    return report, text, 0


def cmd_star(args):
    m = load_model(args.model)
    a = _parse_user_form(args.form, m)
    md = metric(m)
    s = hodge_star(md, a)
    report = _report("star", m, {"form": args.form}, {"star": form_json(s)},
                     {"volume": form_json(md.volume)})
    return report, format_form(s), 0


def cmd_harmonic(args):
    m = load_model(args.model)
    basis = harmonic_basis(metric(m), args.deg, args.weight)
    report = _report("harmonic", m, {"deg": args.deg, "weight": _frac_str(args.weight)},
                     {"dim": len(basis)}, {"basis": [form_json(f) for f in basis]})
    lines = [f"dim {len(basis)}"] + [f"  {format_form(f)}" for f in basis]
    return report, "\n".join(lines), 0


def cmd_class(args):
    m = load_model(args.model)
    a = _parse_user_form(args.form, m)
    cx = "restricted" if args.restricted else "full"
    v = class_verdict(m, a, cx, args.weight)
    named = _named(m, {args.form.strip(): a})
    if v.is_zero:
        certs = {"primitive": form_json(v.certificate)}
        text = f"zero; primitive: {format_form(v.certificate)}"
    else:
        certs = {"harmonic_part": form_json(v.harmonic_part)}
        text = f"nonzero; harmonic representative: {describe_form(v.harmonic_part, named)}"
    report = _report("class", m, {"form": args.form, "complex": cx, "weight": _frac_str(args.weight)},
                     {"is_zero": v.is_zero}, certs)
    return report, text, 0


def _obstruction_output(command, m, inputs, v, named):
    results = {"is_zero": v.is_zero, "obstruction_form": form_json(v.obstruction_form)}
    if v.is_zero:
        certs = {"primitive": form_json(v.certificate), "b1": endo_json(v.b1)}
        text = (f"first obstruction vanishes\n  d_eta term: {format_form(v.obstruction_form)}"
                f"\n  primitive: {format_form(v.certificate)}"
                f"\n  b1: {format_endo(v.b1) if v.b1 is not None else 'none'}")
    else:
        certs = {"harmonic_part": form_json(v.harmonic_part)}
        text = (f"first obstruction nonzero ({v.complex} complex)"
                f"\n  d_eta term: {describe_form(v.obstruction_form, named)}"
                f"\n  harmonic representative: {describe_form(v.harmonic_part, named)}")
    return _report(command, m, inputs, results, certs), text, 0


def cmd_obstruct_ks(args):
    m = load_model(args.model)
    try:
        a1 = parse_endo(args.endo, m)
    except ParseError as e:
        raise UsageError(f"--endo: {e}") from None
    v = first_obstruction_ks(m, a1, args.weight)
    return _obstruction_output("obstruct-ks", m, {"endo": args.endo, "weight": _frac_str(args.weight)}, v, _named(m))


def cmd_obstruct_lee(args):
    m = load_model(args.model)
    try:
        e = parse_form(args.etadot, m)
    except ParseError as err:
        raise UsageError(f"--etadot: {err}") from None
    v = first_obstruction_lee(m, e, args.weight)
    return _obstruction_output("obstruct-lee", m, {"etadot": args.etadot, "weight": _frac_str(args.weight)}, v,
                               _named(m))


def cmd_deform(args):
    m = load_model(args.model)
    try:
        a = parse_endo_series(args.endo_series, m) if args.endo_series else None
        es = parse_form_series(args.etadot_series, m) if args.etadot_series else None
    except ParseError as e:
        raise UsageError(str(e)) from None
    r = solve_lck_series(m, a, es, args.order, args.weight)
    two = bool(args.endo_series) and bool(args.etadot_series)
    orders = [{"index": list(rec.index), "order": sum(rec.index), "b": endo_json(rec.b),
               "beta": form_json(rec.beta.scale(_fact(rec.index)))} for rec in r.records]
    omega_series = [{"index": list(k), "coefficient": form_json(f)} for k, f in sorted(
        r.omega_series.items(), key=lambda kv: (sum(kv[0]), kv[0][1]))]
    results = {"status": r.status, "order": args.order, "solved": orders}
    certs = {"omega_series": omega_series}
    lines = [f"deformation of {m.name} to order {args.order}: {r.status}"]
    for rec in r.records:
        label = f"t^{rec.index[0]} s^{rec.index[1]}" if two else f"order {sum(rec.index)}"
        lines.append(f"  {label}: b = {format_endo(rec.b)}")
    if not r.solved:
        results.update({"failed_index": list(r.failed_index), "failed_order": r.failed_order,
                        "obstruction_location": r.obstruction_location})
        certs.update({"obstruction": form_json(r.obstruction), "remainder": form_json(r.ob_form)})
        label = (f"t^{r.failed_index[0]} s^{r.failed_index[1]}" if two else f"order {r.failed_order}")
        lines.append(f"  obstructed at {label} ({r.obstruction_location})")
        lines.append(f"  obstruction: {describe_form(r.obstruction, _named(m))}")
    inputs = {"endo_series": args.endo_series, "etadot_series": args.etadot_series, "order": args.order,
              "weight": _frac_str(args.weight)}
    return _report("deform", m, inputs, results, certs), "\n".join(lines), 0


def _fact(idx) -> int:
    import math

    return math.factorial(idx[0]) * math.factorial(idx[1])


def cmd_hopf_bc(args):
    d = hopf_bc_dim(args.n, args.lam)
    return _report("hopf-bc", None, {"n": args.n, "lambda": args.lam}, {"dim": d}, {}), str(d), 0


def cmd_bott_chern(args):
    m = load_model(args.model)
    r = bott_chern_11(m, args.weight)
    report = _report("bott-chern", m, {"weight": _frac_str(args.weight)},
                     {"dim": r.dim, "closed_dim": r.closed_dim, "omega_in_image": r.omega_in_image},
                     {"representatives": [form_json(f) for f in r.representatives],
                      "ddbar_of_one": form_json(r.ddbar_of_one)})
    lines = [f"dim {r.dim} (closed real (1,1): {r.closed_dim})",
             f"  i del_eta delbar_eta 1 = {format_form(r.ddbar_of_one)}",
             f"  omega is {'' if r.omega_in_image else 'not '}in the image"]
    return report, "\n".join(lines), 0


# ---------------------------------------------------------------------------


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="lckforge", description="Exact twisted cohomology and l.c.k deformation obstructions "
                                                "for invariant coframe models.")
    p.add_argument("--json", action="store_true", help="emit a single JSON document")
    sub = p.add_subparsers(dest="command", parser_class=_ArgParser)

    def add(name, fn, help, model=True, weight=True):
        sp = sub.add_parser(name, help=help)
        if model:
            sp.add_argument("model", help="catalog name or model file")
        if weight:
            sp.add_argument("--weight", type=_weight, default=Fraction(1), help="twist weight w (default 1)")
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check the model axioms", weight=False)
    add("cohom", cmd_cohom, "twisted Betti numbers")
    for name, fn, h in (("dolbeault", cmd_dolbeault, "twisted Dolbeault dimension"),
                        ("ddbar", cmd_ddbar, "ddbar-lemma check at (p,q)")):
        sp = add(name, fn, h)
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
    sp = add("star", cmd_star, "Hodge star of a form", weight=False)
    sp.add_argument("--form", required=True)
    sp = add("harmonic", cmd_harmonic, "harmonic basis in degree K")
    sp.add_argument("--deg", type=int, required=True)
    sp = add("class", cmd_class, "is a closed form exact?")
    sp.add_argument("--form", required=True)
    sp.add_argument("--restricted", action="store_true", help="use the real (1,1) -> (2,1)+(1,2) complex")
    sp = add("obstruct-ks", cmd_obstruct_ks, "first obstruction of a complex-structure direction")
    sp.add_argument("--endo", required=True)
    sp = add("obstruct-lee", cmd_obstruct_lee, "first obstruction of a Lee-form direction")
    sp.add_argument("--etadot", required=True)
    sp = add("deform", cmd_deform, "order-by-order deformation of the l.c.k structure")
    sp.add_argument("--endo-series", default=None, help='e.g. "t: X2 (x) tb1 + Xb2 (x) t1; t^2: ..."')
    sp.add_argument("--etadot-series", default=None, help='e.g. "s: eta"')
    sp.add_argument("--order", type=int, required=True)
    add("bott-chern", cmd_bott_chern, "invariant Bott-Chern group of real (1,1) forms")
    sp = add("hopf-bc", cmd_hopf_bc, "Bott-Chern dimension on a Hopf manifold", model=False, weight=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=int, required=True)
    return p


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.command is None:
            raise UsageError("lckforge: a command is required (try --help)")
        if getattr(args, "order", 0) < 0:
            raise UsageError("--order must be non-negative")
        report, text, code = args.func(args)
    except UsageError as e:
        err.write(f"{e}\n")
        return 2
    except NotClosedError as e:
        err.write(f"error: {e}; witness: {format_form(e.witness)}\n")
        return 1
    except (ParseError, ModelError, DeformationError, ValueError) as e:
        err.write(f"error: {e}\n")
        return 1
    out.write(emit_json(report) if args.json else text + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:  # --help
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
