"""Expression printer (parseable output) and JSON serialisation."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional

from ..deformation import FrameEndomorphism
from ..exterior import Form, monomial_str
from ..scalars import GaussianRational

__all__ = [
    "format_scalar",
    "format_form",
    "format_endo",
    "scalar_json",
    "form_json",
    "endo_json",
    "emit_json",
    "describe_form",
]


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(c: GaussianRational) -> str:
    """``1/2``, ``-i``, ``3/4 i``, ``(1/2 - 1/3 i)``; always re-parseable."""
    re_, im = c.re, c.im
    if im == 0:
        return _frac(re_)
    if re_ == 0:
        if abs(im) == 1:
            return "i" if im > 0 else "-i"
        return f"{_frac(im)} i"
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imag = "i" if mag == 1 else f"{_frac(mag)} i"
    return f"({_frac(re_)} {sign} {imag})"


def _mono_expr(m) -> str:
    return " ^ ".join(monomial_str(m).split("^"))


def _signed_terms(items: Iterable):
    """Yield (is_negative, text) for (coefficient, body) pairs; body '' means a scalar term."""
    for c, body in items:
        neg = (c.im == 0 and c.re < 0) or (c.re == 0 and c.im < 0)
        mag = -c if neg else c
        if not body:
            yield neg, format_scalar(mag)
        elif mag == GaussianRational(1):
            yield neg, body
        else:
            yield neg, f"{format_scalar(mag)} {body}"


def _join(parts) -> str:
    out = ""
    for k, (neg, text) in enumerate(parts):
        if k == 0:
            out = f"-{text}" if neg else text
        else:
            out += f" - {text}" if neg else f" + {text}"
    return out or "0"


def format_form(f: Form) -> str:
    """Canonical expression text: parse_form(format_form(f)) == f."""
    items = [(c, "" if m == ((), ()) else _mono_expr(m)) for m, c in f.sorted_terms()]
    return _join(_signed_terms(items))


def _vec(s) -> str:
    return f"X{s[1]}" if s[0] == 0 else f"Xb{s[1]}"


def _gen(s) -> str:
    return f"t{s[1]}" if s[0] == 0 else f"tb{s[1]}"


def format_endo(e: FrameEndomorphism) -> str:
    items = [(c, f"{_vec(X)} (x) {_gen(xi)}") for (xi, X), c in e.sorted_items()]
    return _join(_signed_terms(items))


def describe_form(f: Form, named: Dict[str, Form]) -> str:
    """A name from ``named`` if f equals it exactly, else the canonical expression."""
    for name, g in named.items():
        if g == f and not f.is_zero():
            return name
    return format_form(f)


# ---------------------------------------------------------------------------
# JSON


def scalar_json(c: GaussianRational) -> str:
    return c.exact_str()


def form_json(f: Optional[Form]):
    if f is None:
        return None
    return [[monomial_str(m), scalar_json(c)] for m, c in f.sorted_terms()]


def endo_json(e: Optional[FrameEndomorphism]):
    if e is None:
        return None
    return [[_vec(X), _gen(xi), scalar_json(c)] for (xi, X), c in e.sorted_items()]


def _default(o: Any):
    if isinstance(o, Fraction):
        return _frac(o)
    if isinstance(o, GaussianRational):
        return scalar_json(o)
    if isinstance(o, Form):
        return form_json(o)
    if isinstance(o, FrameEndomorphism):
        return endo_json(o)
    raise TypeError(f"not serialisable: {type(o).__name__}")


def emit_json(report: Dict[str, Any]) -> str:
    """Deterministic text: keys keep their construction order, no floats anywhere."""
    return json.dumps(report, indent=2, ensure_ascii=False, default=_default) + "\n"
