"""Recursive-descent parsers for form expressions, endomorphisms and model files.

Form grammar (whitespace-insensitive)::

    expr    := sign? term (('+' | '-') term)*
    term    := factor ('^' factor)*
    factor  := '-' factor | '+' factor | atom atom*     # juxtaposition = scalar multiple
    atom    := NUMBER | 'i' | 't<k>' | 'tb<k>' | NAME | '(' expr ')'

NUMBER is an integer or p/q. In a juxtaposed product every atom but the last
must be a scalar, so ``1/2 i t1`` is (1/2)(i) theta^1. A number glued to a
letter (``1/2i``, ``2t1``) is rejected. Endomorphisms::

    endo    := sign? eterm (('+' | '-') eterm)*
    eterm   := '-' eterm | atom* VECTOR '(x)' GEN      # VECTOR = X<k> | Xb<k>
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from ..deformation import EndoSeries, FrameEndomorphism
from ..exterior import Form, wedge
from ..model import Model, ModelError, validate
from ..scalars import I, ONE, GaussianRational

__all__ = [
    "ParseError",
    "parse_form",
    "parse_endo",
    "parse_model",
    "parse_endo_series",
    "parse_form_series",
    "load_model",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1, source: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source + ':' if source else ''}{line}:{column}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, tensor, end
    text: str
    col: int


_TOKEN_RE = re.compile(r"\s*(?:(?P<tensor>\(x\))|(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+^()]))")


def tokenize(text: str, line: int = 1, col0: int = 0) -> List[Token]:
    out = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if not m:
            rest = text[pos:]
            if not rest.strip():
                break
            col = col0 + pos + (len(rest) - len(rest.lstrip())) + 1
            raise ParseError(f"unexpected character {rest.strip()[0]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        tok = Token(kind, m.group(kind), col0 + start + 1)
        if kind == "num" and m.end() < len(text) and (text[m.end()].isalpha() or text[m.end()] == "_"):
            raise ParseError(f"ambiguous scalar {text[start:m.end() + 1]!r}: separate the number and the "
                             f"factor with a space, e.g. '1/2 i' or '(0/1 + 1/2 i)'", line, tok.col)
        out.append(tok)
        pos = m.end()
    out.append(Token("end", "", col0 + len(text) + 1))
    return out


_GEN_RE = re.compile(r"^(tb|t)([1-9][0-9]*)$")
_VEC_RE = re.compile(r"^(Xb|X)([1-9][0-9]*)$")


class _Parser:
    def __init__(self, text: str, n: int, names: Optional[Dict[str, Form]] = None, line: int = 1, col0: int = 0):
        self.tokens = tokenize(text, line, col0)
        self.pos = 0
        self.n = n
        self.names = names or {}
        self.line = line

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(msg, self.line, tok.col)

    def take(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def at_op(self, *ops) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def expect_end(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")

    # forms
    def expr(self) -> Form:
        out = self.term()
        while self.at_op("+", "-"):
            op = self.take().text
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> Form:
        out = self.factor()
        while self.at_op("^"):
            self.take()
            out = wedge(out, self.factor())
        return out

    def factor(self) -> Form:
        if self.at_op("-"):
            self.take()
            return -self.factor()
        if self.at_op("+"):
            self.take()
            return self.factor()
        out = self.atom()
        while self._starts_atom():
            if not _is_scalar(out):
                self.error("implicit product needs a scalar on the left; use '^' to wedge forms", self.tok)
            out = self.atom().scale(_scalar_of(out))
        return out

    def _starts_atom(self) -> bool:
        t = self.tok
        if t.kind in ("num",):
            return True
        if t.kind == "name":
            return not _VEC_RE.match(t.text)
        return t.kind == "op" and t.text == "("

    def atom(self) -> Form:
        t = self.tok
        if t.kind == "num":
            self.take()
            return Form.scalar(GaussianRational(Fraction(t.text)))
        if t.kind == "name":
            self.take()
            if t.text == "i":
                return Form.scalar(I)
            g = _GEN_RE.match(t.text)
            if g:
                k = int(g.group(2))
                if k > self.n:
                    self.error(f"generator {t.text} out of range (model has {self.n} generators)", t)
                return Form.theta(k) if g.group(1) == "t" else Form.theta_bar(k)
            if t.text in self.names:
                return self.names[t.text]
            self.error(f"unknown name {t.text!r}", t)
        if t.kind == "op" and t.text == "(":
            self.take()
            inner = self.expr()
            if not self.at_op(")"):
                self.error("expected ')'")
            self.take()
            return inner
        if t.kind == "end":
            self.error("unexpected end of expression")
        self.error(f"unexpected {t.text!r}")

    # endomorphisms
    def endo(self) -> FrameEndomorphism:
        out = self.eterm()
        while self.at_op("+", "-"):
            op = self.take().text
            e = self.eterm()
            out = out + e if op == "+" else out - e
        return out

    def eterm(self) -> FrameEndomorphism:
        if self.at_op("-"):
            self.take()
            return -self.eterm()
        if self.at_op("+"):
            self.take()
            return self.eterm()
        c = ONE
        while self._starts_atom():
            start = self.tok
            s = self.atom()
            if not _is_scalar(s):
                self.error("expected a scalar or a frame vector X<k>/Xb<k>", start)
            c = c * _scalar_of(s)
        t = self.tok
        v = _VEC_RE.match(t.text) if t.kind == "name" else None
        if not v:
            self.error("expected a frame vector X<k> or Xb<k>")
        self.take()
        k = int(v.group(2))
        if k > self.n:
            self.error(f"frame vector {t.text} out of range", t)
        if self.tok.kind != "tensor":
            self.error("expected '(x)'")
        self.take()
        g_tok = self.tok
        g = _GEN_RE.match(g_tok.text) if g_tok.kind == "name" else None
        if not g:
            self.error("expected a coframe generator t<k> or tb<k>")
        self.take()
        j = int(g.group(2))
        if j > self.n:
            self.error(f"generator {g_tok.text} out of range", g_tok)
        vec = (0 if v.group(1) == "X" else 1, k)
        co = (0 if g.group(1) == "t" else 1, j)
        return FrameEndomorphism.term(vec, co, c)


def _is_scalar(f: Form) -> bool:
    return f.is_zero() or f.degrees() == {0}


def _scalar_of(f: Form) -> GaussianRational:
    return f.coefficient(((), ()))


def _model_names(m: Optional[Model]) -> Dict[str, Form]:
    if m is None:
        return {}
    return {"eta": m.eta, "omega": m.omega}


def parse_form(text: str, m: Optional[Model] = None, n: Optional[int] = None) -> Form:
    """Parse a form expression; ``eta`` and ``omega`` refer to the model's forms."""
    p = _Parser(text, n if n is not None else (m.n if m else 9), _model_names(m))
    out = p.expr()
    p.expect_end()
    return out


def parse_endo(text: str, m: Optional[Model] = None, n: Optional[int] = None) -> FrameEndomorphism:
    p = _Parser(text, n if n is not None else (m.n if m else 9))
    out = p.endo()
    p.expect_end()
    return out


_SERIES_KEY = re.compile(r"^\s*([a-z])\s*(?:\^\s*(\d+))?\s*:(.*)$", re.S)


def _split_series(text: str, var: str):
    items = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        mt = _SERIES_KEY.match(chunk)
        if not mt or mt.group(1) != var:
            raise ParseError(f"series term must look like '{var}: EXPR' or '{var}^k: EXPR', got {chunk.strip()!r}")
        k = int(mt.group(2) or 1)
        if k < 1:
            raise ParseError(f"series orders start at 1, got {var}^{k}")
        if k in items:
            raise ParseError(f"duplicate series term {var}^{k}")
        items[k] = mt.group(3)
    return items


def parse_endo_series(text: str, m: Model, var: str = "t") -> EndoSeries:
    """``"t: EXPR; t^2: EXPR"``; each EXPR is the plain coefficient of t^k."""
    items = _split_series(text, var)
    top = max(items, default=0)
    coeffs = [FrameEndomorphism()] + [parse_endo(items[k], m) if k in items else FrameEndomorphism()
                                      for k in range(1, top + 1)]
    return EndoSeries(coeffs)


def parse_form_series(text: str, m: Model, var: str = "s") -> List[Form]:
    items = _split_series(text, var)
    top = max(items, default=0)
    return [Form()] + [parse_form(items[k], m) if k in items else Form() for k in range(1, top + 1)]


# ---------------------------------------------------------------------------
# model files

_LINE_PATTERNS = [
    ("model", re.compile(r"^model\s+(?P<v>[A-Za-z_][A-Za-z_0-9]*)\s*$")),
    ("generators", re.compile(r"^generators\s+(?P<v>\d+)\s*$")),
    ("d", re.compile(r"^d\s+t(?P<k>[1-9][0-9]*)\s*=(?P<v>.*)$")),
    ("eta", re.compile(r"^eta\s*=(?P<v>.*)$")),
    ("omega", re.compile(r"^omega\s*=(?P<v>.*)$")),
]


def parse_model(text: str, source: str = "", check: bool = True) -> Model:
    """Parse a model file; with ``check`` the result must pass validation."""
    name = None
    n = None
    d: Dict[int, Form] = {}
    eta = omega = None
    seen_at: Dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip())
        for key, pat in _LINE_PATTERNS:
            mt = pat.match(stripped)
            if mt:
                break
        else:
            raise ParseError(f"unrecognised line {stripped!r}", lineno, indent + 1, source)
        section = key if key != "d" else f"d t{mt.group('k')}"
        if section in seen_at:
            raise ParseError(f"duplicate section {section} (first on line {seen_at[section]})",
                             lineno, indent + 1, source)
        seen_at[section] = lineno
        if key == "model":
            name = mt.group("v")
            continue
        if key == "generators":
            n = int(mt.group("v"))
            if n < 1:
                raise ParseError("generators must be positive", lineno, indent + 1, source)
            continue
        if n is None:
            raise ParseError("generators must be declared before any equation", lineno, indent + 1, source)
        col0 = indent + mt.start("v")
        names = {}
        if eta is not None:
            names["eta"] = eta
        if omega is not None:
            names["omega"] = omega
        try:
            p = _Parser(mt.group("v"), n, names, lineno, col0)
            value = p.expr()
            p.expect_end()
        except ParseError as e:
            raise ParseError(e.message, e.line, e.column, source) from None
        if key == "d":
            k = int(mt.group("k"))
            if k > n:
                raise ParseError(f"structure equation for t{k} but only {n} generators", lineno, indent + 1, source)
            if value and value.degrees() != {2}:
                raise ParseError("structure equation must have degree 2", lineno, col0 + 1, source)
            d[k] = value
        elif key == "eta":
            eta = value
        else:
            omega = value

    for section, present in (("model", name is not None), ("generators", n is not None),
                             ("eta", eta is not None), ("omega", omega is not None)):
        if not present:
            raise ParseError(f"missing section {section}", 1, 1, source)
    for k in range(1, n + 1):
        if k not in d:
            raise ParseError(f"missing section d t{k}", 1, 1, source)
    m = Model(name, n, tuple(d[k] for k in range(1, n + 1)), eta, omega)
    if check:
        report = validate(m)
        if not report.ok:
            bad = report.failed()[0]
            raise ModelError(f"model {name} failed validation: {bad.name}"
                             + (f"; witness {bad.witness}" if bad.witness is not None else ""))
    return m


def load_model(name: str, check: bool = True) -> Model:
    """A catalog name or a path to a model file."""
    from pathlib import Path

    from ..model import CATALOG_NAMES, catalog

    if name in CATALOG_NAMES:
        return catalog(name)
    path = Path(name)
    if path.is_file():
        return parse_model(path.read_text(encoding="utf-8"), source=str(path), check=check)
    raise ModelError(f"unknown model {name!r}: not a file and not one of {', '.join(CATALOG_NAMES)}")
