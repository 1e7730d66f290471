"""Invariant coframe models: structure equations, Lee form, fundamental form.

A model is the finite algebra of invariant forms on a compact complex
manifold. ``d`` is determined by its values on the coframe and the Leibniz
rule; the flat line bundle L^w is represented globally by the twisted
operator ``d - w * eta``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Union

from .exterior import (
    Form,
    Monomial,
    conjugate,
    is_real,
    monomials_of_degree,
    project_bidegree,
    wedge,
    wedge_all,
)
from .scalars import I, gr

__all__ = [
    "Model",
    "ModelError",
    "ValidationReport",
    "Check",
    "as_weight",
    "differential",
    "twisted_differential",
    "del_eta",
    "delbar_eta",
    "validate",
    "catalog",
    "CATALOG_NAMES",
    "canonical_twist",
    "full_basis",
]

WeightLike = Union[int, Fraction, str]


class ModelError(ValueError):
    """Invalid model data or an unknown catalog name."""


def as_weight(w: WeightLike) -> Fraction:
    """Twist weight w: the operator d - w*eta represents L^w (w=0 is plain d)."""
    return Fraction(w)


@dataclass(frozen=True, eq=False)
class Model:
    name: str
    n: int
    d_theta: Tuple[Form, ...]
    eta: Form
    omega: Form
    _cache: Dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.d_theta) != self.n:
            raise ModelError(f"expected {self.n} structure equations, got {len(self.d_theta)}")

    def same_data(self, other: "Model") -> bool:
        return (self.n, self.d_theta, self.eta, self.omega) == (
            other.n, other.d_theta, other.eta, other.omega)

    @cached_property
    def d_theta_bar(self) -> Tuple[Form, ...]:
        return tuple(conjugate(f) for f in self.d_theta)

    @cached_property
    def eta10(self) -> Form:
        return project_bidegree(self.eta, 1, 0)

    @cached_property
    def eta01(self) -> Form:
        return project_bidegree(self.eta, 0, 1)

    def generator_d(self, kind: int, k: int) -> Form:
        return (self.d_theta if kind == 0 else self.d_theta_bar)[k - 1]

    def d_monomial(self, m: Monomial) -> Form:
        cache = self._cache.setdefault("d", {})
        if m in cache:
            return cache[m]
        factors = [(0, k) for k in m[0]] + [(1, k) for k in m[1]]
        total = Form()
        for j, (kind, k) in enumerate(factors):
            before = Form.from_factors(factors[:j])
            after = Form.from_factors(factors[j + 1:])
            term = wedge_all(before, self.generator_d(kind, k), after)
            total = total + (term if j % 2 == 0 else -term)
        cache[m] = total
        return total


def differential(m: Model, a: Form) -> Form:
    out = Form()
    for mono, c in a.terms.items():
        dm = m.d_monomial(mono)
        if dm:
            out = out + dm.scale(c)
    return out


def twisted_differential(m: Model, a: Form, w: WeightLike = 1) -> Form:
    """d(a) - w * eta ^ a."""
    w = as_weight(w)
    da = differential(m, a)
    if w == 0:
        return da
    return da - wedge(m.eta, a).scale(w)


def _by_bidegree(a: Form) -> Dict[Tuple[int, int], Form]:
    return {(p, q): project_bidegree(a, p, q) for p, q in a.bidegrees()}


def del_eta(m: Model, a: Form, w: WeightLike = 1) -> Form:
    """The (+1, 0) part of d_{w eta}: del - w eta^{1,0} ^ ."""
    out = Form()
    for (p, q), part in _by_bidegree(a).items():
        out = out + project_bidegree(twisted_differential(m, part, w), p + 1, q)
    return out


def delbar_eta(m: Model, a: Form, w: WeightLike = 1) -> Form:
    """The (0, +1) part of d_{w eta}: delbar - w eta^{0,1} ^ ."""
    out = Form()
    for (p, q), part in _by_bidegree(a).items():
        out = out + project_bidegree(twisted_differential(m, part, w), p, q + 1)
    return out


def full_basis(n: int) -> List[Form]:
    return [Form.monomial(mono) for k in range(2 * n + 1) for mono in monomials_of_degree(n, k)]


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Optional[Form] = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    model: str
    checks: Tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = [f"model {self.model}"]
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            extra = f"  witness: {c.witness}" if c.witness is not None and not c.passed else ""
            detail = f" ({c.detail})" if c.detail else ""
            lines.append(f"  {mark}  {c.name}{detail}{extra}")
        return "\n".join(lines)


def validate(m: Model) -> ValidationReport:
    checks: List[Check] = []
    n = m.n

    bad = next((f for f in m.d_theta if f and f.degrees() != {2}), None)
    checks.append(Check("structure equations have degree 2", bad is None, bad))

    witness = None
    for kind in (0, 1):
        for k in range(1, n + 1):
            dd = differential(m, m.generator_d(kind, k))
            if dd:
                witness = dd
                break
        if witness is not None:
            break
    checks.append(Check("d^2 = 0 on generators", witness is None, witness))

    witness = next((project_bidegree(f, 0, 2) for f in m.d_theta if project_bidegree(f, 0, 2)), None)
    checks.append(Check("integrable (d theta has no (0,2) part)", witness is None, witness))

    eta_ok = m.eta.is_zero() or m.eta.degrees() == {1}
    checks.append(Check("eta is a real 1-form", eta_ok and is_real(m.eta), None if eta_ok else m.eta))
    deta = differential(m, m.eta)
    checks.append(Check("d eta = 0", deta.is_zero(), deta or None))

    om_ok = m.omega.bidegrees() <= {(1, 1)} and is_real(m.omega)
    checks.append(Check("omega real of type (1,1)", om_ok, None if om_ok else m.omega))
    top = wedge_all(*([m.omega] * n))
    checks.append(Check("omega^n != 0", not top.is_zero(), None if top else m.omega))

    dom = twisted_differential(m, m.omega, 1)
    checks.append(Check("d_eta omega = 0", dom.is_zero(), dom or None))

    witness = None
    for mono in monomials_of_degree(n, 2 * n - 1):
        dm = differential(m, Form.monomial(mono))
        if dm:
            witness = Form.monomial(mono)
            break
    checks.append(Check("unimodular (d vanishes in degree 2n-1)", witness is None, witness))

    witness = None
    for b in full_basis(n):
        dd = twisted_differential(m, twisted_differential(m, b))
        if dd:
            witness = b
            break
    checks.append(Check("d_eta o d_eta = 0 on a full basis", witness is None, witness))

    return ValidationReport(m.name, tuple(checks))


# ---------------------------------------------------------------------------
# catalog

t1, t2 = Form.theta(1), Form.theta(2)
tb1, tb2 = Form.theta_bar(1), Form.theta_bar(2)
_HALF_I_INV = gr(0, Fraction(-1, 2))  # 1/(2i)

# eta = dw2/w2 = (theta1 - conj theta1)/(2i)
_ETA = (t1 - tb1).scale(_HALF_I_INV)
_OMEGA = (wedge(t1, tb1) + wedge(t2, tb2)).scale(-I)
_D_T1 = wedge(tb1, t1).scale(_HALF_I_INV)


def _inoue_plus(name: str) -> Model:
    d_t2 = wedge(t1, (t2 - tb2).scale(_HALF_I_INV))
    return Model(name, 2, (_D_T1, d_t2), _ETA, _OMEGA)


def _inoue_sm() -> Model:
    d_t2 = wedge(_ETA.scale(Fraction(1, 2)), t2)
    return Model("inoue_sm", 2, (_D_T1, d_t2), _ETA, _OMEGA)


_BUILDERS = {
    "inoue_sm": _inoue_sm,
    "inoue_splus": lambda: _inoue_plus("inoue_splus"),
    "inoue_sminus": lambda: _inoue_plus("inoue_sminus"),
}
CATALOG_NAMES = tuple(sorted(_BUILDERS))
_CATALOG_CACHE: Dict[str, Model] = {}


def catalog(name: str) -> Model:
    """Built-in invariant models of the Inoue surfaces with b_2 = 0.

    S^+ and S^- share their coframe algebra: the generator of G^- acting by
    z -> -z flips theta^2 but leaves every invariant structure equation intact.
    """
    if name not in _BUILDERS:
        raise ModelError(f"unknown model {name!r}; available: {', '.join(CATALOG_NAMES)}")
    if name not in _CATALOG_CACHE:
        m = _BUILDERS[name]()
        report = validate(m)
        if not report.ok:
            raise ModelError(f"catalog model {name} failed validation:\n{report}")
        _CATALOG_CACHE[name] = m
    return _CATALOG_CACHE[name]


def canonical_twist(m: Model) -> Optional[Fraction]:
    """kappa with d(theta^1 ^ ... ^ theta^n) = kappa * eta ^ (theta^1 ^ ... ^ theta^n), if unique."""
    top = wedge_all(*[Form.theta(k) for k in range(1, m.n + 1)])
    lhs = differential(m, top)
    rhs = wedge(m.eta, top)
    if rhs.is_zero():
        return None
    mono, c = next(iter(rhs.terms.items()))
    kappa = lhs.coefficient(mono) / c
    if rhs.scale(kappa) != lhs or not kappa.is_real():
        return None
    return kappa.re


def flat_model(n: int, name: str = "flat") -> Model:
    """All d theta = 0, eta = 0, standard omega: the invariant model of a complex torus."""
    omega = Form()
    for k in range(1, n + 1):
        omega = omega + wedge(Form.theta(k), Form.theta_bar(k))
    return Model(name, n, tuple(Form() for _ in range(n)), Form(), omega.scale(-I))
