"""Deformations of l.c.k structures in an invariant model.

Endomorphisms act on forms as derivations, (X (x) xi) . alpha = xi ^ i_X alpha.
The recursion solves

    (d_eta + delta(s) ^)(e^{a(t)} . e^{b(s,t)} . omega) = 0

order by order in (t, s), with b(s, t) a real type-preserving endomorphism
series, a(t) a given real type-mixing series (complex-structure direction)
and delta(s) a given series of closed real 1-forms (Lee-form direction).
At each order the unknown enters only through d_eta(b_k . omega); the rest
(Ob_k) must be d_eta-exact within real (1,1) forms, otherwise its harmonic
residue is the obstruction.

Series are stored by plain Taylor coefficients; the reported ``b`` values use
the derivative normalisation b(t) = sum b_k t^k / k!.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .cohomology import (
    ClassVerdict,
    _real_solve,
    _restricted_matrices,
    class_verdict,
    restricted_harmonic_basis,
    restricted_spaces,
)
from .exterior import (
    Form,
    interior,
    is_real,
    monomials,
    to_vector,
    wedge,
)
from .hodge import harmonic_projection, metric, orthogonal_projection
from .model import Model, WeightLike, as_weight, differential, twisted_differential
from .scalars import I, ONE, ZERO, GaussianRational, Matrix, solve_linear

__all__ = [
    "FrameEndomorphism",
    "EndoSeries",
    "DeformationError",
    "DeformationReport",
    "ObstructionVerdict",
    "endo_action",
    "split_e0_e1",
    "e1_to_form",
    "form_to_e1",
    "real_e1_basis",
    "exp_action",
    "lie_bracket",
    "ks_defect",
    "first_obstruction_ks",
    "first_obstruction_lee",
    "solve_lck_series",
    "defining_equation",
]

Slot = Tuple[int, int]  # (kind, index): kind 0 = holomorphic, 1 = anti-holomorphic


class DeformationError(ValueError):
    """A precondition of the deformation problem is violated."""


def _flip(s: Slot) -> Slot:
    return (1 - s[0], s[1])


def _slot_str(kind: int, k: int, vector: bool) -> str:
    if vector:
        return f"X{k}" if kind == 0 else f"Xb{k}"
    return f"t{k}" if kind == 0 else f"tb{k}"


class FrameEndomorphism:
    """sum c[xi, X] X (x) xi over coframe slots xi and frame slots X."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Mapping[Tuple[Slot, Slot], object]] = None):
        clean = {}
        for (xi, X), c in (coeffs or {}).items():
            c = GaussianRational.coerce(c)
            if not c.is_zero():
                clean[(tuple(xi), tuple(X))] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, key, value):
        raise AttributeError("FrameEndomorphism is immutable")

    @classmethod
    def term(cls, vector: Slot, coform: Slot, c=ONE) -> "FrameEndomorphism":
        return cls({(coform, vector): c})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return FrameEndomorphism(out)

    def __neg__(self):
        return FrameEndomorphism({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FrameEndomorphism":
        c = GaussianRational.coerce(c)
        return FrameEndomorphism({k: c * v for k, v in self.coeffs.items()})

    def conjugate(self) -> "FrameEndomorphism":
        return FrameEndomorphism({(_flip(xi), _flip(X)): c.conj() for (xi, X), c in self.coeffs.items()})

    def is_real(self) -> bool:
        return self.conjugate() == self

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, FrameEndomorphism):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def apply_vector(self, v: Mapping[Slot, GaussianRational]) -> Dict[Slot, GaussianRational]:
        out: Dict[Slot, GaussianRational] = {}
        for (xi, X), c in self.coeffs.items():
            if xi in v:
                out[X] = out.get(X, ZERO) + c * v[xi]
        return {k: c for k, c in out.items() if not c.is_zero()}

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c.exact_str()}) {_slot_str(*X, True)} (x) {_slot_str(*xi, False)}"
                          for (xi, X), c in self.sorted_items())

    def __repr__(self):
        return f"FrameEndomorphism({self})"


def endo_action(m: Optional[Model], A: FrameEndomorphism, a: Form) -> Form:
    """Derivation action: (X (x) xi) . alpha = xi ^ i_X alpha."""
    out = Form()
    for (xi, X), c in A.coeffs.items():
        contracted = interior(a, X[0], X[1])
        if contracted.is_zero():
            continue
        xi_form = Form.theta(xi[1]) if xi[0] == 0 else Form.theta_bar(xi[1])
        out = out + wedge(xi_form, contracted).scale(c)
    return out


def split_e0_e1(A: FrameEndomorphism) -> Tuple[FrameEndomorphism, FrameEndomorphism]:
    """(type-mixing part, type-preserving part)."""
    e0 = {k: c for k, c in A.coeffs.items() if k[0][0] != k[1][0]}
    e1 = {k: c for k, c in A.coeffs.items() if k[0][0] == k[1][0]}
    return FrameEndomorphism(e0), FrameEndomorphism(e1)


def real_e1_basis(n: int) -> List[FrameEndomorphism]:
    """X_a (x) theta^b + conj, and i X_a (x) theta^b + conj, for all a, b."""
    out = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            base = FrameEndomorphism.term((0, a), (0, b))
            out.append(base + base.conjugate())
            ib = base.scale(I)
            out.append(ib + ib.conjugate())
    return out


def e1_to_form(m: Model, b: FrameEndomorphism) -> Form:
    e0, _ = split_e0_e1(b)
    if not e0.is_zero() or not b.is_real():
        raise DeformationError("expected a real type-preserving endomorphism")
    return endo_action(m, b, m.omega)


def _e1_matrix(m: Model) -> Matrix:
    key = ("e1_matrix",)
    if key not in m._cache:
        c0 = monomials(m.n, 1, 1)
        cols = [to_vector(endo_action(m, e, m.omega), c0) for e in real_e1_basis(m.n)]
        m._cache[key] = Matrix.from_columns(cols, len(c0))
    return m._cache[key]


def form_to_e1(m: Model, beta: Form) -> FrameEndomorphism:
    """Deterministic real E_1 preimage of a real (1,1) form under b -> b . omega."""
    if not beta.bidegrees() <= {(1, 1)} or not is_real(beta):
        raise DeformationError("expected a real form of type (1,1)")
    if beta.is_zero():
        return FrameEndomorphism()
    c0 = monomials(m.n, 1, 1)
    x = solve_linear(_e1_matrix(m), to_vector(beta, c0))
    if x is None:
        raise DeformationError("omega is degenerate: (1,1) form not in the image of E_1")
    out = FrameEndomorphism()
    for c, e in zip(x, real_e1_basis(m.n)):
        if c.re:
            out = out + e.scale(c.re)
    return out


# ---------------------------------------------------------------------------
# complex-structure directions


def lie_bracket(m: Model, u: Slot, v: Slot) -> Dict[Slot, GaussianRational]:
    """[E_u, E_v] for frame vectors, from d zeta(E_u, E_v) = -zeta([E_u, E_v])."""
    out = {}
    for kind in (0, 1):
        for k in range(1, m.n + 1):
            dz = m.generator_d(kind, k)
            val = interior(interior(dz, *u), *v)
            c = val.coefficient(((), ()))
            if not c.is_zero():
                out[(kind, k)] = -c
    return out


def ks_defect(m: Model, a1: FrameEndomorphism) -> Dict[Tuple[int, int], Dict[Slot, GaussianRational]]:
    """delbar of the (0,1) (x) T^{1,0} part of a1, evaluated on pairs (Xb_b, Xb_c), b < c.

    Empty iff that part is delbar-closed (a Kodaira-Spencer representative).
    """
    part = FrameEndomorphism({k: c for k, c in a1.coeffs.items() if k[0][0] == 1 and k[1][0] == 0})

    def hol(v):
        return {s: c for s, c in v.items() if s[0] == 0}

    def bracket_vec(u: Slot, vec: Mapping[Slot, GaussianRational]):
        out = {}
        for s, c in vec.items():
            for t, d in lie_bracket(m, u, s).items():
                out[t] = out.get(t, ZERO) + c * d
        return out

    defect = {}
    for b in range(1, m.n + 1):
        for c in range(b + 1, m.n + 1):
            Y, Z = (1, b), (1, c)
            val: Dict[Slot, GaussianRational] = {}
            for s, x in hol(bracket_vec(Y, part.apply_vector({Z: ONE}))).items():
                val[s] = val.get(s, ZERO) + x
            for s, x in hol(bracket_vec(Z, part.apply_vector({Y: ONE}))).items():
                val[s] = val.get(s, ZERO) - x
            for s, x in part.apply_vector(lie_bracket(m, Y, Z)).items():
                val[s] = val.get(s, ZERO) - x
            val = {s: x for s, x in val.items() if not x.is_zero()}
            if val:
                defect[(b, c)] = val
    return defect


@dataclass
class ObstructionVerdict(ClassVerdict):
    b1: Optional[FrameEndomorphism] = None
    obstruction_form: Optional[Form] = None


def _check_direction(m: Model, a1: FrameEndomorphism):
    e0, e1 = split_e0_e1(a1)
    if not e1.is_zero():
        raise DeformationError("complex-structure direction must be type-mixing (E_0)")
    if not a1.is_real():
        raise DeformationError("complex-structure direction must be real")


def first_obstruction_ks(m: Model, a1: FrameEndomorphism, w: WeightLike = 1) -> ObstructionVerdict:
    """Class of d_eta(a1 . omega) in the real (1,1) -> (2,1)+(1,2) complex."""
    w = as_weight(w)
    _check_direction(m, a1)
    defect = ks_defect(m, a1)
    if defect:
        raise DeformationError(f"(0,1)(x)T^(1,0) part is not delbar-closed: {defect}")
    ob = twisted_differential(m, endo_action(m, a1, m.omega), w)
    v = class_verdict(m, ob, "restricted", w)
    b1 = form_to_e1(m, -v.certificate) if v.is_zero else None
    return ObstructionVerdict(v.is_zero, v.certificate, v.complex, v.harmonic_part, b1, ob)


def first_obstruction_lee(m: Model, etadot: Form, w: WeightLike = 1) -> ObstructionVerdict:
    """Class of etadot ^ omega in H^3 of the twisted complex."""
    w = as_weight(w)
    if etadot and etadot.degrees() != {1}:
        raise DeformationError("etadot must be a 1-form")
    de = differential(m, etadot)
    if de:
        raise DeformationError(f"etadot is not closed: d etadot = {de}")
    ob = wedge(etadot, m.omega)
    v = class_verdict(m, ob, "full", w)
    b1 = None
    if v.is_zero:
        c0, c1, _ = restricted_spaces(m.n)
        d0, _ = _restricted_matrices(m, w)
        beta = _real_solve(d0, c0, -ob, c1)
        b1 = form_to_e1(m, beta) if beta is not None else None
    return ObstructionVerdict(v.is_zero, v.certificate, v.complex, v.harmonic_part, b1, ob)


# ---------------------------------------------------------------------------
# truncated series

Index = Tuple[int, int]  # (order in t, order in s)


class EndoSeries:
    """a(t) = sum_k coefficients[k] t^k with coefficients[0] = 0 (plain Taylor coefficients)."""

    def __init__(self, coefficients: Sequence[FrameEndomorphism] = ()):
        coefficients = list(coefficients)
        if coefficients and not coefficients[0].is_zero():
            raise DeformationError("order-0 coefficient of a deformation series must vanish")
        self.coefficients = coefficients or [FrameEndomorphism()]

    @classmethod
    def linear(cls, a1: FrameEndomorphism) -> "EndoSeries":
        return cls([FrameEndomorphism(), a1])

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> FrameEndomorphism:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else FrameEndomorphism()


def _series_action(m, S: Mapping[Index, FrameEndomorphism], F: Mapping[Index, Form], N: int) -> Dict[Index, Form]:
    out: Dict[Index, Form] = {}
    for k1, A in S.items():
        if A.is_zero():
            continue
        for k2, f in F.items():
            k = (k1[0] + k2[0], k1[1] + k2[1])
            if k[0] + k[1] > N or f.is_zero():
                continue
            g = endo_action(m, A, f)
            if g:
                out[k] = out.get(k, Form()) + g
    return out


def _exp_series_action(m, S: Mapping[Index, FrameEndomorphism], F: Mapping[Index, Form], N: int) -> Dict[Index, Form]:
    total = {k: f for k, f in F.items()}
    term = dict(F)
    for j in range(1, N + 1):
        term = _series_action(m, S, term, N)
        if not term:
            break
        inv = Fraction(1, j)
        term = {k: f.scale(inv) for k, f in term.items()}
        for k, f in term.items():
            total[k] = total.get(k, Form()) + f
    return {k: f for k, f in total.items() if f}


def exp_action(m: Optional[Model], S: EndoSeries, a, N: int, inner: Optional[EndoSeries] = None) -> List[Form]:
    """Coefficients (orders 0..N in t) of e^{S(t)} . a, or of e^{S(t)} . e^{inner(t)} . a.

    ``a`` is a Form or a list of Form coefficients.
    """
    F = {(0, 0): a} if isinstance(a, Form) else {(k, 0): f for k, f in enumerate(a)}
    if inner is not None:
        F = _exp_series_action(m, {(k, 0): e for k, e in enumerate(inner.coefficients)}, F, N)
    out = _exp_series_action(m, {(k, 0): e for k, e in enumerate(S.coefficients)}, F, N)
    return [out.get((k, 0), Form()) for k in range(N + 1)]


def defining_equation(m: Model, a: Mapping[Index, FrameEndomorphism], b: Mapping[Index, FrameEndomorphism],
                      delta: Mapping[Index, Form], N: int, w: WeightLike = 1):
    """Coefficients of (d_{w eta} + delta ^)(e^a . e^b . omega) and of e^a . e^b . omega."""
    inner = _exp_series_action(m, b, {(0, 0): m.omega}, N)
    omega_series = _exp_series_action(m, a, inner, N)
    eq: Dict[Index, Form] = {}
    for k, f in omega_series.items():
        eq[k] = eq.get(k, Form()) + twisted_differential(m, f, w)
        for kd, dl in delta.items():
            kk = (k[0] + kd[0], k[1] + kd[1])
            if kk[0] + kk[1] <= N:
                eq[kk] = eq.get(kk, Form()) + wedge(dl, f)
    return {k: f for k, f in eq.items() if f}, omega_series


@dataclass
class OrderRecord:
    index: Index
    ob: Form
    beta: Form
    b: FrameEndomorphism  # derivative normalisation: i! j! times the Taylor coefficient


@dataclass
class DeformationReport:
    status: str
    order: int
    weight: Fraction
    records: List[OrderRecord] = field(default_factory=list)
    omega_series: Dict[Index, Form] = field(default_factory=dict)
    failed_index: Optional[Index] = None
    obstruction: Optional[Form] = None
    obstruction_location: Optional[str] = None
    ob_form: Optional[Form] = None
    b_taylor: Dict[Index, FrameEndomorphism] = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return self.status == "solved"

    @property
    def failed_order(self) -> Optional[int]:
        return None if self.failed_index is None else sum(self.failed_index)


def _indices(N: int, two_param: bool, one_t: bool) -> List[Index]:
    out = []
    for tot in range(1, N + 1):
        if two_param:
            out.extend((tot - j, j) for j in range(tot + 1))
        elif one_t:
            out.append((tot, 0))
        else:
            out.append((0, tot))
    return out


def solve_lck_series(m: Model, a: Optional[EndoSeries] = None, etadot_series: Optional[Sequence[Form]] = None,
                     N: int = 1, w: WeightLike = 1) -> DeformationReport:
    """Order-by-order solution of (d_eta + delta(s))(e^{a(t)} e^{b(s,t)} omega) = 0.

    ``etadot_series[j]`` is the coefficient of s^j in delta(s) (index 0 ignored
    and must be zero). Stops at the first order whose remainder is not
    d_eta-exact among real (1,1) forms.
    """
    w = as_weight(w)
    if N < 0:
        raise DeformationError("order must be non-negative")
    a = a or EndoSeries()
    etadot_series = list(etadot_series or [])
    if etadot_series and etadot_series[0]:
        raise DeformationError("etadot series must start at order 1")
    for k, A in enumerate(a.coefficients):
        if A.is_zero():
            continue
        try:
            _check_direction(m, A)
        except DeformationError as e:
            raise DeformationError(f"a_{k}: {e}") from None
    if a.order >= 1 and ks_defect(m, a[1]):
        raise DeformationError("a_1: (0,1)(x)T^(1,0) part is not delbar-closed")
    for j, e in enumerate(etadot_series):
        if not e:
            continue
        if e.degrees() != {1} or not is_real(e):
            raise DeformationError(f"etadot_{j} must be a real 1-form")
        if differential(m, e):
            raise DeformationError(f"etadot_{j} is not closed")
    if twisted_differential(m, m.omega, w):
        raise DeformationError(f"omega is not d_(w eta)-closed for w = {w}")

    has_a = any(not A.is_zero() for A in a.coefficients)
    has_s = any(bool(e) for e in etadot_series)
    A = {(k, 0): e for k, e in enumerate(a.coefficients) if not e.is_zero()}
    delta = {(0, j): e for j, e in enumerate(etadot_series) if e}
    B: Dict[Index, FrameEndomorphism] = {}
    report = DeformationReport("solved", N, w)
    c0, c1, _ = restricted_spaces(m.n)
    d0, _ = _restricted_matrices(m, w)
    allowed = {(2, 1), (1, 2)}

    for idx in _indices(N, has_a and has_s, not has_s):
        eq, _ = defining_equation(m, A, B, delta, sum(idx), w)
        ob = eq.get(idx, Form())
        if not ob.bidegrees() <= allowed or not is_real(ob):
            raise DeformationError(f"order {idx}: remainder is not a real (2,1)+(1,2) form: {ob}")
        beta = _real_solve(d0, c0, -ob, c1) if ob else Form()
        if beta is None:
            report.status = "obstructed"
            report.failed_index = idx
            report.ob_form = ob
            full_zero = (not twisted_differential(m, ob, w)) and class_verdict(m, ob, "full", w).is_zero
            if full_zero:
                report.obstruction_location = "restricted"
                report.obstruction = orthogonal_projection(metric(m), ob, restricted_harmonic_basis(m, w))
            else:
                report.obstruction_location = "H3"
                report.obstruction = harmonic_projection(metric(m), ob, w)
            break
        bk = form_to_e1(m, beta)
        if not bk.is_zero():
            B[idx] = bk
        norm = math.factorial(idx[0]) * math.factorial(idx[1])
        report.records.append(OrderRecord(idx, ob, beta, bk.scale(norm)))
    report.b_taylor = dict(B)
    _, report.omega_series = defining_equation(m, A, B, delta, N, w)
    return report
