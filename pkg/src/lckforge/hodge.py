"""Hodge theory of the finite twisted complex.

Metric: the coframe is unitary, i.e. theta^a = (e^{2a-1} + i e^{2a})/sqrt(2)
for a real orthonormal frame e. Every monomial theta^I ^ conj(theta)^J then
has unit length and distinct monomials are orthogonal, so the Hermitian
product is the standard one in monomial coordinates. This is the metric
whose fundamental form is +-omega for the catalog models; omega^n/n! is
exactly the unit volume there.

The orientation is the one of omega^n.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exterior import (
    Form,
    Monomial,
    conjugate,
    from_vector,
    is_real,
    matrix_of,
    monomials_of_degree,
    project_bidegree,
    project_degree,
    to_vector,
    wedge,
    wedge_all,
)
from .model import Model, WeightLike, as_weight, twisted_differential
from .scalars import I, ONE, ZERO, GaussianRational, Matrix, kernel_basis, solve_linear

__all__ = [
    "MetricData",
    "metric",
    "inner_product",
    "hodge_star",
    "inverse_star",
    "twisted_adjoint",
    "laplacian",
    "laplacian_matrix",
    "harmonic_basis",
    "harmonic_projection",
    "green",
    "restricted_adjoint_11",
    "frame_volume",
    "orthogonal_projection",
]


def frame_volume(n: int) -> Form:
    """e^1 ^ ... ^ e^{2n} = prod_a (i theta^a ^ conj theta^a)."""
    out = Form.scalar(ONE)
    for a in range(1, n + 1):
        out = wedge(out, wedge(Form.theta(a), Form.theta_bar(a)).scale(I))
    return out


def _complement(m: Monomial, n: int) -> Monomial:
    full = tuple(range(1, n + 1))
    return (tuple(k for k in full if k not in m[0]), tuple(k for k in full if k not in m[1]))


class MetricData:
    """Volume form and star table of a model."""

    def __init__(self, model: Model):
        self.model = model
        n = model.n
        top = wedge_all(*([model.omega] * n)).scale(Fraction(1, math.factorial(n)))
        ref = frame_volume(n)
        (tm, tc), = ref.terms.items()
        ratio = top.coefficient(tm) / tc
        if top.is_zero() or not ratio.is_real():
            raise ValueError("omega^n is not a nonzero real multiple of the frame volume")
        self.omega_top = top
        self.volume = ref if ratio.re > 0 else -ref
        (self._top_mono, self._vol_coef), = self.volume.terms.items()
        self.star_table: Dict[Monomial, Form] = {}
        for k in range(2 * n + 1):
            for mono in monomials_of_degree(n, k):
                self.star_table[mono] = self._star_monomial(mono)
        self._lap: Dict[Tuple[int, Fraction], Matrix] = {}
        self._harm: Dict[Tuple[int, Fraction], List[Form]] = {}

    def _star_monomial(self, mono: Monomial) -> Form:
        n = self.model.n
        # mono = s * conj(M); * conj(M) = c * comp(M) with M ^ c comp(M) = vol
        (M, s), = conjugate(Form.monomial(mono)).terms.items()
        comp = _complement(M, n)
        prod = wedge(Form.monomial(M), Form.monomial(comp))
        c = self._vol_coef / prod.coefficient(self._top_mono)
        return Form.monomial(comp, s * c)


def metric(model: Model) -> MetricData:
    md = model._cache.get("metric")
    if md is None:
        md = MetricData(model)
        model._cache["metric"] = md
    return md


def inner_product(md: MetricData, a: Form, b: Form) -> GaussianRational:
    """Hermitian, linear in a. Monomials are orthonormal."""
    s = ZERO
    for m, c in a.terms.items():
        d = b.terms.get(m)
        if d is not None:
            s = s + c * d.conj()
    return s


def hodge_star(md: MetricData, a: Form) -> Form:
    out = Form()
    for m, c in a.terms.items():
        out = out + md.star_table[m].scale(c)
    return out


def inverse_star(md: MetricData, a: Form) -> Form:
    dim = 2 * md.model.n
    out = Form()
    for j in a.degrees():
        part = hodge_star(md, project_degree(a, j))
        out = out + (part if (j * (dim - j)) % 2 == 0 else -part)
    return out


def twisted_adjoint(md: MetricData, a: Form, w: WeightLike = 1) -> Form:
    """(-1)^k *^{-1} d_{-w eta} * on k-forms; zero on functions."""
    w = as_weight(w)
    out = Form()
    for k in a.degrees():
        if k == 0:
            continue
        part = project_degree(a, k)
        img = inverse_star(md, twisted_differential(md.model, hodge_star(md, part), -w))
        out = out + (img if k % 2 == 0 else -img)
    return out


def laplacian(md: MetricData, a: Form, w: WeightLike = 1) -> Form:
    m = md.model
    return (twisted_differential(m, twisted_adjoint(md, a, w), w)
            + twisted_adjoint(md, twisted_differential(m, a, w), w))


def laplacian_matrix(md: MetricData, k: int, w: WeightLike = 1) -> Matrix:
    w = as_weight(w)
    key = (k, w)
    if key not in md._lap:
        monos = monomials_of_degree(md.model.n, k)
        md._lap[key] = matrix_of(lambda f: laplacian(md, f, w), monos, monos)
    return md._lap[key]


def harmonic_basis(md: MetricData, k: int, w: WeightLike = 1) -> List[Form]:
    """Exact basis of ker Laplacian in degree k."""
    w = as_weight(w)
    key = (k, w)
    if key not in md._harm:
        monos = monomials_of_degree(md.model.n, k)
        md._harm[key] = [from_vector(v, monos) for v in kernel_basis(laplacian_matrix(md, k, w))]
    return md._harm[key]


def orthogonal_projection(md: MetricData, a: Form, span: List[Form]) -> Form:
    """Orthogonal projection of a onto the span of linearly independent forms."""
    if not span or a.is_zero():
        return Form()
    rhs = [inner_product(md, a, v) for v in span]
    # sum_j c_j <u_j, u_i> = <a, u_i>
    g = Matrix.from_rows([[inner_product(md, span[j], span[i]) for j in range(len(span))]
                          for i in range(len(span))])
    coeffs = solve_linear(g, rhs)
    if coeffs is None:
        raise ValueError("spanning set is linearly dependent")
    out = Form()
    for c, u in zip(coeffs, span):
        out = out + u.scale(c)
    return out


def harmonic_projection(md: MetricData, a: Form, w: WeightLike = 1) -> Form:
    out = Form()
    for k in a.degrees():
        out = out + orthogonal_projection(md, project_degree(a, k), harmonic_basis(md, k, w))
    return out


def green(md: MetricData, a: Form, k: Optional[int] = None, w: WeightLike = 1) -> Form:
    """G a: the solution of Lap(G a) = a - H a orthogonal to the harmonic space."""
    degrees = [k] if k is not None else sorted(a.degrees())
    out = Form()
    for j in degrees:
        part = project_degree(a, j)
        if part.is_zero():
            continue
        target = part - harmonic_projection(md, part, w)
        if target.is_zero():
            continue
        monos = monomials_of_degree(md.model.n, j)
        x = solve_linear(laplacian_matrix(md, j, w), to_vector(target, monos))
        if x is None:  # cannot happen: im Lap is the orthogonal complement of ker Lap
            raise ArithmeticError("Laplacian solve failed")
        g = from_vector(x, monos)
        out = out + g - harmonic_projection(md, g, w)
    return out


def _in_real_21_12(a: Form, n: int) -> bool:
    return a.bidegrees() <= {(2, 1), (1, 2)} and is_real(a)


def restricted_adjoint_11(md: MetricData, a: Form, w: WeightLike = 1) -> Form:
    """Adjoint of d_eta : (1,1)_R -> ((2,1)+(1,2))_R, i.e. -pi_{1,1} *^{-1} d_{-eta} *."""
    if not _in_real_21_12(a, md.model.n):
        raise ValueError("input must be a real form in (2,1)+(1,2)")
    w = as_weight(w)
    img = inverse_star(md, twisted_differential(md.model, hodge_star(md, a), -w))
    return -project_bidegree(img, 1, 1)
