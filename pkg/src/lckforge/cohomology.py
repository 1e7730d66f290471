"""Exact cohomology of the twisted complexes of a model.

Covers twisted de Rham, twisted Dolbeault, the real three-term complex
(1,1)_R -> ((2,1)+(1,2))_R -> ((3,1)+(2,2)+(1,3))_R that carries deformation
obstructions, the invariant Bott-Chern group in bidegree (1,1), and the
ddbar-lemma decision procedure.

Real subcomplexes are handled through their complexifications: every
operator involved is real, so complex ranks equal real ranks and real
solutions are recovered by taking real parts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exterior import (
    Form,
    Monomial,
    from_vector,
    matrix_of,
    monomials,
    monomials_of_degree,
    project_degree,
    real_part,
    to_vector,
)
from .hodge import harmonic_basis, harmonic_projection, metric, orthogonal_projection
from .model import Model, WeightLike, as_weight, del_eta, delbar_eta, twisted_differential
from .scalars import I, Matrix, kernel_basis, rank, solve_linear

__all__ = [
    "CohomologyReport",
    "ClassVerdict",
    "DdbarVerdict",
    "BottChernReport",
    "NotClosedError",
    "twisted_betti",
    "dolbeault_dim",
    "ddbar_check",
    "class_verdict",
    "restricted_complex_cohomology",
    "restricted_spaces",
    "restricted_harmonic_basis",
    "bott_chern_11",
    "hopf_bc_dim",
    "realify",
    "euler_characteristic",
]


class NotClosedError(ValueError):
    def __init__(self, message: str, witness: Form):
        super().__init__(message)
        self.witness = witness


@dataclass
class CohomologyReport:
    complex: str
    weight: Fraction
    dims: Dict[int, int]
    harmonic: Dict[int, List[Form]]
    ranks: Dict[int, int]
    spaces: Dict[int, int] = field(default_factory=dict)


@dataclass
class ClassVerdict:
    is_zero: bool
    certificate: Form
    complex: str = "full"
    harmonic_part: Optional[Form] = None


@dataclass
class DdbarVerdict:
    holds: bool
    p: int
    q: int
    weight: Fraction
    solutions: List[Tuple[Form, Form]]
    witness: Optional[Form] = None
    note: str = ""


@dataclass
class BottChernReport:
    dim: int
    closed_dim: int
    representatives: List[Form]
    ddbar_of_one: Form
    omega_in_image: bool
    weight: Fraction


# ---------------------------------------------------------------------------
# helpers


def _d_matrix(m: Model, src: Sequence[Monomial], dst: Sequence[Monomial], w: Fraction) -> Matrix:
    return matrix_of(lambda f: twisted_differential(m, f, w), src, dst)


def _degree_matrix(m: Model, k: int, w: Fraction) -> Matrix:
    key = ("dmat", k, w)
    if key not in m._cache:
        m._cache[key] = _d_matrix(m, monomials_of_degree(m.n, k), monomials_of_degree(m.n, k + 1), w)
    return m._cache[key]


def _span_rank(forms: Sequence[Form], monos: Sequence[Monomial]) -> int:
    if not forms:
        return 0
    return rank(Matrix.from_columns([to_vector(f, monos) for f in forms], len(monos)))


def realify(forms: Sequence[Form], monos: Sequence[Monomial]) -> List[Form]:
    """A real basis of a conjugation-stable span, from a complex basis of it."""
    out: List[Form] = []
    r = 0
    for f in forms:
        for cand in (real_part(f), real_part(f.scale(-I))):
            if cand.is_zero():
                continue
            r2 = _span_rank(out + [cand], monos)
            if r2 > r:
                out.append(cand)
                r = r2
    return out


def _real_solve(mat: Matrix, src: Sequence[Monomial], rhs: Form, dst: Sequence[Monomial]) -> Optional[Form]:
    """Solve D x = rhs; a real rhs gets a real solution, otherwise re + i im."""
    pieces = [real_part(rhs), real_part(rhs.scale(-I))]
    sols = []
    for piece in pieces:
        if piece.is_zero():
            sols.append(Form())
            continue
        x = solve_linear(mat, to_vector(piece, dst))
        if x is None:
            return None
        sols.append(real_part(from_vector(x, src)))
    return sols[0] + sols[1].scale(I)


def euler_characteristic(dims: Dict[int, int]) -> int:
    return sum((-1) ** k * d for k, d in dims.items())


# ---------------------------------------------------------------------------
# twisted de Rham


def twisted_betti(m: Model, w: WeightLike = 1) -> CohomologyReport:
    """dim H^k of (forms, d - w eta) for k = 0..2n, by rank/nullity, plus harmonic bases."""
    w = as_weight(w)
    n = m.n
    ranks = {k: rank(_degree_matrix(m, k, w)) for k in range(2 * n)}
    ranks[-1] = ranks[2 * n] = 0
    dims, spaces = {}, {}
    md = metric(m)
    harmonic = {}
    for k in range(2 * n + 1):
        dimk = math.comb(2 * n, k)
        spaces[k] = dimk
        dims[k] = dimk - ranks[k] - ranks[k - 1]
        harmonic[k] = harmonic_basis(md, k, w)
    ranks.pop(-1)
    return CohomologyReport(f"twisted de Rham (w={w})", w, dims, harmonic, ranks, spaces)


def dolbeault_dim(m: Model, p: int, q: int, w: WeightLike = 1) -> int:
    """dim ker delbar_eta / im delbar_eta at (p, q)."""
    w = as_weight(w)
    n = m.n
    here = monomials(n, p, q)
    if not here:
        return 0
    nxt = monomials(n, p, q + 1)
    prev = monomials(n, p, q - 1)
    op = lambda f: delbar_eta(m, f, w)
    ker = len(here) - (rank(matrix_of(op, here, nxt)) if nxt else 0)
    img = rank(matrix_of(op, prev, here)) if prev else 0
    return ker - img


def ddbar_check(m: Model, p: int, q: int, w: WeightLike = 1) -> DdbarVerdict:
    """Does every delbar_eta-closed (p,q) alpha satisfy del_eta alpha = del_eta delbar_eta gamma?"""
    w = as_weight(w)
    n = m.n
    here = monomials(n, p, q)
    up = monomials(n, p, q + 1)
    target = monomials(n, p + 1, q)
    src = monomials(n, p, q - 1) if q >= 1 else []
    if up:
        closed = [from_vector(v, here) for v in kernel_basis(matrix_of(lambda f: delbar_eta(m, f, w), here, up))]
    else:
        closed = [Form.monomial(x) for x in here]
    note = ""
    if q == 0:
        note = ("q = 0: gamma ranges over the zero space, so the lemma holds "
                "iff del_eta vanishes on every delbar_eta-closed (p,0) form")
    if not target:
        return DdbarVerdict(True, p, q, w, [(a, Form()) for a in closed], None,
                            note or "del_eta lands in the zero space")
    ddbar = lambda f: del_eta(m, delbar_eta(m, f, w), w)
    mat = matrix_of(ddbar, src, target) if src else Matrix(len(target), 0, [])
    solutions = []
    for alpha in closed:
        rhs = del_eta(m, alpha, w)
        if rhs.is_zero():
            solutions.append((alpha, Form()))
            continue
        if not src:
            return DdbarVerdict(False, p, q, w, solutions, alpha, note)
        x = solve_linear(mat, to_vector(rhs, target))
        if x is None:
            return DdbarVerdict(False, p, q, w, solutions, alpha, note)
        solutions.append((alpha, from_vector(x, src)))
    return DdbarVerdict(True, p, q, w, solutions, None, note)


# ---------------------------------------------------------------------------
# real three-term complex


def restricted_spaces(n: int) -> Tuple[List[Monomial], List[Monomial], List[Monomial]]:
    c0 = monomials(n, 1, 1)
    c1 = monomials(n, 2, 1) + monomials(n, 1, 2)
    c2 = monomials(n, 3, 1) + monomials(n, 2, 2) + monomials(n, 1, 3)
    return c0, c1, c2


def _restricted_matrices(m: Model, w: Fraction):
    key = ("restricted", w)
    if key not in m._cache:
        c0, c1, c2 = restricted_spaces(m.n)
        d0 = _d_matrix(m, c0, c1, w)
        d1 = _d_matrix(m, c1, c2, w)
        m._cache[key] = (d0, d1)
    return m._cache[key]


def restricted_harmonic_basis(m: Model, w: WeightLike = 1) -> List[Form]:
    """Real basis of ker d_eta ∩ ker d_eta^* in the middle term."""
    w = as_weight(w)
    key = ("restricted_harm", w)
    if key not in m._cache:
        c0, c1, c2 = restricted_spaces(m.n)
        d0, d1 = _restricted_matrices(m, w)
        lap = d0 @ d0.conj_transpose() + d1.conj_transpose() @ d1
        basis = [from_vector(v, c1) for v in kernel_basis(lap)]
        m._cache[key] = realify(basis, c1)
    return m._cache[key]


def restricted_complex_cohomology(m: Model, w: WeightLike = 1) -> CohomologyReport:
    """Cohomology at the middle term of (1,1)_R -> ((2,1)+(1,2))_R -> ((3,1)+(2,2)+(1,3))_R."""
    w = as_weight(w)
    c0, c1, c2 = restricted_spaces(m.n)
    d0, d1 = _restricted_matrices(m, w)
    r0, r1 = rank(d0), rank(d1)
    dim = len(c1) - r1 - r0
    harm = restricted_harmonic_basis(m, w)
    return CohomologyReport(f"restricted real (w={w})", w, {1: dim}, {1: harm},
                            {0: r0, 1: r1}, {0: len(c0), 1: len(c1), 2: len(c2)})


def class_verdict(m: Model, a: Form, complex: str = "full", w: WeightLike = 1) -> ClassVerdict:
    """Is the d_eta-closed form a exact in the named complex?

    ``complex`` is ``"full"`` (all forms) or ``"restricted"`` (primitives
    sought among (1,1) forms, a in (2,1)+(1,2)). Returns a primitive when
    exact, otherwise the harmonic part, with a - harmonic part exact.
    """
    w = as_weight(w)
    da = twisted_differential(m, a, w)
    if da:
        raise NotClosedError("form is not d_eta-closed", da)
    if a.is_zero():
        return ClassVerdict(True, Form(), complex, Form())
    if complex == "restricted":
        if not a.bidegrees() <= {(2, 1), (1, 2)}:
            raise ValueError("restricted complex needs a form in (2,1)+(1,2)")
        c0, c1, _ = restricted_spaces(m.n)
        d0, _ = _restricted_matrices(m, w)
        prim = _real_solve(d0, c0, a, c1)
        if prim is not None:
            return ClassVerdict(True, prim, complex, Form())
        harm = orthogonal_projection(metric(m), a, restricted_harmonic_basis(m, w))
        return ClassVerdict(False, harm, complex, harm)
    if complex != "full":
        raise ValueError(f"unknown complex {complex!r}")
    prim = Form()
    exact = True
    for k in sorted(a.degrees()):
        part = project_degree(a, k)
        if k == 0:
            exact = False
            break
        x = _real_solve(_degree_matrix(m, k - 1, w), monomials_of_degree(m.n, k - 1),
                        part, monomials_of_degree(m.n, k))
        if x is None:
            exact = False
            break
        prim = prim + x
    if exact:
        return ClassVerdict(True, prim, complex, Form())
    harm = harmonic_projection(metric(m), a, w)
    return ClassVerdict(False, harm, complex, harm)


# ---------------------------------------------------------------------------
# Bott-Chern and Hopf


def bott_chern_11(m: Model, w: WeightLike = 1) -> BottChernReport:
    """Closed real (1,1) forms modulo i del_eta delbar_eta of real constants."""
    w = as_weight(w)
    c0, c1, _ = restricted_spaces(m.n)
    d0, _ = _restricted_matrices(m, w)
    closed = realify([from_vector(v, c0) for v in kernel_basis(d0)], c0)
    u = del_eta(m, delbar_eta(m, Form.scalar(1), w), w).scale(I)
    reps: List[Form] = []
    base = [u] if u else []
    r = len(base)
    for f in closed:
        r2 = _span_rank(base + reps + [f], c0)
        if r2 > r:
            reps.append(f)
            r = r2
    if u:
        omega_in = _span_rank([u, m.omega], c0) == 1
    else:
        omega_in = m.omega.is_zero()
    return BottChernReport(len(reps), len(closed), reps, u, omega_in, w)


def hopf_bc_dim(n: int, lam: int) -> int:
    """dim H^1(X, P(L_lambda)) on a Hopf manifold of dimension n: dim H^0(P^{n-1}, O(lambda))."""
    if isinstance(n, bool) or isinstance(lam, bool) or not isinstance(n, int) or not isinstance(lam, int):
        raise ValueError("n and lambda must be integers")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    return math.comb(lam + n - 1, n - 1)
