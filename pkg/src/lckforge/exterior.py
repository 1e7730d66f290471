"""Complexified exterior algebra on theta^1..theta^n, conj(theta)^1..conj(theta)^n.

A monomial is a pair ``(holo, anti)`` of strictly increasing index tuples;
its canonical factor order is all theta's (ascending) followed by all
theta-bar's (ascending). Reordering signs are absorbed at construction, so
two forms are equal exactly when their term maps are equal.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .scalars import I, ONE, ZERO, GaussianRational

__all__ = [
    "Monomial",
    "Form",
    "wedge",
    "wedge_all",
    "conjugate",
    "project_bidegree",
    "is_real",
    "monomials",
    "monomials_of_degree",
    "basis_of",
    "interior",
    "monomial_str",
    "to_vector",
    "from_vector",
]

Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]

UNIT: Monomial = ((), ())


def _sort_sign(seq: Sequence[int]) -> Tuple[int, Optional[tuple]]:
    """Sign of the sorting permutation, or (0, None) on a repeated entry."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def canonical_monomial(factors: Iterable[Tuple[int, int]]) -> Tuple[int, Optional[Monomial]]:
    """Canonicalize a product of factors ``(kind, index)``; kind 0 = theta, 1 = theta-bar."""
    keyed = [(k, i) for k, i in factors]
    if len(set(keyed)) != len(keyed):
        return 0, None
    ordered = sorted(keyed)
    sign, _ = _sort_sign([ordered.index(f) for f in keyed])
    holo = tuple(i for k, i in ordered if k == 0)
    anti = tuple(i for k, i in ordered if k == 1)
    return sign, (holo, anti)


def _mono_wedge(a: Monomial, b: Monomial) -> Tuple[int, Optional[Monomial]]:
    ha, aa = a
    hb, ab = b
    if set(ha) & set(hb) or set(aa) & set(ab):
        return 0, None
    sign = -1 if (len(aa) * len(hb)) % 2 else 1
    s1, h = _sort_sign(ha + hb)
    s2, an = _sort_sign(aa + ab)
    return sign * s1 * s2, (h, an)


def _mono_conj(m: Monomial) -> Tuple[int, Monomial]:
    h, a = m
    sign = -1 if (len(h) * len(a)) % 2 else 1
    return sign, (a, h)


def monomial_degree(m: Monomial) -> int:
    return len(m[0]) + len(m[1])


def monomial_str(m: Monomial) -> str:
    """``t1^t2^tb1``; the unit monomial prints as ``1``."""
    parts = [f"t{k}" for k in m[0]] + [f"tb{k}" for k in m[1]]
    return "^".join(parts) if parts else "1"


def _mono_sort_key(m: Monomial):
    return (monomial_degree(m), len(m[1]), m[0], m[1])


class Form:
    """Element of the complexified exterior algebra: a sparse map monomial -> Q(i)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, object]] = None):
        clean: Dict[Monomial, GaussianRational] = {}
        if terms:
            for m, c in terms.items():
                c = GaussianRational.coerce(c)
                if not c.is_zero():
                    clean[(tuple(m[0]), tuple(m[1]))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, key, value):
        raise AttributeError("Form is immutable")

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls) -> "Form":
        return cls()

    @classmethod
    def scalar(cls, c) -> "Form":
        return cls({UNIT: c})

    @classmethod
    def theta(cls, k: int) -> "Form":
        return cls({((k,), ()): ONE})

    @classmethod
    def theta_bar(cls, k: int) -> "Form":
        return cls({((), (k,)): ONE})

    @classmethod
    def monomial(cls, m: Monomial, c=ONE) -> "Form":
        return cls({m: c})

    @classmethod
    def from_factors(cls, factors: Iterable[Tuple[int, int]], c=ONE) -> "Form":
        sign, m = canonical_monomial(factors)
        if m is None:
            return cls()
        return cls({m: GaussianRational.coerce(c) * sign})

    # linear structure -------------------------------------------------------

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return Form(out)

    def __sub__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form({m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "Form":
        c = GaussianRational.coerce(c)
        if c.is_zero():
            return Form()
        return Form({m: c * v for m, v in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, Form):
            return NotImplemented
        try:
            return self.scale(c)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    # queries ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {monomial_degree(m) for m in self.terms}

    def bidegrees(self) -> set:
        return {(len(m[0]), len(m[1])) for m in self.terms}

    def degree(self) -> int:
        """Total degree of a nonzero homogeneous form."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"form is not homogeneous (degrees {sorted(ds)})")
        return next(iter(ds))

    def coefficient(self, m: Monomial) -> GaussianRational:
        return self.terms.get(m, ZERO)

    def sorted_terms(self) -> List[Tuple[Monomial, GaussianRational]]:
        return sorted(self.terms.items(), key=lambda mc: _mono_sort_key(mc[0]))

    def max_index(self) -> int:
        idx = [k for m in self.terms for k in m[0] + m[1]]
        return max(idx) if idx else 0

    def __eq__(self, other):
        if isinstance(other, Form):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            ms = monomial_str(m)
            if ms == "1":
                parts.append(f"({c.exact_str()})")
            else:
                parts.append(f"({c.exact_str()}) {ms}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Form({self})"


def wedge(a: Form, b: Form) -> Form:
    out: Dict[Monomial, GaussianRational] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            s, m = _mono_wedge(ma, mb)
            if m is None:
                continue
            v = ca * cb
            out[m] = out.get(m, ZERO) + (v if s > 0 else -v)
    return Form(out)


def wedge_all(*forms: Form) -> Form:
    out = Form.scalar(ONE)
    for f in forms:
        out = wedge(out, f)
    return out


def conjugate(a: Form) -> Form:
    out = {}
    for m, c in a.terms.items():
        s, mc = _mono_conj(m)
        cc = c.conj()
        out[mc] = cc if s > 0 else -cc
    return Form(out)


def project_bidegree(a: Form, p: int, q: int) -> Form:
    return Form({m: c for m, c in a.terms.items() if len(m[0]) == p and len(m[1]) == q})


def project_degree(a: Form, k: int) -> Form:
    return Form({m: c for m, c in a.terms.items() if monomial_degree(m) == k})


def is_real(a: Form) -> bool:
    return conjugate(a) == a


def real_part(a: Form) -> Form:
    """(a + conj a) / 2."""
    return (a + conjugate(a)).scale(GaussianRational("1/2"))


def interior(a: Form, kind: int, k: int) -> Form:
    """Contraction with X_k (kind 0) or conj(X)_k (kind 1), the frame dual to the coframe."""
    out = {}
    for m, c in a.terms.items():
        h, an = m
        if kind == 0:
            if k not in h:
                continue
            pos = h.index(k)
            nm = (h[:pos] + h[pos + 1:], an)
        else:
            if k not in an:
                continue
            pos = len(h) + an.index(k)
            j = an.index(k)
            nm = (h, an[:j] + an[j + 1:])
        out[nm] = c if pos % 2 == 0 else -c
    return Form(out)


# ---------------------------------------------------------------------------
# bases


def monomials(n: int, p: int, q: int) -> List[Monomial]:
    """All monomials of bidegree (p, q), in deterministic lexicographic order."""
    if p < 0 or q < 0 or p > n or q > n:
        return []
    return [(h, a) for h in combinations(range(1, n + 1), p)
            for a in combinations(range(1, n + 1), q)]


def monomials_of_degree(n: int, k: int) -> List[Monomial]:
    out = []
    for q in range(0, k + 1):
        out.extend(monomials(n, k - q, q))
    return out


def basis_of(n: int, p: int, q: int, reality: str = "complex") -> List[Form]:
    """Basis of the (p, q) space.

    ``reality="real"`` gives a basis of the real points of (p,q) + (q,p)
    (just (p,p) when p == q): m + conj(m) and i(m - conj(m)) per conjugate
    pair of monomials, or m resp. i*m for a monomial conjugate to +-itself.
    """
    if reality == "complex":
        return [Form.monomial(m) for m in monomials(n, p, q)]
    if reality != "real":
        raise ValueError(f"unknown reality {reality!r}")
    out = []
    seen = set()
    for m in monomials(n, p, q):
        if m in seen:
            continue
        f = Form.monomial(m)
        fc = conjugate(f)
        (mc, cc), = fc.terms.items()
        seen.add(m)
        seen.add(mc)
        if mc == m:
            out.append(f if cc == ONE else f.scale(I))
        else:
            out.append(f + fc)
            out.append((f - fc).scale(I))
    return out


def to_vector(a: Form, basis: Sequence[Monomial]) -> tuple:
    index = {m: i for i, m in enumerate(basis)}
    v = [ZERO] * len(basis)
    for m, c in a.terms.items():
        if m not in index:
            raise ValueError(f"monomial {monomial_str(m)} outside the target space")
        v[index[m]] = c
    return tuple(v)


def from_vector(v: Sequence, basis: Sequence[Monomial]) -> Form:
    return Form({m: c for m, c in zip(basis, v)})


def matrix_of(op, src: Sequence[Monomial], dst: Sequence[Monomial]):
    """Matrix of a linear operator on forms in monomial coordinates (columns = images)."""
    from .scalars import Matrix

    cols = [to_vector(op(Form.monomial(m)), dst) for m in src]
    return Matrix.from_columns(cols, len(dst))
