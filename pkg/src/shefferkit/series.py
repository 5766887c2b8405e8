"""Truncated multivariate formal power series.

Series live in C[[x_1, .., x_d]] truncated at a total degree N.  Terms are
stored sparsely as a map MultiIndex -> coefficient, iterated in graded
lexicographic order (degree first, then plain tuple order), so every walk
over a series is deterministic.

Coefficients are ordinarily Python complex.  Passing `fractions.Fraction`
(or int) coefficients switches every operation to exact rational
arithmetic; nothing else changes.  Only coefficients that are exactly zero
are dropped, there is no epsilon pruning.

Float-mode multiplication accumulates on a dense ndarray internally (the
stored representation stays sparse); this is exact coefficient arithmetic,
not an FFT, so structural zeros remain exact zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "MultiIndex",
    "ScalarSeries",
    "VectorSeries",
    "monomial_basis",
    "multi_factorial",
    "ps_mul",
    "ps_exp",
    "ps_log",
    "ps_recip",
    "ps_compose",
    "vs_compose",
    "vs_inverse",
]

Coeff = complex  # or int / Fraction in exact mode


@dataclass(frozen=True, init=False)
class MultiIndex:
    """Exponent vector of a monomial; `degree` caches the exponent sum."""

    exponents: tuple[int, ...]
    degree: int

    def __init__(self, exponents: Iterable[int]):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "degree", sum(exps))

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.degree, self.exponents)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(a + b for a, b in zip(self.exponents, other.exponents))

    def __repr__(self) -> str:
        return f"MultiIndex{self.exponents}"


def multi_factorial(exps: tuple[int, ...]) -> int:
    """beta! = prod_i beta_i! for an exponent tuple."""
    out = 1
    for e in exps:
        out *= math.factorial(e)
    return out


@lru_cache(maxsize=None)
def monomial_basis(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of the given total degree, in lexicographic order.

    This ordering (within one degree) is the canonical basis order used for
    every graded matrix in the engine.
    """
    if dim <= 0:
        raise ValueError("dim must be positive")
    if degree < 0:
        return ()
    if dim == 1:
        return ((degree,),)
    out = []
    for first in range(degree + 1):
        for rest in monomial_basis(dim - 1, degree - first):
            out.append((first,) + rest)
    return tuple(sorted(out))


def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction))


def _canonical_terms(terms: Mapping) -> dict[MultiIndex, Coeff]:
    items = []
    for key, coeff in terms.items():
        if coeff == 0:
            continue
        mi = key if isinstance(key, MultiIndex) else MultiIndex(key)
        items.append((mi, coeff))
    items.sort(key=lambda kv: kv[0].sort_key)
    return dict(items)


@dataclass(frozen=True, eq=False)
class ScalarSeries:
    """Sparse truncated power series in `dim` variables, total degree <= max_degree.

    Values are immutable after construction; all operations return new
    series.  Construct through :meth:`from_terms` which canonicalizes term
    order, validates indices and drops exact zeros.
    """

    dim: int
    max_degree: int
    terms: dict[MultiIndex, Coeff]

    @classmethod
    def from_terms(cls, dim: int, max_degree: int, terms: Mapping) -> "ScalarSeries":
        if dim <= 0:
            raise ValueError("dim must be positive")
        if max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        canon = _canonical_terms(terms)
        for mi in canon:
            if mi.dim != dim:
                raise ValueError(f"index {mi} has wrong dimension (expected {dim})")
            if mi.degree > max_degree:
                raise ValueError(f"index {mi} exceeds max_degree {max_degree}")
        return cls(dim, max_degree, canon)

    @classmethod
    def zero(cls, dim: int, max_degree: int) -> "ScalarSeries":
        return cls.from_terms(dim, max_degree, {})

    @classmethod
    def constant(cls, dim: int, max_degree: int, value) -> "ScalarSeries":
        return cls.from_terms(dim, max_degree, {(0,) * dim: value})

    @classmethod
    def one(cls, dim: int, max_degree: int, exact: bool = False) -> "ScalarSeries":
        return cls.constant(dim, max_degree, 1 if exact else (1.0 + 0.0j))

    @classmethod
    def variable(cls, dim: int, max_degree: int, index: int, exact: bool = False) -> "ScalarSeries":
        exps = [0] * dim
        exps[index] = 1
        return cls.from_terms(dim, max_degree, {tuple(exps): 1 if exact else (1.0 + 0.0j)})

    @classmethod
    def from_coeffs_1d(cls, coeffs: Iterable, max_degree: int | None = None) -> "ScalarSeries":
        """1-d series from the coefficient list [c_0, c_1, ...]."""
        cs = list(coeffs)
        n = max_degree if max_degree is not None else len(cs) - 1
        return cls.from_terms(1, n, {(k,): c for k, c in enumerate(cs) if k <= n})

    # -- inspection ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.terms.values())

    @property
    def constant_term(self):
        return self.terms.get(MultiIndex((0,) * self.dim), 0)

    def coefficient(self, exps) -> Coeff:
        mi = exps if isinstance(exps, MultiIndex) else MultiIndex(exps)
        return self.terms.get(mi, 0)

    def degree_part(self, degree: int) -> dict[tuple[int, ...], Coeff]:
        return {mi.exponents: c for mi, c in self.terms.items() if mi.degree == degree}

    def truncate(self, max_degree: int) -> "ScalarSeries":
        if max_degree > self.max_degree:
            raise ValueError("cannot extend a truncated series")
        return ScalarSeries.from_terms(
            self.dim, max_degree,
            {mi: c for mi, c in self.terms.items() if mi.degree <= max_degree})

    def evaluate(self, point) -> complex:
        """Numeric evaluation sum_beta c_beta x^beta at a complex vector."""
        x = [complex(v) for v in point]
        if len(x) != self.dim:
            raise ValueError("point has wrong dimension")
        total = 0.0 + 0.0j
        for mi, c in self.terms.items():
            v = complex(c)
            for xi, e in zip(x, mi.exponents):
                if e:
                    v *= xi ** e
            total += v
        return total

    # -- arithmetic ------------------------------------------------------

    def _require_same_shape(self, other: "ScalarSeries") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "ScalarSeries") -> "ScalarSeries":
        self._require_same_shape(other)
        n = min(self.max_degree, other.max_degree)
        out = {mi: c for mi, c in self.terms.items() if mi.degree <= n}
        for mi, c in other.terms.items():
            if mi.degree <= n:
                out[mi] = out.get(mi, 0) + c
        return ScalarSeries.from_terms(self.dim, n, out)

    def __neg__(self) -> "ScalarSeries":
        return ScalarSeries.from_terms(
            self.dim, self.max_degree, {mi: -c for mi, c in self.terms.items()})

    def __sub__(self, other: "ScalarSeries") -> "ScalarSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ScalarSeries):
            return ps_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar) -> "ScalarSeries":
        if scalar == 0:
            return ScalarSeries.zero(self.dim, self.max_degree)
        return ScalarSeries.from_terms(
            self.dim, self.max_degree, {mi: c * scalar for mi, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, ScalarSeries) and self.dim == other.dim
                and self.max_degree == other.max_degree and self.terms == other.terms)

    def __repr__(self) -> str:
        return f"ScalarSeries(dim={self.dim}, N={self.max_degree}, nnz={len(self.terms)})"

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        """Round-trips losslessly for finite double coefficients."""
        return {
            "dim": self.dim,
            "max_degree": self.max_degree,
            "terms": [
                {"exp": list(mi.exponents), "re": float(complex(c).real), "im": float(complex(c).imag)}
                for mi, c in self.terms.items()
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ScalarSeries":
        terms = {tuple(t["exp"]): complex(t["re"], t["im"]) for t in doc["terms"]}
        return cls.from_terms(int(doc["dim"]), int(doc["max_degree"]), terms)


# -- multiplication ------------------------------------------------------


@lru_cache(maxsize=64)
def _degree_cube(shape: tuple[int, ...]) -> np.ndarray:
    grids = np.indices(shape)
    return grids.sum(axis=0)


def _mul_dict(a: ScalarSeries, b: ScalarSeries, n: int) -> dict:
    out: dict[MultiIndex, Coeff] = {}
    for mia, ca in a.terms.items():
        if mia.degree > n:
            continue
        rem = n - mia.degree
        ea = mia.exponents
        for mib, cb in b.terms.items():
            if mib.degree > rem:
                continue
            key = MultiIndex(x + y for x, y in zip(ea, mib.exponents))
            out[key] = out.get(key, 0) + ca * cb
    return out


def _mul_dense(a: ScalarSeries, b: ScalarSeries, n: int) -> dict:
    ta = [(mi.exponents, complex(c)) for mi, c in a.terms.items() if mi.degree <= n]
    tb = [(mi.exponents, complex(c)) for mi, c in b.terms.items() if mi.degree <= n]
    if not ta or not tb:
        return {}
    if len(ta) > len(tb):
        ta, tb = tb, ta
    dim = a.dim
    bmax = [max(e[i] for e, _ in tb) for i in range(dim)]
    amax = [max(e[i] for e, _ in ta) for i in range(dim)]
    shape = tuple(min(n, amax[i] + bmax[i]) + 1 for i in range(dim))
    bcube = np.zeros(tuple(m + 1 for m in bmax), dtype=complex)
    for e, c in tb:
        bcube[e] = c
    out = np.zeros(shape, dtype=complex)
    for e, c in ta:
        dst = tuple(slice(e[i], min(shape[i], e[i] + bmax[i] + 1)) for i in range(dim))
        src = tuple(slice(0, min(shape[i] - e[i], bmax[i] + 1)) for i in range(dim))
        out[dst] += c * bcube[src]
    out[_degree_cube(shape) > n] = 0.0
    result = {}
    for idx in np.argwhere(out):
        key = tuple(int(v) for v in idx)
        result[MultiIndex(key)] = complex(out[key])
    return result


def ps_mul(a: ScalarSeries, b: ScalarSeries) -> ScalarSeries:
    """Product truncated at min(N_a, N_b)."""
    a._require_same_shape(b)
    n = min(a.max_degree, b.max_degree)
    if a.exact and b.exact:
        out = _mul_dict(a, b, n)
    else:
        out = _mul_dense(a, b, n)
    return ScalarSeries.from_terms(a.dim, n, out)


def _inverse_int(m: int, exact: bool):
    return Fraction(1, m) if exact else 1.0 / m


def ps_exp(a: ScalarSeries) -> ScalarSeries:
    """exp of a series with zero constant term, sum_{m<=N} a^m / m!."""
    if a.constant_term != 0:
        raise ValueError("ps_exp requires a zero constant term")
    exact = a.exact
    n = a.max_degree
    acc = ScalarSeries.one(a.dim, n, exact=exact)
    term = acc
    for m in range(1, n + 1):
        term = ps_mul(term, a).scale(_inverse_int(m, exact))
        if term.is_zero:
            break
        acc = acc + term
    return acc


def ps_log(a: ScalarSeries) -> ScalarSeries:
    """log of a series with constant term exactly 1."""
    if a.constant_term != 1:
        raise ValueError("ps_log requires constant term 1")
    exact = a.exact
    n = a.max_degree
    x = a - ScalarSeries.one(a.dim, n, exact=exact)
    acc = ScalarSeries.zero(a.dim, n)
    term = ScalarSeries.one(a.dim, n, exact=exact)
    for m in range(1, n + 1):
        term = ps_mul(term, x)
        if term.is_zero:
            break
        sign = 1 if m % 2 == 1 else -1
        acc = acc + term.scale(sign * _inverse_int(m, exact))
    return acc


def ps_recip(a: ScalarSeries) -> ScalarSeries:
    """Reciprocal of a series with constant term exactly 1 (geometric expansion).

    A single Newton correction r <- r + r (1 - a r) follows the geometric
    sum in float mode; it is an identity at this truncation order, but it
    collapses the error accumulated across the N partial products down to
    that of one residual evaluation.
    """
    if a.constant_term != 1:
        raise ValueError("ps_recip requires constant term 1")
    exact = a.exact
    n = a.max_degree
    one = ScalarSeries.one(a.dim, n, exact=exact)
    negx = one - a
    acc = one
    term = one
    for _ in range(1, n + 1):
        term = ps_mul(term, negx)
        if term.is_zero:
            break
        acc = acc + term
    if not exact:
        residual = one - ps_mul(a, acc)
        if not residual.is_zero:
            acc = acc + ps_mul(acc, residual)
    return acc


def ps_compose(f: ScalarSeries, g: "VectorSeries") -> ScalarSeries:
    """Substitute the vector series `g` into `f`, truncated at min(N_f, N_g).

    `f` is a series in g.dim_out variables; the result is a series in
    g.dim_in variables.  Evaluation is Horner-style, variable by variable:
    f is grouped by the exponent of its last variable and the groups are
    folded with one ring multiplication per exponent step, recursing on the
    remaining variables.  Substituted components must have zero constant
    term so that truncation is coherent.
    """
    if f.dim != g.dim_out:
        raise ValueError(f"dimension mismatch: f has {f.dim} vars, g maps into {g.dim_out}")
    for comp in g.components:
        if comp.constant_term != 0:
            raise ValueError("composition requires zero constant terms in the inner series")
    n = min(f.max_degree, g.max_degree)
    dim = g.dim_in
    comps = [c.truncate(min(n, c.max_degree)) for c in g.components]
    zero = ScalarSeries.zero(dim, n)

    def rec(terms: dict[tuple[int, ...], Coeff], var: int) -> ScalarSeries:
        if not terms:
            return zero
        if var < 0:
            const = terms.get((0,) * f.dim, 0)
            return ScalarSeries.constant(dim, n, const) if const != 0 else zero
        groups: dict[int, dict] = {}
        for exps, c in terms.items():
            e = exps[var]
            reduced = exps[:var] + (0,) + exps[var + 1:]
            groups.setdefault(e, {})[reduced] = c
        acc = zero
        for e in range(max(groups), -1, -1):
            if not acc.is_zero:
                acc = ps_mul(acc, comps[var])
            sub = groups.get(e)
            if sub:
                acc = acc + rec(sub, var - 1)
        return acc

    raw = {mi.exponents: c for mi, c in f.terms.items() if mi.degree <= f.max_degree}
    return rec(raw, f.dim - 1)


@dataclass(frozen=True, eq=False)
class VectorSeries:
    """Tuple of scalar series sharing the input variables, all with zero
    constant term (a formal map C^dim_in -> C^dim_out)."""

    dim_in: int
    dim_out: int
    max_degree: int
    components: tuple[ScalarSeries, ...]

    @classmethod
    def from_components(cls, components: Iterable[ScalarSeries]) -> "VectorSeries":
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector series needs at least one component")
        dim_in = comps[0].dim
        n = comps[0].max_degree
        for c in comps:
            if c.dim != dim_in or c.max_degree != n:
                raise ValueError("components must share dim and max_degree")
            if c.constant_term != 0:
                raise ValueError("vector series components must have zero constant term")
        return cls(dim_in, len(comps), n, comps)

    @classmethod
    def identity(cls, dim: int, max_degree: int, exact: bool = False) -> "VectorSeries":
        return cls.from_components(
            ScalarSeries.variable(dim, max_degree, i, exact=exact) for i in range(dim))

    @classmethod
    def from_scalar_1d(cls, a: ScalarSeries) -> "VectorSeries":
        if a.dim != 1:
            raise ValueError("expected a 1-d series")
        return cls.from_components([a])

    @property
    def unit_linear(self) -> bool:
        """True when the degree-1 part is the identity map (requires square)."""
        if self.dim_in != self.dim_out:
            return False
        for i, comp in enumerate(self.components):
            for j in range(self.dim_in):
                exps = [0] * self.dim_in
                exps[j] = 1
                want = 1 if i == j else 0
                if comp.coefficient(tuple(exps)) != want:
                    return False
        return True

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.components)

    def truncate(self, max_degree: int) -> "VectorSeries":
        return VectorSeries.from_components(c.truncate(max_degree) for c in self.components)

    def evaluate(self, point) -> list[complex]:
        return [c.evaluate(point) for c in self.components]

    def __eq__(self, other) -> bool:
        return (isinstance(other, VectorSeries) and self.dim_in == other.dim_in
                and self.dim_out == other.dim_out and self.components == other.components)

    def __repr__(self) -> str:
        return (f"VectorSeries({self.dim_in}->{self.dim_out}, N={self.max_degree})")

    def to_json_dict(self) -> dict:
        return {
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "max_degree": self.max_degree,
            "components": [c.to_json_dict() for c in self.components],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "VectorSeries":
        return cls.from_components(
            ScalarSeries.from_json_dict(c) for c in doc["components"])


def vs_compose(outer: VectorSeries, inner: VectorSeries) -> VectorSeries:
    """outer(inner(x)), componentwise composition."""
    if outer.dim_in != inner.dim_out:
        raise ValueError("dimension chain mismatch in composition")
    return VectorSeries.from_components(ps_compose(c, inner) for c in outer.components)


def vs_inverse(a: VectorSeries) -> VectorSeries:
    """Compositional inverse of a unit-linear vector series.

    Solves b(a(x)) = x degree by degree: with degrees < n of b fixed, the
    degree-n coefficients of b(a(x)) - x depend on the unknown block only
    through the identity linear part of `a`, so the correction is read off
    directly.  The inverse is again unit linear and b(a(x)) = a(b(x)) = x
    up to the shared truncation order.
    """
    if not a.unit_linear:
        raise ValueError("vs_inverse requires a unit linear part (a_1 = identity)")
    n = a.max_degree
    dim = a.dim_in
    exact = a.exact
    b_terms: list[dict] = []
    for i in range(dim):
        exps = [0] * dim
        exps[i] = 1
        b_terms.append({tuple(exps): 1 if exact else (1.0 + 0.0j)})
    for deg in range(2, n + 1):
        b_cur = VectorSeries.from_components(
            ScalarSeries.from_terms(dim, deg, t) for t in b_terms)
        comp = vs_compose(b_cur, a.truncate(deg))
        for i, c in enumerate(comp.components):
            for exps, coeff in c.degree_part(deg).items():
                if coeff != 0:
                    b_terms[i][exps] = b_terms[i].get(exps, 0) - coeff
    return VectorSeries.from_components(
        ScalarSeries.from_terms(dim, n, t) for t in b_terms)
