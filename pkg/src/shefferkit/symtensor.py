"""Symmetric tensor coefficients in monomial representation.

A degree-n symmetric tensor over C^d is stored by the coefficients c_beta
of its evaluation polynomial,

    <w^{(x)n}, phi> = sum_{|beta|=n} c_beta w^beta.

Conversion table (identity weight; `beta!` is the multi-factorial):

    dense entry at a slot tuple of content beta   T_beta = c_beta * beta!/n!
    pairing of two degree-n tensors               <s, c> = sum (beta!/n!) s_beta c_beta
    Hilbert norm                                  ||phi||^2 = sum (beta!/n!) |c_beta|^2
    symmetric product                             plain polynomial product of coefficients

Tensors on the primal (test function) side and on the dual side share this
one representation; at finite d the spaces coincide and only the weight
convention differs.  Under a weighted inner product with Cholesky factor L
(W = L L^H), primal tensors are measured after the slot map L^H and dual
tensors after conj(L^{-1}); both reduce to the identity-weight formulas
after a linear substitution of the coefficients.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .series import (
    MultiIndex,
    ScalarSeries,
    VectorSeries,
    monomial_basis,
    multi_factorial,
    ps_compose,
)

__all__ = [
    "SymCoeff",
    "WeightedInnerProduct",
    "apply_slot_map",
    "sym_norm",
    "sym_dual_norm",
    "sym_product",
    "sym_contract",
    "to_dense",
    "from_dense",
    "DENSE_BUDGET",
]

DENSE_BUDGET = 4096


@dataclass(frozen=True, eq=False)
class SymCoeff:
    """Monomial coefficients of one homogeneous symmetric tensor."""

    dim: int
    degree: int
    coeffs: dict[MultiIndex, complex]

    @classmethod
    def from_coeffs(cls, dim: int, degree: int, coeffs: Mapping) -> "SymCoeff":
        canon = {}
        for key, c in coeffs.items():
            if c == 0:
                continue
            mi = key if isinstance(key, MultiIndex) else MultiIndex(key)
            if mi.dim != dim:
                raise ValueError(f"index {mi} has wrong dimension")
            if mi.degree != degree:
                raise ValueError(f"index {mi} must have degree exactly {degree}")
            canon[mi] = c
        ordered = dict(sorted(canon.items(), key=lambda kv: kv[0].exponents))
        return cls(dim, degree, ordered)

    @classmethod
    def zero(cls, dim: int, degree: int) -> "SymCoeff":
        return cls.from_coeffs(dim, degree, {})

    @classmethod
    def scalar(cls, dim: int, value) -> "SymCoeff":
        return cls.from_coeffs(dim, 0, {(0,) * dim: value})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs.values())

    def coefficient(self, exps) -> complex:
        mi = exps if isinstance(exps, MultiIndex) else MultiIndex(exps)
        return self.coeffs.get(mi, 0)

    def vector(self, dtype=complex) -> np.ndarray:
        """Coefficients in canonical basis order (see monomial_basis)."""
        basis = monomial_basis(self.dim, self.degree)
        if dtype is object:
            return np.array([self.coefficient(b) for b in basis], dtype=object)
        return np.array([complex(self.coefficient(b)) for b in basis], dtype=complex)

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec) -> "SymCoeff":
        basis = monomial_basis(dim, degree)
        return cls.from_coeffs(dim, degree, {b: v for b, v in zip(basis, vec)})

    def __add__(self, other: "SymCoeff") -> "SymCoeff":
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise ValueError("shape mismatch")
        out = dict(self.coeffs)
        for mi, c in other.coeffs.items():
            out[mi] = out.get(mi, 0) + c
        return SymCoeff.from_coeffs(self.dim, self.degree, out)

    def __sub__(self, other: "SymCoeff") -> "SymCoeff":
        return self + other.scale(-1)

    def scale(self, scalar) -> "SymCoeff":
        return SymCoeff.from_coeffs(
            self.dim, self.degree, {mi: c * scalar for mi, c in self.coeffs.items()})

    def evaluate(self, point) -> complex:
        """<w^{(x)n}, phi> at a numeric w."""
        x = [complex(v) for v in point]
        total = 0.0 + 0.0j
        for mi, c in self.coeffs.items():
            v = complex(c)
            for xi, e in zip(x, mi.exponents):
                if e:
                    v *= xi ** e
            total += v
        return total

    def as_series(self, max_degree: int | None = None) -> ScalarSeries:
        n = self.degree if max_degree is None else max_degree
        return ScalarSeries.from_terms(self.dim, n, self.coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymCoeff) and self.dim == other.dim
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __repr__(self) -> str:
        return f"SymCoeff(dim={self.dim}, degree={self.degree}, nnz={len(self.coeffs)})"

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "terms": [
                {"exp": list(mi.exponents), "re": float(complex(c).real), "im": float(complex(c).imag)}
                for mi, c in self.coeffs.items()
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SymCoeff":
        terms = {tuple(t["exp"]): complex(t["re"], t["im"]) for t in doc["terms"]}
        return cls.from_coeffs(int(doc["dim"]), int(doc["degree"]), terms)


class WeightedInnerProduct:
    """Hermitian positive definite weight on C^d and its tensor powers.

    ||x||^2 = x^H W x.  The Cholesky factor L (W = L L^H) gives the slot
    isometries used throughout: L^H on the primal side, conj(L^{-1}) on the
    dual side.
    """

    def __init__(self, matrix) -> None:
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("weight must be a square matrix")
        if not np.allclose(m, m.conj().T, rtol=0, atol=1e-12):
            raise ValueError("weight must be Hermitian")
        try:
            lower = np.linalg.cholesky(m)
        except np.linalg.LinAlgError as exc:
            raise ValueError("weight must be positive definite") from exc
        self.matrix = m
        self.dim = m.shape[0]
        self._lower = lower
        self.is_identity = bool(np.array_equal(m, np.eye(self.dim)))

    @classmethod
    def identity(cls, dim: int) -> "WeightedInnerProduct":
        return cls(np.eye(dim))

    @classmethod
    def diagonal(cls, weights) -> "WeightedInnerProduct":
        w = np.asarray(weights, dtype=float)
        if np.any(w <= 0):
            raise ValueError("diagonal weights must be positive")
        return cls(np.diag(w))

    def primal_slot_map(self) -> np.ndarray:
        return self._lower.conj().T

    def dual_slot_map(self) -> np.ndarray:
        return np.linalg.inv(self._lower).conj()

    def vector_norm(self, x) -> float:
        return float(np.linalg.norm(self.primal_slot_map() @ np.asarray(x, dtype=complex)))

    def dual_vector_norm(self, x) -> float:
        return float(np.linalg.norm(self.dual_slot_map() @ np.asarray(x, dtype=complex)))

    def __repr__(self) -> str:
        tag = "identity" if self.is_identity else "general"
        return f"WeightedInnerProduct(dim={self.dim}, {tag})"


def _resolve_weight(dim: int, weight: WeightedInnerProduct | None) -> WeightedInnerProduct:
    if weight is None:
        return WeightedInnerProduct.identity(dim)
    if weight.dim != dim:
        raise ValueError("weight dimension mismatch")
    return weight


@lru_cache(maxsize=None)
def _norm_weight(exps: tuple[int, ...], degree: int) -> float:
    return float(Fraction(multi_factorial(exps), math.factorial(degree)))


def apply_slot_map(phi: SymCoeff, matrix: np.ndarray) -> SymCoeff:
    """Apply a linear map M to every tensor slot.

    On the evaluation polynomial this is the substitution w -> M^T w, i.e.
    variable j is replaced by the linear form sum_i M[i, j] w_i.
    """
    m = np.asarray(matrix, dtype=complex)
    d = phi.dim
    if m.shape != (d, d):
        raise ValueError("slot map has wrong shape")
    if phi.degree == 0 or phi.is_zero:
        return phi
    comps = []
    for j in range(d):
        terms = {}
        for i in range(d):
            if m[i, j] != 0:
                exps = [0] * d
                exps[i] = 1
                terms[tuple(exps)] = complex(m[i, j])
        comps.append(ScalarSeries.from_terms(d, phi.degree, terms))
    sub = VectorSeries.from_components(comps)
    out = ps_compose(phi.as_series(), sub)
    return SymCoeff.from_coeffs(d, phi.degree, {mi: c for mi, c in out.terms.items()})


def sym_norm(phi: SymCoeff, weight: WeightedInnerProduct | None = None) -> float:
    """Hilbert norm of the symmetric tensor, sqrt(sum (beta!/n!) |c_beta|^2).

    Non-identity weights are handled by pushing the Cholesky slot map into
    the coefficients once, then applying the identity formula.  Pass
    `dual=True` semantics by supplying the weight built for the dual side.
    """
    w = _resolve_weight(phi.dim, weight)
    work = phi if w.is_identity else apply_slot_map(phi, w.primal_slot_map())
    total = 0.0
    for mi, c in work.coeffs.items():
        total += _norm_weight(mi.exponents, work.degree) * abs(complex(c)) ** 2
    return math.sqrt(total)


def sym_dual_norm(phi: SymCoeff, weight: WeightedInnerProduct | None = None) -> float:
    """Norm of a dual-side tensor (inverse weight convention)."""
    w = _resolve_weight(phi.dim, weight)
    work = phi if w.is_identity else apply_slot_map(phi, w.dual_slot_map())
    return sym_norm(work, None)


def sym_product(a: SymCoeff, b: SymCoeff) -> SymCoeff:
    """Symmetric tensor product; plain coefficient polynomial product.

    Valid because pairing against the symmetric w^{(x)(k+m)} factorizes:
    <w^{(x)(k+m)}, a (.) b> = <w^{(x)k}, a> <w^{(x)m}, b>.
    """
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    out: dict[MultiIndex, complex] = {}
    for mia, ca in a.coeffs.items():
        for mib, cb in b.coeffs.items():
            key = mia + mib
            out[key] = out.get(key, 0) + ca * cb
    return SymCoeff.from_coeffs(a.dim, a.degree + b.degree, out)


def sym_contract(theta: SymCoeff, phi: SymCoeff) -> SymCoeff:
    """Contract a degree-k dual tensor into a degree-n tensor (n >= k).

    The result r of degree n-k is defined by the duality
    <G (.) theta, phi> = <G, r> for every dual G of degree n-k, which in
    monomial coordinates reads

        r_delta = ((n-k)!/n!) sum_{|gamma|=k} t_gamma c_{delta+gamma} (delta+gamma)!/delta!

    The coordinate formula is pinned against the dense-tensor oracle in the
    test suite; with the conventions above it equals contracting k slots of
    the dense tensors.
    """
    if theta.dim != phi.dim:
        raise ValueError("dimension mismatch")
    k, n = theta.degree, phi.degree
    if k > n:
        raise ValueError(f"cannot contract degree {k} into degree {n}")
    exact = theta.exact and phi.exact
    out: dict[MultiIndex, complex] = {}
    for mib, c in phi.coeffs.items():
        big = mib.exponents
        for mig, t in theta.coeffs.items():
            gam = mig.exponents
            if any(g > bb for g, bb in zip(gam, big)):
                continue
            delta = tuple(bb - g for bb, g in zip(big, gam))
            factor = Fraction(math.factorial(n - k) * multi_factorial(big),
                              math.factorial(n) * multi_factorial(delta))
            if not exact:
                factor = float(factor)
            key = MultiIndex(delta)
            out[key] = out.get(key, 0) + t * c * factor
    return SymCoeff.from_coeffs(phi.dim, n - k, out)


def _content(positions: tuple[int, ...], dim: int) -> tuple[int, ...]:
    counts = [0] * dim
    for p in positions:
        counts[p] += 1
    return tuple(counts)


def _scale_exact(value, frac: Fraction):
    """value * frac with a single rounding (floats pass through Fractions)."""
    if isinstance(value, (int, Fraction)):
        return value * frac
    z = complex(value)
    re = float(Fraction(z.real) * frac) if z.real else 0.0
    im = float(Fraction(z.imag) * frac) if z.imag else 0.0
    return complex(re, im)


def to_dense(phi: SymCoeff, budget: int = DENSE_BUDGET) -> np.ndarray:
    """Full d^n dense tensor; entry at slots (i_1..i_n) is c_beta * beta!/n!
    where beta counts slot occurrences."""
    d, n = phi.dim, phi.degree
    if d ** n > budget:
        raise ValueError(f"dense budget exceeded: {d}^{n} > {budget}")
    exact = bool(phi.coeffs) and phi.exact
    out = np.zeros((d,) * n, dtype=object if exact else complex)
    if exact:
        out[...] = Fraction(0)
    nfact = math.factorial(n)
    for pos in itertools.product(range(d), repeat=n):
        beta = _content(pos, d)
        c = phi.coefficient(beta)
        if c == 0:
            continue
        out[pos] = _scale_exact(c, Fraction(multi_factorial(beta), nfact))
    return out


def from_dense(tensor: np.ndarray, dim: int | None = None) -> SymCoeff:
    """Read a symmetric dense tensor back into monomial coefficients."""
    t = np.asarray(tensor)
    n = t.ndim
    d = dim if n == 0 else t.shape[0]
    if d is None:
        raise ValueError("dim is required for a degree-0 tensor")
    coeffs = {}
    nfact = math.factorial(n)
    for beta in monomial_basis(d, n) if n > 0 else [(0,) * d]:
        # representative slot tuple: variable i repeated beta_i times
        pos = tuple(i for i, e in enumerate(beta) for _ in range(e))
        value = t[pos] if n > 0 else t[()]
        if value == 0:
            continue
        coeffs[beta] = _scale_exact(value, Fraction(nfact, multi_factorial(beta)))
    return SymCoeff.from_coeffs(d, n, coeffs)
