"""Sheffer sequences as graded coefficient transforms.

A sequence is represented by its transfer blocks V[k, n], the matrices over
monomial bases with

    <S_n(w), phi_n> = sum_{k<=n} <w^{(x)k}, V[k, n] phi_n>,

extracted from the bivariate expansion of the generating function

    G(w, xi) = exp[<w, A(xi)>] / rho(A(xi))
             = sum_n (1/n!) <S_n(w), xi^{(x)n}>.

Working in 2d variables (w block first, xi block second), the coefficient
of w^beta xi^gamma gives V[k, n][beta, gamma] = gamma! G_{beta,gamma} with
k = |beta|, n = |gamma|.  The xi-degree is capped at the truncation order
after every ring operation; the w-degree never exceeds it because every w
factor of the exponential brings at least one xi factor.

Monicity (V[n, n] = identity) and lower triangularity follow from the unit
linear part of A and rho(0) = 1, and are asserted after every build.

The inverse transform is the graded transform of the same shape built from
the compositional inverse B of A and the reciprocal coefficient series: it
expands exp[<w, xi>] in the S-basis via

    exp[<w, xi>] = kappa(B(xi)) * sum_n (1/n!) <S_n(w), B(xi)^{(x)n}>,

so its blocks come from exp[<w, B(xi)>] * kappa(B(xi)).
"""

from __future__ import annotations

import base64
import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .series import (
    MultiIndex,
    ScalarSeries,
    VectorSeries,
    monomial_basis,
    multi_factorial,
    ps_compose,
    ps_mul,
    ps_recip,
    vs_inverse,
)
from .symtensor import SymCoeff, sym_norm, sym_product, to_dense, from_dense

__all__ = [
    "PolynomialOnDual",
    "ShefferSequence",
    "DegreeOverflowError",
    "build_basic",
    "build_sheffer",
    "theta_kappa",
    "sheffer_apply",
    "sheffer_inverse_apply",
    "umbral_apply_direct",
    "binomial_check",
    "BinomialReport",
    "evaluate",
    "random_polynomial",
    "save_sequence",
    "load_sequence",
]


class DegreeOverflowError(ValueError):
    """Input degree exceeds the built truncation order."""


@dataclass(frozen=True, eq=False)
class PolynomialOnDual:
    """p(w) = sum_n <w^{(x)n}, coeffs[n]> with deg(coeffs[n]) = n."""

    dim: int
    coeffs: tuple[SymCoeff, ...]

    @classmethod
    def from_coeffs(cls, dim: int, coeffs: Iterable[SymCoeff]) -> "PolynomialOnDual":
        cs = tuple(coeffs)
        for n, c in enumerate(cs):
            if c.dim != dim:
                raise ValueError("coefficient dimension mismatch")
            if c.degree != n:
                raise ValueError(f"slot {n} holds a degree-{c.degree} coefficient")
        return cls(dim, cs)

    @classmethod
    def zero(cls, dim: int) -> "PolynomialOnDual":
        return cls.from_coeffs(dim, [SymCoeff.zero(dim, 0)])

    @classmethod
    def monomial(cls, dim: int, exponents, value=1.0 + 0.0j) -> "PolynomialOnDual":
        mi = MultiIndex(exponents)
        cs = [SymCoeff.zero(dim, k) for k in range(mi.degree)]
        cs.append(SymCoeff.from_coeffs(dim, mi.degree, {mi: value}))
        return cls.from_coeffs(dim, cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def coefficient(self, degree: int) -> SymCoeff:
        if degree < len(self.coeffs):
            return self.coeffs[degree]
        return SymCoeff.zero(self.dim, degree)

    def trimmed(self) -> "PolynomialOnDual":
        cs = list(self.coeffs)
        while len(cs) > 1 and cs[-1].is_zero:
            cs.pop()
        return PolynomialOnDual.from_coeffs(self.dim, cs)

    def evaluate(self, omega) -> complex:
        return sum((c.evaluate(omega) for c in self.coeffs), 0.0 + 0.0j)

    def __sub__(self, other: "PolynomialOnDual") -> "PolynomialOnDual":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        top = max(self.degree, other.degree)
        return PolynomialOnDual.from_coeffs(
            self.dim,
            [self.coefficient(n) - other.coefficient(n) for n in range(top + 1)])

    def coeff_norms(self) -> list[float]:
        return [sym_norm(c) for c in self.coeffs]

    def __repr__(self) -> str:
        return f"PolynomialOnDual(dim={self.dim}, degree={self.degree})"

    def to_json_dict(self) -> dict:
        return {"dim": self.dim,
                "coefficients": [c.to_json_dict() for c in self.coeffs]}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PolynomialOnDual":
        return cls.from_coeffs(
            int(doc["dim"]),
            [SymCoeff.from_json_dict(c) for c in doc["coefficients"]])


def evaluate(p: PolynomialOnDual, omega) -> complex:
    """Numeric value sum_n sum_beta c_beta w^beta."""
    if len(tuple(omega)) != p.dim:
        raise ValueError("dimension mismatch")
    return p.evaluate(omega)


# -- bivariate extraction --------------------------------------------------


def _lift_xi(series: ScalarSeries, total_degree: int) -> ScalarSeries:
    """Embed a xi-only series into the 2d bivariate variables."""
    d = series.dim
    zeros = (0,) * d
    terms = {zeros + mi.exponents: c for mi, c in series.terms.items()}
    return ScalarSeries.from_terms(2 * d, total_degree, terms)


def _cap_xi(series: ScalarSeries, dim: int, order: int) -> ScalarSeries:
    kept = {mi: c for mi, c in series.terms.items()
            if sum(mi.exponents[dim:]) <= order}
    return ScalarSeries.from_terms(series.dim, series.max_degree, kept)


def _pairing_form(a: VectorSeries, order: int) -> ScalarSeries:
    """<w, A(xi)> as a bivariate series (w block first, xi block second)."""
    d = a.dim_in
    terms: dict[tuple[int, ...], object] = {}
    for i, comp in enumerate(a.components):
        for mi, c in comp.terms.items():
            if mi.degree > order:
                continue
            w_part = tuple(1 if j == i else 0 for j in range(d))
            terms[w_part + mi.exponents] = c
    return ScalarSeries.from_terms(2 * d, 2 * order, terms)


def _transfer_blocks(vec: VectorSeries, xi_factor: ScalarSeries | None,
                     order: int, exact: bool) -> dict[tuple[int, int], np.ndarray]:
    """Blocks of the graded transform with generating function
    exp[<w, vec(xi)>] * xi_factor(xi).

    The pairing form carries exactly one w per factor, so the w-degree-k
    part of the generating function is <w, vec>^k / k! times the factor.
    Each power is kept undivided and the 1/k! enters only in the extraction
    weight gamma!/k!; on the top diagonal (beta = gamma, k = n) numerator
    and denominator are then the identical float, which keeps the monic
    blocks exactly equal to the identity in float mode as well.
    """
    d = vec.dim_in
    pairing = _pairing_form(vec, order)
    if xi_factor is not None:
        cur = _cap_xi(_lift_xi(xi_factor, 2 * order), d, order)
    else:
        cur = ScalarSeries.one(2 * d, 2 * order, exact=exact)
    tables: list[dict[tuple[tuple[int, ...], tuple[int, ...]], object]] = []
    for k in range(order + 1):
        if k > 0:
            cur = _cap_xi(ps_mul(cur, pairing), d, order)
        tables.append({(mi.exponents[:d], mi.exponents[d:]): c
                       for mi, c in cur.terms.items()})
    blocks: dict[tuple[int, int], np.ndarray] = {}
    for n in range(order + 1):
        basis_n = monomial_basis(d, n)
        for k in range(n + 1):
            basis_k = monomial_basis(d, k)
            kfact = math.factorial(k)
            table = tables[k]
            mat = np.zeros((len(basis_k), len(basis_n)),
                           dtype=object if exact else complex)
            if exact:
                mat[...] = Fraction(0)
            for jn, gamma in enumerate(basis_n):
                gfact = multi_factorial(gamma)
                for jk, beta in enumerate(basis_k):
                    c = table.get((beta, gamma))
                    if c is None or c == 0:
                        continue
                    if exact:
                        mat[jk, jn] = Fraction(gfact, kfact) * c
                    else:
                        mat[jk, jn] = (float(gfact) * complex(c)) / float(kfact)
            blocks[(k, n)] = mat
    return blocks


def _matvec(mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
    if mat.size == 0 or vec.size == 0:
        return np.zeros(mat.shape[0], dtype=mat.dtype)
    return mat @ vec


class ShefferSequence:
    """Graded transfer blocks of one Sheffer sequence, plus its defining data.

    Immutable after construction; the inverse blocks are materialized lazily
    on first use and cached.
    """

    def __init__(self, dim: int, max_degree: int,
                 blocks: dict[tuple[int, int], np.ndarray],
                 a: VectorSeries, rho: ScalarSeries | None,
                 theta: Sequence[SymCoeff], kappa: Sequence[SymCoeff],
                 theta_series: ScalarSeries, kappa_series: ScalarSeries,
                 exact: bool) -> None:
        self.dim = dim
        self.max_degree = max_degree
        self.blocks = blocks
        self.a = a
        self.rho = rho
        self.theta = tuple(theta)
        self.kappa = tuple(kappa)
        self.theta_series = theta_series
        self.kappa_series = kappa_series
        self.exact = exact
        self._inverse_blocks: dict[tuple[int, int], np.ndarray] | None = None
        self._b: VectorSeries | None = None

    @property
    def is_basic(self) -> bool:
        return self.rho is None

    @property
    def is_appell(self) -> bool:
        return self.a.unit_linear and all(
            mi.degree <= 1 for c in self.a.components for mi in c.terms)

    def block(self, k: int, n: int) -> np.ndarray:
        return self.blocks[(k, n)]

    @property
    def inverse_a(self) -> VectorSeries:
        if self._b is None:
            self._b = vs_inverse(self.a)
        return self._b

    @property
    def inverse_blocks(self) -> dict[tuple[int, int], np.ndarray]:
        if self._inverse_blocks is None:
            b = self.inverse_a
            factor = None
            if self.rho is not None:
                factor = ps_compose(self.kappa_series, b)
            self._inverse_blocks = _transfer_blocks(
                b, factor, self.max_degree, self.exact)
        return self._inverse_blocks

    def apply(self, p: PolynomialOnDual) -> PolynomialOnDual:
        return _graded_apply(self, self.blocks, p)

    def inverse_apply(self, p: PolynomialOnDual) -> PolynomialOnDual:
        return _graded_apply(self, self.inverse_blocks, p)

    def polynomial_tensor(self, n: int, omega) -> SymCoeff:
        """S_n(w) at a numeric w, as a dual symmetric tensor.

        Coefficient of xi^gamma in <S_n(w), xi^{(x)n}> is
        (n!/gamma!) sum_k sum_beta V[k, n][beta, gamma] w^beta.
        """
        if n > self.max_degree:
            raise DegreeOverflowError(f"degree {n} exceeds built order {self.max_degree}")
        x = [complex(v) for v in omega]
        basis_n = monomial_basis(self.dim, n)
        values = np.zeros(len(basis_n), dtype=complex)
        for k in range(n + 1):
            basis_k = monomial_basis(self.dim, k)
            powers = np.array([
                math.prod(xi ** e for xi, e in zip(x, beta)) for beta in basis_k
            ], dtype=complex)
            mat = self.blocks[(k, n)]
            if mat.dtype == object:
                mat = mat.astype(complex)
            values += powers @ mat
        coeffs = {}
        nfact = math.factorial(n)
        for j, gamma in enumerate(basis_n):
            coeffs[gamma] = values[j] * nfact / multi_factorial(gamma)
        return SymCoeff.from_coeffs(self.dim, n, coeffs)

    def summary_rows(self) -> list[dict]:
        rows = []
        for n in range(self.max_degree + 1):
            rows.append({
                "degree": n,
                "basis_size": len(monomial_basis(self.dim, n)),
                "theta_norm": sym_norm(self.theta[n]),
                "kappa_norm": sym_norm(self.kappa[n]),
            })
        return rows

    def __repr__(self) -> str:
        kind = "basic" if self.is_basic else "sheffer"
        return (f"ShefferSequence(dim={self.dim}, N={self.max_degree}, {kind}, "
                f"exact={self.exact})")


def _graded_apply(seq: ShefferSequence, blocks: dict, p: PolynomialOnDual) -> PolynomialOnDual:
    if p.dim != seq.dim:
        raise ValueError("dimension mismatch")
    if p.is_zero:
        return PolynomialOnDual.zero(seq.dim)
    deg = p.trimmed().degree
    if deg > seq.max_degree:
        raise DegreeOverflowError(
            f"polynomial degree {deg} exceeds built order {seq.max_degree}")
    dtype = object if seq.exact else complex
    out_vecs = []
    for k in range(deg + 1):
        size = len(monomial_basis(seq.dim, k))
        acc = np.zeros(size, dtype=dtype)
        if seq.exact:
            acc[...] = Fraction(0)
        for n in range(k, deg + 1):
            phi = p.coefficient(n)
            if phi.is_zero:
                continue
            vec = phi.vector(dtype=dtype)
            acc = acc + _matvec(blocks[(k, n)], vec)
        out_vecs.append(acc)
    return PolynomialOnDual.from_coeffs(
        seq.dim,
        [SymCoeff.from_vector(seq.dim, k, v) for k, v in enumerate(out_vecs)]).trimmed()


def _divisor_series(a: VectorSeries, rho: ScalarSeries, order: int
                    ) -> tuple[ScalarSeries, ScalarSeries]:
    """(1/rho(A(xi)), rho(A(xi))) as truncated series."""
    composed = ps_compose(rho.truncate(min(rho.max_degree, order)), a.truncate(order))
    return ps_recip(composed), composed


def theta_kappa(a: VectorSeries, rho: ScalarSeries | None, order: int
                ) -> tuple[list[SymCoeff], list[SymCoeff]]:
    """Reciprocal and direct coefficient tensors of rho along a.

    theta holds the expansion of 1/rho(A(xi)), kappa that of rho(A(xi)),
    degree by degree; with rho = 1 both collapse to the constant 1.
    """
    d = a.dim_in
    if rho is None:
        one = SymCoeff.scalar(d, 1 if a.exact else 1.0 + 0.0j)
        zeros_t = [one] + [SymCoeff.zero(d, k) for k in range(1, order + 1)]
        return list(zeros_t), list(zeros_t)
    if rho.constant_term != 1:
        raise ValueError("rho must have constant term 1")
    recip, composed = _divisor_series(a, rho, order)
    thetas = [SymCoeff.from_coeffs(d, k, recip.degree_part(k)) for k in range(order + 1)]
    kappas = [SymCoeff.from_coeffs(d, k, composed.degree_part(k)) for k in range(order + 1)]
    return thetas, kappas


def build_sheffer(a: VectorSeries, rho: ScalarSeries | None, order: int) -> ShefferSequence:
    """Construct the sequence for generating data (A, rho) up to degree `order`."""
    if not a.unit_linear:
        raise ValueError("the degree-1 part of A must be the identity map")
    if a.max_degree < order:
        raise ValueError("A is truncated below the requested order")
    if rho is not None and rho.max_degree < order:
        raise ValueError("rho is truncated below the requested order")
    d = a.dim_in
    exact = a.exact and (rho is None or rho.exact)
    a_trunc = a.truncate(order)
    if rho is not None and rho.constant_term != 1:
        raise ValueError("rho must have constant term 1")
    if rho is not None and all(mi.degree == 0 for mi in rho.terms):
        rho = None  # a constant divisor is the binomial-type case
    thetas, kappas = theta_kappa(a_trunc, rho, order)
    if rho is None:
        theta_series = ScalarSeries.one(d, order, exact=exact)
        kappa_series = ScalarSeries.one(d, order, exact=exact)
        factor = None
    else:
        theta_series, kappa_series = _divisor_series(a_trunc, rho, order)
        factor = theta_series
    blocks = _transfer_blocks(a_trunc, factor, order, exact)
    seq = ShefferSequence(d, order, blocks, a_trunc, rho, thetas, kappas,
                          theta_series, kappa_series, exact)
    _assert_monic(seq)
    return seq


def build_basic(a: VectorSeries, order: int) -> ShefferSequence:
    """Binomial-type case, rho = 1."""
    return build_sheffer(a, None, order)


def _assert_monic(seq: ShefferSequence) -> None:
    for n in range(seq.max_degree + 1):
        mat = seq.blocks[(n, n)]
        size = mat.shape[0]
        for i in range(size):
            for j in range(size):
                want = 1 if i == j else 0
                if mat[i, j] != want:
                    raise AssertionError(f"top block at degree {n} is not the identity")


def sheffer_apply(seq: ShefferSequence, p: PolynomialOnDual) -> PolynomialOnDual:
    """psi_k = sum_{n>=k} V[k, n] phi_n."""
    return seq.apply(p)


def sheffer_inverse_apply(seq: ShefferSequence, p: PolynomialOnDual) -> PolynomialOnDual:
    """Exact inverse of sheffer_apply up to the built order."""
    return seq.inverse_apply(p)


# -- independent combinatorial route ----------------------------------------


def _compositions(total: int, parts: int):
    """Ordered tuples of `parts` positive integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def umbral_apply_direct(a: VectorSeries, p: PolynomialOnDual,
                        max_dim: int = 2, max_degree: int = 6) -> PolynomialOnDual:
    """Umbral transform computed from the multinomial expansion directly.

    psi_m = (1/m!) sum over compositions (k_1..k_m) of n of
            n! (A_{k_1} (x) ... (x) A_{k_m}) phi_n,

    realized with dense tensors and slot contractions.  This is a
    cross-check path for the generating-function extraction and is budgeted
    to small sizes.
    """
    if not a.unit_linear:
        raise ValueError("the degree-1 part of A must be the identity map")
    d = a.dim_in
    deg = p.trimmed().degree
    if d > max_dim or deg > max_degree:
        raise ValueError(f"combinatorial path budget exceeded (d<={max_dim}, N<={max_degree})")
    kernels: dict[int, list[np.ndarray]] = {}
    for k in range(1, deg + 1):
        kernels[k] = [
            to_dense(SymCoeff.from_coeffs(d, k, comp.degree_part(k)))
            for comp in a.components
        ]
    psi_dense: dict[int, np.ndarray] = {m: np.zeros((d,) * m, dtype=complex)
                                        for m in range(1, deg + 1)}
    for n in range(1, deg + 1):
        phi = p.coefficient(n)
        if phi.is_zero:
            continue
        phi_dense = to_dense(phi).astype(complex)
        nfact = math.factorial(n)
        for m in range(1, n + 1):
            scale = nfact / math.factorial(m)
            for parts in _compositions(n, m):
                # contract slot groups one by one; produced indices trail, so
                # the not-yet-consumed slots stay at axes 0..rem-1
                cur = phi_dense
                rem = n
                for k in parts:
                    stacked = np.stack(kernels[k])
                    cur = np.tensordot(cur, stacked,
                                       axes=(tuple(range(rem - k, rem)),
                                             tuple(range(1, k + 1))))
                    rem -= k
                psi_dense[m] += scale * cur
    coeffs = [p.coefficient(0)]
    for m in range(1, deg + 1):
        coeffs.append(from_dense(_symmetrize(psi_dense[m]), dim=d))
    return PolynomialOnDual.from_coeffs(d, coeffs).trimmed()


def _symmetrize(tensor: np.ndarray) -> np.ndarray:
    n = tensor.ndim
    if n <= 1:
        return tensor
    acc = np.zeros_like(tensor)
    perms = list(itertools.permutations(range(n)))
    for perm in perms:
        acc += np.transpose(tensor, perm)
    return acc / len(perms)


# -- binomial identity -------------------------------------------------------


@dataclass(frozen=True)
class BinomialReport:
    max_deviation: float
    per_degree: dict[int, float]
    trials: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= 1e-9


def binomial_check(seq: ShefferSequence, trials: int = 20,
                   rng: np.random.Generator | None = None,
                   max_degree: int | None = None) -> BinomialReport:
    """Deviation in P_n(w + z) = sum_k C(n, k) P_k(w) (.) P_{n-k}(z).

    Both sides are evaluated as dual tensors; the reported deviation is
    ||lhs - rhs|| / max(1, ||lhs||, ||rhs||) so that the growth of the
    tensors themselves does not inflate the figure.
    """
    if not seq.is_basic:
        raise ValueError("binomial_check expects a basic sequence (rho = 1)")
    rng = rng if rng is not None else np.random.default_rng(0)
    top = seq.max_degree if max_degree is None else min(max_degree, seq.max_degree)
    per_degree = {n: 0.0 for n in range(1, top + 1)}
    for _ in range(trials):
        w = _random_point(seq.dim, rng)
        z = _random_point(seq.dim, rng)
        wz = [a + b for a, b in zip(w, z)]
        for n in range(1, top + 1):
            lhs = seq.polynomial_tensor(n, wz)
            rhs = SymCoeff.zero(seq.dim, n)
            for k in range(n + 1):
                prod = sym_product(seq.polynomial_tensor(k, w),
                                   seq.polynomial_tensor(n - k, z))
                rhs = rhs + prod.scale(float(math.comb(n, k)))
            scale = max(1.0, sym_norm(lhs), sym_norm(rhs))
            dev = sym_norm(lhs - rhs) / scale
            per_degree[n] = max(per_degree[n], dev)
    max_dev = max(per_degree.values(), default=0.0)
    return BinomialReport(max_dev, per_degree, trials)


def _random_point(dim: int, rng: np.random.Generator) -> list[complex]:
    re = rng.uniform(-0.5, 0.5, size=dim)
    im = rng.uniform(-0.5, 0.5, size=dim)
    return [complex(a, b) for a, b in zip(re, im)]


def random_polynomial(dim: int, max_degree: int, rng: np.random.Generator,
                      scale: float = 1.0) -> PolynomialOnDual:
    coeffs = []
    for n in range(max_degree + 1):
        basis = monomial_basis(dim, n)
        vals = scale * (rng.uniform(-1, 1, len(basis)) + 1j * rng.uniform(-1, 1, len(basis)))
        coeffs.append(SymCoeff.from_coeffs(dim, n, dict(zip(basis, vals))))
    return PolynomialOnDual.from_coeffs(dim, coeffs)


# -- sequence files ----------------------------------------------------------


def _block_bytes(mat: np.ndarray) -> bytes:
    return np.ascontiguousarray(mat.astype(complex)).astype("<c16").tobytes()


def sequence_to_json_dict(seq: ShefferSequence, include_blocks: bool = True) -> dict:
    """Sequence file document.  Blocks are row-major little-endian complex128
    over the canonical graded bases; each carries a sha256 of its bytes."""
    doc = {
        "dim": seq.dim,
        "max_degree": seq.max_degree,
        "a": seq.a.to_json_dict(),
        "rho": None if seq.rho is None else seq.rho.to_json_dict(),
    }
    if include_blocks:
        blocks = {}
        for (k, n), mat in sorted(seq.blocks.items()):
            raw = _block_bytes(mat)
            blocks[f"{k},{n}"] = {
                "rows": int(mat.shape[0]),
                "cols": int(mat.shape[1]),
                "data": base64.b64encode(raw).decode("ascii"),
                "sha256": hashlib.sha256(raw).hexdigest(),
            }
        doc["blocks"] = blocks
    return doc


def sequence_from_json_dict(doc: dict) -> ShefferSequence:
    """Rebuild from (A, rho); stored blocks, when present, are verified
    against the recomputation through their checksums."""
    a = VectorSeries.from_json_dict(doc["a"])
    rho = None if doc.get("rho") is None else ScalarSeries.from_json_dict(doc["rho"])
    seq = build_sheffer(a, rho, int(doc["max_degree"]))
    blocks = doc.get("blocks")
    if blocks:
        for key, entry in blocks.items():
            k, n = (int(v) for v in key.split(","))
            raw = base64.b64decode(entry["data"])
            if hashlib.sha256(raw).hexdigest() != entry["sha256"]:
                raise ValueError(f"corrupt block {key}: stored checksum mismatch")
            recomputed = _block_bytes(seq.blocks[(k, n)])
            if hashlib.sha256(recomputed).hexdigest() != entry["sha256"]:
                raise ValueError(f"block {key} disagrees with recomputation")
    return seq


def save_sequence(seq: ShefferSequence, path, include_blocks: bool = True) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(sequence_to_json_dict(seq, include_blocks), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_sequence(path) -> ShefferSequence:
    with open(path, "r", encoding="utf-8") as fh:
        return sequence_from_json_dict(json.load(fh))
