"""
Weighted homogeneous Hermitian polynomials P(z') and their structural checks.

A polynomial is a finite sum of terms a_KL z'^K conj(z')^L over pairs of
multi-indices with wt(K) + wt(L) = 1, where wt(K) = sum_j k_j / (2 m_j).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .config import DEFAULT_CONFIG, NumericsConfig
from .exceptions import ConvergenceError, DimensionError, DomainError, ValidationError
from .utils import complex_normal, interleave, make_rng, to_complex, to_real

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

# Relative tolerance for Hermitian pairing of coefficients given in a spec
HERMITIAN_TOL = 1e-12


def _as_nonneg_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{what} must be an integer, got {value!r}")
    if int(value) != value:
        raise ValidationError(f"{what} must be an integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class WeightSignature:
    """Weights m_1, ..., m_{n-1}; coordinate z_j carries exponent 1/(2 m_j)."""

    m: Tuple[int, ...]

    def __post_init__(self):
        m = tuple(self.m)
        if not m:
            raise ValidationError("a weight signature needs at least one weight (n >= 2)")
        checked = []
        for j, mj in enumerate(m, start=1):
            value = _as_nonneg_int(mj, f"weight m_{j}")
            if value < 1:
                raise ValidationError(f"weight m_{j}={mj!r} must be a positive integer")
            checked.append(value)
        object.__setattr__(self, "m", tuple(checked))

    @property
    def n(self) -> int:
        """Ambient complex dimension."""
        return len(self.m) + 1

    @property
    def dim(self) -> int:
        """Number of z' coordinates (n - 1)."""
        return len(self.m)

    def exponent(self, j: int) -> Fraction:
        return Fraction(1, 2 * self.m[j])

    @cached_property
    def exponents(self) -> np.ndarray:
        return np.array([1.0 / (2 * mj) for mj in self.m])

    @cached_property
    def powers(self) -> np.ndarray:
        """The exponents 2 m_j of sigma_Lambda."""
        return np.array([2 * mj for mj in self.m], dtype=float)


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Exponent vector K = (k_1, ..., k_{n-1})."""

    k: Tuple[int, ...]

    def __post_init__(self):
        checked = []
        for j, kj in enumerate(self.k, start=1):
            value = _as_nonneg_int(kj, f"exponent k_{j}")
            if value < 0:
                raise ValidationError(f"exponent k_{j}={kj!r} must be non-negative")
            checked.append(value)
        object.__setattr__(self, "k", tuple(checked))

    def weight(self, sig: WeightSignature) -> Fraction:
        """Exact weight sum_j k_j / (2 m_j)."""
        if len(self.k) != sig.dim:
            raise DimensionError(sig.dim, len(self.k), "multi-index")
        return sum((Fraction(kj, 2 * mj) for kj, mj in zip(self.k, sig.m)), Fraction(0))

    @property
    def degree(self) -> int:
        return sum(self.k)


@dataclass(frozen=True)
class Term:
    """One stored coefficient a_KL of z'^K conj(z')^L."""

    K: MultiIndex
    L: MultiIndex
    coeff: complex


@dataclass
class RawTerm:
    """A term exactly as it appears in a spec, before canonicalization."""

    index: int
    K: MultiIndex
    L: MultiIndex
    coeff: complex


@dataclass
class PolynomialSpec:
    """Unvalidated polynomial description (the polynomial JSON spec)."""

    signature: WeightSignature
    terms: List[RawTerm]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PolynomialSpec":
        """
        Parse {"n": int, "m": [...], "terms": [{"K", "L", "re", "im"}, ...]}.

        Args:
            data: Decoded JSON object

        Returns:
            PolynomialSpec with exponents and weights checked for integrality
        """
        if "m" not in data or "terms" not in data:
            raise ValidationError("polynomial spec needs 'm' and 'terms'")
        m = data["m"]
        if not isinstance(m, list):
            raise ValidationError("'m' must be a list of positive integers")
        signature = WeightSignature(tuple(m))
        if "n" in data and _as_nonneg_int(data["n"], "n") != signature.n:
            raise DimensionError(signature.n, data["n"], "'n' (from len(m)+1)")

        raw_terms = data["terms"]
        if not isinstance(raw_terms, list) or not raw_terms:
            raise ValidationError("polynomial spec has an empty term list")

        terms = []
        for i, entry in enumerate(raw_terms):
            try:
                K = MultiIndex(tuple(entry["K"]))
                L = MultiIndex(tuple(entry["L"]))
                coeff = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
            except ValidationError as e:
                raise ValidationError(f"term {i}: {e.message}") from e
            except (KeyError, TypeError, ValueError) as e:
                raise ValidationError(f"term {i}: malformed entry ({e})") from e
            for name, idx in (("K", K), ("L", L)):
                if len(idx.k) != signature.dim:
                    raise ValidationError(
                        f"term {i}: {name} has length {len(idx.k)}, expected {signature.dim}"
                    )
            terms.append(RawTerm(i, K, L, coeff))
        return cls(signature, terms)

    @classmethod
    def from_terms(cls, m: Sequence[int], terms: Sequence[Tuple[Sequence[int], Sequence[int], complex]]) -> "PolynomialSpec":
        """Convenience constructor from (K, L, coeff) triples."""
        data = {
            "m": list(m),
            "terms": [
                {"K": list(K), "L": list(L), "re": complex(a).real, "im": complex(a).imag}
                for K, L, a in terms
            ],
        }
        return cls.from_dict(data)


@dataclass
class SphereExtrema:
    """Extrema of P on the weighted sphere sigma_Lambda = 1."""

    minimum: float
    argmin: np.ndarray
    maximum: float
    argmax: np.ndarray
    restarts: int
    converged: int


@dataclass
class ValidationReport:
    """Outcome of validate(): structural violations plus the positivity test."""

    valid: bool
    balanced: bool
    hermitian_violations: List[Dict[str, Any]] = field(default_factory=list)
    weight_violations: List[Dict[str, Any]] = field(default_factory=list)
    positivity_minimum: Optional[float] = None
    positivity_argmin: Optional[np.ndarray] = None
    positive: Optional[bool] = None
    c1: Optional[float] = None
    c2: Optional[float] = None
    positivity_tol: float = DEFAULT_CONFIG.positivity_tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "balanced": self.balanced,
            "hermitian_violations": self.hermitian_violations,
            "weight_violations": self.weight_violations,
            "positivity": {
                "minimum": self.positivity_minimum,
                "argmin": None if self.positivity_argmin is None else interleave(self.positivity_argmin),
                "positive": self.positive,
                "tol": self.positivity_tol,
                "label": "numerical estimate",
            },
            "comparability": {"c1": self.c1, "c2": self.c2},
        }


class WPolynomial:
    """
    Immutable weighted homogeneous Hermitian polynomial in canonical storage.

    One representative is kept per unordered pair {K, L}: diagonal terms with
    real coefficients and off-diagonal terms with K < L. The conjugate partner
    a_LK = conj(a_KL) is reconstructed on evaluation, so Hermitian symmetry
    cannot be broken after construction.
    """

    def __init__(self, signature: WeightSignature, terms: Sequence[Term]):
        self.signature = signature
        canonical = {}
        for term in terms:
            K, L, a = term.K, term.L, complex(term.coeff)
            if K.weight(signature) + L.weight(signature) != 1:
                raise ValidationError(f"term {K.k},{L.k} violates wt(K)+wt(L)=1")
            if L < K:
                K, L, a = L, K, a.conjugate()
            if K == L:
                a = complex(a.real, 0.0)
            canonical[(K, L)] = canonical.get((K, L), 0j) + a
        self.terms = tuple(
            Term(K, L, a) for (K, L), a in sorted(canonical.items()) if a != 0
        )
        if not self.terms:
            raise ValidationError("polynomial has no non-zero terms")

        expanded = []
        for t in self.terms:
            expanded.append((t.K.k, t.L.k, t.coeff))
            if t.K != t.L:
                expanded.append((t.L.k, t.K.k, t.coeff.conjugate()))
        self._K = np.array([e[0] for e in expanded], dtype=float)
        self._L = np.array([e[1] for e in expanded], dtype=float)
        self._a = np.array([e[2] for e in expanded], dtype=complex)

    def __eq__(self, other):
        return isinstance(other, WPolynomial) and (self.signature, self.terms) == (other.signature, other.terms)

    def __hash__(self):
        return hash((self.signature, self.terms))

    def __repr__(self):
        return f"WPolynomial(m={self.signature.m}, terms={len(self.terms)})"

    @property
    def dim(self) -> int:
        return self.signature.dim

    @cached_property
    def balanced(self) -> bool:
        """True iff every stored pair has wt(K) = wt(L) = 1/2."""
        sig = self.signature
        return all(t.K.weight(sig) == HALF and t.L.weight(sig) == HALF for t in self.terms)

    @cached_property
    def is_euclidean(self) -> bool:
        """True iff P(z') = sum_j |z_j|^2 (the unit-ball case)."""
        if any(mj != 1 for mj in self.signature.m) or len(self.terms) != self.dim:
            return False
        for t in self.terms:
            if t.K != t.L or t.K.degree != 1 or t.coeff != 1:
                return False
        return True

    def _check(self, zp) -> np.ndarray:
        zp = np.asarray(zp, dtype=complex)
        if zp.ndim == 0 or zp.shape[-1] != self.dim:
            raise DimensionError(self.dim, zp.shape[-1] if zp.ndim else 0, "z'")
        return zp

    def _monomials(self, zp: np.ndarray, K: np.ndarray, L: np.ndarray) -> np.ndarray:
        z = zp[..., None, :]
        return np.prod(np.power(z, K), axis=-1) * np.prod(np.power(np.conj(z), L), axis=-1)

    def evaluate_with_residual(self, zp) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Raw complex sum of all expanded terms.

        Returns:
            (real value, imaginary residue, sum of |term|)
        """
        zp = self._check(zp)
        contributions = self._a * self._monomials(zp, self._K, self._L)
        total = contributions.sum(axis=-1)
        return total.real, total.imag, np.abs(contributions).sum(axis=-1)

    def evaluate(self, zp) -> np.ndarray:
        value, _, _ = self.evaluate_with_residual(zp)
        return value

    def gradient(self, zp) -> np.ndarray:
        """Wirtinger derivatives dP/dz_j, shape (..., n-1)."""
        zp = self._check(zp)
        out = []
        for j in range(self.dim):
            kj = self._K[:, j]
            Kj = self._K.copy()
            Kj[:, j] = np.maximum(kj - 1, 0)
            out.append(((self._a * kj) * self._monomials(zp, Kj, self._L)).sum(axis=-1))
        return np.stack(out, axis=-1)

    def hessian(self, zp) -> np.ndarray:
        """Complex Hessian d^2 P / dz_j d conj(z_k), shape (..., n-1, n-1)."""
        zp = self._check(zp)
        d = self.dim
        H = np.zeros(zp.shape[:-1] + (d, d), dtype=complex)
        for j in range(d):
            Kj = self._K.copy()
            Kj[:, j] = np.maximum(self._K[:, j] - 1, 0)
            for k in range(d):
                weights = self._a * self._K[:, j] * self._L[:, k]
                if not np.any(weights):
                    continue
                Lk = self._L.copy()
                Lk[:, k] = np.maximum(self._L[:, k] - 1, 0)
                H[..., j, k] = (weights * self._monomials(zp, Kj, Lk)).sum(axis=-1)
        return H


def _group_terms(spec: PolynomialSpec) -> Dict[Tuple[MultiIndex, MultiIndex], Tuple[complex, List[int]]]:
    grouped = {}
    for term in spec.terms:
        coeff, indices = grouped.get((term.K, term.L), (0j, []))
        grouped[(term.K, term.L)] = (coeff + term.coeff, indices + [term.index])
    return grouped


def hermitian_violations(spec: PolynomialSpec) -> List[Dict[str, Any]]:
    """Pairs whose coefficients break a_LK = conj(a_KL), referenced by term index."""
    grouped = _group_terms(spec)
    violations = []
    seen = set()
    for (K, L), (a, indices) in sorted(grouped.items(), key=lambda item: min(item[1][1])):
        key = (K, L) if K <= L else (L, K)
        if key in seen:
            continue
        seen.add(key)
        if K == L:
            if abs(a.imag) > HERMITIAN_TOL * max(1.0, abs(a)):
                violations.append({
                    "terms": indices,
                    "K": list(K.k),
                    "L": list(L.k),
                    "message": f"diagonal coefficient {a} must be real",
                })
            continue
        b, partner = grouped.get((L, K), (0j, []))
        if abs(b - a.conjugate()) > HERMITIAN_TOL * max(1.0, abs(a), abs(b)):
            violations.append({
                "terms": sorted(indices + partner),
                "K": list(K.k),
                "L": list(L.k),
                "message": f"coefficient of (L,K) is {b}, expected conj({a})",
            })
    return violations


def weight_violations(spec: PolynomialSpec) -> List[Dict[str, Any]]:
    """Terms with wt(K) + wt(L) != 1 (exact rational arithmetic)."""
    sig = spec.signature
    out = []
    for term in spec.terms:
        wk, wl = term.K.weight(sig), term.L.weight(sig)
        if wk + wl != 1:
            out.append({
                "term": term.index,
                "wt_K": str(wk),
                "wt_L": str(wl),
                "message": f"wt(K)+wt(L) = {wk + wl}, expected 1",
            })
    return out


def build_polynomial(spec: PolynomialSpec) -> WPolynomial:
    """
    Canonicalize a spec into an immutable WPolynomial.

    Raises:
        ValidationError: listing every Hermitian and weight violation
    """
    violations = hermitian_violations(spec) + weight_violations(spec)
    if violations:
        raise ValidationError(f"polynomial has {len(violations)} structural violation(s)", violations)
    terms = []
    for (K, L), (a, _) in _group_terms(spec).items():
        if K <= L:
            terms.append(Term(K, L, a))
    return WPolynomial(spec.signature, terms)


def polynomial_from_terms(m: Sequence[int], terms: Sequence[Tuple[Sequence[int], Sequence[int], complex]]) -> WPolynomial:
    """Build and canonicalize from (K, L, coeff) triples listing both partners."""
    return build_polynomial(PolynomialSpec.from_terms(m, terms))


def scale_point(sig: WeightSignature, t, zp) -> np.ndarray:
    """
    Weighted dilation: coordinate j multiplied by t^(1/(2 m_j)).

    Args:
        sig: Weight signature
        t: Positive scalar or array broadcast over leading axes
        zp: Point(s) in C^(n-1)

    Returns:
        Scaled point(s)
    """
    zp = np.asarray(zp, dtype=complex)
    if zp.ndim == 0 or zp.shape[-1] != sig.dim:
        raise DimensionError(sig.dim, zp.shape[-1] if zp.ndim else 0, "z'")
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or not np.all(np.isfinite(t)):
        raise DomainError(f"weighted dilation factor must be positive, got {t}")
    return zp * np.power(t[..., None], sig.exponents)


def sigma_weight(sig: WeightSignature, zp) -> np.ndarray:
    """sigma_Lambda(z') = sum_j |z_j|^(2 m_j)."""
    zp = np.asarray(zp, dtype=complex)
    if zp.ndim == 0 or zp.shape[-1] != sig.dim:
        raise DimensionError(sig.dim, zp.shape[-1] if zp.ndim else 0, "z'")
    return np.sum(np.power(np.abs(zp), sig.powers), axis=-1)


def project_to_weighted_sphere(sig: WeightSignature, u) -> np.ndarray:
    """Retract u != 0 onto sigma_Lambda = 1 by the weighted dilation with t = 1/sigma(u)."""
    s = sigma_weight(sig, u)
    return scale_point(sig, 1.0 / s, u)


def evaluate(poly: WPolynomial, zp) -> np.ndarray:
    return poly.evaluate(zp)


def wirtinger_gradient(poly: WPolynomial, zp) -> np.ndarray:
    return poly.gradient(zp)


def complex_hessian(poly: WPolynomial, zp) -> np.ndarray:
    return poly.hessian(zp)


@lru_cache(maxsize=64)
def _sphere_extrema(poly: WPolynomial, restarts: int, candidates: int, max_iterations: int,
                    xatol: float, fatol: float, seed: int) -> SphereExtrema:
    sig = poly.signature
    rng = make_rng(seed)
    u = complex_normal(rng, (candidates, sig.dim))
    values = poly.evaluate(project_to_weighted_sphere(sig, u))

    extrema = []
    converged_total = 0
    for sense in (1.0, -1.0):

        def objective(x, sense=sense):
            z = to_complex(x)
            s = sigma_weight(sig, z)
            if not s > 0:
                return np.inf
            return sense * float(poly.evaluate(scale_point(sig, 1.0 / s, z)))

        best_value = sense * values
        k = int(np.argmin(best_value))
        best_fun, best_x = float(best_value[k]), to_real(u[k])
        converged = 0
        for idx in np.argsort(best_value)[:restarts]:
            x0 = to_real(u[idx])
            res = minimize(objective, x0, method="Nelder-Mead", options={
                "maxiter": max_iterations * x0.size,
                "xatol": xatol,
                "fatol": fatol,
            })
            converged += bool(res.success)
            if res.fun < best_fun:
                best_fun, best_x = float(res.fun), res.x
        logger.debug("sphere %s: %d/%d restarts converged", "min" if sense > 0 else "max",
                     converged, min(restarts, candidates))
        if converged == 0:
            raise ConvergenceError(
                f"weighted-sphere {'minimization' if sense > 0 else 'maximization'} "
                f"did not converge in {restarts} restarts"
            )
        converged_total += converged
        extrema.append((sense * best_fun, project_to_weighted_sphere(sig, to_complex(best_x))))

    (minimum, argmin), (maximum, argmax) = extrema
    return SphereExtrema(minimum, argmin, maximum, argmax, 2 * min(restarts, candidates), converged_total)


def sphere_extrema(poly: WPolynomial, config: NumericsConfig = None) -> SphereExtrema:
    """Min and max of P on the weighted sphere by multi-start Nelder-Mead."""
    config = config or DEFAULT_CONFIG
    return _sphere_extrema(poly, config.sphere_restarts, config.sphere_candidates,
                           config.max_iterations, config.xatol, config.fatol, config.seed)


def comparability_constants(poly: WPolynomial, config: NumericsConfig = None) -> Tuple[float, float]:
    """
    Constants with c1 sigma_Lambda(z') <= P(z') <= c2 sigma_Lambda(z').

    Raises:
        ValidationError: if P is not positive on the weighted sphere
        ConvergenceError: if no optimizer restart converged
    """
    config = config or DEFAULT_CONFIG
    ext = sphere_extrema(poly, config)
    if not ext.minimum > config.positivity_tol:
        raise ValidationError(
            f"P is not positive: minimum {ext.minimum:.3e} on the weighted sphere",
            [{"argmin": interleave(ext.argmin), "minimum": ext.minimum}],
        )
    return ext.minimum, ext.maximum


def validate(spec: PolynomialSpec, config: NumericsConfig = None) -> ValidationReport:
    """
    Structural and positivity checks of a raw polynomial spec.

    Args:
        spec: Parsed (possibly invalid) polynomial spec
        config: Numerical settings for the positivity search

    Returns:
        ValidationReport listing every violation
    """
    config = config or DEFAULT_CONFIG
    herm = hermitian_violations(spec)
    weights = weight_violations(spec)
    sig = spec.signature
    balanced = not weights and all(
        t.K.weight(sig) == HALF and t.L.weight(sig) == HALF
        for t in spec.terms if t.coeff != 0
    )
    report = ValidationReport(
        valid=False,
        balanced=balanced,
        hermitian_violations=herm,
        weight_violations=weights,
        positivity_tol=config.positivity_tol,
    )
    if herm or weights:
        return report

    poly = build_polynomial(spec)
    ext = sphere_extrema(poly, config)
    report.positivity_minimum = ext.minimum
    report.positivity_argmin = ext.argmin
    report.positive = bool(ext.minimum > config.positivity_tol)
    if report.positive:
        report.c1, report.c2 = ext.minimum, ext.maximum
    else:
        logger.warning("P has near-zero minimum %.3e at %s", ext.minimum, ext.argmin)
    report.valid = report.positive
    return report
