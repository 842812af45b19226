"""Closed-form means, variances, bounds, and clique-number thresholds.

Formula evaluation is exact: the edge probability is converted to a Fraction
(binary floats convert losslessly) and everything downstream stays rational.
That matters because p^(k(k-1)) underflows double precision in the threshold
regime, and because several tests demand exact equality against exhaustive
enumeration. Only the two clique-number thresholds are floats: they are
logarithms, safely inside double range.

Conventions: log means log base 2; thresholds are returned as real values and
callers round (ceiling for the upper threshold, floor for the lower).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, log2
from typing import Optional, Union

from .errors import DomainError

__all__ = [
    "NumberLike",
    "TheoryPrediction",
    "BoundTermSequence",
    "PREDICTION_KINDS",
    "DEFAULT_THRESHOLD_MARGIN",
    "expected_xk",
    "expected_zk",
    "exact_var_xk",
    "var_zk_from_varxk",
    "varxk_bound_full",
    "varxk_bound_corollary",
    "bound_term_sequence",
    "clique_threshold_upper",
    "clique_threshold_lower",
    "isolated_moments",
    "IsolatedProductMean",
    "isolated_product_mean",
    "var_product_iid",
    "evaluate",
]

NumberLike = Union[int, float, Fraction]

#: Smallest admissible threshold margin ("M > 4"); the default is the minimal
#: documented choice.
DEFAULT_THRESHOLD_MARGIN = 4.01


def _as_fraction(p: NumberLike, name: str = "p") -> Fraction:
    try:
        return Fraction(p)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be numeric, got {p!r}") from exc


def _check_probability(p: Fraction, open_interval: bool = False) -> None:
    if open_interval:
        if not 0 < p < 1:
            raise DomainError(f"p must be in (0, 1), got {p}")
    elif not 0 <= p <= 1:
        raise DomainError(f"p must be in [0, 1], got {p}")


def expected_xk(n: int, p: NumberLike, k: int) -> Fraction:
    """E[X_k] = C(n,k) * p^C(k,2): expected k-clique count of one G(n, p)."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    pf = _as_fraction(p)
    _check_probability(pf)
    return comb(n, k) * pf ** comb(k, 2)


def expected_zk(n: int, p: NumberLike, k: int) -> Fraction:
    """E[Z_k] = k! * C(n,k)^2 * p^(k(k-1)): expected k-clique count of the tensor product."""
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    pf = _as_fraction(p)
    _check_probability(pf)
    return factorial(k) * comb(n, k) ** 2 * pf ** (k * (k - 1))


def exact_var_xk(n: int, p: NumberLike, k: int) -> Fraction:
    """Exact Var(X_k) via the pairwise covariance expansion.

    Summing over ordered pairs of k-sets sharing i >= 2 vertices:
    Var(X_k) = sum_{i=2..k} C(n,k) C(k,i) C(n-k,k-i) (p^(2C(k,2)-C(i,2)) - p^(2C(k,2))).
    The i = k term is the per-set indicator variance. Serves as the exact
    reference the variance bounds are checked against.
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    pf = _as_fraction(p)
    _check_probability(pf)
    if k == 1:
        return Fraction(0)
    total = Fraction(0)
    kk2 = comb(k, 2)
    for i in range(2, k + 1):
        pairs = comb(n, k) * comb(k, i) * comb(n - k, k - i)
        total += pairs * (pf ** (2 * kk2 - comb(i, 2)) - pf ** (2 * kk2))
    return total


def var_zk_from_varxk(var_xk: NumberLike, mean_xk: NumberLike, k: int) -> Fraction:
    """Var(Z_k) = (k!)^2 (Var(X_k)^2 + 2 Var(X_k) E[X_k]^2) for iid factors."""
    v = _as_fraction(var_xk, "var_xk")
    m = _as_fraction(mean_xk, "mean_xk")
    if v < 0:
        raise DomainError(f"var_xk must be >= 0, got {var_xk}")
    return factorial(k) ** 2 * (v * v + 2 * v * m * m)


def varxk_bound_full(n: int, p: NumberLike, k: int) -> Fraction:
    """Variance upper bound with the full overlap sum.

    Var(X_k) <= C(n,k) p^C(k,2) (1 + sum_{i=2..k-1} C(k,i) C(n-k,k-i) p^(C(k,2)-C(i,2))).
    For k = 2 the sum is empty and the bound is C(n,2) p.
    """
    if not 2 <= k <= n:
        raise DomainError(f"need 2 <= k <= n, got k={k}, n={n}")
    pf = _as_fraction(p)
    _check_probability(pf, open_interval=True)
    head = comb(n, k) * pf ** comb(k, 2)
    kk2 = comb(k, 2)
    tail = sum(
        comb(k, i) * comb(n - k, k - i) * pf ** (kk2 - comb(i, 2))
        for i in range(2, k)
    )
    return head + head * tail


def varxk_bound_corollary(n: int, p: NumberLike, k: int) -> Fraction:
    """Dominant-term variance bound.

    Var(X_k) <= C(n,k) p^C(k,2) + C(n,k) C(n-k,k-2) p^(k(k-1)) (k^3/2) p^(-1),
    valid for fixed k (and for k up to the lower clique-number threshold).
    """
    if not 3 <= k <= n:
        raise DomainError(f"need 3 <= k <= n, got k={k}, n={n}")
    pf = _as_fraction(p)
    _check_probability(pf, open_interval=True)
    head = comb(n, k) * pf ** comb(k, 2)
    tail = (
        comb(n, k)
        * comb(n - k, k - 2)
        * pf ** (k * (k - 1))
        * Fraction(k**3, 2)
        / pf
    )
    return head + tail


@dataclass(frozen=True)
class BoundTermSequence:
    """Overlap terms a_i = C(k,i) C(n-k,k-i) p^(-C(i,2)), i = 2..k-1.

    The dominant-term bound is justified by this sequence decreasing, so it is
    exposed as a testable object.
    """

    n: int
    p: Fraction
    k: int
    terms: tuple[Fraction, ...]

    def is_strictly_decreasing(self) -> bool:
        return all(a > b for a, b in zip(self.terms, self.terms[1:]))


def bound_term_sequence(n: int, p: NumberLike, k: int) -> BoundTermSequence:
    """The a_i overlap-term sequence (length k-2)."""
    if k < 3:
        raise DomainError(f"need k >= 3, got k={k}")
    if k > n / 2:
        raise DomainError(f"need k <= n/2, got k={k}, n={n}")
    pf = _as_fraction(p)
    _check_probability(pf, open_interval=True)
    terms = tuple(
        comb(k, i) * comb(n - k, k - i) * pf ** (-comb(i, 2)) for i in range(2, k)
    )
    return BoundTermSequence(n=n, p=pf, k=k, terms=terms)


def _log_base_inv_p(x: float, p: float) -> float:
    return log2(x) / log2(1.0 / p)


def clique_threshold_upper(n: int, p: float) -> float:
    """k* = 2 log_{1/p}(n) + log_{1/p}(log2 n).

    Above this size the expected product clique count vanishes, so clique
    numbers at or beyond ceil(k*) are not expected.
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got n={n}")
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"need 0 < p < 1, got p={p}")
    return 2.0 * _log_base_inv_p(n, p) + _log_base_inv_p(log2(n), p)


def clique_threshold_lower(n: int, p: float, margin: float = DEFAULT_THRESHOLD_MARGIN) -> float:
    """k_* = 2 log_{1/p}(n) - margin * log_{1/p}(log2 n), margin > 4.

    Below this size product cliques exist with probability tending to one.
    The value must come out positive; it can be < 2 at small n, in which case
    floor(k_*) still gives a (weak but valid) lower witness.
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got n={n}")
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"need 0 < p < 1, got p={p}")
    if margin <= 4:
        raise DomainError(f"margin must exceed 4, got {margin}")
    value = 2.0 * _log_base_inv_p(n, p) - margin * _log_base_inv_p(log2(n), p)
    if value <= 0:
        raise DomainError(
            f"lower threshold {value:.3f} not positive at n={n}, p={p}, margin={margin}"
        )
    return value


def isolated_moments(n: int, p: NumberLike) -> tuple[Fraction, Fraction]:
    """Mean and variance of the isolated-vertex count of one G(n, p).

    E[I] = n (1-p)^(n-1); Var(I) = n (1-p)^(n-1) (1 + (np - 1)(1-p)^(n-2)).
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got n={n}")
    pf = _as_fraction(p)
    _check_probability(pf)
    if n == 1:
        return Fraction(1), Fraction(0)
    q = 1 - pf
    mean = n * q ** (n - 1)
    variance = mean * (1 + (n * pf - 1) * q ** (n - 2))
    return mean, variance


@dataclass(frozen=True)
class IsolatedProductMean:
    """Exact E[I(G x H)] together with the normalizer it is compared against."""

    exact: Fraction
    normalizer: Fraction

    def ratio(self) -> float:
        if self.normalizer == 0:
            raise DomainError("normalizer is zero (p = 1)")
        return float(self.exact / self.normalizer)


def isolated_product_mean(n: int, p: NumberLike) -> IsolatedProductMean:
    """E[I(G x H)] = 2 n^2 (1-p)^(n-1) - n^2 (1-p)^(2n-2) for iid factors on n vertices.

    The normalizer 2 n^2 (1-p)^(n-1) is the quantity the mean is asymptotically
    equivalent to.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got n={n}")
    pf = _as_fraction(p)
    _check_probability(pf)
    q = 1 - pf
    normalizer = 2 * n**2 * q ** (n - 1)
    exact = normalizer - n**2 * q ** (2 * n - 2)
    return IsolatedProductMean(exact=exact, normalizer=normalizer)


def var_product_iid(var_x: NumberLike, mean_x: NumberLike) -> Fraction:
    """Var(XY) = Var(X) (Var(X) + 2 E[X]^2) for X, Y iid with finite variance."""
    v = _as_fraction(var_x, "var_x")
    m = _as_fraction(mean_x, "mean_x")
    if v < 0:
        raise DomainError(f"var_x must be >= 0, got {var_x}")
    return v * (v + 2 * m * m)


@dataclass(frozen=True)
class TheoryPrediction:
    """One evaluated closed-form value, tagged by formula kind."""

    kind: str
    n: int
    p: Optional[Fraction]
    k: Optional[int]
    value: Union[Fraction, float]

    def as_csv_row(self) -> str:
        p_str = "" if self.p is None else repr(float(self.p))
        k_str = "" if self.k is None else str(self.k)
        if isinstance(self.value, Fraction):
            value_str = repr(float(self.value))
        else:
            value_str = repr(self.value)
        return f"{self.kind},{self.n},{p_str},{k_str},{value_str}"


PREDICTION_KINDS = (
    "mean-xk",
    "mean-zk",
    "var-xk-exact",
    "var-zk-exact-from-varxk",
    "varxk-bound-full",
    "varxk-bound-corollary",
    "k-star-upper",
    "k-star-lower",
    "isolated-mean",
    "isolated-var",
    "isolated-product-mean",
)


def evaluate(
    kind: str,
    n: int,
    p: NumberLike,
    k: Optional[int] = None,
    margin: float = DEFAULT_THRESHOLD_MARGIN,
) -> TheoryPrediction:
    """Evaluate one prediction kind (the CLI's dispatcher)."""

    def need_k() -> int:
        if k is None:
            raise DomainError(f"kind {kind!r} needs k")
        return k

    pf = _as_fraction(p)
    if kind == "mean-xk":
        value: Union[Fraction, float] = expected_xk(n, pf, need_k())
    elif kind == "mean-zk":
        value = expected_zk(n, pf, need_k())
    elif kind == "var-xk-exact":
        value = exact_var_xk(n, pf, need_k())
    elif kind == "var-zk-exact-from-varxk":
        kk = need_k()
        value = var_zk_from_varxk(exact_var_xk(n, pf, kk), expected_xk(n, pf, kk), kk)
    elif kind == "varxk-bound-full":
        value = varxk_bound_full(n, pf, need_k())
    elif kind == "varxk-bound-corollary":
        value = varxk_bound_corollary(n, pf, need_k())
    elif kind == "k-star-upper":
        value = clique_threshold_upper(n, float(pf))
    elif kind == "k-star-lower":
        value = clique_threshold_lower(n, float(pf), margin)
    elif kind == "isolated-mean":
        value = isolated_moments(n, pf)[0]
    elif kind == "isolated-var":
        value = isolated_moments(n, pf)[1]
    elif kind == "isolated-product-mean":
        value = isolated_product_mean(n, pf).exact
    else:
        raise DomainError(f"unknown prediction kind {kind!r}; expected one of {PREDICTION_KINDS}")
    return TheoryPrediction(kind=kind, n=n, p=pf, k=k, value=value)
