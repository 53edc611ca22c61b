"""Weighted power means and composition rules for concavity exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .extreal import ExtReal, NEG_INF, POS_INF, ZERO

# Below this magnitude the direct power formula cancels badly; switch to
# expm1/log1p interpolation in the log domain.
_LOG_GUARD = 1e-8
# Reciprocal sums within this band of zero are treated as exactly zero.
_BOUNDARY_EPS = 1e-12


def _check_weight(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"weight must lie in [0, 1], got {lam}")
    return lam


def _check_nonneg(name: str, x: float) -> float:
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"{name} must be non-negative, got {x}")
    return x


def p_mean(p, lam: float, a: float, b: float) -> float:
    """Weighted p-mean M_p^lam(a, b) of non-negative numbers.

    Finite nonzero p gives ((1-lam) a^p + lam b^p)^(1/p); p = 0 is the
    geometric mean a^(1-lam) b^lam; p = -inf the min, p = +inf the max.
    Endpoint weights return the corresponding operand for every p. A zero
    operand with interior weight gives 0 whenever p <= 0 (the formula is
    still evaluated for p > 0).
    """
    lam = _check_weight(lam)
    a = _check_nonneg("a", a)
    b = _check_nonneg("b", b)
    if lam == 0.0:
        return a
    if lam == 1.0:
        return b
    p = ExtReal.of(p)
    if p.is_pos_inf:
        return max(a, b)
    if p.is_neg_inf:
        return min(a, b)
    pv = p.value
    if a == 0.0 or b == 0.0:
        if pv <= 0.0:
            return 0.0
        if a == 0.0:
            return lam ** (1.0 / pv) * b
        return (1.0 - lam) ** (1.0 / pv) * a
    if pv == 0.0:
        return a ** (1.0 - lam) * b ** lam
    # Scaling by an endpoint keeps the powered ratios in (0, 1].
    m = max(a, b) if pv > 0 else min(a, b)
    ra, rb = a / m, b / m
    if abs(pv) < _LOG_GUARD:
        s = (1.0 - lam) * math.expm1(pv * math.log(ra)) + lam * math.expm1(pv * math.log(rb))
        return m * math.exp(math.log1p(s) / pv)
    return m * ((1.0 - lam) * ra ** pv + lam * rb ** pv) ** (1.0 / pv)


def p_mean_m(p, weights: Sequence[float], values: Sequence[float]) -> float:
    """m-term power mean with the same limit conventions as :func:`p_mean`.

    Weights must sum to 1 within 1e-12; zero-weight entries are ignored.
    """
    if len(weights) != len(values):
        raise ValueError("weights and values must have equal length")
    total = math.fsum(float(w) for w in weights)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"weights must sum to 1, got {total!r}")
    pairs = []
    for w, v in zip(weights, values):
        w = float(w)
        if w < 0.0:
            raise ValueError(f"weights must be non-negative, got {w}")
        v = _check_nonneg("value", v)
        if w > 0.0:
            pairs.append((w, v))
    vals = [v for _, v in pairs]
    p = ExtReal.of(p)
    if p.is_pos_inf:
        return max(vals)
    if p.is_neg_inf:
        return min(vals)
    pv = p.value
    if any(v == 0.0 for v in vals):
        if pv <= 0.0:
            return 0.0
        return math.fsum(w * v ** pv for w, v in pairs) ** (1.0 / pv)
    if pv == 0.0:
        return math.exp(math.fsum(w * math.log(v) for w, v in pairs))
    m = max(vals) if pv > 0 else min(vals)
    if abs(pv) < _LOG_GUARD:
        s = math.fsum(w * math.expm1(pv * math.log(v / m)) for w, v in pairs)
        return m * math.exp(math.log1p(s) / pv)
    return m * math.fsum(w * (v / m) ** pv for w, v in pairs) ** (1.0 / pv)


def p_mean_grid(p, lam: float, a, b) -> np.ndarray:
    """Elementwise two-term power mean on non-negative arrays.

    Zero entries follow the same convention as :func:`p_mean`: for p <= 0
    a zero on either side annihilates, for p > 0 the formula is evaluated.
    """
    lam = _check_weight(lam)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a < 0.0) or np.any(b < 0.0):
        raise ValueError("power means require non-negative inputs")
    shape = np.broadcast_shapes(a.shape, b.shape)
    if lam == 0.0:
        return np.broadcast_to(a, shape).astype(float)
    if lam == 1.0:
        return np.broadcast_to(b, shape).astype(float)
    p = ExtReal.of(p)
    if p.is_pos_inf:
        return np.maximum(a, b)
    if p.is_neg_inf:
        return np.minimum(a, b)
    pv = p.value
    if pv == 0.0:
        return a ** (1.0 - lam) * b ** lam
    if pv > 0.0:
        return ((1.0 - lam) * a ** pv + lam * b ** pv) ** (1.0 / pv)
    av = np.broadcast_to(a, shape)
    bv = np.broadcast_to(b, shape)
    out = np.zeros(shape)
    pos = (av > 0.0) & (bv > 0.0)
    m = np.minimum(av[pos], bv[pos])
    s = (1.0 - lam) * (av[pos] / m) ** pv + lam * (bv[pos] / m) ** pv
    out[pos] = m * s ** (1.0 / pv)
    return out


def gamma_compose(p: Iterable, alpha) -> ExtReal:
    """Compose coordinate exponents p_i in [0, 1] with a density exponent.

    Returns gamma = (sum_i 1/p_i + 1/alpha)^(-1) with the conventions:
    any p_i = 0 forces gamma = 0, alpha = 0 forces gamma = 0, alpha = +inf
    contributes nothing to the sum, and a reciprocal sum at zero (alpha at
    the admissibility boundary) gives gamma = -inf.
    """
    exps = [ExtReal.of(pi) for pi in p]
    if not exps:
        raise ValueError("need at least one coordinate exponent")
    for pi in exps:
        if not 0.0 <= pi.value <= 1.0:
            raise ValueError(f"coordinate exponents must lie in [0, 1], got {pi}")
    alpha = ExtReal.of(alpha)
    if any(pi.value == 0.0 for pi in exps):
        srecip = math.inf
    else:
        srecip = math.fsum(1.0 / pi.value for pi in exps)
    bound = 0.0 if srecip == math.inf else -1.0 / srecip
    if alpha.value < bound:
        raise ValueError(
            f"alpha={alpha} is inadmissible for p=({', '.join(str(e) for e in exps)}): "
            f"requires alpha >= {bound}"
        )
    if alpha.value == 0.0 or srecip == math.inf:
        return ZERO
    total = srecip if alpha.is_pos_inf else srecip + 1.0 / alpha.value
    if abs(total) <= _BOUNDARY_EPS:
        return NEG_INF
    return ExtReal(1.0 / total)


def borell_s_alpha(s, n: int) -> ExtReal:
    """Density concavity exponent alpha = s / (1 - s n) of an s-concave
    measure with an absolutely continuous density in dimension n."""
    if n < 1:
        raise ValueError("dimension must be a positive integer")
    s = ExtReal.of(s)
    if s.value > 1.0 / n:
        raise ValueError(f"s must be <= 1/n = {1.0 / n}, got {s}")
    if s.is_neg_inf:
        return ExtReal(-1.0 / n)
    if s.value == 1.0 / n:
        return POS_INF
    return ExtReal(s.value / (1.0 - s.value * n))


def alpha_to_s(alpha, n: int) -> ExtReal:
    """Inverse of :func:`borell_s_alpha`: s = alpha / (1 + alpha n)."""
    if n < 1:
        raise ValueError("dimension must be a positive integer")
    alpha = ExtReal.of(alpha)
    if alpha.value < -1.0 / n:
        raise ValueError(f"alpha must be >= -1/n = {-1.0 / n}, got {alpha}")
    if alpha.is_pos_inf:
        return ExtReal(1.0 / n)
    if alpha.value == -1.0 / n:
        return NEG_INF
    return ExtReal(alpha.value / (1.0 + alpha.value * n))


@dataclass(frozen=True)
class ExponentComparison:
    """Comparison of the dilation exponent (1-p)/n + gamma against the
    ambient concavity exponent alpha/(1 + alpha n) of the measure."""

    satisfied: bool
    dilation_exponent: ExtReal
    ambient_exponent: ExtReal


def exponent_compare(p: float, alpha, n: int) -> ExponentComparison:
    """Decide whether (1-p)/n + gamma >= alpha/(1 + alpha n).

    The comparison is made with a 1e-12 relative slack so exact boundary
    configurations count as satisfied.
    """
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    gamma = gamma_compose((p,) * n, alpha)
    if gamma.is_neg_inf:
        dilation = NEG_INF
    else:
        dilation = ExtReal((1.0 - p) / n + gamma.value)
    ambient = alpha_to_s(alpha, n)
    slack = 1e-12 * (1.0 + abs(ambient.value)) if ambient.is_finite else 0.0
    ok = dilation.value >= ambient.value - slack
    return ExponentComparison(bool(ok), dilation, ambient)
