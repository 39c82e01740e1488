"""Higher-level analytics on pattern censuses.

Covers the finite-length complexity function ``g(L, T) = ln A_{L,T}``,
exponential and stretched-exponential fits of the missing-pattern decay
``M_{L,T} = L! - A_{L,T}``, exact combinatorics of the noisy-periodic
process family, growth-constant estimation, and empirical forbidden-
pattern detection for deterministic maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import chain, permutations, product

import numpy as np

from .errors import DataError, ValidationError
from .ordinal import CensusTrace, OrdinalPattern, PatternDistribution, window_codes
from .processes import ProcessSpec, derive_seed, generate
from .rng import Stream

__all__ = [
    "DecayFit",
    "XpAnalytics",
    "ClassConstantFit",
    "missing_series",
    "pc_function_trace",
    "fit_decay",
    "xp_allowed_count",
    "xp_distribution",
    "xp_class_constant",
    "xp_pattern_probabilities",
    "estimate_class_constant",
    "forbidden_patterns_of_map",
    "stabilized_census",
]


# ---------------------------------------------------------------------------
# Missing patterns and decay fits
# ---------------------------------------------------------------------------

def missing_series(trace: CensusTrace) -> list[tuple[int, int]]:
    """Missing-pattern counts ``M = L! - A`` at each checkpoint."""
    fact = math.factorial(trace.order)
    return [(t, fact - a) for t, a in trace.visible_by_prefix]


def pc_function_trace(trace: CensusTrace) -> list[tuple[int, float]]:
    """Finite-length complexity function ``g(L, T) = ln A_{L,T}``."""
    return [(t, math.log(a)) for t, a in trace.visible_by_prefix]


@dataclass(frozen=True)
class DecayFit:
    """Fitted missing-pattern decay ``M(T) = C * exp(-R * T^beta)``."""

    R: float
    C: float
    beta: float
    model: str
    fit_range: tuple[float, float]
    residual: float
    n_points: int


def _decay_points(missing, L: int) -> tuple[np.ndarray, np.ndarray]:
    pts = sorted((float(t), float(m)) for t, m in missing)
    if not pts:
        raise DataError("no missing-pattern points supplied")
    if all(m <= 0.0 for _, m in pts[1:]):
        raise DataError(
            "census is saturated: no positive missing counts beyond the first point"
        )
    kept_t, kept_m = [], []
    for t, m in pts:
        if m < 1.0:
            break  # fit on the largest prefix where at least one pattern is missing
        kept_t.append(t)
        kept_m.append(m)
    if len(kept_t) < 4:
        raise DataError("need at least 4 checkpoints with M >= 1 to fit a decay")
    return np.array(kept_t), np.array(kept_m)


def _stretched_residual(t, y, beta):
    design = np.column_stack([np.ones_like(t), -(t**beta)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    rms = float(np.sqrt(np.mean((y - design @ coef) ** 2)))
    return rms, float(coef[1]), float(coef[0])


def fit_decay(missing, L: int, model: str = "exponential",
              fix_intercept: bool = True) -> DecayFit:
    """Fit the decay law of missing ``L``-patterns versus series length.

    ``missing`` is a sequence of ``(T, M)`` pairs (``M`` may be an
    ensemble average).  The exponential model fits ``ln M`` against
    ``T - L`` with the intercept pinned to ``ln(L! - 1)`` -- the exact
    value at ``T = L`` -- unless ``fix_intercept=False``.  The
    stretched model scans the exponent ``beta`` over a coarse grid and
    refines the best cell by golden-section search.
    """
    if model not in ("exponential", "stretched"):
        raise ValidationError("model must be 'exponential' or 'stretched'")
    t, m = _decay_points(missing, L)
    y = np.log(m)

    if model == "exponential":
        x = t - L
        c0 = math.log(math.factorial(L) - 1)
        if fix_intercept:
            denom = float(np.sum(x * x))
            if denom == 0.0:
                raise DataError("degenerate abscissae: all checkpoints equal")
            rate = float(np.sum(x * (c0 - y)) / denom)
            fitted = c0 - rate * x
            intercept = c0
        else:
            design = np.column_stack([np.ones_like(x), -x])
            coef, *_ = np.linalg.lstsq(design, y, rcond=None)
            intercept, rate = float(coef[0]), float(coef[1])
            fitted = design @ coef
        if rate <= 0.0:
            raise DataError("no decay detected: fitted rate is not positive")
        residual = float(np.sqrt(np.mean((y - fitted) ** 2)))
        return DecayFit(
            R=rate,
            C=math.exp(intercept + rate * L),
            beta=1.0,
            model=model,
            fit_range=(float(t[0]), float(t[-1])),
            residual=residual,
            n_points=len(t),
        )

    grid = np.arange(0.05, 1.0001, 0.05)
    scored = [(beta, *_stretched_residual(t, y, beta)) for beta in grid]
    best = min(scored, key=lambda s: s[1])
    lo = max(0.01, best[0] - 0.05)
    hi = min(1.0, best[0] + 0.05)
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c_pt = b - phi * (b - a)
    d_pt = a + phi * (b - a)
    fc = _stretched_residual(t, y, c_pt)[0]
    fd = _stretched_residual(t, y, d_pt)[0]
    for _ in range(60):
        if fc <= fd:
            b, d_pt, fd = d_pt, c_pt, fc
            c_pt = b - phi * (b - a)
            fc = _stretched_residual(t, y, c_pt)[0]
        else:
            a, c_pt, fc = c_pt, d_pt, fd
            d_pt = a + phi * (b - a)
            fd = _stretched_residual(t, y, d_pt)[0]
        if b - a < 1e-6:
            break
    beta = 0.5 * (a + b)
    residual, rate, intercept = _stretched_residual(t, y, beta)
    if rate <= 0.0:
        raise DataError("no decay detected: fitted rate is not positive")
    return DecayFit(
        R=rate,
        C=math.exp(intercept),
        beta=float(beta),
        model=model,
        fit_range=(float(t[0]), float(t[-1])),
        residual=residual,
        n_points=len(t),
    )


# ---------------------------------------------------------------------------
# Exact combinatorics of the noisy-periodic family
# ---------------------------------------------------------------------------

def _xp_counts(p: int, L: int) -> tuple[int, int, int, int]:
    if p < 2:
        raise ValidationError("period must be an integer >= 2")
    if L < p:
        raise ValidationError(
            f"window width L={L} below period p={p} is outside the supported range"
        )
    nu, mu = divmod(L, p)
    f_nu = math.factorial(nu)
    f_nu1 = math.factorial(nu + 1)
    n1 = (p - mu) * f_nu1**mu * f_nu ** (p - mu - 1)
    n2 = mu * f_nu1 ** (mu - 1) * f_nu ** (p - mu) if mu >= 1 else 0
    return nu, mu, n1, n2


def xp_allowed_count(p: int, L: int) -> int:
    """Exact number of allowed ``L``-patterns of the noisy-periodic
    process of period ``p`` (one noiseless phase)."""
    _, _, n1, n2 = _xp_counts(p, L)
    return n1 + n2


def xp_class_constant(p: int, mu: int) -> float:
    """Growth constant ``c`` of ``g(L) = c L ln L`` along the order
    subsequence ``L = nu*p + mu``."""
    if not 0 <= mu < p:
        raise ValidationError("residue mu must lie in 0..p-1")
    if mu in (0, p - 1):
        return (p - 1) / p
    return mu / p


@dataclass(frozen=True)
class XpAnalytics:
    """Exact pattern statistics of the noisy-periodic process.

    The allowed patterns split into ``N1`` patterns of probability
    ``P1`` and ``N2`` of probability ``P2`` (``N2 = 0`` when the window
    width is a multiple of the period).  Probabilities are exact
    rationals so the normalization ``N1*P1 + N2*P2 = 1`` holds exactly.
    """

    p: int
    L: int
    nu: int
    mu: int
    N1: int
    N2: int
    P1: Fraction
    P2: Fraction
    allowed: int
    c: float

    def renyi(self, alpha: float) -> float:
        """Renyi entropy of the two-level distribution, any alpha >= 0."""
        alpha = float(alpha)
        if not math.isfinite(alpha) or alpha < 0:
            raise ValidationError("alpha must be a finite real >= 0")
        if alpha == 0.0:
            return math.log(self.allowed)
        p1 = float(self.P1)
        if self.N2 == 0:
            return math.log(self.N1)
        p2 = float(self.P2)
        if abs(alpha - 1.0) < 1e-8:
            return -(self.N1 * p1 * math.log(p1) + self.N2 * p2 * math.log(p2))
        return math.log(self.N1 * p1**alpha + self.N2 * p2**alpha) / (1.0 - alpha)


def xp_distribution(p: int, L: int) -> XpAnalytics:
    """Exact two-level pattern distribution of the noisy-periodic
    process, from the closed-form counts."""
    nu, mu, n1, n2 = _xp_counts(p, L)
    if mu == 0:
        p1 = Fraction(1, n1)
        p2 = Fraction(0)
    else:
        p1 = Fraction(p - mu, p * n1)
        p2 = Fraction(mu, p * n2)
    return XpAnalytics(
        p=p,
        L=L,
        nu=nu,
        mu=mu,
        N1=n1,
        N2=n2,
        P1=p1,
        P2=p2,
        allowed=n1 + n2,
        c=xp_class_constant(p, mu),
    )


def xp_pattern_probabilities(
    p: int, L: int, noiseless_residues: tuple[int, ...] | None = None
) -> dict[tuple[int, ...], Fraction]:
    """Brute-force oracle: exact probability of every allowed pattern.

    Enumerates window start residues and all orderings of the noisy
    value groups (positions in a noiseless residue class tie and keep
    index order).  Feasible for small ``p`` and ``L``; exponential in
    the group sizes.
    """
    if p < 2:
        raise ValidationError("period must be an integer >= 2")
    if L < 2:
        raise ValidationError("window width must be at least 2")
    residues = (p - 1,) if noiseless_residues is None else tuple(noiseless_residues)
    if any(not 0 <= r < p for r in residues):
        raise ValidationError("noiseless residues must lie in 0..p-1")
    out: dict[tuple[int, ...], Fraction] = {}
    for start in range(p):
        groups = [
            tuple(j for j in range(L) if (start + j) % p == k) for k in range(p)
        ]
        options = []
        for k, grp in enumerate(groups):
            if len(grp) <= 1 or k in residues:
                options.append((grp,))
            else:
                options.append(tuple(permutations(grp)))
        weight = Fraction(1, p * math.prod(len(o) for o in options))
        for combo in product(*options):
            ranks = tuple(chain.from_iterable(combo))
            out[ranks] = out.get(ranks, Fraction(0)) + weight
    return out


# ---------------------------------------------------------------------------
# Growth-constant estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassConstantFit:
    """Through-origin fit of ``ln A_L`` against the family abscissa."""

    c: float
    residual: float
    degenerate: bool


def estimate_class_constant(counts, family: str) -> ClassConstantFit:
    """Estimate ``c`` in ``g(t) = c t`` or ``g(t) = c t ln t`` from
    observed allowed-pattern counts ``(L, A_L)``."""
    if family not in ("exponential", "sub_linear_log"):
        raise ValidationError("family must be 'exponential' or 'sub_linear_log'")
    pts = [(int(L), a) for L, a in counts]
    if len({L for L, _ in pts}) < 3:
        raise DataError("need at least 3 distinct orders")
    if any(a < 1 for _, a in pts):
        raise ValidationError("allowed counts must be at least 1")
    x = np.array(
        [L if family == "exponential" else L * math.log(L) for L, _ in pts]
    )
    y = np.array([math.log(a) for _, a in pts])
    if np.all(y == 0.0):
        return ClassConstantFit(c=0.0, residual=0.0, degenerate=True)
    c_hat = float(np.sum(x * y) / np.sum(x * x))
    residual = float(np.sqrt(np.mean((y - c_hat * x) ** 2)))
    return ClassConstantFit(c=c_hat, residual=residual, degenerate=False)


# ---------------------------------------------------------------------------
# Forbidden patterns of deterministic maps
# ---------------------------------------------------------------------------

def _orbit_batch(spec: ProcessSpec, n_orbits: int, orbit_len: int) -> np.ndarray:
    """Orbits from random initial conditions, one row per orbit."""
    if spec.kind == "shift":
        rows = [
            generate(replace(spec, length=orbit_len, seed=derive_seed(spec.seed, i)))
            for i in range(n_orbits)
        ]
        return np.vstack(rows)
    u = Stream(spec.seed).uniforms(n_orbits)
    x0 = 1e-6 + (1.0 - 2e-6) * u
    out = np.empty((n_orbits, orbit_len))
    v = x0.copy()
    if spec.kind == "logistic":
        for t in range(orbit_len):
            out[:, t] = v
            v = 4.0 * v * (1.0 - v)
        return out
    # piecewise-linear zigzag; dither kicks drawn per orbit stream
    sigma = spec.sigma
    n_kicks = -(-orbit_len // 10_000)
    kicks = (
        np.vstack(
            [Stream(derive_seed(spec.seed, i + 1)).uniforms(n_kicks)
             for i in range(n_orbits)]
        )
        if spec.dither
        else None
    )
    for t in range(orbit_len):
        if spec.dither and t % 10_000 == 0:
            v = np.clip(v + (2.0 * kicks[:, t // 10_000] - 1.0) * 1e-14, 0.0, 1.0)
        out[:, t] = v
        v = 1.0 - np.abs((sigma * v) % 2.0 - 1.0)
    return out


def forbidden_patterns_of_map(
    spec: ProcessSpec, L: int, n_orbits: int, orbit_len: int
) -> set[OrdinalPattern]:
    """Patterns never observed over an ensemble of map orbits.

    The result is the complement of the union of visible patterns over
    ``n_orbits`` random initial conditions iterated ``orbit_len`` steps
    each -- an empirical "missing at this sampling effort" set, not a
    proof of true forbiddenness.
    """
    if not spec.is_deterministic:
        raise ValidationError(
            "forbidden-pattern scans require a deterministic kind "
            "(logistic, piecewise-linear or shift)"
        )
    if not 2 <= L <= 7:
        raise ValidationError("enumeration is bounded to 2 <= L <= 7")
    if n_orbits < 1 or orbit_len < L:
        raise ValidationError("need at least one orbit of length >= L")
    orbits = _orbit_batch(spec, n_orbits, orbit_len)
    seen: set[int] = set()
    fact = math.factorial(L)
    for row in orbits:
        seen.update(np.unique(window_codes(row, L)).tolist())
        if len(seen) == fact:
            break
    return {
        OrdinalPattern.from_code(code, L)
        for code in range(fact)
        if code not in seen
    }


# ---------------------------------------------------------------------------
# Early-exit census
# ---------------------------------------------------------------------------

def stabilized_census(
    series, L: int, tol: float = 1e-4, block: int | None = None
) -> PatternDistribution:
    """Census that stops once the pattern distribution stabilizes.

    After each block of ``5 * L!`` windows (configurable) the running
    probabilities are compared with those one block earlier; the census
    stops when no pattern's probability moved by more than ``tol``.
    Otherwise it runs through the whole series.  The consumed window
    count is ``total_windows`` of the result.
    """
    codes = window_codes(series, L)
    n = codes.size
    if block is None:
        block = 5 * math.factorial(L)
    if block >= n:
        uniq, cnt = np.unique(codes, return_counts=True)
        return PatternDistribution(
            order=L,
            counts={int(c): int(k) for c, k in zip(uniq, cnt)},
            total_windows=int(n),
        )
    counts: dict[int, int] = {}
    used = 0
    prev: dict[int, float] = {}
    while used < n:
        hi = min(used + block, n)
        uniq, cnt = np.unique(codes[used:hi], return_counts=True)
        for c, k in zip(uniq, cnt):
            counts[int(c)] = counts.get(int(c), 0) + int(k)
        used = hi
        probs = {c: k / used for c, k in counts.items()}
        if prev:
            drift = max(
                abs(probs.get(c, 0.0) - prev.get(c, 0.0))
                for c in set(probs) | set(prev)
            )
            if drift <= tol:
                break
        prev = probs
    return PatternDistribution(order=L, counts=counts, total_windows=used)
