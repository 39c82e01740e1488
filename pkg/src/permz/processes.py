"""Reference process generators with counter-based, replayable seeding.

Every generator is a pure function of its :class:`ProcessSpec`: equal
specs give bit-identical output.  Randomness comes exclusively from the
SplitMix64 stream keyed by ``spec.seed`` (see :mod:`permz.rng`), with a
documented draw order per kind:

* ``white-noise``       -- T uniforms on [0, 1).
* ``fgn`` / ``fbm``     -- 2T gaussians feeding a circulant-embedding
  synthesis (draws 0..T are the cosine coefficients for frequencies
  0..T, draws T+1..2T-1 the sine coefficients for frequencies 1..T-1);
  ``fbm`` is the running sum of the same fGn stream.
* ``noisy-logistic`` / ``noisy-schuster`` -- the noise-free orbit is
  iterated first, then T uniforms are mapped to observational noise
  uniform on [-amplitude, amplitude].
* ``xp``                -- T uniforms; each maps to noise uniform on
  (-delta/2, delta/2) except at the noiseless residues, where the
  sample is exact (the uniform is still consumed).
* ``piecewise-linear``  -- one uniform per started block of 10^4 steps
  when dithering is enabled.
* ``logistic``          -- none (pure orbit of 4x(1-x)).
* ``shift``             -- T+52 stream bits; sample t is the 53-bit
  window 0.b_t..b_{t+52}, a typical orbit of x -> 2x mod 1 evaluated
  to one ulp (iterating doubles directly would collapse onto 0, since
  every double is a dyadic rational).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import NumericalError, ValidationError
from .rng import Stream

__all__ = [
    "KINDS",
    "ProcessSpec",
    "generate",
    "fgn_autocovariance",
    "derive_seed",
    "with_seed",
]

KINDS = (
    "white-noise",
    "fgn",
    "fbm",
    "noisy-logistic",
    "noisy-schuster",
    "xp",
    "piecewise-linear",
    "logistic",
    "shift",
)

_DITHER_SCALE = 1e-14
_DITHER_PERIOD = 10_000
_XP_AMPLITUDE_MARGIN = 1e-9  # keeps noise strictly below delta/2


@dataclass(frozen=True)
class ProcessSpec:
    """Full description of one generator run.

    Only the fields relevant to ``kind`` may be set; the rest must stay
    ``None`` so that a spec serializes without ambiguity.
    """

    kind: str
    length: int
    seed: int = 0
    hurst: float | None = None
    amplitude: float | None = None
    x0: float | None = None
    period: int | None = None
    delta: float | None = None
    noiseless_residues: tuple[int, ...] | None = None
    sigma: float | None = None
    dither: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(
                f"unknown process kind {self.kind!r}; choose from {', '.join(KINDS)}"
            )
        if self.length < 1:
            raise ValidationError("length must be a positive integer")
        allowed = {
            "white-noise": set(),
            "fgn": {"hurst"},
            "fbm": {"hurst"},
            "noisy-logistic": {"amplitude", "x0"},
            "noisy-schuster": {"amplitude", "x0"},
            "xp": {"period", "delta", "noiseless_residues"},
            "piecewise-linear": {"sigma", "x0"},
            "logistic": {"x0"},
            "shift": set(),
        }[self.kind]
        for field in ("hurst", "amplitude", "x0", "period", "delta",
                      "noiseless_residues", "sigma"):
            if field not in allowed and getattr(self, field) is not None:
                raise ValidationError(
                    f"parameter {field!r} does not apply to kind {self.kind!r}"
                )

        if self.kind in ("fgn", "fbm"):
            if self.hurst is None or not 0.0 < self.hurst < 1.0:
                raise ValidationError("hurst must lie strictly inside (0, 1)")
        if self.kind in ("noisy-logistic", "noisy-schuster"):
            if self.amplitude is not None and self.amplitude < 0:
                raise ValidationError("amplitude must be nonnegative")
            if self.x0 is not None and not 0.0 < self.x0 < 1.0:
                raise ValidationError("x0 must lie inside (0, 1)")
        if self.kind == "xp":
            if self.period is None or self.period < 2:
                raise ValidationError("period must be an integer >= 2")
            if self.delta is not None and not self.delta > 0:
                raise ValidationError("delta must be positive")
            if self.noiseless_residues is not None:
                residues = tuple(self.noiseless_residues)
                if any(not 0 <= r < self.period for r in residues):
                    raise ValidationError(
                        "noiseless residues must lie in 0..period-1"
                    )
                object.__setattr__(self, "noiseless_residues", residues)
        if self.kind == "piecewise-linear":
            if self.sigma is None or not self.sigma > 1.0:
                raise ValidationError("sigma must exceed 1")
            if self.x0 is not None and not 0.0 <= self.x0 <= 1.0:
                raise ValidationError("x0 must lie in [0, 1]")
        if self.kind == "logistic":
            if self.x0 is not None and not 0.0 < self.x0 < 1.0:
                raise ValidationError("x0 must lie inside (0, 1)")

    @property
    def is_deterministic(self) -> bool:
        """True for noise-free map orbits (the forbidden-pattern kinds)."""
        return self.kind in ("logistic", "piecewise-linear", "shift")

    @property
    def known_entropies(self) -> tuple[float, float] | None:
        """(metric, topological) entropy of the generating map, when
        known in closed form."""
        if self.kind == "logistic" or self.kind == "shift":
            return (math.log(2.0), math.log(2.0))
        if self.kind == "piecewise-linear":
            return (math.log(self.sigma), math.log(self.sigma))
        return None


def derive_seed(base_seed: int, index: int) -> int:
    """Per-realization seed for ensemble member ``index``."""
    return (int(base_seed) + int(index)) & 0xFFFFFFFFFFFFFFFF


def with_seed(spec: ProcessSpec, seed: int) -> ProcessSpec:
    return replace(spec, seed=seed)


def fgn_autocovariance(hurst: float, lag: int) -> float:
    """Autocovariance of unit-variance fractional Gaussian noise:
    ``0.5 * (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H})``."""
    if not 0.0 < hurst < 1.0:
        raise ValidationError("hurst must lie strictly inside (0, 1)")
    if lag < 0:
        raise ValidationError("lag must be nonnegative")
    k = float(lag)
    h2 = 2.0 * hurst
    return 0.5 * (abs(k + 1) ** h2 - 2.0 * abs(k) ** h2 + abs(k - 1) ** h2)


def _fgn(n: int, hurst: float, stream: Stream) -> np.ndarray:
    """Exact-covariance fGn via circulant embedding, O(n log n)."""
    if n == 1:
        return stream.gaussians(1)
    k = np.arange(n + 1, dtype=np.float64)
    h2 = 2.0 * hurst
    gamma = 0.5 * ((k + 1) ** h2 - 2.0 * k**h2 + np.abs(k - 1) ** h2)
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(row).real
    if lam.min() < -1e-6:
        raise NumericalError(
            f"circulant embedding produced negative spectrum for H={hurst}"
        )
    lam = np.clip(lam, 0.0, None)
    m = 2 * n
    g = stream.gaussians(m)
    a, b = g[: n + 1], g[n + 1 :]
    w = np.zeros(m, dtype=np.complex128)
    w[0] = math.sqrt(lam[0] / m) * a[0]
    w[n] = math.sqrt(lam[n] / m) * a[n]
    w[1:n] = np.sqrt(lam[1:n] / (2.0 * m)) * (a[1:n] + 1j * b)
    w[n + 1 :] = np.conj(w[1:n][::-1])
    return np.fft.fft(w)[:n].real


def _logistic_orbit(x0: float, n: int) -> np.ndarray:
    y = np.empty(n)
    v = x0
    for t in range(n):
        y[t] = v
        v = 4.0 * v * (1.0 - v)
    return y


def _schuster_orbit(x0: float, n: int) -> np.ndarray:
    y = np.empty(n)
    v = x0
    for t in range(n):
        y[t] = v
        v = (v + v * v) % 1.0
    return y


def _zigzag(u: float) -> float:
    return 1.0 - abs(u % 2.0 - 1.0)


def _piecewise_linear_orbit(spec: ProcessSpec, stream: Stream) -> np.ndarray:
    """Zigzag map with slope magnitude sigma everywhere on [0, 1].

    With dithering on, the orbit gets a 1e-14 kick once per 10^4 steps
    so it cannot settle onto a short floating-point cycle.  Slopes that
    are powers of two make the arithmetic exact and still collapse
    between kicks; prefer non-dyadic sigma (or the shift kind).
    """
    n = spec.length
    x0 = 0.2002 if spec.x0 is None else spec.x0
    kicks = stream.uniforms(-(-n // _DITHER_PERIOD)) if spec.dither else None
    y = np.empty(n)
    v = x0
    for t in range(n):
        if spec.dither and t % _DITHER_PERIOD == 0:
            v = min(1.0, max(0.0, v + (2.0 * kicks[t // _DITHER_PERIOD] - 1.0)
                             * _DITHER_SCALE))
        y[t] = v
        v = _zigzag(spec.sigma * v)
    return y


def _shift_series(n: int, stream: Stream) -> np.ndarray:
    bits = stream.bits(n + 52).astype(np.float64)
    weights = 2.0 ** -(np.arange(1, 54, dtype=np.float64))
    return sliding_window_view(bits, 53) @ weights


def _xp_series(spec: ProcessSpec, stream: Stream) -> np.ndarray:
    p = spec.period
    delta = 1.0 if spec.delta is None else spec.delta
    residues = (
        (p - 1,) if spec.noiseless_residues is None else spec.noiseless_residues
    )
    amplitude = delta / 2.0 - _XP_AMPLITUDE_MARGIN * delta
    t = np.arange(spec.length)
    phase = t % p
    zeta = amplitude * (2.0 * stream.uniforms(spec.length) - 1.0)
    if residues:
        zeta[np.isin(phase, residues)] = 0.0
    return delta * phase + zeta


def generate(spec: ProcessSpec) -> np.ndarray:
    """Produce the length-T series described by ``spec``."""
    stream = Stream(spec.seed)
    n = spec.length
    if spec.kind == "white-noise":
        return stream.uniforms(n)
    if spec.kind == "fgn":
        return _fgn(n, spec.hurst, stream)
    if spec.kind == "fbm":
        return np.cumsum(_fgn(n, spec.hurst, stream))
    if spec.kind == "noisy-logistic":
        amplitude = 0.30 if spec.amplitude is None else spec.amplitude
        orbit = _logistic_orbit(0.2002 if spec.x0 is None else spec.x0, n)
        return orbit + amplitude * (2.0 * stream.uniforms(n) - 1.0)
    if spec.kind == "noisy-schuster":
        amplitude = 0.25 if spec.amplitude is None else spec.amplitude
        orbit = _schuster_orbit(0.2002 if spec.x0 is None else spec.x0, n)
        return orbit + amplitude * (2.0 * stream.uniforms(n) - 1.0)
    if spec.kind == "xp":
        return _xp_series(spec, stream)
    if spec.kind == "piecewise-linear":
        return _piecewise_linear_orbit(spec, stream)
    if spec.kind == "logistic":
        return _logistic_orbit(0.2002 if spec.x0 is None else spec.x0, n)
    if spec.kind == "shift":
        return _shift_series(n, stream)
    raise ValidationError(f"unknown process kind {spec.kind!r}")
