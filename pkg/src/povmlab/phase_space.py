"""The vacuum-generated phase-space observable on truncated Fock space.

The observable assigns to a planar region Z the effect
(1/pi) int_Z |z><z| dlambda(z) built from coherent states
|z> = exp(-|z|^2/2) sum_n z^n / sqrt(n!) |n>. Polar regions factor into a
radial moment integral and an angular Fourier coefficient; the margins are
an unsharp number observable (radial), an unsharp phase (angular, which
has the norm-1 property), and unsharp position/momentum (Cartesian, which
do not: their norms are capped by the sup of a smeared indicator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate
from scipy.special import erf, gammainc, gammaln

from .effects import DEFAULT_TOL, Effect, ToleranceConfig, validate_effect
from .errors import QuadratureFailure, TruncationTooSmall
from .phase import ArcSet, arc_fourier, _fourier_profile, _toeplitz_from_profile

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PolarRegion:
    """Radial interval [r_lo, r_hi) times an angular arc set."""

    r_lo: float
    r_hi: float
    angles: ArcSet

    def __post_init__(self):
        if not (0.0 <= self.r_lo < self.r_hi):
            raise ValueError("need 0 <= r_lo < r_hi")

    @property
    def area(self) -> float:
        if not np.isfinite(self.r_hi):
            return math.inf if self.angles.length > 0 else 0.0
        return 0.5 * (self.r_hi**2 - self.r_lo**2) * self.angles.length

    @staticmethod
    def disk(r: float) -> "PolarRegion":
        return PolarRegion(0.0, float(r), ArcSet.full_circle())

    @staticmethod
    def parse(text: str, pi_units: bool = False) -> "PolarRegion":
        """Parse 'r1:r2@a1:b1,a2:b2'; radial endpoints accept 'inf'."""
        radial, sep, angular = text.partition("@")
        if not sep:
            raise ValueError("polar region must look like 'r1:r2@a1:b1,...'")
        lo_s, sep2, hi_s = radial.partition(":")
        if not sep2:
            raise ValueError("radial part must look like 'r1:r2'")
        lo = float(lo_s)
        hi = math.inf if hi_s.strip().lower() in ("inf", "+inf") else float(hi_s)
        return PolarRegion(lo, hi, ArcSet.parse(angular, pi_units))


@dataclass(frozen=True)
class RealRegion:
    """Finite disjoint union of intervals on the real line, sorted."""

    intervals: tuple[tuple[float, float], ...]

    @staticmethod
    def from_pairs(pairs: Sequence[tuple[float, float]]) -> "RealRegion":
        cleaned = []
        for a, b in pairs:
            a, b = float(a), float(b)
            if not a < b:
                raise ValueError(f"interval needs a < b, got [{a}, {b}]")
            cleaned.append((a, b))
        cleaned.sort()
        merged: list[list[float]] = []
        for a, b in cleaned:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return RealRegion(tuple((a, b) for a, b in merged))

    @staticmethod
    def parse(text: str) -> "RealRegion":
        """Parse 'a:b,c:d' with 'inf' / '-inf' accepted as endpoints."""
        pairs = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            lo_s, sep, hi_s = chunk.partition(":")
            if not sep:
                raise ValueError(f"interval {chunk!r} must look like 'a:b'")
            pairs.append((_parse_endpoint(lo_s), _parse_endpoint(hi_s)))
        if not pairs:
            raise ValueError("empty region specification")
        return RealRegion.from_pairs(pairs)

    @property
    def length(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def is_bounded(self) -> bool:
        return all(np.isfinite(a) and np.isfinite(b) for a, b in self.intervals)


def _parse_endpoint(token: str) -> float:
    token = token.strip().lower()
    if token in ("inf", "+inf"):
        return math.inf
    if token == "-inf":
        return -math.inf
    return float(token)


def coherent_overlap(n: int, z: complex) -> complex:
    """<n|z> = exp(-|z|^2/2) z^n / sqrt(n!), evaluated in log space."""
    if n < 0:
        raise ValueError("Fock index must be nonnegative")
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j if n == 0 else 0.0 + 0.0j
    r, th = abs(z), np.angle(z)
    logmag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1.0)
    return complex(np.exp(logmag) * np.exp(1j * n * th))


def coherent_amplitudes(z: complex, d: int) -> np.ndarray:
    """Vector of <n|z> for n < d."""
    z = complex(z)
    n = np.arange(d)
    if z == 0:
        v = np.zeros(d, dtype=complex)
        v[0] = 1.0
        return v
    r, th = abs(z), np.angle(z)
    logmag = -0.5 * r * r + n * np.log(r) - 0.5 * gammaln(n + 1.0)
    return np.exp(logmag) * np.exp(1j * n * th)


def truncated_coherent_state(z: complex, d: int) -> np.ndarray:
    """Coherent amplitudes renormalized to a unit vector at truncation d."""
    v = coherent_amplitudes(z, d)
    return v / np.linalg.norm(v)


def heuristic_truncation(s: float) -> int:
    """Fock truncation adequate for coherent amplitude s."""
    return int(math.ceil(s * s + 10.0 * s + 10.0))


def _radial_moment(n: int, m: int, r_lo: float, r_hi: float) -> float:
    """2 int_{r_lo}^{r_hi} r^{n+m+1} exp(-r^2) dr / sqrt(n! m!).

    Even n+m reduces to regularized incomplete-gamma differences; odd
    n+m (half-integer exponent) is integrated adaptively with a log-space
    integrand so large indices cannot overflow.
    """
    if (n + m) % 2 == 0:
        p = (n + m) // 2
        lognorm = gammaln(p + 1.0) - 0.5 * gammaln(n + 1.0) - 0.5 * gammaln(m + 1.0)
        hi = 1.0 if not np.isfinite(r_hi) else float(gammainc(p + 1, r_hi * r_hi))
        lo = float(gammainc(p + 1, r_lo * r_lo)) if r_lo > 0 else 0.0
        return float(np.exp(lognorm) * (hi - lo))
    lognorm = -0.5 * (gammaln(n + 1.0) + gammaln(m + 1.0))
    k = n + m + 1

    def integrand(r: float) -> float:
        if r <= 0.0:
            return 0.0
        return 2.0 * math.exp(k * math.log(r) - r * r + lognorm)

    peak = math.sqrt(k / 2.0)
    hi = r_hi if np.isfinite(r_hi) else peak + 30.0
    pts = [p for p in (peak,) if r_lo < p < hi]
    val, err = integrate.quad(integrand, r_lo, hi, points=pts or None,
                              limit=300, epsabs=1e-12, epsrel=1e-12)
    if err > 1e-9:
        raise QuadratureFailure(f"radial integral error estimate {err:.3e}")
    return float(val)


def phase_space_effect(
    Z: PolarRegion, d: int, cfg: ToleranceConfig = DEFAULT_TOL
) -> Effect:
    """Effect of a polar region: entries factor as angular Fourier x radial moment.

    <n|A(Z)|m> = 2 * arc_fourier(Theta, n-m) * int r^{n+m+1} e^{-r^2} dr
                 / sqrt(n! m!).
    """
    profile = _fourier_profile(Z.angles, d)
    M = np.empty((d, d), dtype=complex)
    for n in range(d):
        for m in range(n, d):
            rad = _radial_moment(n, m, Z.r_lo, Z.r_hi)
            M[n, m] = profile[n - m + d - 1] * rad
            M[m, n] = np.conj(M[n, m])
    return validate_effect(M, cfg)


def number_margin(r_lo: float, r_hi: float, d: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    """Radial margin: diagonal effect with entries
    (gamma(n+1, r_hi^2) - gamma(n+1, r_lo^2)) / n! (regularized)."""
    if not (0.0 <= r_lo < r_hi):
        raise ValueError("need 0 <= r_lo < r_hi")
    n = np.arange(d)
    hi = np.ones(d) if not np.isfinite(r_hi) else gammainc(n + 1, r_hi * r_hi)
    lo = gammainc(n + 1, r_lo * r_lo) if r_lo > 0 else np.zeros(d)
    return validate_effect(np.diag((hi - lo).astype(complex)), cfg)


def angle_margin(theta: ArcSet, d: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    """Angular margin: a phase observable with Gram-like weights
    Gamma((n+m)/2 + 1) / sqrt(n! m!)."""
    n = np.arange(d)
    N, M = np.meshgrid(n, n, indexing="ij")
    weights = np.exp(gammaln((N + M) / 2.0 + 1.0)
                     - 0.5 * gammaln(N + 1.0) - 0.5 * gammaln(M + 1.0))
    C = _toeplitz_from_profile(_fourier_profile(theta, d), d)
    return validate_effect(weights * C, cfg)


@dataclass(frozen=True)
class AngleProbeResult:
    """Coherent-state probe of the angle margin's norm-1 behaviour."""

    truncation: int
    amplitudes: tuple[float, ...]
    probabilities: tuple[float, ...]


def angle_margin_norm1_probe(
    theta: ArcSet,
    theta0: float,
    amplitudes: Sequence[float],
    d: Optional[int] = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> AngleProbeResult:
    """Probabilities <alpha|A^theta(Theta)|alpha> for alpha = s e^{i theta0}.

    theta0 must lie in the interior of an arc; the probabilities then
    increase toward 1 with s, witnessing that the angle margin assigns
    norm 1 to every arc set of positive measure. The truncation must
    satisfy d >= s^2 + 10 s for the largest amplitude (TruncationTooSmall
    otherwise); by default it is chosen from that heuristic.
    """
    amps = [float(s) for s in amplitudes]
    if any(s < 0 for s in amps):
        raise ValueError("amplitudes must be nonnegative")
    if not theta.contains_interior(theta0):
        raise ValueError(f"theta0 = {theta0:.6g} is not interior to the arc set")
    s_max = max(amps) if amps else 0.0
    needed = int(math.ceil(s_max * s_max + 10.0 * s_max))
    if d is None:
        d = heuristic_truncation(s_max)
    elif d < needed:
        raise TruncationTooSmall(f"d = {d} below s_max^2 + 10 s_max = {needed}")
    A = angle_margin(theta, d, cfg).matrix
    probs = []
    for s in amps:
        v = truncated_coherent_state(s * np.exp(1j * theta0), d)
        probs.append(float(np.real(np.vdot(v, A @ v))))
    return AngleProbeResult(d, tuple(amps), tuple(probs))


def cartesian_symbol(X: RealRegion) -> Callable[[np.ndarray], np.ndarray]:
    """Smeared-indicator symbol of the Cartesian margin.

    h(x) = sum over intervals [a, b] of (erf(x/sqrt2 - a) - erf(x/sqrt2 - b)) / 2,
    i.e. the Gaussian-smeared indicator evaluated at u = x / sqrt(2).
    Takes values in [0, 1]; sup h < 1 exactly when X is bounded.
    """

    def h(x):
        u = np.asarray(x, dtype=float) / math.sqrt(2.0)
        total = np.zeros_like(u)
        for a, b in X.intervals:
            ea = erf(u - a) if np.isfinite(a) else np.ones_like(u)
            eb = erf(u - b) if np.isfinite(b) else -np.ones_like(u)
            total = total + 0.5 * (ea - eb)
        return total

    return h


def cartesian_symbol_sup(X: RealRegion, n_grid: int = 20001) -> float:
    """Numerical sup of the Cartesian symbol (norm bound for the margin)."""
    if not X.intervals:
        return 0.0
    h = cartesian_symbol(X)
    finite = [e for ab in X.intervals for e in ab if np.isfinite(e)]
    if not X.is_bounded():
        return 1.0
    lo = min(finite) - 8.0
    hi = max(finite) + 8.0
    grid = np.linspace(lo * math.sqrt(2.0), hi * math.sqrt(2.0), n_grid)
    return float(np.max(h(grid)))


def hermite_functions(d: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions f_0..f_{d-1} evaluated on a grid.

    Three-term recurrence on the functions themselves; values stay
    bounded, so there is no overflow at large index.
    """
    x = np.asarray(x, dtype=float)
    F = np.zeros((d, x.size))
    F[0] = np.pi**-0.25 * np.exp(-x * x / 2.0)
    if d > 1:
        F[1] = math.sqrt(2.0) * x * F[0]
    for n in range(1, d - 1):
        F[n + 1] = math.sqrt(2.0 / (n + 1)) * x * F[n] - math.sqrt(n / (n + 1.0)) * F[n - 1]
    return F


def cartesian_margin_effect(
    X: RealRegion, d: int, cfg: ToleranceConfig = DEFAULT_TOL, nodes: Optional[int] = None
) -> Effect:
    """Cartesian-margin effect: the symbol h quadratured against Hermite products.

    Entries int f_n(x) f_m(x) h(x) dx via Gauss-Legendre nodes on a window
    wide enough to contain every Hermite function at truncation d (raw
    Gauss-Hermite weights underflow past a few hundred nodes, Legendre
    nodes on the truncated window do not).
    """
    if nodes is None:
        nodes = max(1200, 10 * d)
    L = math.sqrt(2.0 * d) + 10.0
    g, w = np.polynomial.legendre.leggauss(nodes)
    x = g * L
    w = w * L
    hx = cartesian_symbol(X)(x)
    F = hermite_functions(d, x)
    M = (F * (w * hx)) @ F.T
    return validate_effect(M.astype(complex), cfg)
