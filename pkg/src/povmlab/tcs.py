"""Two-photon coherent states: overlaps, Q-densities, margins, angle density.

A two-photon coherent state |beta; mu, nu> with |mu|^2 - |nu|^2 = 1 is the
eigenvector of mu*a + nu*a^dagger with eigenvalue beta. It covers coherent
states (nu = 0) and squeezed/rotated/displaced vacua. All quantities here
come from the closed-form coherent-state overlap, not from truncated state
vectors: the Husimi-type density q(z) = |<z|beta;mu,nu>|^2, its Gaussian
Cartesian margins and their variances (each > 1/4, product >= 1/4 with
equality only for nu = 0), and the angle-margin density g(theta) with its
coherent (delta at arg beta) and squeezed (pi-periodic two-peak) limits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import erf, erfcx

from .phase_space import RealRegion

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TCSParams:
    """Parameters (beta, mu, nu) with |mu|^2 - |nu|^2 = 1 and |nu/mu| < 1."""

    beta: complex
    mu: complex
    nu: complex

    def __post_init__(self):
        defect = abs(abs(self.mu) ** 2 - abs(self.nu) ** 2 - 1.0)
        if defect > 1e-12:
            raise ValueError(f"|mu|^2 - |nu|^2 = 1 violated by {defect:.3e}")

    @classmethod
    def coherent(cls, beta: complex) -> "TCSParams":
        return cls(complex(beta), 1.0 + 0.0j, 0.0 + 0.0j)

    @classmethod
    def from_w(cls, w: complex, beta: complex = 0.0) -> "TCSParams":
        """Build from the squeeze ratio w = nu/mu (real positive mu)."""
        w = complex(w)
        if abs(w) >= 1.0:
            raise ValueError("|w| must be < 1")
        mu = 1.0 / math.sqrt(1.0 - abs(w) ** 2)
        return cls(complex(beta), mu + 0.0j, w * mu)

    @classmethod
    def from_nu(cls, nu: complex, beta: complex = 0.0, theta_mu: float = 0.0) -> "TCSParams":
        """Build from nu, with |mu| = sqrt(1 + |nu|^2) at phase theta_mu."""
        nu = complex(nu)
        mu = math.sqrt(1.0 + abs(nu) ** 2) * cmath.exp(1j * theta_mu)
        return cls(complex(beta), mu, nu)

    @property
    def w(self) -> complex:
        return self.nu / self.mu

    @property
    def gamma(self) -> complex:
        """Centre of the Q-density: conj(mu) beta - nu conj(beta)."""
        return np.conj(self.mu) * self.beta - self.nu * np.conj(self.beta)

    @property
    def s(self) -> float:
        return abs(self.beta)

    @property
    def phi_angle(self) -> float:
        return float(np.angle(self.beta))

    @property
    def theta_mu(self) -> float:
        return float(np.angle(self.mu))

    @property
    def theta_nu(self) -> float:
        if self.nu == 0:
            raise ValueError("arg(nu) undefined for nu = 0")
        return float(np.angle(self.nu))

    @property
    def is_coherent(self) -> bool:
        return self.nu == 0


def tcs_overlap(p: TCSParams, z: complex) -> complex:
    """Coherent-state overlap <z|beta; mu, nu> (principal branch of sqrt(mu)).

    (1/sqrt(mu)) exp(-|z|^2/2 - |beta|^2/2 - (nu/2mu) conj(z)^2
                     + (conj(nu)/2mu) beta^2 + conj(z) beta / mu)
    """
    z = complex(z)
    expo = (
        -0.5 * abs(z) ** 2
        - 0.5 * abs(p.beta) ** 2
        - (p.nu / (2.0 * p.mu)) * np.conj(z) ** 2
        + (np.conj(p.nu) / (2.0 * p.mu)) * p.beta**2
        + np.conj(z) * p.beta / p.mu
    )
    return complex(cmath.exp(expo) / cmath.sqrt(p.mu))


def q_density(p: TCSParams, z) -> np.ndarray:
    """Phase-space probability density |<z|beta;mu,nu>|^2.

    Closed Gaussian form (1/|mu|) exp(-|z'|^2 - Re(w conj(z')^2)) with
    z' = z - gamma; vectorized over z.
    """
    z = np.asarray(z, dtype=complex)
    zp = z - p.gamma
    w = p.w
    return np.exp(-np.abs(zp) ** 2 - np.real(w * np.conj(zp) ** 2)) / abs(p.mu)


def _gauss_interval(c: float, lo: float, hi: float) -> float:
    """int_lo^hi exp(-c x^2) dx via erf."""
    rt = math.sqrt(c)
    e_hi = 1.0 if hi == math.inf else erf(rt * hi)
    e_lo = -1.0 if lo == -math.inf else erf(rt * lo)
    return 0.5 * math.sqrt(math.pi / c) * (e_hi - e_lo)


def cartesian_marginal_prob(p: TCSParams, axis: str, X: RealRegion) -> float:
    """Probability of the Cartesian margin along 'x' or 'y' over a region.

    The marginal density is a Gaussian centred at Re(gamma) (x) or
    Im(gamma) (y) with exponent coefficient
    (1 - |w|^2) / (1 -+ Re w); the integral reduces to erf differences.
    """
    w = p.w
    re_w = float(np.real(w))
    if axis == "x":
        c = (1.0 - abs(w) ** 2) / (1.0 - re_w)
        shift = float(np.real(p.gamma))
        pref = 1.0 / (math.sqrt(math.pi) * abs(p.mu) * math.sqrt(1.0 - re_w))
    elif axis == "y":
        c = (1.0 - abs(w) ** 2) / (1.0 + re_w)
        shift = float(np.imag(p.gamma))
        pref = 1.0 / (math.sqrt(math.pi) * abs(p.mu) * math.sqrt(1.0 + re_w))
    else:
        raise ValueError("axis must be 'x' or 'y'")
    total = 0.0
    for a, b in X.intervals:
        total += _gauss_interval(c, a - shift, b - shift)
    return pref * total


def marginal_variance(p: TCSParams, axis: str) -> float:
    """Closed-form variance of the Cartesian margin.

    Var_x = (1 - Re w) / (2 (1 - |w|^2)), Var_y with the opposite sign on
    Re w. Both exceed 1/4 strictly for every admissible w, so no family
    of these states concentrates either margin on a point.
    """
    w = p.w
    re_w = float(np.real(w))
    den = 2.0 * (1.0 - abs(w) ** 2)
    if axis == "x":
        return (1.0 - re_w) / den
    if axis == "y":
        return (1.0 + re_w) / den
    raise ValueError("axis must be 'x' or 'y'")


def uncertainty_product(p: TCSParams) -> float:
    """Product of the two marginal variances.

    Equals (1 - (Re w)^2) / (4 (1 - |w|^2)^2) >= 1/4, with equality
    exactly at nu = 0 (coherent states).
    """
    return marginal_variance(p, "x") * marginal_variance(p, "y")


def _angle_coefficients(p: TCSParams, theta):
    """Quadratic-exponent data of the radial integral defining g(theta).

    q(r e^{i theta}) = (1/|mu|) exp(-A r^2 + 2 B r - C) with
    A = 1 + Re(w e^{-2i theta}),
    B = Re(conj(gamma) e^{i theta}) + Re(w conj(gamma) e^{-i theta}),
    C = |gamma|^2 + Re(w conj(gamma)^2).
    """
    theta = np.asarray(theta, dtype=float)
    w = p.w
    g = p.gamma
    A = 1.0 + np.real(w * np.exp(-2j * theta))
    B = np.real(np.conj(g) * np.exp(1j * theta)) + np.real(w * np.conj(g) * np.exp(-1j * theta))
    C = abs(g) ** 2 + float(np.real(w * np.conj(g) ** 2))
    return A, B, C


def angle_density(p: TCSParams, theta) -> np.ndarray:
    """Probability density of the angle margin, g(theta), vectorized.

    Radial integration of the Gaussian q-density gives
    g = (1/(pi |mu|)) e^{-C} [ 1/(2A) + (sqrt(pi) B / (2 A^{3/2}))
                               e^{u^2} erfc(-u) ],  u = B / sqrt(A),
    evaluated through erfcx so the erf factor never cancels
    catastrophically. Nonnegative, 2*pi-periodic, total mass 1.
    """
    theta_arr = np.asarray(theta, dtype=float)
    A, B, C = _angle_coefficients(p, theta_arr)
    u = B / np.sqrt(A)
    term1 = np.exp(-C) / (2.0 * A)
    pref = math.sqrt(math.pi) * B / (2.0 * A**1.5)
    term2 = np.empty_like(term1)
    neg = u <= 0
    # u <= 0: e^{u^2} erfc(-u) = erfcx(-u), no overflow
    term2[neg] = (pref * np.exp(-C) * erfcx(-u))[neg]
    pos = ~neg
    if np.any(pos):
        # u > 0: e^{u^2} erfc(-u) = 2 e^{u^2} - erfcx(u)
        up = u[pos]
        term2[pos] = pref[pos] * (2.0 * np.exp(up * up - C) - np.exp(-C) * erfcx(up))
    out = (term1 + term2) / (math.pi * abs(p.mu))
    if np.isscalar(theta) or np.asarray(theta).ndim == 0:
        return float(out)
    return out


def angle_density_total_mass(p: TCSParams, n_theta: int = 16384) -> float:
    """Integral of g over [0, 2pi) by the periodic trapezoid rule."""
    grid = np.linspace(0.0, TWO_PI, n_theta, endpoint=False)
    return float(np.mean(angle_density(p, grid)) * TWO_PI)


def predicted_angle_peaks(p: TCSParams) -> tuple[float, ...]:
    """Peak angles of g in the two limit regimes.

    Coherent states peak at arg(beta). Squeezed vacua (beta = 0) peak
    where the quadratic coefficient A(theta) is smallest, i.e. at
    theta = (arg nu - arg mu)/2 + pi/2 (mod pi): two peaks pi apart.
    """
    if p.is_coherent:
        return (p.phi_angle % TWO_PI,)
    peak = ((p.theta_nu - p.theta_mu) / 2.0 + math.pi / 2.0) % math.pi
    return (peak, peak + math.pi)


@dataclass(frozen=True)
class ConcentrationRecord:
    """Window masses of g around its predicted peaks for one parameter set."""

    label: float
    peaks: tuple[float, ...]
    window: float
    window_mass: tuple[float, ...]
    total_mass: float


def coherent_family(phi: float, s_values: Sequence[float]) -> list[TCSParams]:
    return [TCSParams.coherent(s * cmath.exp(1j * phi)) for s in s_values]


def squeezed_family(
    nu_values: Sequence[float], theta_mu: float = 0.0, theta_nu: float = 0.0
) -> list[TCSParams]:
    return [
        TCSParams.from_nu(k * cmath.exp(1j * theta_nu), 0.0, theta_mu)
        for k in nu_values
    ]


def angle_density_limits(
    params_seq: Sequence[TCSParams],
    labels: Sequence[float],
    window: float = 0.3,
    n_theta: int = 16384,
) -> list[ConcentrationRecord]:
    """Concentration metrics of g along a parameter family.

    For each parameter set, integrates g over windows (peak +- window)
    around the predicted peaks. Along a coherent family with growing
    amplitude the single-window mass increases toward 1; along a squeezed
    family with growing |nu| the two pi-separated windows each collect
    mass approaching 1/2.
    """
    grid = np.linspace(0.0, TWO_PI, n_theta, endpoint=False)
    dtheta = TWO_PI / n_theta
    records = []
    for label, p in zip(labels, params_seq):
        g = angle_density(p, grid)
        total = float(np.sum(g) * dtheta)
        peaks = predicted_angle_peaks(p)
        masses = []
        for peak in peaks:
            delta = np.abs((grid - peak + math.pi) % TWO_PI - math.pi)
            masses.append(float(np.sum(g[delta <= window]) * dtheta))
        records.append(
            ConcentrationRecord(float(label), peaks, window, tuple(masses), total)
        )
    return records
