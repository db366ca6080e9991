"""Independent numerical oracles used by the test suite.

Everything here recomputes expected values along a different route than
the library: brute-force quadrature, bisection, exact integer arithmetic,
or scipy special functions the implementation does not call for the same
quantity. Oracles never import the code path they are checking.
"""

import math

import numpy as np
from scipy import integrate
from scipy.special import eval_hermite


def bisect_max_scale(A: np.ndarray, P: np.ndarray, hi: float = 2.0, iters: int = 64) -> float:
    """max { t : A - t P is PSD } by bisection on the minimum eigenvalue."""
    lo = 0.0
    assert np.linalg.eigvalsh(A - lo * P)[0] >= -1e-14
    while np.linalg.eigvalsh(A - hi * P)[0] >= 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError("bisection bracket failed")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.linalg.eigvalsh(A - mid * P)[0] >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def quad_arc_fourier(arcs, k: int) -> complex:
    """(1/2pi) int e^{ikx} over a union of arcs by adaptive quadrature."""
    total = 0.0 + 0.0j
    for a, b in arcs:
        re, _ = integrate.quad(lambda x: math.cos(k * x), a, b, epsabs=1e-13, limit=200)
        im, _ = integrate.quad(lambda x: math.sin(k * x), a, b, epsabs=1e-13, limit=200)
        total += (re + 1j * im) / (2.0 * math.pi)
    return total


def coherent_amp_exact(n: int, z: complex) -> complex:
    """<n|z> from exact integer arithmetic: e^{-|z|^2/2} z^n / sqrt(n!)."""
    if z == 0:
        return 1.0 + 0.0j if n == 0 else 0.0j
    mag2 = abs(z) ** (2 * n) / math.factorial(n)  # |z^n|^2 / n! may overflow for huge n
    return math.exp(-abs(z) ** 2 / 2.0) * math.sqrt(mag2) * np.exp(1j * n * np.angle(z))


def polar_region_matrix_oracle(r_lo, r_hi, arcs, d, nr=240, nt=240) -> np.ndarray:
    """(1/pi) int_Z <n|z><z|m| dlambda by tensor Gauss-Legendre quadrature."""
    if not np.isfinite(r_hi):
        r_hi = math.sqrt(2.0 * d) + 12.0
    gr, wr = np.polynomial.legendre.leggauss(nr)
    r = (gr + 1.0) / 2.0 * (r_hi - r_lo) + r_lo
    wr = wr * (r_hi - r_lo) / 2.0
    M = np.zeros((d, d), dtype=complex)
    for a, b in arcs:
        gt, wt = np.polynomial.legendre.leggauss(nt)
        t = (gt + 1.0) / 2.0 * (b - a) + a
        wt = wt * (b - a) / 2.0
        R, T = np.meshgrid(r, t, indexing="ij")
        W = np.outer(wr, wt) * R / math.pi
        Z = R * np.exp(1j * T)
        amps = np.empty((d,) + Z.shape, dtype=complex)
        amps[0] = np.exp(-np.abs(Z) ** 2 / 2.0)
        for n in range(1, d):
            amps[n] = amps[n - 1] * Z / math.sqrt(n)
        M += np.einsum("aij,bij,ij->ab", amps, amps.conj(), W)
    return M


def hermite_product_entry_oracle(n: int, m: int, h, L: float = 30.0) -> float:
    """int f_n f_m h dx with Hermite functions from scipy.special.eval_hermite."""

    def f(x, k):
        lognorm = -0.5 * (k * math.log(2.0) + math.lgamma(k + 1) + 0.5 * math.log(math.pi))
        return eval_hermite(k, x) * math.exp(lognorm - x * x / 2.0)

    val, _ = integrate.quad(lambda x: f(x, n) * f(x, m) * h(x), -L, L,
                            limit=400, epsabs=1e-12)
    return val


def gauss2d_grid(center_x: float, center_y: float, half: float, n: int = 401):
    """Tensor Gauss-Legendre grid on a centred square, returns (Z, W)."""
    g, w = np.polynomial.legendre.leggauss(n)
    x = g * half + center_x
    y = g * half + center_y
    wx = w * half
    X, Y = np.meshgrid(x, y, indexing="ij")
    W = np.outer(wx, wx)
    return X + 1j * Y, X, Y, W


def density_moments_2d(density, center, half, n: int = 401):
    """Mass, means, and variances of a 2-D density via Gauss-Legendre."""
    Z, X, Y, W = gauss2d_grid(center.real, center.imag, half, n)
    q = density(Z) / math.pi
    mass = float(np.sum(q * W))
    mean_x = float(np.sum(X * q * W)) / mass
    mean_y = float(np.sum(Y * q * W)) / mass
    var_x = float(np.sum((X - mean_x) ** 2 * q * W)) / mass
    var_y = float(np.sum((Y - mean_y) ** 2 * q * W)) / mass
    return mass, mean_x, mean_y, var_x, var_y


def box_mass_2d(density, x_lo, x_hi, y_lo, y_hi, n: int = 501) -> float:
    """(1/pi) int of a 2-D density over an axis-aligned box, Gauss-Legendre."""
    g, w = np.polynomial.legendre.leggauss(n)
    x = (g + 1.0) / 2.0 * (x_hi - x_lo) + x_lo
    y = (g + 1.0) / 2.0 * (y_hi - y_lo) + y_lo
    wx = w * (x_hi - x_lo) / 2.0
    wy = w * (y_hi - y_lo) / 2.0
    X, Y = np.meshgrid(x, y, indexing="ij")
    q = density(X + 1j * Y) / math.pi
    return float(np.sum(q * np.outer(wx, wy)))


def radial_density_quad(density, theta: float, r_max: float = 40.0) -> float:
    """(1/pi) int_0^inf density(r e^{i theta}) r dr by adaptive quadrature."""
    val, _ = integrate.quad(
        lambda r: float(density(r * np.exp(1j * theta))) * r,
        0.0, r_max, limit=300, epsabs=1e-12,
    )
    return val / math.pi
