"""
Franck-Condon factors between two one-dimensional harmonic oscillators.

The overlaps <b_m|a_n> are integrals of products of Hermite functions.
Such products are entire and Gaussian-damped, so the trapezoidal rule on a
uniform grid finer than the product's band limit converges to machine
precision; all (n, m) pairs then come from one matrix product.  Only
magnitudes are kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import MassMismatch, TruncationTooSmall

__all__ = [
    "OscillatorSpec",
    "OverlapMatrix",
    "characteristic_length",
    "ground_overlap",
    "hermite_functions",
    "overlap",
    "overlap_matrix",
    "adaptive_overlap_matrix",
    "line_weights",
    "weights_tail",
]


@dataclass(frozen=True)
class OscillatorSpec:
    omega: float
    center: float
    mass: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"oscillator frequency must be positive, got {self.omega}")
        if not self.mass > 0:
            raise ValueError(f"oscillator mass must be positive, got {self.mass}")
        if not np.isfinite(self.center):
            raise ValueError("oscillator center must be finite")

    @property
    def length(self):
        return characteristic_length(self.omega, self.mass)


def characteristic_length(omega, mass):
    """x_ho = sqrt(hbar / (M omega))."""
    return np.sqrt(constants.hbar / (mass * omega))


def _check_mass(a, b):
    if not np.isclose(a.mass, b.mass, rtol=1e-12, atol=0):
        raise MassMismatch(f"oscillators have different masses: {a.mass} vs {b.mass}")


def ground_overlap(a: OscillatorSpec, b: OscillatorSpec) -> float:
    """|<b_0|a_0>| in closed form."""
    _check_mass(a, b)
    wa, wb = a.omega, b.omega
    d = b.center - a.center
    prefactor = np.sqrt(2 * np.sqrt(wa * wb) / (wa + wb))
    return prefactor * np.exp(-a.mass * wa * wb * d**2 / (2 * constants.hbar * (wa + wb)))


def hermite_functions(n_max, xi):
    """
    Normalized Hermite functions psi_0..psi_n_max at points ``xi``.

    Uses the three-term recurrence on psi_n e^{xi^2/2} with a per-point
    running exponent so that large orders at large |xi| neither overflow
    nor underflow prematurely.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty((n_max + 1, xi.size))
    log_scale = -0.5 * xi**2
    prev = np.zeros_like(xi)
    cur = np.full_like(xi, np.pi**-0.25)
    out[0] = cur * np.exp(log_scale)
    for n in range(n_max):
        nxt = np.sqrt(2.0 / (n + 1)) * xi * cur - np.sqrt(n / (n + 1)) * prev
        big = np.abs(nxt) > _RESCALE
        if big.any():
            nxt[big] /= _RESCALE
            cur[big] /= _RESCALE
            log_scale[big] += _LOG_RESCALE
        prev, cur = cur, nxt
        out[n + 1] = cur * np.exp(log_scale)
    return out


_RESCALE = 1e150
_LOG_RESCALE = np.log(_RESCALE)


def _quadrature_grid(a, b, n_max):
    # band limit of psi_n is about sqrt(2n+1)/x_ho; product of two adds
    la, lb = a.length, b.length
    reach = np.sqrt(2 * n_max + 1)
    k_max = (reach + 8) * (1 / la + 1 / lb)
    h = np.pi / k_max
    lo = min(a.center - (reach + 10) * la, b.center - (reach + 10) * lb)
    hi = max(a.center + (reach + 10) * la, b.center + (reach + 10) * lb)
    mid = 0.5 * (lo + hi)
    half = int(np.ceil(0.5 * (hi - lo) / h))
    return mid + h * np.arange(-half, half + 1), h


def _signed_table(a, b, n_max):
    """Signed overlaps S[n, m] = <b_m|a_n> for n, m <= n_max."""
    _check_mass(a, b)
    x, h = _quadrature_grid(a, b, n_max)
    psi_a = hermite_functions(n_max, (x - a.center) / a.length) / np.sqrt(a.length)
    psi_b = hermite_functions(n_max, (x - b.center) / b.length) / np.sqrt(b.length)
    return h * psi_a @ psi_b.T


def overlap(a: OscillatorSpec, n: int, b: OscillatorSpec, m: int) -> float:
    """|<b_m|a_n>|, the Franck-Condon factor between level n of a and level m of b."""
    if n < 0 or m < 0:
        raise ValueError("quantum numbers must be non-negative")
    return float(abs(_signed_table(a, b, max(n, m))[n, m]))


@dataclass(frozen=True)
class OverlapMatrix:
    """
    Truncated table of |<target_m|source_n>|.

    ``values[n, m]``: rows index the source oscillator, columns the target.
    ``row_tails[n]`` is the probability 1 - sum_m values[n, m]^2 lost to
    truncation and ``tail_bound`` is its maximum over the first
    ``certified_rows + 1`` rows.
    """

    source: OscillatorSpec
    target: OscillatorSpec
    n_max: int
    values: np.ndarray
    row_tails: np.ndarray
    certified_rows: int
    tail_bound: float

    def row(self, n):
        return self.values[n]


def overlap_matrix(a: OscillatorSpec, b: OscillatorSpec, n_max: int, rows=None) -> OverlapMatrix:
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    rows = n_max if rows is None else min(rows, n_max)
    values = np.abs(_signed_table(a, b, n_max))
    np.clip(values, 0.0, 1.0, out=values)
    values.setflags(write=False)
    tails = np.clip(1.0 - np.sum(values**2, axis=1), 0.0, 1.0)
    tails.setflags(write=False)
    return OverlapMatrix(a, b, n_max, values, tails, rows, float(tails[: rows + 1].max()))


def adaptive_overlap_matrix(a, b, rows, tol=1e-8, margin=40, max_n=2000) -> OverlapMatrix:
    """Matrix whose first ``rows + 1`` rows are complete to within ``tol``."""
    n_max = rows + margin
    while True:
        mat = overlap_matrix(a, b, n_max, rows=rows)
        if mat.tail_bound < tol:
            return mat
        if n_max >= max_n:
            raise TruncationTooSmall(
                f"tail bound {mat.tail_bound:.3g} still above {tol:g} at n_max={n_max}")
        n_max = min(max_n, n_max + margin)


def line_weights(matrix_x: OverlapMatrix, matrix_y: OverlapMatrix, n, tol=1e-6) -> dict:
    """
    Strength of each line r (total radial phonon change) for initial state n.

    weight(r) = sum_s I_x(r - s)^2 I_y(s)^2 where I_x(j) = |<x'_{nx+j}|x_{nx}>|.
    """
    nx, ny = n.nx, n.ny
    for label, mat, k in (("x", matrix_x, nx), ("y", matrix_y, ny)):
        if k > mat.n_max:
            raise TruncationTooSmall(f"n_{label}={k} exceeds matrix size n_max={mat.n_max}")
        if mat.row_tails[k] > tol:
            raise TruncationTooSmall(
                f"row n_{label}={k} misses {mat.row_tails[k]:.3g} of its weight (tolerance {tol:g})")
    px = matrix_x.values[nx] ** 2
    py = matrix_y.values[ny] ** 2
    conv = np.convolve(px, py)
    offset = nx + ny
    return {i - offset: float(w) for i, w in enumerate(conv)}


def weights_tail(matrix_x, matrix_y, n):
    """Upper bound on the weight missing from :func:`line_weights`."""
    tx = matrix_x.row_tails[n.nx]
    ty = matrix_y.row_tails[n.ny]
    return float(1 - (1 - tx) * (1 - ty))
