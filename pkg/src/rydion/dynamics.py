"""
Four-level Rydberg excitation with decay, averaged over phonon occupations.

Levels are ordered (qubit |0>, intermediate |e>, Rydberg |r>, sink |g>).
In the rotating frame, with hbar = 1 and angular units,

    H = D_int |e><e| + D_2ph |r><r|
        + Rabi_1 / 2 (|0><e| + h.c.) + Rabi_2 / 2 (|e><r| + h.c.)

Detunings are therefore resonance minus laser frequency: a line that
moves up by s raises the matching detuning by s.

and both excited levels decay into the absorbing sink.  A phonon
occupation shifts the two-photon detuning through the Stark-softened
radial frequencies; thermal averages are weighted sums over occupations.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate, linalg

from .errors import CutoffTooSmall, IntegratorFailure
from .stark import PhononOccupation

__all__ = [
    "LEVELS",
    "LevelScheme",
    "PhononDistribution",
    "ParameterEnsemble",
    "MonteCarloBand",
    "hamiltonian",
    "collapse_operators",
    "liouvillian",
    "pure_state",
    "check_density_matrix",
    "evolve",
    "phonon_detuning",
    "thermal_distribution",
    "fock_distribution",
    "weighted_population",
    "monte_carlo_band",
    "oscillation_contrast",
]

LEVELS = ("0", "e", "r", "g")
_SCHEME_FIELDS = ("rabi_1", "rabi_2", "delta_intermediate", "delta_2photon", "gamma_e", "gamma_r")


@dataclass(frozen=True)
class LevelScheme:
    """
    Couplings (rad/s), detunings (rad/s) and decay rates (1/s).

    ``delta_2photon`` is the two-photon resonance of the reference phonon
    occupation minus the summed laser frequency.
    """

    rabi_1: float
    rabi_2: float
    delta_intermediate: float = 0.0
    delta_2photon: float = 0.0
    gamma_e: float = 0.0
    gamma_r: float = 0.0

    def __post_init__(self):
        for name in ("rabi_1", "rabi_2", "gamma_e", "gamma_r"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {value}")
        for name in ("delta_intermediate", "delta_2photon"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def effective_rabi(self):
        """Rabi_1 Rabi_2 / (2 D_int) for a far-detuned intermediate level."""
        return self.rabi_1 * self.rabi_2 / (2 * abs(self.delta_intermediate))


def hamiltonian(s: LevelScheme):
    H = np.zeros((4, 4), dtype=complex)
    H[1, 1] = s.delta_intermediate
    H[2, 2] = s.delta_2photon
    H[0, 1] = H[1, 0] = s.rabi_1 / 2
    H[1, 2] = H[2, 1] = s.rabi_2 / 2
    return H


def collapse_operators(s: LevelScheme):
    ops = []
    for level, rate in ((1, s.gamma_e), (2, s.gamma_r)):
        L = np.zeros((4, 4), dtype=complex)
        L[3, level] = np.sqrt(rate)
        ops.append(L)
    return ops


def liouvillian(s: LevelScheme):
    """Superoperator acting on row-major vec(rho)."""
    H = hamiltonian(s)
    eye = np.eye(4)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for C in collapse_operators(s):
        CdC = C.conj().T @ C
        L += np.kron(C, C.conj()) - 0.5 * (np.kron(CdC, eye) + np.kron(eye, CdC.T))
    return L


def pure_state(level):
    """|k><k| for a level index or label."""
    k = LEVELS.index(level) if isinstance(level, str) else int(level)
    rho = np.zeros((4, 4), dtype=complex)
    rho[k, k] = 1
    return rho


def check_density_matrix(rho, herm_tol=1e-10, trace_tol=1e-8, pos_tol=1e-10):
    """Raise ValueError unless ``rho`` is Hermitian, unit-trace and positive semidefinite."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > trace_tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real:.12g}")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -pos_tol:
        raise ValueError("density matrix is not positive semidefinite")


def evolve(scheme: LevelScheme, rho0, times, method="ode", rtol=1e-12, atol=1e-14):
    """
    Density matrices at each of ``times``.

    ``method="ode"`` integrates the master equation with the adaptive
    8th-order Dormand-Prince scheme; ``method="propagator"`` applies the
    exact exponential of the (time-independent) Liouvillian.

    Returns
    -------
    ndarray, shape (len(times), 4, 4)
    """
    rho0 = np.asarray(rho0, dtype=complex)
    check_density_matrix(rho0)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a non-empty 1-d sequence")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-negative and non-decreasing")
    L = liouvillian(scheme)
    if method == "propagator":
        return _propagate(L[None], rho0.reshape(-1), times)[0].reshape(-1, 4, 4)
    if method != "ode":
        raise ValueError(f"unknown method {method!r}")

    def rhs(t, y):
        return L @ y

    y0 = rho0.reshape(-1)
    t_end = times[-1]
    if t_end == 0:
        return np.repeat(rho0[None], len(times), axis=0)
    sol = integrate.solve_ivp(rhs, (0.0, t_end), y0, method="DOP853", t_eval=times,
                              rtol=rtol, atol=atol)
    if sol.status != 0:
        raise IntegratorFailure(sol.message)
    out = sol.y.T.reshape(-1, 4, 4)
    # hermitize away integrator round-off
    return 0.5 * (out + np.conj(np.swapaxes(out, 1, 2)))


def _propagate(Ls, y0, times, observe=None):
    """
    Exact propagation of a batch of Liouvillians from t = 0.

    ``observe`` selects vec(rho) components to keep (all if None).
    Returns shape (batch, len(times), n_obs).
    """
    batch = Ls.shape[0]
    keep = slice(None) if observe is None else observe
    state = np.broadcast_to(y0, (batch, y0.size)).astype(complex)
    steps = np.diff(np.concatenate([[0.0], times]))
    out = np.empty((batch, len(times), state[:, keep].shape[1]), dtype=complex)
    uniform = len(steps) > 1 and np.allclose(steps[1:], steps[1], rtol=1e-12, atol=0)
    cache = {}
    for k, dt in enumerate(steps):
        if dt != 0:
            key = steps[1] if (uniform and k > 0) else dt
            P = cache.get(key)
            if P is None:
                P = linalg.expm(Ls * key)
                if uniform and k > 0:
                    cache[key] = P
            state = np.einsum("bij,bj->bi", P, state)
        out[:, k] = state[:, keep]
    return out


@dataclass(frozen=True)
class PhononDistribution:
    """Probabilities over (n_x, n_y) occupations."""

    occupations: tuple
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if len(p) != len(self.occupations):
            raise ValueError("one probability per occupation is required")
        if np.any(p < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(p.sum() - 1) > 1e-9:
            raise ValueError(f"probabilities sum to {p.sum():.12g}, not 1")

    def arrays(self):
        """Occupation numbers as two integer arrays (n_x, n_y)."""
        occ = np.array([(o.nx, o.ny) for o in self.occupations], dtype=int).reshape(-1, 2)
        return occ[:, 0], occ[:, 1]

    def mean(self):
        nx, ny = self.arrays()
        p = np.asarray(self.probabilities)
        return float(p @ nx), float(p @ ny)


def _geometric(nbar, cutoff, tol):
    n = np.arange(cutoff + 1)
    if nbar == 0:
        p = (n == 0).astype(float)
    else:
        p = np.exp(n * np.log(nbar / (nbar + 1)) - np.log(nbar + 1))
    missing = 1 - p.sum()
    if missing > tol:
        raise CutoffTooSmall(f"cutoff {cutoff} drops {missing:.3g} of a thermal state with nbar={nbar}")
    return p / p.sum()


def thermal_distribution(nbar_x, nbar_y, cutoff=None, tol=1e-6) -> PhononDistribution:
    """
    Product of geometric (thermal) distributions, truncated and renormalized.

    ``cutoff`` defaults to the smallest value keeping the dropped mass
    below ``tol`` on each axis.
    """
    if nbar_x < 0 or nbar_y < 0:
        raise ValueError("mean phonon numbers must be non-negative")

    def needed(nbar):
        if nbar == 0:
            return 0
        # dropped mass of a geometric law beyond N is (nbar/(nbar+1))^(N+1)
        return int(np.ceil(np.log(tol) / np.log(nbar / (nbar + 1)))) + 1

    cutoff = max(needed(nbar_x), needed(nbar_y)) if cutoff is None else cutoff
    px = _geometric(nbar_x, cutoff, tol)
    py = _geometric(nbar_y, cutoff, tol)
    occ, prob = [], []
    for i in np.nonzero(px)[0]:
        for j in np.nonzero(py)[0]:
            occ.append(PhononOccupation(int(i), int(j)))
            prob.append(px[i] * py[j])
    prob = np.array(prob)
    return PhononDistribution(tuple(occ), prob / prob.sum())


def fock_distribution(nx=0, ny=0) -> PhononDistribution:
    return PhononDistribution((PhononOccupation(nx, ny),), np.array([1.0]))


def phonon_detuning(base: LevelScheme, n, delta_omega_x, delta_omega_y,
                    reference=PhononOccupation(0, 0)) -> LevelScheme:
    """Scheme whose two-photon detuning accounts for the occupation-dependent line shift."""
    shift = (n.nx - reference.nx) * delta_omega_x + (n.ny - reference.ny) * delta_omega_y
    return replace(base, delta_2photon=base.delta_2photon + shift)


def weighted_population(scheme: LevelScheme, dist: PhononDistribution, delta_omega_x, delta_omega_y,
                        times, reference=PhononOccupation(0, 0), level="0", method="propagator"):
    """
    Occupation-weighted population of ``level`` at each time, starting in |0>.

    ``method="propagator"`` batches exact no-jump propagators over all
    distinct detunings (see :func:`_no_jump_populations`); ``"ode"``
    integrates the full master equation for each occupation.
    """
    times = np.asarray(times, dtype=float)
    k = LEVELS.index(level)
    probs = np.asarray(dist.probabilities)
    if method == "ode":
        rho0 = pure_state("0")
        total = np.zeros(len(times))
        for p, n in zip(probs, dist.occupations):
            s = phonon_detuning(scheme, n, delta_omega_x, delta_omega_y, reference)
            total += p * evolve(s, rho0, times)[:, k, k].real
        return total
    if method != "propagator":
        raise ValueError(f"unknown method {method!r}")
    nx, ny = dist.arrays()
    detunings = (scheme.delta_2photon + (nx - reference.nx) * delta_omega_x
                 + (ny - reference.ny) * delta_omega_y)
    # occupations that share a detuning share a trajectory
    unique, inverse = np.unique(detunings, return_inverse=True)
    w = np.bincount(inverse, weights=probs, minlength=len(unique))
    total = np.zeros(len(times))
    chunk = 4096
    for start in range(0, len(unique), chunk):
        block = unique[start:start + chunk]
        pops = _no_jump_populations(scheme, block, times)
        total += w[start:start + chunk] @ pops[..., k]
    return total


def _no_jump_populations(scheme: LevelScheme, delta_2photon, times):
    """
    Level populations from |0> for a batch of two-photon detunings.

    Decay only feeds the sink |g>, which couples back to nothing, so the
    {0, e, r} block evolves exactly under the non-Hermitian Hamiltonian
    H - (i/2) sum_k gamma_k |k><k| and the sink takes up the lost norm.
    Returns shape (batch, len(times), 4).
    """
    H = hamiltonian(scheme)[:3, :3].copy()
    H[1, 1] -= 0.5j * scheme.gamma_e
    H[2, 2] -= 0.5j * scheme.gamma_r
    Hs = np.repeat(H[None], len(delta_2photon), axis=0)
    Hs[:, 2, 2] += np.asarray(delta_2photon) - scheme.delta_2photon
    psi0 = np.zeros(3, dtype=complex)
    psi0[0] = 1.0
    amps = _propagate(-1j * Hs, psi0, times)
    pops = np.empty(amps.shape[:2] + (4,))
    pops[..., :3] = np.abs(amps) ** 2
    pops[..., 3] = 1.0 - pops[..., :3].sum(axis=-1)
    return pops


@dataclass(frozen=True)
class ParameterEnsemble:
    """
    Normally distributed scheme parameters for Monte Carlo sampling.

    ``parameters`` maps a :class:`LevelScheme` field name, or
    ``delta_omega_x`` / ``delta_omega_y``, to ``(central, sigma)``.
    Non-negative fields are clipped at zero after sampling.
    """

    parameters: dict
    count: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("ensemble needs at least 2 samples")
        for name, (_, sigma) in self.parameters.items():
            if name not in _SCHEME_FIELDS + ("delta_omega_x", "delta_omega_y"):
                raise ValueError(f"unknown ensemble parameter {name!r}")
            if sigma < 0:
                raise ValueError(f"sigma for {name} must be non-negative")
        missing = set(_SCHEME_FIELDS[:2] + ("delta_omega_x", "delta_omega_y")) - set(self.parameters)
        if missing:
            raise ValueError(f"ensemble is missing {sorted(missing)}")

    def samples(self):
        """List of (scheme, delta_omega_x, delta_omega_y), one per sample, in order."""
        children = np.random.SeedSequence(self.seed).spawn(self.count)
        names = sorted(self.parameters)
        out = []
        for child in children:
            rng = np.random.default_rng(child)
            drawn = {}
            for name in names:
                mu, sigma = self.parameters[name]
                value = mu + sigma * rng.standard_normal()
                if name in ("rabi_1", "rabi_2", "gamma_e", "gamma_r"):
                    value = max(value, 0.0)
                drawn[name] = value
            dwx = drawn.pop("delta_omega_x")
            dwy = drawn.pop("delta_omega_y")
            out.append((LevelScheme(**drawn), dwx, dwy))
        return out


@dataclass(frozen=True)
class MonteCarloBand:
    times: np.ndarray
    lower: np.ndarray
    median: np.ndarray
    upper: np.ndarray
    samples: np.ndarray


def monte_carlo_band(ensemble: ParameterEnsemble, dist: PhononDistribution, times,
                     reference=PhononOccupation(0, 0), method="propagator") -> MonteCarloBand:
    """
    Central 68 % band of the |0> population over a sampled parameter ensemble.

    For N samples sorted ascending the band edges are the order statistics
    at positions round(0.16 N) and N - round(0.16 N), i.e. the 84th and
    16th highest of 100.
    """
    if ensemble.count < 25:
        raise ValueError("Monte Carlo bands need at least 25 samples")
    times = np.asarray(times, dtype=float)
    runs = np.array([
        weighted_population(s, dist, dwx, dwy, times, reference, method=method)
        for s, dwx, dwy in ensemble.samples()
    ])
    ordered = np.sort(runs, axis=0)
    n = ensemble.count
    k = int(round(0.16 * n))
    return MonteCarloBand(times, ordered[k], np.median(runs, axis=0), ordered[n - k], runs)


def oscillation_contrast(times, population, start, stop):
    """max - min of ``population`` over start <= t <= stop."""
    times = np.asarray(times)
    sel = (times >= start) & (times <= stop)
    if not sel.any():
        raise ValueError("no samples inside the contrast window")
    window = np.asarray(population)[sel]
    return float(window.max() - window.min())
