"""
Rydberg-excitation spectra and micromotion-null analysis.

The excitation is treated as optical pumping out of the probed state at a
scattering rate made of Lorentzian lines, one per change r of the total
radial phonon number, weighted by Franck-Condon products:

    R(w) = sum_r W_r Rabi^2 Gamma / (Gamma^2 + 4 (w - w_c - r w')^2) + R_bg

After an exposure T the probed state keeps exp(-R T) of its population
("survival"); 1 - exp(-R T) is the excitation ("depletion") signal.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants, optimize, signal as sp_signal, special

from .errors import DegenerateData, FitDiverged, SignMismatch

__all__ = [
    "SpectrumModel",
    "SpectrumScan",
    "SpectrumFit",
    "QuadraticScan",
    "TurningPointFit",
    "FIT_PARAMETERS",
    "scattering_rate",
    "survival_probability",
    "depletion_probability",
    "signal_probability",
    "resonance_center",
    "transfer_center",
    "synthesize_scan",
    "locate_peaks",
    "fit_spectrum",
    "fit_spectrum_with_shift",
    "fit_quadratic_turning_point",
    "residual_field_limit",
]

FIT_PARAMETERS = ("rabi", "linewidth", "center", "background")
SIGNAL_KINDS = ("survival", "depletion")
MULTI_START = 4


@dataclass(frozen=True)
class SpectrumModel:
    """
    Parameters of the Lorentzian-sum scattering rate.

    Attributes
    ----------
    rabi : float
        Effective two-photon Rabi frequency (rad/s).
    linewidth : float
        Line FWHM Gamma (rad/s).
    center : float
        Phonon-preserving line position, as a detuning from the bare
        resonance (rad/s).
    background : float
        Off-resonant scattering rate (1/s).
    omega_mean : float
        Spacing between lines, the mean of the two radial frequencies of
        the excited state (rad/s).
    weights : dict
        Line strength for each total phonon change r.
    """

    rabi: float
    linewidth: float
    center: float
    background: float = 0.0
    omega_mean: float = 0.0
    weights: dict = field(default_factory=lambda: {0: 1.0})

    def __post_init__(self):
        if not self.linewidth > 0:
            raise ValueError(f"linewidth must be positive, got {self.linewidth}")
        if self.background < 0:
            raise ValueError(f"background rate must be non-negative, got {self.background}")


@dataclass(frozen=True)
class SpectrumScan:
    """
    A measured or synthetic excitation scan.

    ``trials`` holds shots per point; 0 marks an exact (noise-free) value.
    """

    detunings: np.ndarray
    exposure: float
    signal: np.ndarray
    trials: np.ndarray
    kind: str = "survival"

    def __post_init__(self):
        n = len(self.detunings)
        if len(self.signal) != n or len(self.trials) != n:
            raise ValueError("detunings, signal and trials must have equal length")
        if self.kind not in SIGNAL_KINDS:
            raise ValueError(f"kind must be one of {SIGNAL_KINDS}, got {self.kind!r}")
        sig = np.asarray(self.signal)
        if np.any(sig < 0) or np.any(sig > 1):
            raise ValueError("signal values must lie in [0, 1]")


def scattering_rate(model: SpectrumModel, detuning):
    detuning = np.asarray(detuning, dtype=float)
    gamma = model.linewidth
    rate = np.zeros_like(detuning)
    for r, weight in model.weights.items():
        if weight == 0:
            continue
        x = detuning - model.center - r * model.omega_mean
        rate = rate + weight * model.rabi**2 * gamma / (gamma**2 + 4 * x**2)
    return rate + model.background


def survival_probability(model: SpectrumModel, detuning, exposure):
    """Population left in the probed state, exp(-R T)."""
    if exposure < 0:
        raise ValueError("exposure time must be non-negative")
    return np.exp(-scattering_rate(model, detuning) * exposure)


def depletion_probability(model: SpectrumModel, detuning, exposure):
    """Excitation signal 1 - exp(-R T)."""
    if exposure < 0:
        raise ValueError("exposure time must be non-negative")
    return -np.expm1(-scattering_rate(model, detuning) * exposure)


def signal_probability(model, detuning, exposure, kind="survival"):
    if kind == "survival":
        return survival_probability(model, detuning, exposure)
    if kind == "depletion":
        return depletion_probability(model, detuning, exposure)
    raise ValueError(f"kind must be one of {SIGNAL_KINDS}, got {kind!r}")


def resonance_center(n, delta_omega_x, delta_omega_y, delta=0.0, omega_0=0.0):
    """
    Phonon-preserving line position (rad/s).

    omega_0 + (n_x + 1/2) dwx + (n_y + 1/2) dwy + delta / hbar, with
    ``delta`` the potential-minimum shift in joules.
    """
    return (omega_0 + (n.nx + 0.5) * delta_omega_x + (n.ny + 0.5) * delta_omega_y
            + delta / constants.hbar)


def transfer_center(model: SpectrumModel, from_n, to_n, delta_omega_x, delta_omega_y) -> SpectrumModel:
    """Move a calibrated line centre to a different phonon occupation."""
    shift = (to_n.nx - from_n.nx) * delta_omega_x + (to_n.ny - from_n.ny) * delta_omega_y
    return replace(model, center=model.center + shift)


def synthesize_scan(model: SpectrumModel, detunings, exposure, trials, seed=None,
                    kind="survival") -> SpectrumScan:
    """
    Synthetic scan with binomial projection noise.

    ``trials`` is a scalar or per-point array of shots; a value of 0 returns
    the exact probability at that point.
    """
    detunings = np.asarray(detunings, dtype=float)
    trials = np.broadcast_to(np.asarray(trials, dtype=int), detunings.shape).copy()
    if np.any(trials < 0):
        raise ValueError("trials must be non-negative")
    p = signal_probability(model, detunings, exposure, kind)
    rng = np.random.default_rng(seed)
    counts = rng.binomial(np.maximum(trials, 1), p)
    noisy = counts / np.maximum(trials, 1)
    sig = np.where(trials > 0, noisy, p)
    return SpectrumScan(detunings, float(exposure), sig, trials, kind)


def locate_peaks(detunings, values, prominence=None):
    """
    Local maxima of a sampled curve, refined by a three-point parabola.

    Returns the refined positions sorted ascending.
    """
    detunings = np.asarray(detunings, dtype=float)
    values = np.asarray(values, dtype=float)
    if prominence is None:
        prominence = 1e-3 * np.ptp(values)
    idx, _ = sp_signal.find_peaks(values, prominence=prominence)
    out = []
    for i in idx:
        if 0 < i < len(values) - 1:
            y0, y1, y2 = values[i - 1: i + 2]
            denom = y0 - 2 * y1 + y2
            frac = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
            step = 0.5 * (detunings[i + 1] - detunings[i - 1])
            out.append(detunings[i] + frac * step)
        else:
            out.append(detunings[i])
    return np.array(out)


@dataclass(frozen=True)
class SpectrumFit:
    """
    Result of a spectrum fit.

    ``covariance`` is ordered as ``free``; ``uncertainties`` maps each free
    parameter name to its 1 sigma error.
    """

    model: SpectrumModel
    free: tuple
    covariance: np.ndarray
    uncertainties: dict
    residual_norm: float
    nfev: int
    shift: float | None = None


def _scan_rates(scan):
    """Per-point scattering-rate estimate used only for starting values."""
    surv = scan.signal if scan.kind == "survival" else 1 - scan.signal
    floor = 0.5 / max(int(np.max(scan.trials)), 1) if np.max(scan.trials) > 0 else 1e-12
    surv = np.clip(surv, floor, 1.0)
    return -np.log(surv) / scan.exposure


def _initial_guesses(scan, weights, omega_mean, candidates=1):
    """Starting points, best first, one per plausible line assignment of the tallest point."""
    det = np.asarray(scan.detunings, dtype=float)
    to_residual, _ = _residual_function(scan)
    rates = _scan_rates(scan)
    order = np.sort(rates)
    background = max(float(np.mean(order[: max(1, len(order) // 5)])), 0.0)
    ipk = int(np.argmax(rates))
    height = max(rates[ipk] - background, 1e-300)
    above = rates - background >= 0.5 * height
    # contiguous run of points above half maximum around the peak
    lo = ipk
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = ipk
    while hi < len(det) - 1 and above[hi + 1]:
        hi += 1
    spacing = np.median(np.diff(np.sort(det))) if len(det) > 1 else 1.0
    width = max(det[hi] - det[lo], spacing)
    # the tallest point may belong to any line; rank each assignment
    w_max = max(weights.values())
    ranked = []
    for r, w in weights.items():
        if w < 1e-3 * w_max:
            continue
        guess = {"rabi": np.sqrt(height * width / w), "linewidth": width,
                 "center": det[ipk] - r * omega_mean, "background": background}
        cost = np.sum(to_residual(_signal(det, guess, weights, omega_mean, scan)) ** 2)
        ranked.append((cost, r, guess))
    ranked.sort(key=lambda item: (item[0], item[1]))
    return [guess for _, _, guess in ranked[:candidates]]


def _residual_function(scan):
    """
    Map model probabilities to residuals, and whether errors are absolute.

    Points with trials use signed binomial deviance residuals, so the
    least-squares solution is the maximum-likelihood fit and saturated
    points with zero counts are not over-weighted.  Exact points (trials 0)
    get plain differences scaled like the best-measured noisy point.
    """
    trials = np.asarray(scan.trials)
    data = np.asarray(scan.signal, dtype=float)
    noisy = trials > 0
    if not noisy.any():
        return (lambda p: p - data), False
    n = trials[noisy].astype(float)
    k = np.rint(data[noisy] * n)
    p_obs = np.clip(data[noisy], 0.5 / n, 1 - 0.5 / n)
    exact_scale = 1 / np.min(np.sqrt(p_obs * (1 - p_obs) / n))

    def residual(p):
        out = np.empty_like(data)
        q = np.clip(p[noisy], 1e-15, 1 - 1e-15)
        dev = 2 * (special.xlogy(k, k / (n * q)) + special.xlogy(n - k, (n - k) / (n * (1 - q))))
        out[noisy] = np.sign(q - k / n) * np.sqrt(np.maximum(dev, 0.0))
        out[~noisy] = (p[~noisy] - data[~noisy]) * exact_scale
        return out

    return residual, True


def _run_least_squares(residual, x0, scale, max_iter):
    x0 = np.asarray(x0, dtype=float)
    try:
        res = optimize.least_squares(
            residual, x0, method="lm", x_scale=scale, xtol=1e-10, ftol=1e-14, gtol=1e-14,
            max_nfev=max_iter * (len(x0) + 1))
    except ValueError as exc:
        raise FitDiverged(str(exc)) from exc
    if res.status == 0 or not np.all(np.isfinite(res.x)):
        raise FitDiverged(f"no convergence after {res.nfev} evaluations: {res.message}")
    return res


def _covariance(res, n_points, absolute):
    jac = res.jac
    try:
        cov = np.linalg.inv(jac.T @ jac)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(jac.T @ jac)
    dof = n_points - len(res.x)
    if not absolute:
        cov = cov * (2 * res.cost / dof if dof > 0 else np.inf)
    return cov


def _check_signal(scan, n_free):
    if len(scan.detunings) < n_free:
        raise DegenerateData(f"{len(scan.detunings)} points cannot constrain {n_free} parameters")
    if np.ptp(scan.signal) <= 1e-12:
        raise DegenerateData("signal is flat; no line to fit")


def _finalize(values):
    values = dict(values)
    values["rabi"] = abs(values["rabi"])
    values["linewidth"] = abs(values["linewidth"])
    values["background"] = max(values["background"], 0.0)
    return values


def _starts(scan, weights, omega_mean, initial):
    if initial is not None:
        return [_starting_values(scan, weights, omega_mean, initial)]
    # line assignments can be nearly degenerate; refine several
    return _initial_guesses(scan, weights, omega_mean, candidates=MULTI_START)


def _best_fit(starts, free, extra_x0, make_signal, to_residual, max_iter):
    """
    Run the least-squares fit from each start and keep the lowest cost.

    Parameters beyond ``free`` are passed to ``make_signal(values, extra)``
    as a dimensionless vector starting at ``extra_x0`` with unit scale.
    """
    best = None
    for start in starts:

        def build(x, start=start):
            values = dict(start)
            values.update(zip(free, x[:len(free)]))
            return values, x[len(free):]

        def residual(x, build=build):
            return to_residual(make_signal(*build(x)))

        x0 = [start[name] for name in free] + list(extra_x0)
        scales = np.append(_scales(start, free), np.ones(len(extra_x0)))
        try:
            res = _run_least_squares(residual, x0, scales, max_iter)
        except FitDiverged:
            if len(starts) == 1:
                raise
            continue
        if best is None or res.cost < best[0].cost:
            best = (res, build)
    if best is None:
        raise FitDiverged("no starting point converged")
    return best


def fit_spectrum(scan: SpectrumScan, weights: dict, omega_mean: float, initial=None,
                 free=FIT_PARAMETERS, max_iter=200) -> SpectrumFit:
    """
    Least-squares fit of Rabi, linewidth, centre and background to a scan.

    Line weights and spacing are held fixed.  Parameters not listed in
    ``free`` stay at their ``initial`` values.  Scans with projection noise
    are fitted by binomial maximum likelihood.

    Parameters
    ----------
    initial : SpectrumModel or dict, optional
        Starting point.  When omitted, starts are estimated from the data
        for several assignments of the tallest point to a line, and the
        best converged fit is returned.
    free : sequence of str
        Subset of ``FIT_PARAMETERS``.
    """
    free = tuple(free)
    for name in free:
        if name not in FIT_PARAMETERS:
            raise ValueError(f"unknown fit parameter {name!r}")
    _check_signal(scan, len(free))
    det = np.asarray(scan.detunings, dtype=float)
    to_residual, absolute = _residual_function(scan)
    starts = _starts(scan, weights, omega_mean, initial)
    res, build = _best_fit(starts, free, [], lambda v, _: _signal(det, v, weights, omega_mean, scan),
                           to_residual, max_iter)
    cov = _covariance(res, len(det), absolute)
    values = _finalize(build(res.x)[0])
    model = SpectrumModel(values["rabi"], values["linewidth"], values["center"],
                          values["background"], omega_mean, dict(weights))
    errs = {name: float(np.sqrt(abs(cov[i, i]))) for i, name in enumerate(free)}
    return SpectrumFit(model, free, cov, errs, float(np.sqrt(2 * res.cost)), int(res.nfev))


def fit_spectrum_with_shift(scan: SpectrumScan, weights_for_shift, omega_mean: float,
                            initial_shift: float, shift_scale: float, initial=None,
                            free=FIT_PARAMETERS, max_iter=200, search=None, refine=3) -> SpectrumFit:
    """
    Like :func:`fit_spectrum` with one extra free parameter controlling the weights.

    ``weights_for_shift(shift)`` returns the line weights for a relative
    displacement of the two potentials (e.g. x_eq - x'_eq); ``shift_scale``
    is its natural size (e.g. the oscillator length).

    Line weights oscillate with the displacement, so the cost has many
    local minima in ``shift``.  Candidate shifts in ``search`` (default:
    ``initial_shift`` +- 2 ``shift_scale`` in steps of 0.1) are screened
    with the other parameters at their starting values and the ``refine``
    best are refined.  For a broad comb, pass a calibrated ``initial``
    model (from a scan near n = 0) so the line centre is not ambiguous.
    """
    free = tuple(free)
    _check_signal(scan, len(free) + 1)
    det = np.asarray(scan.detunings, dtype=float)
    to_residual, absolute = _residual_function(scan)
    if search is None:
        search = initial_shift + shift_scale * np.linspace(-2.0, 2.0, 41)
    search = np.unique(np.append(np.asarray(search, dtype=float), initial_shift))
    starts = _starts(scan, weights_for_shift(initial_shift), omega_mean, initial)

    def signal(values, extra):
        return _signal(det, values, weights_for_shift(extra[0] * shift_scale), omega_mean, scan)

    screened = []
    for start in starts:
        costs = [np.sum(to_residual(signal(start, [x / shift_scale])) ** 2) for x in search]
        for i in np.argsort(costs, kind="stable")[:refine]:
            screened.append((costs[i], start, search[i]))
    best = None
    for _, start, shift0 in sorted(screened, key=lambda item: item[0])[:refine * 2]:
        try:
            res, build = _best_fit([start], free, [shift0 / shift_scale], signal, to_residual, max_iter)
        except FitDiverged:
            continue
        if best is None or res.cost < best[0].cost:
            best = (res, build)
    if best is None:
        raise FitDiverged("no starting point converged")
    res, build = best
    cov = _covariance(res, len(det), absolute)
    values, extra = build(res.x)
    values = _finalize(values)
    shift = float(extra[0] * shift_scale)
    # report the shift block in physical units
    conv = np.ones(len(res.x))
    conv[-1] = shift_scale
    cov = cov * np.outer(conv, conv)
    model = SpectrumModel(values["rabi"], values["linewidth"], values["center"],
                          values["background"], omega_mean, dict(weights_for_shift(shift)))
    names = free + ("shift",)
    errs = {name: float(np.sqrt(abs(cov[i, i]))) for i, name in enumerate(names)}
    return SpectrumFit(model, names, cov, errs, float(np.sqrt(2 * res.cost)), int(res.nfev), shift=shift)


def _starting_values(scan, weights, omega_mean, initial):
    if initial is None:
        return _initial_guesses(scan, weights, omega_mean)[0]
    if isinstance(initial, SpectrumModel):
        return {"rabi": initial.rabi, "linewidth": initial.linewidth,
                "center": initial.center, "background": initial.background}
    return dict(initial)


def _scales(start, free):
    width = abs(start["linewidth"])
    typical = {
        "rabi": abs(start["rabi"]) or 1.0,
        "linewidth": width or 1.0,
        "center": width or 1.0,
        "background": max(abs(start["background"]), 1e-3 * start["rabi"] ** 2 / max(width, 1e-300)),
    }
    return np.array([typical[name] for name in free])


def _signal(det, v, weights, omega_mean, scan):
    surv = np.exp(-_rate(det, v, weights, omega_mean) * scan.exposure)
    return surv if scan.kind == "survival" else 1 - surv


def _rate(det, v, weights, omega_mean):
    gamma = v["linewidth"]
    rate = np.full_like(det, v["background"])
    for r, w in weights.items():
        if w == 0:
            continue
        x = det - v["center"] - r * omega_mean
        rate += w * v["rabi"] ** 2 * gamma / (gamma**2 + 4 * x**2)
    return rate


@dataclass(frozen=True)
class QuadraticScan:
    """Resonance shift (rad/s) against a control value; ``sigma`` optional per-point error."""

    control: np.ndarray
    shift: np.ndarray
    sigma: np.ndarray | None = None

    def __post_init__(self):
        if len(self.control) != len(self.shift):
            raise ValueError("control and shift must have equal length")
        if self.sigma is not None and len(np.atleast_1d(self.sigma)) not in (1, len(self.control)):
            raise ValueError("sigma must be scalar or match the data length")
        if len(self.control) < 3:
            raise ValueError("a quadratic fit needs at least 3 points")


@dataclass(frozen=True)
class TurningPointFit:
    """
    Parabola extremum from a quadratic scan.

    ``control`` is the turning point (micromotion null), ``shift`` the
    resonance shift there, ``curvature`` the x^2 coefficient, each with a
    1 sigma error.
    """

    control: float
    shift: float
    curvature: float
    control_err: float
    shift_err: float
    curvature_err: float
    coefficients: np.ndarray
    covariance: np.ndarray


def fit_quadratic_turning_point(scan: QuadraticScan, polarizability=None) -> TurningPointFit:
    """
    Weighted quadratic least squares and its extremum.

    With per-point ``sigma`` the errors are absolute; without, they are
    scaled by the residual variance (needs more than 3 points).  If a
    ``polarizability`` is given, a curvature whose sign is not that of
    -alpha raises a :class:`SignMismatch` warning.
    """
    x = np.asarray(scan.control, dtype=float)
    y = np.asarray(scan.shift, dtype=float)
    if len(np.unique(x)) < 3:
        raise DegenerateData("need at least 3 distinct control values")
    x0, xs = x.mean(), np.ptp(x) / 2
    u = (x - x0) / xs
    if scan.sigma is None:
        w = np.ones_like(y)
    else:
        w = 1 / np.broadcast_to(np.asarray(scan.sigma, dtype=float), y.shape)
    V = np.stack([u**2, u, np.ones_like(u)], axis=1)
    coef, *_ = np.linalg.lstsq(V * w[:, None], y * w, rcond=None)
    a, b, c = coef
    if abs(a) <= 1e-9 * (np.ptp(y) + np.abs(y).max() + 1e-300):
        raise DegenerateData("data are collinear; no turning point")
    cov = np.linalg.inv((V * w[:, None]).T @ (V * w[:, None]))
    if scan.sigma is None:
        resid = y - V @ coef
        dof = len(y) - 3
        cov = cov * (resid @ resid / dof if dof > 0 else np.inf)

    u_ext = -b / (2 * a)
    y_ext = c - b**2 / (4 * a)
    g_u = np.array([b / (2 * a**2), -1 / (2 * a), 0.0])
    g_y = np.array([b**2 / (4 * a**2), -b / (2 * a), 1.0])
    u_var = g_u @ cov @ g_u
    y_var = g_y @ cov @ g_y

    # back to physical control units: y = A (x - x0)^2 / xs^2 + ...
    curvature = a / xs**2
    if polarizability is not None and polarizability != 0 and np.sign(curvature) != -np.sign(polarizability):
        warnings.warn("fitted curvature sign does not match -alpha", SignMismatch, stacklevel=2)
    phys = np.array([a / xs**2, b / xs - 2 * a * x0 / xs**2, a * x0**2 / xs**2 - b * x0 / xs + c])
    T = np.array([[1 / xs**2, 0, 0],
                  [-2 * x0 / xs**2, 1 / xs, 0],
                  [x0**2 / xs**2, -x0 / xs, 1]])
    return TurningPointFit(
        control=float(x0 + xs * u_ext),
        shift=float(y_ext),
        curvature=float(curvature),
        control_err=float(xs * np.sqrt(u_var)),
        shift_err=float(np.sqrt(y_var)),
        curvature_err=float(np.sqrt(cov[0, 0]) / xs**2),
        coefficients=phys,
        covariance=T @ cov @ T.T,
    )


def residual_field_limit(polarizability, linewidth_hz, fraction) -> float:
    """
    Smallest resolvable residual rf field (V/m).

    A line of width ``linewidth_hz`` whose centre is known to
    ``fraction * linewidth_hz`` resolves alpha E^2 / 2 = F h dnu.
    """
    if not polarizability > 0:
        raise ValueError("polarizability must be positive")
    if not linewidth_hz > 0:
        raise ValueError("linewidth must be positive")
    if fraction < 0:
        raise ValueError("resolution fraction must be non-negative")
    return float(np.sqrt(2 * fraction * constants.h * linewidth_hz / polarizability))
