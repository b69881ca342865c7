"""Analytic purity and concurrence predictions for weak coupling.

Everything is expressed through three ingredients: geometric factors of the
initial pair state, correlation functions of the coupled qubit, and the
environment spectral correlation 1 + delta(t/tau_H) - b2(t/tau_H).  The
delta ridge along equal times is integrated analytically (it contributes
tau_H * t * value-on-the-diagonal); the b2 part goes through a dense
trapezoid grid.

Conventions: the coupled qubit has splitting Delta with energies
(+Delta/2, -Delta/2) on (|0>, |1>); eta is the phase between the components
of the Schmidt vectors of the coupled qubit (for Schmidt vectors on the
Bloch equator, eta equals the equator angle gamma).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .metrics import werner_curve, werner_curve_c0
from .rmt import b2, b2_double_integral

CONFIGURATIONS = ("one-qubit", "spectator", "separate", "joint", "n-qubit")


@dataclass(frozen=True)
class InitParams:
    """Angles of the initial central state and the local splitting.

    theta: Schmidt (entanglement) angle in [0, pi/4]; concurrence sin(2 theta).
    phi:   magnetization angle of the coupled qubit's Schmidt vectors, [0, pi/2].
    eta:   phase between the components of those Schmidt vectors.
    delta: level splitting of the coupled qubit.
    """

    theta: float = 0.0
    phi: float = 0.0
    eta: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if not -1e-12 <= self.theta <= np.pi / 4 + 1e-12:
            raise ValueError(f"theta={self.theta} outside [0, pi/4]")
        if not -1e-12 <= self.phi <= np.pi / 2 + 1e-12:
            raise ValueError(f"phi={self.phi} outside [0, pi/2]")

    @classmethod
    def equatorial(cls, theta: float, gamma: float, delta: float = 0.0):
        """Pair state whose coupled-qubit Schmidt vectors are
        (|0> +- e^{i gamma}|1>)/sqrt(2), i.e. on the Bloch equator at angle
        gamma; in the (phi, eta) parametrization that is phi = pi/4 and
        eta = -gamma."""
        if not -np.pi / 2 - 1e-12 <= gamma <= np.pi / 2 + 1e-12:
            raise ValueError(f"gamma={gamma} outside [-pi/2, pi/2]")
        return cls(theta=theta, phi=np.pi / 4, eta=-gamma, delta=delta)

    @property
    def sin_sq_gamma(self) -> float:
        """Squared sine of the Bloch angle between the coupled-qubit Schmidt
        vectors and the real (xz) plane."""
        g_phi = (3.0 + np.cos(4.0 * self.phi)) / 4.0
        return float((1.0 - g_phi) * (1.0 - np.cos(2.0 * self.eta)))


@dataclass(frozen=True)
class LRConfig:
    """Coupling layout: which configuration, ensemble(s), Heisenberg time(s),
    and coupling strength(s).  ``couplings``/``beta``/``tau_h`` carry one
    entry per coupled qubit (two for separate/joint, n for n-qubit)."""

    configuration: str
    beta: tuple[int, ...]
    tau_h: tuple[float, ...]
    couplings: tuple[float, ...]
    initial_purities: tuple[float, ...] = ()
    n_env: int | None = None

    def __post_init__(self):
        if self.configuration not in CONFIGURATIONS:
            raise ValueError(f"unknown configuration {self.configuration!r}")
        k = len(self.couplings)
        if len(self.beta) != k or len(self.tau_h) != k:
            raise ValueError("beta, tau_h, couplings must have equal length")
        expected = {"one-qubit": 1, "spectator": 1, "separate": 2, "joint": 2}
        if self.configuration in expected and k != expected[self.configuration]:
            raise ValueError(
                f"{self.configuration} takes {expected[self.configuration]} coupling(s), got {k}"
            )
        if self.configuration == "joint" and (
            len(set(self.beta)) != 1 or len(set(self.tau_h)) != 1
        ):
            raise ValueError("joint environment: both couplings share one spectrum")
        if any(b not in (1, 2) for b in self.beta):
            raise ValueError("beta entries must be 1 (GOE) or 2 (GUE)")
        if any(l < 0 for l in self.couplings):
            raise ValueError("couplings must be nonnegative")
        if any(t <= 0 for t in self.tau_h):
            raise ValueError("Heisenberg times must be positive")

    @classmethod
    def single(cls, configuration, beta, tau_h, coupling, n_env=None):
        return cls(configuration, (beta,), (tau_h,), (coupling,), n_env=n_env)


def f_heisenberg(t, tau_h: float):
    """Purity-decay shape of the degenerate limit:
    2 t max(t, tau_H) + (2/3 tau_H) min(t, tau_H)^3 (linear before the
    Heisenberg time, quadratic after)."""
    t = np.asarray(t, dtype=float)
    out = 2.0 * t * np.maximum(t, tau_h) + 2.0 / (3.0 * tau_h) * np.minimum(t, tau_h) ** 3
    return out if out.ndim else float(out)


def geometric_factors(params: InitParams):
    """(g_phi, g_theta, g1, g2) with g_x = (3 + cos 4x)/4; g1 in [0, 1/2]
    weighs the part of the decay that survives fast internal rotation, g2 in
    [1/2, 1] the part that does not."""
    g_phi = (3.0 + np.cos(4.0 * params.phi)) / 4.0
    g_theta = (3.0 + np.cos(4.0 * params.theta)) / 4.0
    g1 = g_theta * (1.0 - g_phi) + g_phi * (1.0 - g_theta)
    g2 = 2.0 * (1.0 - g_theta) - g_phi * (1.0 - 2.0 * g_theta)
    return g_phi, g_theta, g1, g2


def correlations(params: InitParams, tau):
    """Correlation functions of the coupled qubit's initial (generally
    mixed) state: Re C1, the return amplitude S1, and the transposed-state
    overlap S1' that only matters for time-reversal-invariant couplings."""
    tau = np.asarray(tau, dtype=float)
    g_phi, g_theta, _, _ = geometric_factors(params)
    d = params.delta
    re_c1 = 1.0 + np.cos(d * tau)
    base = 1.0 - g_theta - g_phi + 2.0 * g_theta * g_phi
    amp = (2.0 * g_theta - 1.0) * (1.0 - g_phi)
    s1 = base + amp * np.cos(d * tau)
    s1p = base + amp * np.cos(d * tau - 2.0 * params.eta)
    return re_c1, s1, s1p


def initial_qubit_density(params: InitParams) -> np.ndarray:
    """The coupled qubit's reduced state: Schmidt weights (cos^2 theta,
    sin^2 theta) on the orthonormal pair defined by (phi, eta)."""
    a = np.array([np.cos(params.phi) * np.exp(1j * params.eta / 2),
                  np.sin(params.phi) * np.exp(-1j * params.eta / 2)])
    b = np.array([-np.sin(params.phi) * np.exp(1j * params.eta / 2),
                  np.cos(params.phi) * np.exp(-1j * params.eta / 2)])
    ct2, st2 = np.cos(params.theta) ** 2, np.sin(params.theta) ** 2
    return ct2 * np.outer(a, a.conj()) + st2 * np.outer(b, b.conj())


def theta_for_purity(p: float) -> float:
    """Schmidt angle whose reduced single-qubit purity is p."""
    if not 0.5 - 1e-12 <= p <= 1.0 + 1e-12:
        raise ValueError("single-qubit purity must lie in [1/2, 1]")
    return float(np.arccos(np.clip(4.0 * p - 3.0, -1.0, 1.0)) / 4.0)


# ---------------------------------------------------------------------------
# the quadrature kernel
# ---------------------------------------------------------------------------

def _hole_integrals(beta, tau_h, g1, g2, delta, times, points_per_tauh):
    """integral_0^t (t-u) b2(u/tau_h) [g1 + g2 cos(delta u)] du at each t."""
    t_max = times.max()
    if t_max == 0.0:
        return np.zeros_like(times)
    n = max(256, int(np.ceil(points_per_tauh * t_max / tau_h)))
    base = np.linspace(0.0, t_max, n)
    grid = np.union1d(np.union1d(base, times), [tau_h] if tau_h < t_max else [])
    f = b2(beta, grid / tau_h) * (g1 + g2 * np.cos(delta * grid))
    c0 = np.concatenate([[0.0], cumulative_trapezoid(f, grid)])
    c1 = np.concatenate([[0.0], cumulative_trapezoid(grid * f, grid)])
    idx = np.searchsorted(grid, times)
    return times * c0[idx] - c1[idx]


def _coupling_contribution(beta, tau_h, lam, params, times, points_per_tauh):
    """2 lambda^2 x (double time integral of the response kernel) for one
    coupled qubit."""
    _, _, g1, g2 = geometric_factors(params)
    d = params.delta
    if d == 0.0:
        osc = times**2
        sq = times.astype(complex) ** 2
    else:
        osc = 2.0 * (1.0 - np.cos(d * times)) / d**2
        sq = ((np.exp(1j * d * times) - 1.0) / (1j * d)) ** 2
    i_corr = (
        g1 * times**2
        + g2 * osc
        + tau_h * times * (g1 + g2)
        - 2.0 * _hole_integrals(beta, tau_h, g1, g2, d, times, points_per_tauh)
    )
    if beta == 1:
        i_corr += g1 * times**2 - (1.0 - g2) * (np.exp(2j * params.eta) * sq).real
    return 2.0 * lam**2 * i_corr


def _per_coupling_params(config, params, params2):
    if config.configuration in ("separate", "joint"):
        p2 = params2 if params2 is not None else params
        if abs(p2.theta - params.theta) > 1e-12:
            raise ValueError("both couplings see the same pair: theta must match")
        return [params, p2]
    return [params]


def purity_lr(config: LRConfig, params: InitParams, t, params2: InitParams | None = None,
              points_per_tauh: int = 2000):
    """Leading-order average purity 1 - 2 sum_i lambda_i^2 Re(double integral
    of the response kernel).  Soft validity: 1 - P should stay below ~0.3."""
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times < 0):
        raise ValueError("times must be nonnegative")
    if config.configuration == "one-qubit" and abs(params.theta) > 1e-12:
        raise ValueError("one-qubit configuration takes a pure qubit (theta = 0)")
    if config.configuration == "n-qubit":
        return _purity_lr_nqubit(config, times, t)
    loss = np.zeros_like(times)
    for (beta, tau_h, lam), p in zip(
        zip(config.beta, config.tau_h, config.couplings),
        _per_coupling_params(config, params, params2),
    ):
        if config.n_env is not None and p.delta > 0:
            # the coherent spike has width ~ tau_h / n_env; the splitting must
            # resolve it for the kernel's diagonal treatment to apply
            if p.delta >= 0.5 * config.n_env * 2.0 * np.pi / tau_h:
                warnings.warn(
                    f"splitting {p.delta} approaches the inverse coherence width "
                    f"{config.n_env * 2.0 * np.pi / tau_h:.3g}; kernel unreliable",
                    stacklevel=2,
                )
        loss += _coupling_contribution(beta, tau_h, lam, p, times, points_per_tauh)
    out = 1.0 - loss
    big = 1.0 - out > 0.3
    if np.any(big):
        warnings.warn("1 - P exceeds 0.3; leading order is unreliable there",
                      stacklevel=2)
    return out if np.ndim(t) else float(out[0])


def _purity_lr_nqubit(config: LRConfig, times, t):
    if any(b != 2 for b in config.beta):
        raise ValueError("the n-qubit composition is implemented for broken "
                         "time reversal (beta=2) without local splittings")
    if len(config.initial_purities) != len(config.couplings):
        raise ValueError("need one initial purity per coupling")
    terms = []
    for lam, tau_h, p in zip(config.couplings, config.tau_h, config.initial_purities):
        terms.append(1.0 - lam**2 * (2.0 - p) * f_heisenberg(times, tau_h))
    out = nqubit_sum_rule(terms)
    return out if np.ndim(t) else float(out[0])


# ---------------------------------------------------------------------------
# closed forms for the limiting regimes
# ---------------------------------------------------------------------------

DEGENERATE_MAX = 0.1   # Delta * tau_H at or below this counts as degenerate
FAST_MIN = 10.0        # ... at or above this as fast


def _regime(delta: float, tau_h: float) -> str:
    x = abs(delta) * tau_h
    if x <= DEGENERATE_MAX:
        return "degenerate"
    if x >= FAST_MIN:
        return "fast"
    raise ValueError(
        f"Delta*tau_H = {x:.3g} violates both the degenerate bound "
        f"(<= {DEGENERATE_MAX}) and the fast bound (>= {FAST_MIN})"
    )


def closed_forms(config: LRConfig, params: InitParams, t,
                 params2: InitParams | None = None):
    """Exact evaluation of the limiting-regime formulas (degenerate when the
    splitting is far below the environment mean level spacing, fast when far
    above).  Raises naming the violated inequality when neither applies."""
    times = np.asarray(t, dtype=float)
    if config.configuration == "n-qubit":
        return _purity_lr_nqubit(config, np.atleast_1d(times), t)
    _, g_theta, _, _ = geometric_factors(params)
    loss = np.zeros_like(np.atleast_1d(times))
    for (beta, tau_h, lam), p in zip(
        zip(config.beta, config.tau_h, config.couplings),
        _per_coupling_params(config, params, params2),
    ):
        reg = _regime(p.delta, tau_h)
        if beta == 2:
            _, _, g1, g2 = geometric_factors(p)
            if config.configuration == "one-qubit" and abs(p.theta) > 1e-12:
                raise ValueError("one-qubit configuration takes theta = 0")
            if reg == "degenerate":
                loss += lam**2 * (2.0 - g_theta) * f_heisenberg(times, tau_h)
            else:
                loss += lam**2 * (g1 * f_heisenberg(times, tau_h)
                                  + 2.0 * tau_h * g2 * times)
        else:
            if reg != "degenerate":
                raise ValueError("no closed time-reversal-invariant form away "
                                 "from the degenerate limit")
            b2int = b2_double_integral(1, times, tau_h)
            s2 = p.sin_sq_gamma
            cos2g = 1.0 - 2.0 * s2
            if config.configuration == "one-qubit":
                loss += lam**2 * (times**2 * (3.0 - cos2g)
                                  + 2.0 * times * tau_h - 2.0 * b2int)
            elif config.configuration == "spectator":
                cos2_2theta = np.cos(2.0 * p.theta) ** 2
                loss += lam**2 * (
                    times**2 * (4.0 - 2.0 * cos2_2theta * (1.0 - s2))
                    + (4.0 - 2.0 * g_theta) * (times * tau_h - b2int)
                )
            else:
                raise ValueError("time-reversal-invariant closed forms cover "
                                 "the one-qubit and spectator layouts only")
    out = 1.0 - loss
    return out if np.ndim(t) else float(out if np.isscalar(out) else out[0])


def sigma_purity(config: LRConfig, params: InitParams, t):
    """Ensemble standard deviation of purity for time-reversal-invariant
    degenerate coupling with the initial state drawn uniformly over the
    allowed family: (4/(3 sqrt 5)) lambda^2 t^2, damped by cos^2(2 theta)
    when a spectator carries part of the state."""
    if config.beta[0] != 1:
        raise ValueError("the purity spread is derived for GOE coupling")
    _regime(params.delta, config.tau_h[0])
    if abs(params.delta) * config.tau_h[0] > DEGENERATE_MAX:
        raise ValueError("the purity spread is derived in the degenerate limit")
    t = np.asarray(t, dtype=float)
    lam = config.couplings[0]
    base = 4.0 / (3.0 * np.sqrt(5.0)) * lam**2 * t**2
    if config.configuration == "spectator":
        base = base * np.cos(2.0 * params.theta) ** 2
    elif config.configuration != "one-qubit":
        raise ValueError("purity spread: one-qubit or spectator only")
    return base if base.ndim else float(base)


# ---------------------------------------------------------------------------
# extensions beyond leading order
# ---------------------------------------------------------------------------

def asymptotic_purity(config: LRConfig, params: InitParams) -> float:
    """Long-time purity estimate: full depolarization of the coupled qubit
    (spectator: g_theta/2), of both qubits (1/4), or of a lone qubit (1/2)."""
    if config.configuration == "one-qubit":
        return 0.5
    if config.configuration == "spectator":
        _, g_theta, _, _ = geometric_factors(params)
        return float(g_theta / 2.0)
    if config.configuration in ("separate", "joint"):
        return 0.25
    raise ValueError("no asymptotic estimate for this configuration")


def exponentiate(p_lr, p_infinity: float):
    """P_inf + (1 - P_inf) exp[-(1 - P_lr)/(1 - P_inf)]: matches the
    leading-order curve at early times and saturates at P_inf."""
    if p_infinity >= 1.0:
        raise ValueError("asymptotic purity must be below 1")
    p_lr = np.asarray(p_lr, dtype=float)
    out = p_infinity + (1.0 - p_infinity) * np.exp(-(1.0 - p_lr) / (1.0 - p_infinity))
    return out if out.ndim else float(out)


def concurrence_prediction(p_of_t, mode: str, c0: float = 1.0, times=None):
    """Concurrence trajectory from a purity trajectory.

    mode "linear": C = P (early-time one-to-one relation, full-range inputs
    make no sense here); "werner": C from the Werner curve, expects the
    exponentiated purity; "werner-c0": same for initial concurrence c0.
    Returns (C array, sudden-death time or None), the time interpolated
    where C first reaches zero (requires ``times``).
    """
    p = np.asarray(p_of_t, dtype=float)
    if mode == "linear":
        c = p.copy()
    elif mode == "werner":
        c = werner_curve(p)
    elif mode == "werner-c0":
        c = werner_curve_c0(p, c0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    t_star = None
    if times is not None:
        times = np.asarray(times, dtype=float)
        dead = np.flatnonzero(c <= 1e-12)
        if dead.size and dead[0] > 0:
            i = dead[0]
            c0_, c1_ = c[i - 1], c[i]
            t_star = float(times[i - 1] + (times[i] - times[i - 1]) * c0_ / (c0_ - c1_))
        elif dead.size:
            t_star = float(times[0])
    return c, t_star


def nqubit_sum_rule(spectator_purities):
    """Register purity from the purities of each qubit alone coupled (the
    rest spectating): P = 1 - sum_i (1 - P_i).  Requires uncorrelated
    couplings in the interaction picture and small decoherence."""
    arrs = [np.asarray(p, dtype=float) for p in spectator_purities]
    out = 1.0 - sum(1.0 - a for a in arrs)
    return out


def rmtki_prediction(t, j_prime: float, q_env: int, tau_h: float,
                     alpha: float = 0.21, include_b2: bool = True):
    """Random-matrix purity-decay form adapted to a kicked spin-bath ring
    with symmetric coupling of raw strength j_prime to q_env spins;
    alpha = 0.21 is the reference fit.  ``include_b2=False`` drops the
    spectral-correlation term (appropriate when many symmetry sectors
    superpose)."""
    t = np.asarray(t, dtype=float)
    shape = 3.0 * t * tau_h + 4.0 * t**2 / tau_h
    if include_b2:
        shape = shape - 3.0 * b2_double_integral(1, t, tau_h) / tau_h
    out = 1.0 - alpha * (j_prime / np.sqrt(q_env)) ** 2 * shape
    return out if out.ndim else float(out)
