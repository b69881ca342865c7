"""Kicked Ising spin networks with bitwise state-vector kernels.

One period applies all pairwise Ising phases, then all single-site magnetic
kicks.  Ising couplings act along a single axis per model ('z' or 'x');
kick fields are specified relative to that axis as
(parallel, transverse, transverse), so (0, 1.53, 0) is a transverse kick
(integrable chain) and (1.4, 1.4, 0) a tilted one (chaotic) for either axis
choice.  Sites are register bits (little-endian).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels, metrics, qstate
from .errors import ConfigError, ResourceLimitError
from .trajectory import Trajectory

MAX_SPECTRUM_SPINS = 12

# Reference kick fields, in (parallel, transverse, transverse) components.
FIELD_PRESETS = {
    "chaotic": (1.4, 1.4, 0.0),
    "chaotic-soft": (0.9, 0.9, 0.0),   # used with ring coupling 0.7 or 1.0
    "integrable": (0.0, 1.53, 0.0),
    "intermediate": (0.8, 1.4, 0.0),
}


def field_to_cartesian(b, axis: str) -> np.ndarray:
    """(parallel, t1, t2) relative to the Ising axis -> Cartesian (x, y, z)."""
    par, t1, t2 = (float(x) for x in b)
    if axis == "z":
        return np.array([t1, t2, par])
    if axis == "x":
        return np.array([par, t1, t2])
    raise ConfigError(f"Ising axis must be 'z' or 'x', got {axis!r}")


@dataclass
class KIModel:
    """Pairwise Ising couplings and per-site kick fields.

    couplings[j, k] is symmetric with zero diagonal; fields[j] is the
    Cartesian kick vector of site j; coupling_pairs lists the (site, site)
    entries that couple the central system to its bath (used to build the
    uncoupled reference evolution).
    """

    num_spins: int
    couplings: np.ndarray
    fields: np.ndarray
    axis: str = "z"
    central_sites: tuple[int, ...] = (0, 1)
    coupling_pairs: tuple[tuple[int, int], ...] = ()
    env_sections: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        self.couplings = np.asarray(self.couplings, dtype=float)
        self.fields = np.asarray(self.fields, dtype=float)
        L = self.num_spins
        if self.couplings.shape != (L, L):
            raise ConfigError("couplings must be an L x L matrix")
        if self.fields.shape != (L, 3):
            raise ConfigError("fields must be L x 3")
        if np.any(self.couplings != self.couplings.T):
            raise ConfigError("couplings must be symmetric")
        if np.any(np.diag(self.couplings) != 0.0):
            raise ConfigError("couplings must have zero diagonal")
        if self.axis not in ("z", "x"):
            raise ConfigError("Ising axis must be 'z' or 'x'")

    @property
    def dim(self) -> int:
        return 1 << self.num_spins

    @property
    def pairs(self):
        j, k = np.nonzero(np.triu(self.couplings, k=1))
        return [(int(a), int(b), float(self.couplings[a, b])) for a, b in zip(j, k)]

    @property
    def central_mask(self) -> int:
        return sum(1 << s for s in self.central_sites)

    def uncoupled(self) -> "KIModel":
        """Same model with the central-bath coupling entries removed."""
        j = self.couplings.copy()
        for a, b in self.coupling_pairs:
            j[a, b] = j[b, a] = 0.0
        return replace(self, couplings=j)


@dataclass(frozen=True)
class EnvConfig:
    """Bath wiring summary: raw and normalized couplings plus the sector-
    aware Heisenberg-time estimate of the environment spectrum."""
    kind: str
    q_env: int
    j_prime: float
    j_normalized: float
    tau_h_estimate: float


def kick_matrix(b_cartesian) -> np.ndarray:
    """exp(-i b.sigma) = cos|b| - i sin|b| (unit_b . sigma)."""
    b = np.asarray(b_cartesian, dtype=float)
    r = np.linalg.norm(b)
    if r == 0.0:
        return np.eye(2, dtype=complex)
    n = b / r
    c, s = np.cos(r), np.sin(r)
    return np.array([
        [c - 1j * s * n[2], -1j * s * (n[0] - 1j * n[1])],
        [-1j * s * (n[0] + 1j * n[1]), c + 1j * s * n[2]],
    ])


def apply_kick(psi, site: int, b_cartesian, site_shift: int = 0):
    """Kick one site in place; |b| = 0 is the identity fast path."""
    b = np.asarray(b_cartesian, dtype=float)
    if not np.any(b):
        return psi
    return _kernels.kick(psi, site + site_shift, kick_matrix(b))


def apply_ising_phase(psi, j: int, k: int, strength: float, axis: str = "z",
                      site_shift: int = 0):
    """Two-site Ising phase, in place: along z that multiplies e^{-iJ} where
    bits agree and e^{+iJ} where they differ; along x it mixes the bit-pair
    flipped amplitudes."""
    if j == k:
        raise ConfigError("Ising phase needs two distinct sites")
    if strength == 0.0:
        return psi
    if axis == "z":
        return _kernels.ising_z(psi, j + site_shift, k + site_shift, strength)
    if axis == "x":
        return _kernels.ising_x(psi, j + site_shift, k + site_shift, strength)
    raise ConfigError(f"Ising axis must be 'z' or 'x', got {axis!r}")


def floquet_step(psi, model: KIModel, site_shift: int = 0):
    """One period: all Ising phases, then all kicks.  In place."""
    for j, k, strength in model.pairs:
        apply_ising_phase(psi, j, k, strength, model.axis, site_shift)
    for j in range(model.num_spins):
        apply_kick(psi, j, model.fields[j], site_shift)
    return psi


# ---------------------------------------------------------------------------
# wiring of the bath configurations
# ---------------------------------------------------------------------------

def _ring_bonds(sites):
    return [(sites[i], sites[(i + 1) % len(sites)]) for i in range(len(sites))]


def _chain_bonds(sites):
    return [(sites[i], sites[i + 1]) for i in range(len(sites) - 1)]


def build_env_config(kind: str, q_env: int, j_prime: float, b_central,
                     b_env, j_env: float = 1.0, axis: str = "z"):
    """Two central spins (sites 0, 1) against a q_env-spin bath (sites 2..).

    Kinds: (a) open chain, one end coupled to qubit 1 of the pair;
    (b) open chain, both ends coupled (joint bath); (c) two half chains,
    one end each (separate baths); (d) ring with qubit 1 coupled to every
    bath spin (symmetry kept); (e) ring with a single coupling spot;
    (f) two half rings, each fully coupled to one qubit.
    """
    if q_env < 4:
        raise ConfigError("need at least 4 bath spins")
    L = q_env + 2
    env = list(range(2, L))
    half = q_env // 2
    if kind in ("c", "f") and q_env % 2:
        raise ConfigError(f"configuration ({kind}) splits the bath in two; "
                          "q_env must be even")
    if kind == "a":
        bonds, cpl, sections = _chain_bonds(env), [(1, 2)], (tuple(env),)
        norm, tau = j_prime, 2.0**q_env
    elif kind == "b":
        bonds, cpl, sections = _chain_bonds(env), [(1, 2), (0, L - 1)], (tuple(env),)
        norm, tau = np.sqrt(2) * j_prime, 2.0**q_env
    elif kind == "c":
        sec_a, sec_b = env[:half], env[half:]
        bonds = _chain_bonds(sec_a) + _chain_bonds(sec_b)
        cpl = [(1, sec_a[0]), (0, sec_b[0])]
        sections = (tuple(sec_a), tuple(sec_b))
        norm, tau = np.sqrt(2) * j_prime, 2.0 ** (q_env / 2)
    elif kind == "d":
        bonds, cpl, sections = _ring_bonds(env), [(1, e) for e in env], (tuple(env),)
        norm, tau = np.sqrt(q_env) * j_prime, 2.0**q_env / q_env
    elif kind == "e":
        bonds, cpl, sections = _ring_bonds(env), [(1, 2)], (tuple(env),)
        norm, tau = j_prime, 2.0**q_env
    elif kind == "f":
        sec_a, sec_b = env[:half], env[half:]
        bonds = _ring_bonds(sec_a) + _ring_bonds(sec_b)
        cpl = [(1, e) for e in sec_a] + [(0, e) for e in sec_b]
        sections = (tuple(sec_a), tuple(sec_b))
        norm, tau = np.sqrt(q_env) * j_prime, 2.0 ** (q_env / 2) / half
    else:
        raise ConfigError(f"unknown bath configuration {kind!r}; use a..f")

    j = np.zeros((L, L))
    for a, b in bonds:
        j[a, b] = j[b, a] = j_env
    for a, b in cpl:
        j[a, b] = j[b, a] = j_prime
    fields = np.zeros((L, 3))
    fields[0] = fields[1] = field_to_cartesian(b_central, axis)
    for e in env:
        fields[e] = field_to_cartesian(b_env, axis)
    model = KIModel(L, j, fields, axis=axis, central_sites=(0, 1),
                    coupling_pairs=tuple(cpl), env_sections=sections)
    return model, EnvConfig(kind, q_env, j_prime, float(norm), float(tau))


def build_memory_model(env_spins: int, n_memory: int, positions, coupling: float,
                       b, j_env: float = 1.0, axis: str = "x") -> KIModel:
    """n_memory uncoupled register qubits attached to a homogeneous kicked
    ring of env_spins spins through two-site couplings at the given ring
    positions (repeats allowed; coupling every qubit to one spin is the
    standard counterexample to the additivity of decoherence).  All sites,
    register included, receive the same kick field.
    """
    if n_memory < 1:
        raise ConfigError("need at least one register qubit")
    positions = [int(p) for p in positions]
    if len(positions) != n_memory:
        raise ConfigError("one ring position per register qubit")
    if any(not 0 <= p < env_spins for p in positions):
        raise ConfigError(f"ring positions must lie in [0, {env_spins})")
    L = env_spins + n_memory
    j = np.zeros((L, L))
    for a, b_ in _ring_bonds(list(range(env_spins))):
        j[a, b_] = j[b_, a] = j_env
    cpl = []
    for i, p in enumerate(positions):
        mem = env_spins + i
        j[mem, p] = j[p, mem] = coupling
        cpl.append((mem, p))
    fields = np.tile(field_to_cartesian(b, axis), (L, 1))
    return KIModel(L, j, fields, axis=axis,
                   central_sites=tuple(range(env_spins, L)),
                   coupling_pairs=tuple(cpl))


def random_environment_state(model: KIModel, gen) -> np.ndarray:
    """Random pure state of the bath: one state for a connected bath, a
    product of per-section states when the bath is split.  Sections hold
    ascending site numbers, so the product is a plain Kronecker stack."""
    sections = model.env_sections or (
        tuple(s for s in range(model.num_spins) if s not in model.central_sites),)
    psi = None
    for sec in sections:
        amp = qstate.random_state(1 << len(sec), gen)
        psi = amp if psi is None else np.kron(amp, psi)
    return psi


def initial_state(model: KIModel, central, gen) -> np.ndarray:
    """central state on the central sites (x) random bath state(s)."""
    env = random_environment_state(model, gen)
    return qstate.tensor_product(np.asarray(central, dtype=complex), env,
                                 model.central_mask)


# ---------------------------------------------------------------------------
# evolution and diagnostics
# ---------------------------------------------------------------------------

def evolve_ki(model: KIModel, psi0, steps: int, stride: int = 1) -> Trajectory:
    """Stroboscopic trajectory of the central reduction.

    Observables are evaluated at t = 0, stride, 2*stride, ..., steps (kick
    counts).  Concurrence is recorded only for a two-site central system;
    the off-diagonal measure follows the first central site.
    """
    psi = np.array(psi0, dtype=complex)
    n_c = len(model.central_sites)
    sampled = list(range(0, steps + 1, stride))
    if sampled[-1] != steps:
        sampled.append(steps)
    times = np.array(sampled, dtype=float)
    pur = np.empty(len(sampled))
    con = np.empty(len(sampled)) if n_c == 2 else None
    ent = np.empty(len(sampled))
    off = np.empty(len(sampled))
    k = 0
    for step in range(steps + 1):
        if step:
            floquet_step(psi, model)
        if step == sampled[k]:
            rho = qstate.partial_trace(psi, model.central_mask)
            pur[k] = metrics.purity(rho)
            ent[k] = metrics.von_neumann(rho)
            rho_q = qstate.partial_trace(psi, 1 << model.central_sites[0])
            off[k] = metrics.offdiagonal_decay(rho_q)
            if con is not None:
                con[k] = metrics.concurrence(rho)
            k += 1
    return Trajectory(times, pur, con, ent, off)


def _apply_pair_pauli(psi, j, k, axis):
    out = psi.copy()
    if axis == "x":
        return _kernels.ising_x(out, j, k, np.pi / 2) * 1j  # -i sin(pi/2) XX = -i XX
    _kernels.ising_z(out, j, k, np.pi / 2)
    return out * 1j


def cross_correlation(model: KIModel, psi0, i: int, j: int, taus):
    """Re <psi0| V~_i(tau) V~_j(tau') |psi0> on the grid taus x taus, with
    V_i the i-th central-bath coupling operator (unit strength) taken to the
    interaction picture of the uncoupled period map."""
    taus = [int(t) for t in taus]
    if taus != sorted(taus) or taus[0] < 0:
        raise ConfigError("tau grid must be sorted and nonnegative")
    pairs = model.coupling_pairs
    if not (0 <= i < len(pairs) and 0 <= j < len(pairs)):
        raise ConfigError("coupling indices out of range")
    base = model.uncoupled()

    def lower_triangle(op_a, op_b):
        """R[a, b] = <phi_a| V_a U0^(a-b) V_b |phi_b> for a >= b."""
        t_max = taus[-1]
        phis = np.empty((t_max + 1, model.dim), dtype=complex)
        phis[0] = psi0
        for t in range(1, t_max + 1):
            phis[t] = floquet_step(phis[t - 1].copy(), base)
        bra = np.array([_apply_pair_pauli(phis[t], *op_a, model.axis) for t in taus])
        kets = [_apply_pair_pauli(phis[t], *op_b, model.axis) for t in taus]
        r = np.zeros((len(taus), len(taus)), dtype=complex)
        for bi, tb in enumerate(taus):
            ket = kets[bi].copy()
            cur = tb
            for ai in range(bi, len(taus)):
                ta = taus[ai]
                while cur < ta:
                    floquet_step(ket, base)
                    cur += 1
                r[ai, bi] = bra[ai].conj() @ ket
        return r

    lo = lower_triangle(pairs[i], pairs[j])
    if i == j:
        full = lo + np.tril(lo, -1).conj().T
    else:
        hi = lower_triangle(pairs[j], pairs[i])
        full = lo + np.tril(hi, -1).conj().T
    return full.real


def floquet_matrix(model: KIModel) -> np.ndarray:
    """Dense one-period operator, built by pushing the identity through the
    bitwise kernels (columns evolve in parallel via a site shift)."""
    if model.num_spins > MAX_SPECTRUM_SPINS:
        raise ResourceLimitError(
            f"dense period operator capped at {MAX_SPECTRUM_SPINS} spins, "
            f"got {model.num_spins}")
    d = model.dim
    flat = np.eye(d, dtype=complex).ravel()
    floquet_step(flat, model, site_shift=model.num_spins)
    return flat.reshape(d, d)


def floquet_spectrum(model: KIModel) -> np.ndarray:
    """Sorted eigenphases of the period operator."""
    ev = np.linalg.eigvals(floquet_matrix(model))
    return np.sort(np.angle(ev))
