"""Closed-form three-qubit analysis of the diffusion channel.

Three spins 1/2 give one j = 3/2 subspace and a doubly degenerate j = 1/2
subspace, so a twirled state is effectively a qutrit in the ordered basis
(|e1>, |e2>, |2>), where |e1> = (|0> + sqrt(3)|1>)/2 and
|e2> = (sqrt(3)|0> - |1>)/2 mix the multiplicity labels |0> (intermediate
j12 = 0) and |1> (j12 = 1), and |2> stands for the symmetric block.  The
channel preserves no coherence between the qubit subspace and |2>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import channel, coupling, numerics
from .halfint import HalfInteger

LOG2_3 = math.log2(3.0)

#: Multiplicity-label change of basis: columns are |e1>, |e2> in the
#: (|0>, |1>) basis; orthogonal and symmetric, so it is its own inverse.
E_BASIS = np.array([[0.5, math.sqrt(3) / 2], [math.sqrt(3) / 2, -0.5]])


def validate_qutrit(rho: np.ndarray, tol: float = 1e-10):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise ValueError("qutrit state must be 3x3")
    if np.linalg.norm(rho - rho.conj().T) > tol:
        raise ValueError("qutrit state is not Hermitian")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("qutrit state is not PSD")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError("qutrit state trace deviates from 1")
    return rho


def pure_qubit_state(theta: float, phi: float) -> np.ndarray:
    """Pure state cos(t/2)|e1> + sin(t/2) e^{i phi}|e2> as a qutrit matrix."""
    psi = np.array(
        [math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi), 0.0],
        dtype=complex,
    )
    return np.outer(psi, psi.conj())


SYMMETRIC_STATE = np.diag([0.0, 0.0, 1.0]).astype(complex)


def _qutrit_channel_linear(rho: np.ndarray, t: float) -> np.ndarray:
    """Channel action extended linearly to arbitrary 3x3 inputs.

    Input coherences with |2> are erased; the qubit block follows the
    linear extension of the extreme-state closed forms and |2><2| feeds
    back into the whole qutrit.
    """
    et, e2t = math.exp(-t), math.exp(-2.0 * t)
    r00, r01 = rho[0, 0], rho[0, 1]
    r10, r11 = rho[1, 0], rho[1, 1]
    r22 = rho[2, 2]
    tr_qb = r00 + r11
    dz = r00 - r11
    out = np.zeros((3, 3), dtype=complex)
    out[0, 0] = (tr_qb + e2t * (tr_qb + 2 * dz)) / 4 + r22 * (1 - e2t) / 4
    out[1, 1] = (3 * tr_qb + 8 * et * r11 - e2t * (tr_qb + 2 * dz)) / 12 + r22 * (
        3 - 4 * et + e2t
    ) / 12
    out[2, 2] = (3 * tr_qb - 4 * et * r11 - e2t * (tr_qb + 2 * dz)) / 6 + r22 * (
        3 + 2 * et + e2t
    ) / 6
    out[0, 1] = (et * (r01 + r10) + e2t * (r01 - r10)) / 2
    out[1, 0] = (et * (r10 + r01) + e2t * (r10 - r01)) / 2
    return out


def qutrit_channel(rho: np.ndarray, t: float) -> np.ndarray:
    """Closed-form three-qubit channel in the effective qutrit picture."""
    if t < 0:
        raise ValueError("diffusion time must be non-negative")
    return _qutrit_channel_linear(validate_qutrit(rho), t)


@lru_cache(maxsize=64)
def qutrit_choi(t: float) -> np.ndarray:
    """9x9 Choi matrix of the effective qutrit channel."""
    out = np.zeros((9, 9), dtype=complex)
    for k in range(3):
        for l in range(3):
            unit = np.zeros((3, 3), dtype=complex)
            unit[k, l] = 1.0
            out[k * 3:(k + 1) * 3, l * 3:(l + 1) * 3] = _qutrit_channel_linear(unit, t)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def kraus_operators(t: float, tol: float = 1e-12) -> tuple:
    """Kraus set from the Hermitian eigendecomposition of the Choi matrix."""
    evals, evecs = np.linalg.eigh(qutrit_choi(t))
    ops = []
    for lam, vec in zip(evals, evecs.T):
        if lam > tol:
            ops.append(math.sqrt(lam) * vec.reshape(3, 3).T)
    return tuple(ops)


# --- bridge to the general channel machinery ------------------------------


def qutrit_to_dense(rho: np.ndarray) -> np.ndarray:
    """Embed a qutrit state as a dense twirled 8-dimensional matrix."""
    rho = np.asarray(rho, dtype=complex)
    label = E_BASIS @ rho[:2, :2] @ E_BASIS  # multiplicity-label basis
    paths = coupling.enumerate_paths(3, HalfInteger(1), 2)
    out = np.zeros((8, 8), dtype=complex)
    for a in range(2):
        for b in range(2):
            if label[a, b] != 0.0:
                out += label[a, b] * coupling._projector_cached(3, 1, paths[a], paths[b])
    sym = coupling.enumerate_paths(3, HalfInteger(3), 2)[0]
    out += rho[2, 2] * coupling._projector_cached(3, 3, sym, sym)
    return out


def dense_to_qutrit(rho: np.ndarray) -> np.ndarray:
    """Read a twirled 8-dimensional matrix back into the qutrit picture."""
    basis = coupling.basis_matrix(3, 2)
    sigma = basis.conj().T @ np.asarray(rho, dtype=complex) @ basis
    # Layout for N=3, k=2: J=1/2 block (2 paths x 2 states), then J=3/2.
    sub = sigma[:4, :4].reshape(2, 2, 2, 2)
    label = np.trace(sub, axis1=1, axis2=3)
    out = np.zeros((3, 3), dtype=complex)
    out[:2, :2] = E_BASIS @ label @ E_BASIS
    out[2, 2] = np.trace(sigma[4:, 4:])
    return out


def qutrit_channel_general(rho: np.ndarray, t: float) -> np.ndarray:
    """Qutrit channel computed through the full N = 3 projector pipeline."""
    dense = qutrit_to_dense(rho)
    out = channel.channel_apply(dense, channel.ChannelSpec(3, t))
    return dense_to_qutrit(out)


# --- fidelity --------------------------------------------------------------


@dataclass(frozen=True)
class BlochAffineMap:
    """Affine Bloch-vector action r_out = shrink @ r_in + translation."""

    shrink: np.ndarray
    translation: np.ndarray

    def apply(self, r: np.ndarray) -> np.ndarray:
        return self.shrink @ np.asarray(r, dtype=float) + self.translation


def effective_qubit_map(t: float) -> BlochAffineMap:
    """Effective qubit channel: |2> leakage replaced by the maximally mixed
    state, leaving an anisotropic shrink plus a z-translation."""
    et, e2t = math.exp(-t), math.exp(-2.0 * t)
    shrink = np.diag([et, e2t, (2 * e2t + et) / 3.0])
    translation = np.array([0.0, 0.0, (e2t - et) / 3.0])
    return BlochAffineMap(shrink, translation)


def fidelity(theta: float, phi: float, t: float) -> float:
    """Transmission fidelity of the Bloch-sphere state (theta, phi)."""
    et, e2t = math.exp(-t), math.exp(-2.0 * t)
    aniso = (
        4 * math.cos(theta)
        - 6 * math.cos(2 * phi) * math.sin(theta) ** 2
        + math.cos(2 * theta)
    )
    return (12 + 5 * et + 7 * e2t + (e2t - et) * aniso) / 24.0


def fidelity_bloch(theta: float, phi: float, t: float) -> float:
    """Fidelity via the affine map: (1 + r_in . r_out)/2."""
    r_in = np.array(
        [
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        ]
    )
    return 0.5 * (1.0 + r_in @ effective_qubit_map(t).apply(r_in))


def great_circle_fidelity(theta_c: float, phi_c: float, t: float) -> float:
    """Average fidelity over the great circle with normal (theta_c, phi_c)."""
    et, e2t = math.exp(-t), math.exp(-2.0 * t)
    return (
        6 * (e2t + et + 2)
        + (e2t - et) * (1 + 3 * math.cos(2 * phi_c)) * math.sin(theta_c) ** 2
    ) / 24.0


def average_fidelity(t: float) -> float:
    """Fidelity averaged uniformly over the whole Bloch sphere."""
    return (9.0 + 4.0 * math.exp(-t) + 5.0 * math.exp(-2.0 * t)) / 18.0


# --- coherent information ---------------------------------------------------


def coherent_information(rho: np.ndarray, t: float) -> float:
    """S(E(rho)) - S_env for one input state, in bits.

    The entropy exchange is the entropy of W_kl = Tr(E_k rho E_l^dag) over
    any Kraus set; the value is invariant under Kraus gauge changes.
    """
    rho = validate_qutrit(rho)
    ops = kraus_operators(t)
    out = qutrit_channel(rho, t)
    w = np.array(
        [[np.trace(ek @ rho @ el.conj().T) for el in ops] for ek in ops]
    )
    return numerics.von_neumann_entropy(out) - numerics.von_neumann_entropy(w)


def _ci_fast(rho: np.ndarray, t: float, ops: tuple) -> float:
    out = _qutrit_channel_linear(rho, t)
    w = np.array(
        [[np.trace(ek @ rho @ el.conj().T) for el in ops] for ek in ops]
    )
    return numerics._entropy_fast(out) - numerics._entropy_fast(w)


def _diagonal_family_state(eps: float) -> np.ndarray:
    return np.diag([eps, 1.0 - eps, 0.0]).astype(complex)


@dataclass
class CoherentInfoResult:
    value: float
    epsilon: float
    general_value: float
    converged: bool


def maximize_coherent_info(
    t: float, config: numerics.OptimizerConfig | None = None
) -> CoherentInfoResult:
    """Best single-letter coherent information over qubit-block inputs.

    Scans the diagonal family eps|e1><e1| + (1-eps)|e2><e2| by bounded
    scalar search, then confirms against a multi-start search over general
    qubit-block states; the symmetric block cannot contribute.  Never less
    than 0, which pure inputs attain.
    """
    from scipy import optimize

    if config is None:
        config = numerics.OptimizerConfig(restarts=8, seed=11)
    ops = kraus_operators(t)
    res = optimize.minimize_scalar(
        lambda e: -_ci_fast(_diagonal_family_state(e), t, ops),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    eps, family_val = float(res.x), float(-res.fun)

    def objective(p):
        r = p / (1.0 + np.linalg.norm(p))  # open unit ball
        qb = 0.5 * np.array(
            [[1 + r[2], r[0] - 1j * r[1]], [r[0] + 1j * r[1], 1 - r[2]]]
        )
        state = np.zeros((3, 3), dtype=complex)
        state[:2, :2] = qb
        return _ci_fast(state, t, ops)

    general = numerics.nelder_mead_maximize(objective, np.zeros(3), config)
    best = max(family_val, general.fun, 0.0)
    return CoherentInfoResult(best, eps, max(general.fun, 0.0), general.converged)


def coherent_info_threshold(
    lo: float = 0.2, hi: float = 0.35, tol: float = 1e-3, floor: float = 1e-9
) -> float:
    """Smallest diffusion time where the best coherent information hits 0."""
    config = numerics.OptimizerConfig(restarts=4, seed=11)

    def g(t):
        return maximize_coherent_info(t, config).value - floor

    return numerics.bisect_zero(g, lo, hi, tol)


# --- classical capacity -----------------------------------------------------


@dataclass
class Ensemble:
    """Weighted pure qutrit states."""

    weights: list
    states: list

    def validate(self, tol: float = 1e-12):
        if abs(sum(self.weights) - 1.0) > tol:
            raise ValueError("ensemble weights must sum to 1")
        if any(w < 0 for w in self.weights):
            raise ValueError("ensemble weights must be non-negative")
        for s in self.states:
            validate_qutrit(s)
            evals = np.linalg.eigvalsh(s)
            if evals[-1] < 1.0 - 1e-10:
                raise ValueError("ensemble states must be pure")

    def average(self) -> np.ndarray:
        return sum(w * s for w, s in zip(self.weights, self.states))


def holevo_chi(ensemble: Ensemble, t: float) -> float:
    """Holevo quantity of an ensemble through the channel, in bits."""
    avg_out = qutrit_channel(ensemble.average(), t)
    chi = numerics.von_neumann_entropy(avg_out)
    for w, s in zip(ensemble.weights, ensemble.states):
        if w > 0:
            chi -= w * numerics.von_neumann_entropy(qutrit_channel(s, t))
    return chi


def _chi_fast(weights, states, t: float) -> float:
    """Holevo quantity without validation, for optimizer hot paths."""
    avg = sum(w * s for w, s in zip(weights, states))
    chi = numerics._entropy_fast(_qutrit_channel_linear(avg, t))
    for w, s in zip(weights, states):
        if w > 0:
            chi -= w * numerics._entropy_fast(_qutrit_channel_linear(s, t))
    return chi


def _family_ensemble(q: float, theta: float) -> Ensemble:
    """The mirrored-pair ensemble: two qubit-block states at +-theta/2 from
    |e1> in the phi = 0 plane with weight q each, plus |2>."""
    return Ensemble(
        [q, q, 1.0 - 2.0 * q],
        [
            pure_qubit_state(theta, 0.0),
            pure_qubit_state(-theta, 0.0),
            SYMMETRIC_STATE,
        ],
    )


@dataclass
class HolevoResult:
    capacity: float
    ensemble: Ensemble
    q: float
    theta: float
    family_capacity: float
    general_capacity: float
    matched_family: bool


def _sigmoid(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


def maximize_holevo(
    t: float,
    max_states: int = 5,
    config: numerics.OptimizerConfig | None = None,
    general_search: bool = True,
) -> HolevoResult:
    """Best Holevo quantity over ensembles of at most max_states pure states.

    The mirrored-pair family (q, theta) is optimized directly, and a
    general multi-start search over qubit-block Bloch angles plus |2> with
    softmax weights guards against states outside the family; sweeps may
    skip the general stage once it has confirmed the family at nearby t.
    """
    if config is None:
        config = numerics.OptimizerConfig(restarts=16, max_iters=2500, seed=5)

    def family_obj(p):
        q = 0.5 * _sigmoid(p[0])
        ens = _family_ensemble(q, p[1])
        return _chi_fast(ens.weights, ens.states, t)

    fam = numerics.nelder_mead_maximize(
        family_obj, np.array([0.0, math.pi / 2]), config
    )
    q = 0.5 * _sigmoid(fam.x[0])
    theta = _normalize_theta(fam.x[1])
    family_c = fam.fun

    general_c = family_c
    if general_search:
        n_qb = max_states - 1
        sym = SYMMETRIC_STATE

        def general_obj(p):
            weights = numerics.softmax(np.concatenate((p[:n_qb], [0.0])))
            states = [
                pure_qubit_state(p[n_qb + 2 * i], p[n_qb + 2 * i + 1])
                for i in range(n_qb)
            ] + [sym]
            return _chi_fast(weights, states, t)

        x0 = np.concatenate(
            (
                np.zeros(n_qb),
                [v for i in range(n_qb) for v in (math.pi / 2 + 0.3 * i, 0.0)],
            )
        )
        gen = numerics.nelder_mead_maximize(general_obj, x0, config)
        general_c = gen.fun

    matched = general_c <= family_c + 1e-5
    capacity = max(family_c, general_c)
    return HolevoResult(
        capacity,
        _family_ensemble(q, theta),
        q,
        theta,
        family_c,
        general_c,
        matched,
    )


def _normalize_theta(theta: float) -> float:
    """Fold an unconstrained angle into [0, pi] using the family symmetry
    theta -> -theta (state swap) and 2*pi periodicity."""
    theta = math.fmod(theta, 2.0 * math.pi)
    if theta < 0:
        theta = -theta
    if theta > math.pi:
        theta = 2.0 * math.pi - theta
    return theta


def orthogonal_benchmark(
    t: float, config: numerics.OptimizerConfig | None = None
) -> tuple:
    """Holevo quantities for the fixed best and worst orthogonal pairs.

    Best pair (|e1> +- |e2>)/sqrt2 lies on the weakly shrunk x axis, worst
    pair (|e1> +- i|e2>)/sqrt2 on the strongly shrunk y axis; weights over
    the 2-simplex are optimized for each.
    """
    if config is None:
        config = numerics.OptimizerConfig(restarts=8, seed=3)
    results = []
    for phi in (0.0, math.pi / 2):
        states = [
            pure_qubit_state(math.pi / 2, phi),
            pure_qubit_state(-math.pi / 2, phi),
            SYMMETRIC_STATE,
        ]

        def obj(p, states=states):
            weights = numerics.softmax(np.concatenate((p, [0.0])))
            return _chi_fast(weights, states, t)

        res = numerics.nelder_mead_maximize(obj, np.zeros(2), config)
        results.append(res.fun)
    return results[0], results[1]


# --- weak-diffusion reference curves ---------------------------------------


def coherent_info_weak(t: float) -> float:
    """Small-t expansion of the best coherent information (t log t terms)."""
    return 1.0 - (t / 3.0) * (8.0 - LOG2_3 + 2.0 / math.log(2) - 2.0 * math.log2(t))


def epsilon_weak(t: float) -> float:
    """Small-t expansion of the optimal diagonal-family parameter."""
    return 0.5 + (t / 6.0) * (1.0 - 1.0 / LOG2_3)


def q_weak(t: float) -> float:
    """Small-t expansion of the optimal ensemble weight."""
    return 1.0 / 3.0 + (t / 108.0) * (5.0 + 7.0 / (4.0 * LOG2_3) + math.log(t))


def theta_weak(t: float) -> float:
    """Small-t expansion of the optimal ensemble Bloch angle."""
    return math.pi / 2.0 - (t / 12.0) * (1.0 - LOG2_3 + 2.0 * math.log(t))


def capacity_weak(t: float) -> float:
    """Small-t expansion of the classical capacity."""
    return LOG2_3 + (t / 9.0) * (
        1.0 - (14.0 + 11.0 * math.log(3)) / (2.0 * math.log(2)) + 7.0 * math.log2(t)
    )
