"""The correlated-rotation diffusion channel on N qubits.

The channel is the composition of the twirling map with diffusion steps
acting on trailing qubit blocks.  Its action on projector operators is the
iterative pipeline: expand the twirled input in convention 1, apply the
first diffusion step, raise the convention, apply the next step, and so on,
producing amplitudes in convention N-1.  A Markov-chain Monte Carlo
integrator over the same noise model provides an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import coupling, su2
from .halfint import HalfInteger
from .wigner import _sixj_t, triangle_ok

DENSE_N_MAX = 8
CHOI_N_MAX = 5


@dataclass(frozen=True)
class ChannelSpec:
    """Qubit count and diffusion time of one channel instance."""

    n: int
    t: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        if self.t < 0:
            raise ValueError("diffusion time must be non-negative")


@lru_cache(maxsize=1 << 16)
def _r_coefficient_t(tJ_out, tj1p, tj2p, tJ_in, tj1, tj2, t: float) -> float:
    if not (triangle_ok(tj1, tj2, tJ_in) and triangle_ok(tj1p, tj2p, tJ_out)):
        return 0.0
    sign = -1.0 if ((tJ_out - tJ_in) // 2) % 2 else 1.0
    total = 0.0
    for tj in range(abs(tj2 - tj2p), tj2 + tj2p + 1, 2):
        s1 = _sixj_t(tj1, tJ_in, tj2, tj2p, tj, tj1p)
        if s1 == 0.0:
            continue
        s2 = _sixj_t(tj1, tj1p, tj, tj2p, tj2, tJ_out)
        if s2 == 0.0:
            continue
        j = tj / 2.0
        total += (tj + 1) * math.exp(-0.5 * j * (j + 1) * t) * s1 * s2
    return sign * (tJ_out + 1) * total


def r_coefficient(J_out, j1p, j2p, J_in, j1, j2, t) -> float:
    """Transfer amplitude R(t) redistributing block-J weight under a step.

    Finite character-weighted 6j sum over j in [|j2-j2'|, j2+j2'];
    triangle violations yield 0.
    """
    args = tuple(HalfInteger.of(x).twice for x in (J_out, j1p, j2p, J_in, j1, j2))
    return _r_coefficient_t(*args, float(t))


def apply_diffusion_step(exp: coupling.ProjectorExpansion, i: int, t: float):
    """Apply the i-th diffusion step to an expansion stored in convention i.

    Each P_J^{a,a'} maps to sum_{J_i} R(t) P_{J_i}^{a,a'} where the block
    momenta entering R are the left/right totals of the two paths.
    """
    if exp.k != i:
        raise ValueError(f"expansion is in convention {exp.k}, need {i}")
    terms = {}
    for (tJ, a, ap), amp in exp.terms.items():
        tj1, tj2 = a.t_left, a.t_right
        tj1p, tj2p = ap.t_left, ap.t_right
        lo = max(abs(tj1 - tj2), abs(tj1p - tj2p))
        hi = min(tj1 + tj2, tj1p + tj2p)
        for tJ_out in range(lo, hi + 1, 2):
            r = _r_coefficient_t(tJ_out, tj1p, tj2p, tJ, tj1, tj2, t)
            if r != 0.0:
                key = (tJ_out, a, ap)
                terms[key] = terms.get(key, 0.0) + amp * r
    return coupling.ProjectorExpansion(exp.n, i, terms)


def channel_on_projector(N: int, J, alpha, alpha_p, t: float):
    """Full channel action on P_J^{alpha,alpha'} given in convention 1.

    Returns the output expansion in convention N-1.
    """
    tJ = HalfInteger.of(J).twice
    for p in (alpha, alpha_p):
        p.validate()
        if p.k != 1 or p.n != N or not triangle_ok(p.t_left, p.t_right, tJ):
            raise ValueError("labels must be valid convention-1 paths for J")
    exp = coupling.ProjectorExpansion(N, 1, {(tJ, alpha, alpha_p): 1.0})
    exp = apply_diffusion_step(exp, 1, t)
    for i in range(2, N):
        exp = coupling.convention_shift(exp, "raise")
        exp = apply_diffusion_step(exp, i, t)
    return exp


@lru_cache(maxsize=256)
def _channel_on_projector_cached(N, tJ, alpha, alpha_p, t):
    return channel_on_projector(N, HalfInteger(tJ), alpha, alpha_p, t)


def _apply_linear(rho: np.ndarray, spec: ChannelSpec) -> np.ndarray:
    """Channel action extended linearly to arbitrary (non-Hermitian) inputs."""
    N, t = spec.n, spec.t
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2**N, 2**N):
        raise ValueError(f"expected a {2**N}-dimensional matrix")
    if N > DENSE_N_MAX:
        raise ValueError(f"dense mode capped at N={DENSE_N_MAX}")
    if N == 1:
        return np.trace(rho) * np.eye(2, dtype=complex) / 2.0
    twirled = coupling._twirl_linear(rho, N)
    in_exp = coupling.expansion_from_twirled(twirled, k=1)
    out = np.zeros_like(rho)
    acc = {}
    for (tJ, a, ap), amp in in_exp.terms.items():
        piece = _channel_on_projector_cached(N, tJ, a, ap, t)
        for key, val in piece.terms.items():
            acc[key] = acc.get(key, 0.0) + amp * val
    out_exp = coupling.ProjectorExpansion(N, N - 1, acc)
    return out_exp.dense()


def channel_apply(rho: np.ndarray, spec: ChannelSpec) -> np.ndarray:
    """Channel output for a density matrix input (dense mode)."""
    out = _apply_linear(rho, spec)
    return out


def choi_matrix(spec: ChannelSpec, subspace: str = "full") -> np.ndarray:
    """Choi matrix sum_{kl} |k><l| (x) E(|k><l|).

    subspace 'full' works on the 2^N input space (N <= 5);
    'effective_qutrit' covers the three-qubit effective channel and is
    provided by the three-qubit analysis module.
    """
    if subspace == "effective_qutrit":
        from . import three_qubit

        if spec.n != 3:
            raise ValueError("effective qutrit mode requires N = 3")
        return three_qubit.qutrit_choi(spec.t)
    if subspace != "full":
        raise ValueError(f"unknown subspace {subspace!r}")
    if spec.n > CHOI_N_MAX:
        raise ValueError(f"full Choi mode capped at N={CHOI_N_MAX}")
    d = 2**spec.n
    out = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d):
        for l in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[k, l] = 1.0
            out[k * d:(k + 1) * d, l * d:(l + 1) * d] = _apply_linear(unit, spec)
    return out


@dataclass
class MonteCarloResult:
    """Sample mean of the channel output with per-entry standard errors."""

    mean: np.ndarray
    stderr_re: np.ndarray
    stderr_im: np.ndarray
    samples: int

    def max_deviation_sigma(self, reference: np.ndarray, floor: float = 1e-9) -> float:
        """Largest entrywise |mean - reference| in units of standard error."""
        dev_re = np.abs(self.mean.real - reference.real) / (self.stderr_re + floor)
        dev_im = np.abs(self.mean.imag - reference.imag) / (self.stderr_im + floor)
        return float(max(dev_re.max(), dev_im.max()))


class _Welford:
    """Streaming mean/M2 accumulator mergeable across chunks."""

    def __init__(self, shape):
        self.n = 0
        self.mean = np.zeros(shape)
        self.m2 = np.zeros(shape)

    def add_chunk(self, data: np.ndarray):
        m = data.shape[0]
        mean_b = data.mean(axis=0)
        m2_b = ((data - mean_b) ** 2).sum(axis=0)
        if self.n == 0:
            self.n, self.mean, self.m2 = m, mean_b, m2_b
            return
        delta = mean_b - self.mean
        tot = self.n + m
        self.mean += delta * (m / tot)
        self.m2 += m2_b + delta**2 * (self.n * m / tot)
        self.n = tot

    def stderr(self) -> np.ndarray:
        return np.sqrt(self.m2 / (self.n - 1) / self.n)


def monte_carlo_channel(
    rho: np.ndarray,
    spec: ChannelSpec,
    samples: int,
    seed: int,
    chunk: int = 20000,
) -> MonteCarloResult:
    """Monte Carlo estimate of the channel output.

    Draws U_1 from Haar, then U_i = U'_i U_{i-1} with U'_i diffusion
    distributed, and averages the conjugated input.  Deterministic for a
    fixed seed; standard errors come from merged Welford accumulators over
    the real and imaginary parts.
    """
    if samples < 1000:
        raise ValueError("need at least 10^3 samples")
    N, t = spec.n, spec.t
    d = 2**N
    rho = np.asarray(rho, dtype=complex)
    rng = np.random.default_rng(seed)
    acc_re = _Welford((d, d))
    acc_im = _Welford((d, d))
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        q = su2.haar_quat(rng, b)
        mats = su2.quat_to_matrix(q)
        big = mats
        for _ in range(1, N):
            if t > 0:
                q = su2.quat_mul(su2.heat_kernel_quat(t, rng, b), q)
                mats = su2.quat_to_matrix(q)
            dim = big.shape[-1]
            big = np.einsum("bij,bkl->bikjl", big, mats).reshape(b, dim * 2, dim * 2)
        outs = big @ rho @ big.conj().transpose(0, 2, 1)
        acc_re.add_chunk(outs.real)
        acc_im.add_chunk(outs.imag)
        done += b
    mean = acc_re.mean + 1j * acc_im.mean
    return MonteCarloResult(mean, acc_re.stderr(), acc_im.stderr(), samples)
