"""Spin-coupling paths, coupled bases, projectors and the twirling map.

Qubit 1 is the most significant tensor factor, and qubit |0> carries spin
projection +1/2.  A convention-k path couples spins 1..k ascending and
spins N..k+1 descending; the two blocks are combined last.  Multiplicity
bases are ordered by sorting paths lexicographically on their twice-j
sequences, left sequence first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .halfint import HalfInteger
from .wigner import clebsch_gordan, recoupling_u, triangle_ok

N_MAX = 16
DENSE_N_MAX = 10


@dataclass(frozen=True, order=True)
class CouplingPath:
    """A branching-diagram path in convention k, stored as twice-j tuples.

    left = (2*j_1, 2*j_12, ..., 2*j_{1..k});
    right = (2*j_{k+1..N}, ..., 2*j_N).
    """

    k: int
    left: tuple
    right: tuple

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def t_left(self) -> int:
        """Twice the total angular momentum of the left block."""
        return self.left[-1]

    @property
    def t_right(self) -> int:
        """Twice the total angular momentum of the right block."""
        return self.right[0]

    def validate(self):
        if self.k != len(self.left) or self.k < 1 or len(self.right) < 1:
            raise ValueError(f"inconsistent convention k={self.k}")
        for seq in (self.left, self.right):
            if any(t < 0 for t in seq):
                raise ValueError("negative angular momentum in path")
        if self.left[0] != 1 or self.right[-1] != 1:
            raise ValueError("path must start and end at spin 1/2")
        for seq in (self.left, self.right):
            if any(abs(a - b) != 1 for a, b in zip(seq, seq[1:])):
                raise ValueError("consecutive path entries must differ by 1/2")


def _walks(length: int) -> list:
    """All twice-j walks of a given length starting and staying >= 0,
    beginning at 1 and stepping by +-1."""
    walks = [(1,)]
    for _ in range(length - 1):
        walks = [
            w + (nxt,)
            for w in walks
            for nxt in (w[-1] - 1, w[-1] + 1)
            if nxt >= 0
        ]
    return walks


def enumerate_paths(N: int, J, k: int) -> list:
    """All convention-k paths for N spins terminating at total momentum J."""
    if not 1 <= N <= N_MAX:
        raise ValueError(f"N={N} out of range [1, {N_MAX}]")
    if not 1 <= k <= N - 1:
        raise ValueError(f"k={k} out of range [1, {N - 1}]")
    tJ = HalfInteger.of(J).twice
    paths = [
        CouplingPath(k, left, tuple(reversed(right)))
        for left in _walks(k)
        for right in _walks(N - k)
        if triangle_ok(left[-1], right[-1], tJ)
    ]
    return sorted(paths)


def multiplicity(N: int, J) -> int:
    """Dimension d_J of the multiplicity space (number of paths)."""
    tJ = HalfInteger.of(J).twice
    if (N - tJ) % 2 or tJ > N or tJ < 0:
        return 0
    lo = (N - tJ) // 2
    return math.comb(N, lo) - (math.comb(N, lo - 1) if lo >= 1 else 0)


def total_j_values(N: int) -> list:
    """Twice-j values of the total angular momenta occurring for N spins."""
    return list(range(N % 2, N + 1, 2))


def _couple(blocks: dict, t_new_first: bool, t_target: int) -> dict:
    """Couple a spin 1/2 onto a block of states.

    blocks maps twice-m -> vector for a block with definite total momentum;
    returns the same for the enlarged block with total momentum t_target.
    The new spin is the left (first) tensor factor when t_new_first.
    """
    spin = {1: np.array([1.0, 0.0], dtype=complex),
            -1: np.array([0.0, 1.0], dtype=complex)}
    t_old = max(abs(tm) for tm in blocks)
    out = {}
    for tm in range(-t_target, t_target + 1, 2):
        acc = None
        for tms, vs in spin.items():
            tmb = tm - tms
            if abs(tmb) > t_old or tmb not in blocks:
                continue
            if t_new_first:
                cg = clebsch_gordan(
                    HalfInteger(1), HalfInteger(tms),
                    HalfInteger(t_old), HalfInteger(tmb),
                    HalfInteger(t_target), HalfInteger(tm),
                )
                term = cg * np.kron(vs, blocks[tmb])
            else:
                cg = clebsch_gordan(
                    HalfInteger(t_old), HalfInteger(tmb),
                    HalfInteger(1), HalfInteger(tms),
                    HalfInteger(t_target), HalfInteger(tm),
                )
                term = cg * np.kron(blocks[tmb], vs)
            acc = term if acc is None else acc + term
        if acc is not None:
            out[tm] = acc
    return out


@lru_cache(maxsize=4096)
def _block_states(seq: tuple, new_first: bool) -> tuple:
    """States |j_block, m> for a chain of spin-1/2 couplings.

    seq is the twice-j sequence of intermediate momenta (first entry 1).
    new_first selects whether each added spin is prepended (right blocks)
    or appended (left blocks).  Returns (twice_m values, matrix of columns).
    """
    blocks = {1: np.array([1.0, 0.0], dtype=complex),
              -1: np.array([0.0, 1.0], dtype=complex)}
    for t_target in seq[1:]:
        blocks = _couple(blocks, new_first, t_target)
    tms = sorted(blocks, reverse=True)
    return tuple(tms), np.stack([blocks[tm] for tm in tms], axis=1)


def coupled_basis_states(N: int, J, path: CouplingPath) -> np.ndarray:
    """Matrix whose columns are |J, M, path> for M = J, J-1, ..., -J."""
    path.validate()
    if path.n != N:
        raise ValueError("path length does not match N")
    if N > DENSE_N_MAX:
        raise ValueError(f"dense construction capped at N={DENSE_N_MAX}")
    tJ = HalfInteger.of(J).twice
    if not triangle_ok(path.t_left, path.t_right, tJ):
        raise ValueError("path blocks cannot couple to the requested J")
    # Right block is built by adding spins N, N-1, ... with the new spin as
    # the first factor, so its sequence runs from j_N inward.
    tms_l, mat_l = _block_states(path.left, False)
    tms_r, mat_r = _block_states(tuple(reversed(path.right)), True)
    dim = 2**N
    cols = np.zeros((dim, tJ + 1), dtype=complex)
    for col, tM in enumerate(range(tJ, -tJ - 1, -2)):
        acc = np.zeros(dim, dtype=complex)
        for il, tml in enumerate(tms_l):
            tmr = tM - tml
            if tmr not in tms_r:
                continue
            cg = clebsch_gordan(
                HalfInteger(path.t_left), HalfInteger(tml),
                HalfInteger(path.t_right), HalfInteger(tmr),
                HalfInteger(tJ), HalfInteger(tM),
            )
            if cg != 0.0:
                acc += cg * np.kron(mat_l[:, il], mat_r[:, tms_r.index(tmr)])
        cols[:, col] = acc
    return cols


def coupled_basis_vector(N: int, J, M, path: CouplingPath) -> np.ndarray:
    """The state |J, M, path> as a dense 2^N vector."""
    tJ = HalfInteger.of(J).twice
    tM = HalfInteger.of(M).twice
    if abs(tM) > tJ or (tJ - tM) % 2:
        raise ValueError("invalid projection M for J")
    cols = coupled_basis_states(N, J, path)
    return cols[:, (tJ - tM) // 2]


@lru_cache(maxsize=64)
def basis_layout(N: int, k: int) -> tuple:
    """Ordered (twice_J, path, twice_M) labels of the full coupled basis."""
    labels = []
    for tJ in total_j_values(N):
        for path in enumerate_paths(N, HalfInteger(tJ), k):
            for tM in range(tJ, -tJ - 1, -2):
                labels.append((tJ, path, tM))
    return tuple(labels)


@lru_cache(maxsize=64)
def basis_matrix(N: int, k: int) -> np.ndarray:
    """Unitary whose columns are the coupled basis states in layout order."""
    cols = []
    for tJ in total_j_values(N):
        for path in enumerate_paths(N, HalfInteger(tJ), k):
            cols.append(coupled_basis_states(N, HalfInteger(tJ), path))
    return np.concatenate(cols, axis=1)


def projector_matrix(N: int, J, alpha: CouplingPath, alpha_p: CouplingPath) -> np.ndarray:
    """Dense operator P_J^{alpha,alpha'} = (1/(2J+1)) sum_M |JMa><JMa'|."""
    if alpha.k != alpha_p.k:
        raise ValueError("paths must share one convention")
    tJ = HalfInteger.of(J).twice
    a = coupled_basis_states(N, J, alpha)
    b = coupled_basis_states(N, J, alpha_p)
    return (a @ b.conj().T) / (tJ + 1)


@lru_cache(maxsize=4096)
def _projector_cached(N: int, tJ: int, alpha: CouplingPath, alpha_p: CouplingPath):
    mat = projector_matrix(N, HalfInteger(tJ), alpha, alpha_p)
    mat.setflags(write=False)
    return mat


@dataclass
class TwirledState:
    """Block data {p_j, rho_j} of a twirled N-qubit state.

    blocks maps twice_j -> (p_j, rho_j) with rho_j indexed by the sorted
    convention-1 paths.  Blocks with negligible weight carry a zero rho_j.
    """

    n: int
    blocks: dict

    def validate(self, tol: float = 1e-10):
        total = sum(p for p, _ in self.blocks.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"block weights sum to {total}, not 1")
        for tj, (p, rho) in self.blocks.items():
            if p < -1e-12:
                raise ValueError(f"negative weight {p} in block {tj}")
            if p < 1e-14:
                continue
            if np.linalg.norm(rho - rho.conj().T) > tol:
                raise ValueError(f"block {tj} multiplicity matrix not Hermitian")
            if np.linalg.eigvalsh(rho).min() < -tol:
                raise ValueError(f"block {tj} multiplicity matrix not PSD")
            if abs(np.trace(rho).real - 1.0) > 1e-12:
                raise ValueError(f"block {tj} multiplicity matrix trace != 1")


def twirl(rho: np.ndarray, N: int) -> TwirledState:
    """Project a density matrix onto the twirled block form."""
    st = _twirl_linear(rho, N)
    st.validate()
    return st


def _twirl_linear(rho: np.ndarray, N: int) -> TwirledState:
    """Twirling without positivity checks; valid for any linear operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2**N, 2**N):
        raise ValueError(f"expected a {2**N}-dimensional matrix")
    k = 1 if N > 1 else None
    if N == 1:
        p = complex(np.trace(rho))
        return TwirledState(1, {1: (p.real, np.ones((1, 1), dtype=complex))})
    basis = basis_matrix(N, k)
    sigma = basis.conj().T @ rho @ basis
    layout = basis_layout(N, k)
    blocks = {}
    offset = 0
    for tj in total_j_values(N):
        paths = enumerate_paths(N, HalfInteger(tj), k)
        d = len(paths)
        dim_rep = tj + 1
        # Layout within the block: path-major, M-minor.
        sub = sigma[offset:offset + d * dim_rep, offset:offset + d * dim_rep]
        sub = sub.reshape(d, dim_rep, d, dim_rep)
        mult = np.trace(sub, axis1=1, axis2=3)
        p = float(np.trace(mult).real)
        if abs(p) < 1e-14:
            rho_j = np.zeros((d, d), dtype=complex)
        else:
            rho_j = mult / p
        blocks[tj] = (p, rho_j)
        offset += d * dim_rep
    assert offset == 2**N
    return TwirledState(N, blocks)


def embed(state: TwirledState, N: int, k: int | None = None) -> np.ndarray:
    """Dense matrix sum_j p_j/(2j+1) * 1_{H_j} (x) rho_j in convention k."""
    if N != state.n:
        raise ValueError("dimension mismatch")
    if N == 1:
        (p, _rho) = state.blocks[1]
        return p * np.eye(2, dtype=complex) / 2.0
    if k is None:
        k = 1
    out = np.zeros((2**N, 2**N), dtype=complex)
    for tj, (p, rho_j) in state.blocks.items():
        if p == 0.0 and not rho_j.any():
            continue
        paths = enumerate_paths(N, HalfInteger(tj), k)
        for a, pa in enumerate(paths):
            for b, pb in enumerate(paths):
                w = p * rho_j[a, b]
                if w != 0.0:
                    out += w * _projector_cached(N, tj, pa, pb)
    return out


@dataclass
class ProjectorExpansion:
    """A finitely supported expansion over operators P_J^{alpha,alpha'}.

    terms maps (twice_J, alpha, alpha') -> complex amplitude; all paths
    share the convention k.
    """

    n: int
    k: int
    terms: dict

    def dense(self) -> np.ndarray:
        out = np.zeros((2**self.n, 2**self.n), dtype=complex)
        for (tJ, a, ap), amp in self.terms.items():
            if amp != 0.0:
                out += amp * _projector_cached(self.n, tJ, a, ap)
        return out

    def block_weights(self) -> dict:
        """Diagonal weights p_j = sum_alpha amplitude(J, alpha, alpha)."""
        out = {}
        for (tJ, a, ap), amp in self.terms.items():
            if a == ap:
                out[tJ] = out.get(tJ, 0.0) + complex(amp).real
        return out


def expansion_from_twirled(state: TwirledState, k: int = 1) -> ProjectorExpansion:
    """Expansion of a twirled state: amplitude(J,a,a') = p_J * (rho_J)_{aa'}.

    The multiplicity matrices are indexed by convention-1 paths; a target
    convention k > 1 is reached by repeated raising shifts.
    """
    N = state.n
    terms = {}
    for tj, (p, rho_j) in state.blocks.items():
        paths = enumerate_paths(N, HalfInteger(tj), 1)
        for a, pa in enumerate(paths):
            for b, pb in enumerate(paths):
                amp = p * rho_j[a, b]
                if amp != 0.0:
                    terms[(tj, pa, pb)] = amp
    exp = ProjectorExpansion(N, 1, terms)
    for _ in range(k - 1):
        exp = convention_shift(exp, "raise")
    return exp


def twirled_from_expansion(exp: ProjectorExpansion) -> TwirledState:
    """Collect an expansion into block form {p_j, rho_j} (in its convention)."""
    N = exp.n
    by_j = {}
    for (tJ, a, ap), amp in exp.terms.items():
        by_j.setdefault(tJ, {})[(a, ap)] = amp
    blocks = {}
    for tj in total_j_values(N):
        paths = enumerate_paths(N, HalfInteger(tj), exp.k)
        d = len(paths)
        mult = np.zeros((d, d), dtype=complex)
        for (a, ap), amp in by_j.get(tj, {}).items():
            mult[paths.index(a), paths.index(ap)] = amp
        p = float(np.trace(mult).real)
        rho_j = mult / p if abs(p) >= 1e-14 else np.zeros((d, d), dtype=complex)
        blocks[tj] = (p, rho_j)
    return TwirledState(N, blocks)


def _shift_one_side(path: CouplingPath, tJ: int, direction: str):
    """Candidate shifted paths with their recoupling amplitudes.

    Raising re-expresses a convention-(k) path in convention (k+1) terms,
    summing over the new left entry j_{1..k+1}; lowering goes the other way,
    summing over the new right entry j_{k..N}.  The coefficient is
    U(j_{1..i-1}, 1/2, J, j_{i+1..N}; j_{1..i}, j_{i..N}) with i the higher
    of the two conventions involved.
    """
    half = HalfInteger(1)
    out = []
    if direction == "raise":
        i = path.k + 1
        t_prev = path.t_left  # j_{1..i-1}
        t_low = path.right[0]  # j_{i..N}
        t_next = path.right[1]  # j_{i+1..N}
        for t_new in (t_prev - 1, t_prev + 1):
            if t_new < 0 or not triangle_ok(t_new, t_next, tJ):
                continue
            coeff = recoupling_u(
                HalfInteger(t_prev), half, HalfInteger(tJ), HalfInteger(t_next),
                HalfInteger(t_new), HalfInteger(t_low),
            )
            if coeff != 0.0:
                new = CouplingPath(i, path.left + (t_new,), path.right[1:])
                out.append((new, coeff))
    elif direction == "lower":
        i = path.k
        t_prev = path.left[-2]  # j_{1..i-1}
        t_high = path.left[-1]  # j_{1..i}
        t_next = path.right[0]  # j_{i+1..N}
        for t_new in (t_next - 1, t_next + 1):
            if t_new < 0 or not triangle_ok(t_prev, t_new, tJ):
                continue
            coeff = recoupling_u(
                HalfInteger(t_prev), half, HalfInteger(tJ), HalfInteger(t_next),
                HalfInteger(t_high), HalfInteger(t_new),
            )
            if coeff != 0.0:
                new = CouplingPath(i - 1, path.left[:-1], (t_new,) + path.right)
                out.append((new, coeff))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return out


def convention_shift(exp: ProjectorExpansion, direction: str) -> ProjectorExpansion:
    """Re-express an expansion one convention up or down (exact linear map)."""
    if direction == "raise" and exp.k >= exp.n - 1:
        raise ValueError(f"cannot raise convention above {exp.n - 1}")
    if direction == "lower" and exp.k <= 1:
        raise ValueError("cannot lower convention below 1")
    new_k = exp.k + 1 if direction == "raise" else exp.k - 1
    terms = {}
    for (tJ, a, ap), amp in exp.terms.items():
        for new_a, ca in _shift_one_side(a, tJ, direction):
            for new_ap, cap in _shift_one_side(ap, tJ, direction):
                key = (tJ, new_a, new_ap)
                terms[key] = terms.get(key, 0.0) + amp * ca * cap
    return ProjectorExpansion(exp.n, new_k, terms)
