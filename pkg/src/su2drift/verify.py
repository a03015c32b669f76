"""Named invariant checks backing the `verify` CLI command.

Each check returns (ok, detail).  The quick subset excludes the
large-sample Monte Carlo gates and the capacity optimizations.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import stats

from . import channel, coupling, numerics, su2, three_qubit, wigner
from .halfint import HalfInteger

_TJ_RANGE = range(0, 7)  # twice-j values 0 .. 3


def _random_density(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho)


def check_cg_orthogonality(ctx):
    cg = ctx.get("cg", wigner.clebsch_gordan)
    worst = 0.0
    for tj1, tj2 in itertools.product(_TJ_RANGE, _TJ_RANGE):
        labels_m = [
            (tm1, tm2)
            for tm1 in range(-tj1, tj1 + 1, 2)
            for tm2 in range(-tj2, tj2 + 1, 2)
        ]
        labels_jm = [
            (tJ, tM)
            for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2)
            for tM in range(-tJ, tJ + 1, 2)
        ]
        mat = np.array(
            [
                [
                    cg(*(HalfInteger(x) for x in (tj1, tm1, tj2, tm2, tJ, tM)))
                    for (tJ, tM) in labels_jm
                ]
                for (tm1, tm2) in labels_m
            ]
        )
        worst = max(worst, np.abs(mat.T @ mat - np.eye(len(labels_jm))).max())
    return worst < 1e-12, f"max orthogonality defect {worst:.2e}"


def _valid_sixj_args():
    for t1, t2, t3 in itertools.product(_TJ_RANGE, repeat=3):
        if not wigner.triangle_ok(t1, t2, t3):
            continue
        for t4, t5, t6 in itertools.product(_TJ_RANGE, repeat=3):
            if (
                wigner.triangle_ok(t1, t5, t6)
                and wigner.triangle_ok(t4, t2, t6)
                and wigner.triangle_ok(t4, t5, t3)
            ):
                yield (t1, t2, t3, t4, t5, t6)


def check_sixj_symmetry(ctx):
    worst = 0.0
    for args in _valid_sixj_args():
        t1, t2, t3, t4, t5, t6 = args
        ref = wigner._sixj_t(*args)
        variants = [
            (t2, t1, t3, t5, t4, t6),
            (t3, t2, t1, t6, t5, t4),
            (t1, t3, t2, t4, t6, t5),
            (t4, t5, t3, t1, t2, t6),  # swap upper/lower in columns 1,2
            (t1, t5, t6, t4, t2, t3),  # swap upper/lower in columns 2,3
            (t4, t2, t6, t1, t5, t3),  # swap upper/lower in columns 1,3
        ]
        for v in variants:
            worst = max(worst, abs(wigner._sixj_t(*v) - ref))
    return worst < 1e-13, f"max symmetry defect {worst:.2e}"


def check_sixj_orthogonality(ctx):
    worst = 0.0
    for t1, t2, t4, t5 in itertools.product(_TJ_RANGE, repeat=4):
        for t6 in _TJ_RANGE:
            for t6p in _TJ_RANGE:
                total = 0.0
                for t3 in range(abs(t1 - t2), t1 + t2 + 1, 2):
                    total += (
                        (t3 + 1)
                        * (t6 + 1)
                        * wigner._sixj_t(t1, t2, t3, t4, t5, t6)
                        * wigner._sixj_t(t1, t2, t3, t4, t5, t6p)
                    )
                expect = 1.0 if t6 == t6p else 0.0
                if t6 == t6p and not (
                    wigner.triangle_ok(t1, t5, t6) and wigner.triangle_ok(t4, t2, t6)
                ):
                    expect = 0.0
                worst = max(worst, abs(total - expect))
    return worst < 1e-12, f"max orthogonality defect {worst:.2e}"


def check_recoupling_unitarity(ctx):
    worst = 0.0
    for t1, t2, tJ, t3 in itertools.product(range(0, 5), repeat=4):
        t12s = range(abs(t1 - t2), t1 + t2 + 1, 2)
        t23s = [
            t23
            for t23 in range(abs(t2 - t3), t2 + t3 + 1, 2)
            if wigner.triangle_ok(t1, t23, tJ)
        ]
        t12s = [t12 for t12 in t12s if wigner.triangle_ok(t12, t3, tJ)]
        if not t12s or not t23s:
            continue
        mat = np.array(
            [
                [
                    wigner.recoupling_u(
                        *(HalfInteger(x) for x in (t1, t2, tJ, t3, t12, t23))
                    )
                    for t23 in t23s
                ]
                for t12 in t12s
            ]
        )
        if len(t12s) == len(t23s):
            worst = max(worst, np.abs(mat @ mat.T - np.eye(len(t12s))).max())
    return worst < 1e-12, f"max unitarity defect {worst:.2e}"


def check_kernel_normalization(ctx):
    worst = 0.0
    xi = np.linspace(0.0, su2.TWO_PI, 20001)
    for t in (0.1, 1.0, 10.0):
        dens = su2.haar_class_density(xi) * su2.heat_kernel_density(t, xi)
        total = np.trapezoid(dens, xi)
        worst = max(worst, abs(total - 1.0))
    return worst < 1e-8, f"max normalization defect {worst:.2e}"


def check_coefficient_semigroup(ctx):
    worst = 0.0
    for tj in range(0, 13):
        j = HalfInteger(tj)
        lhs = su2.heat_coefficient(j, 0.7) * su2.heat_coefficient(j, 1.6)
        rhs = su2.heat_coefficient(j, 0.7 + 1.6)
        worst = max(worst, abs(lhs - rhs))
    return worst == 0.0 or worst < 1e-15, f"max defect {worst:.2e}"


def check_kernel_positivity(ctx):
    xi = np.linspace(0.0, su2.TWO_PI, 4096)
    worst = 0.0
    for t in (1e-3, 0.01, 0.1, 1.0):
        worst = min(worst, float(np.min(su2.heat_kernel_density(t, xi))))
    return worst > -1e-9, f"min density {worst:.2e}"


def check_multiplicity_sum(ctx):
    for n in range(1, 17):
        total = sum(
            (tj + 1) * coupling.multiplicity(n, HalfInteger(tj))
            for tj in coupling.total_j_values(n)
        )
        if total != 2**n:
            return False, f"N={n}: {total} != {2**n}"
    return True, "sum_J (2J+1) d_J = 2^N for N <= 16"


def check_basis_unitarity(ctx):
    worst = 0.0
    for n in range(2, 7):
        for k in range(1, n):
            mat = coupling.basis_matrix(n, k)
            worst = max(worst, np.abs(mat.conj().T @ mat - np.eye(2**n)).max())
    return worst < 1e-11, f"max unitarity defect {worst:.2e}"


def check_twirl_projection(ctx):
    rng = np.random.default_rng(ctx["seed"])
    worst = 0.0
    for n in (2, 3, 4):
        rho = _random_density(rng, 2**n)
        tw = coupling.twirl(rho, n)
        again = coupling.twirl(coupling.embed(tw, n), n)
        for tj, (p, rj) in tw.blocks.items():
            p2, rj2 = again.blocks[tj]
            worst = max(worst, abs(p - p2), np.abs(p * rj - p2 * rj2).max())
    return worst < 1e-12, f"max round-trip defect {worst:.2e}"


def check_twirl_rotation_invariance(ctx):
    rng = np.random.default_rng(ctx["seed"] + 1)
    worst = 0.0
    for n in (2, 3, 4):
        rho = _random_density(rng, 2**n)
        u = su2.haar_sample(rng).matrix
        big = u
        for _ in range(n - 1):
            big = np.kron(big, u)
        rotated = big @ rho @ big.conj().T
        d = coupling.embed(coupling.twirl(rho, n), n) - coupling.embed(
            coupling.twirl(rotated, n), n
        )
        worst = max(worst, np.abs(d).max())
    return worst < 1e-10, f"max invariance defect {worst:.2e}"


def check_channel_trace_hermiticity(ctx):
    rng = np.random.default_rng(ctx["seed"] + 2)
    worst_tr, worst_h = 0.0, 0.0
    for n in (2, 3, 4):
        for t in (0.0, 0.3, 2.0):
            rho = _random_density(rng, 2**n)
            out = channel.channel_apply(rho, channel.ChannelSpec(n, t))
            worst_tr = max(worst_tr, abs(np.trace(out).real - 1.0))
            worst_h = max(worst_h, np.abs(out - out.conj().T).max())
    ok = worst_tr < 1e-12 and worst_h < 1e-12
    return ok, f"trace defect {worst_tr:.2e}, hermiticity defect {worst_h:.2e}"


def check_channel_output_twirled(ctx):
    rng = np.random.default_rng(ctx["seed"] + 3)
    worst = 0.0
    for n in (2, 3):
        rho = _random_density(rng, 2**n)
        out = channel.channel_apply(rho, channel.ChannelSpec(n, 0.4))
        worst = max(
            worst, np.abs(coupling.embed(coupling.twirl(out, n), n) - out).max()
        )
    return worst < 1e-10, f"max twirled-structure defect {worst:.2e}"


def check_channel_input_twirl_equivalence(ctx):
    rng = np.random.default_rng(ctx["seed"] + 4)
    worst = 0.0
    for n in (2, 3):
        rho = _random_density(rng, 2**n)
        spec = channel.ChannelSpec(n, 0.6)
        a = channel.channel_apply(rho, spec)
        b = channel.channel_apply(coupling.embed(coupling.twirl(rho, n), n), spec)
        worst = max(worst, np.abs(a - b).max())
    return worst < 1e-10, f"max equivalence defect {worst:.2e}"


def check_channel_covariance(ctx):
    rng = np.random.default_rng(ctx["seed"] + 5)
    worst = 0.0
    for n in (2, 3):
        rho = _random_density(rng, 2**n)
        u = su2.haar_sample(rng).matrix
        big = u
        for _ in range(n - 1):
            big = np.kron(big, u)
        spec = channel.ChannelSpec(n, 0.5)
        a = channel.channel_apply(big @ rho @ big.conj().T, spec)
        b = channel.channel_apply(rho, spec)
        worst = max(worst, np.abs(a - b).max())
    return worst < 1e-10, f"max covariance defect {worst:.2e}"


def check_block_weight_stochastic(ctx):
    worst = 0.0
    for n in (2, 3, 4):
        tjs = coupling.total_j_values(n)
        for t in (0.2, 1.0):
            for tj in tjs:
                paths = coupling.enumerate_paths(n, HalfInteger(tj), 1)
                for a in paths:
                    out = channel.channel_on_projector(n, HalfInteger(tj), a, a, t)
                    col = sum(out.block_weights().values())
                    worst = max(worst, abs(col - 1.0))
    return worst < 1e-10, f"max column-sum defect {worst:.2e}"


def check_ii_commutation(ctx):
    rng = np.random.default_rng(ctx["seed"] + 6)
    rho = _random_density(rng, 8)
    tw = coupling.twirl(rho, 3)
    exp1 = coupling.expansion_from_twirled(tw, 1)
    t = 0.8
    # I_1 then I_2
    a = coupling.convention_shift(
        channel.apply_diffusion_step(exp1, 1, t), "raise"
    )
    a = channel.apply_diffusion_step(a, 2, t)
    # I_2 then I_1
    b = channel.apply_diffusion_step(coupling.convention_shift(exp1, "raise"), 2, t)
    b = channel.apply_diffusion_step(coupling.convention_shift(b, "lower"), 1, t)
    worst = np.abs(a.dense() - b.dense()).max()
    return worst < 1e-10, f"max commutator defect {worst:.2e}"


def check_werner_shrink(ctx):
    worst = 0.0
    singlet = coupling.enumerate_paths(2, HalfInteger(0), 1)[0]
    psi = coupling.coupled_basis_vector(2, HalfInteger(0), HalfInteger(0), singlet)
    proj = np.outer(psi, psi.conj())
    for t in (0.1, 0.5, 2.0):
        for p0 in (0.0, 0.3, 1.0):
            rho = p0 * proj + (1 - p0) * (np.eye(4) - proj) / 3.0
            out = channel.channel_apply(rho, channel.ChannelSpec(2, t))
            p0_out = float(np.real(psi.conj() @ out @ psi))
            c_in = (1.0 - 4.0 * p0) / 3.0
            c_out = (1.0 - 4.0 * p0_out) / 3.0
            worst = max(worst, abs(c_out - math.exp(-t) * c_in))
    return worst < 1e-10, f"max shrink-law defect {worst:.2e}"


def check_three_qubit_closed_forms(ctx):
    worst = 0.0
    rng = np.random.default_rng(ctx["seed"] + 7)
    for t in (0.0, 0.2, 1.0, 3.0):
        for _ in range(12):
            st = three_qubit.pure_qubit_state(
                rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
            )
            d = three_qubit.qutrit_channel(st, t) - three_qubit.qutrit_channel_general(
                st, t
            )
            worst = max(worst, np.abs(d).max())
        d = three_qubit.qutrit_channel(
            three_qubit.SYMMETRIC_STATE, t
        ) - three_qubit.qutrit_channel_general(three_qubit.SYMMETRIC_STATE, t)
        worst = max(worst, np.abs(d).max())
    return worst < 1e-10, f"max closed-form defect {worst:.2e}"


def check_fidelity_identity(ctx):
    rng = np.random.default_rng(ctx["seed"] + 8)
    worst = 0.0
    for _ in range(64):
        th, ph, t = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi), rng.uniform(0, 3)
        worst = max(
            worst,
            abs(three_qubit.fidelity(th, ph, t) - three_qubit.fidelity_bloch(th, ph, t)),
        )
    return worst < 1e-12, f"max identity defect {worst:.2e}"


def check_choi_psd(ctx):
    worst = 0.0
    for t in (0.0, 0.1, 1.0, 10.0):
        evals = np.linalg.eigvalsh(channel.choi_matrix(channel.ChannelSpec(3, t)))
        worst = min(worst, float(evals.min()))
    return worst > -1e-10, f"min Choi eigenvalue {worst:.2e}"


# ---- slow gates (excluded by --quick) -------------------------------------


def check_haar_class_ks(ctx):
    rng = np.random.default_rng(ctx["seed"] + 9)
    xi = su2.class_angle_of_quat(su2.haar_quat(rng, 100000))
    cdf = lambda x: (x - np.sin(x)) / (2 * np.pi)  # integral of sin^2(x/2)/pi
    stat = stats.kstest(xi, cdf)
    return stat.pvalue > 0.01, f"KS p={stat.pvalue:.4f}"


def check_kernel_semigroup_ks(ctx):
    rng = np.random.default_rng(ctx["seed"] + 10)
    n = 100000
    a = su2.heat_kernel_quat(0.5, rng, n)
    b = su2.heat_kernel_quat(0.5, rng, n)
    prod_xi = su2.class_angle_of_quat(su2.quat_mul(a, b))
    direct_xi = su2.class_angle_of_quat(su2.heat_kernel_quat(1.0, rng, n))
    stat = stats.ks_2samp(prod_xi, direct_xi)
    return stat.pvalue > 0.01, f"two-sample KS p={stat.pvalue:.4f}"


def check_mc_oracle(ctx):
    rng = np.random.default_rng(ctx["seed"] + 11)
    worst = 0.0
    for n in (2, 3):
        rho = _random_density(rng, 2**n)
        spec = channel.ChannelSpec(n, 0.5)
        ref = channel.channel_apply(rho, spec)
        mc = channel.monte_carlo_channel(rho, spec, 100000, seed=ctx["seed"] + n)
        worst = max(worst, mc.max_deviation_sigma(ref))
    return worst < 3.5, f"max deviation {worst:.2f} sigma"


def check_coherent_info_endpoints(ctx):
    r0 = three_qubit.maximize_coherent_info(0.0)
    ok0 = abs(r0.value - 1.0) < 1e-6 and abs(r0.epsilon - 0.5) < 1e-3
    r3 = three_qubit.maximize_coherent_info(0.3)
    ok3 = r3.value < 1e-8
    return ok0 and ok3, f"I_C(0)={r0.value:.8f}, I_C(0.3)={r3.value:.2e}"


def check_capacity_endpoint(ctx):
    r = three_qubit.maximize_holevo(0.0, general_search=False)
    ok = (
        abs(r.capacity - three_qubit.LOG2_3) < 1e-6
        and abs(r.q - 1.0 / 3.0) < 1e-3
        and abs(r.theta - math.pi / 2) < 1e-3
    )
    return ok, f"C(0)={r.capacity:.8f}, q={r.q:.5f}, theta={r.theta:.5f}"


CHECKS = [
    ("cg_orthogonality", True, check_cg_orthogonality),
    ("sixj_symmetry", True, check_sixj_symmetry),
    ("sixj_orthogonality", True, check_sixj_orthogonality),
    ("recoupling_unitarity", True, check_recoupling_unitarity),
    ("kernel_normalization", True, check_kernel_normalization),
    ("kernel_positivity", True, check_kernel_positivity),
    ("coefficient_semigroup", True, check_coefficient_semigroup),
    ("multiplicity_sum", True, check_multiplicity_sum),
    ("basis_unitarity", True, check_basis_unitarity),
    ("twirl_projection", True, check_twirl_projection),
    ("twirl_rotation_invariance", True, check_twirl_rotation_invariance),
    ("channel_trace_hermiticity", True, check_channel_trace_hermiticity),
    ("channel_output_twirled", True, check_channel_output_twirled),
    ("channel_input_twirl_equivalence", True, check_channel_input_twirl_equivalence),
    ("channel_covariance", True, check_channel_covariance),
    ("block_weight_stochastic", True, check_block_weight_stochastic),
    ("diffusion_step_commutation", True, check_ii_commutation),
    ("werner_shrink_law", True, check_werner_shrink),
    ("three_qubit_closed_forms", True, check_three_qubit_closed_forms),
    ("fidelity_identity", True, check_fidelity_identity),
    ("choi_psd", True, check_choi_psd),
    ("haar_class_ks", False, check_haar_class_ks),
    ("kernel_semigroup_ks", False, check_kernel_semigroup_ks),
    ("mc_oracle", False, check_mc_oracle),
    ("coherent_info_endpoints", False, check_coherent_info_endpoints),
    ("capacity_endpoint", False, check_capacity_endpoint),
]


def run_verify(quick: bool = False, seed: int = 12345, cg=None) -> dict:
    """Run all (or the quick subset of) named checks; never aborts early."""
    ctx = {"seed": seed}
    if cg is not None:
        ctx["cg"] = cg
    results = []
    for name, is_quick, fn in CHECKS:
        if quick and not is_quick:
            continue
        try:
            ok, detail = fn(ctx)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"exception: {exc!r}"
        results.append({"check": name, "ok": bool(ok), "detail": detail})
    return {
        "seed": seed,
        "quick": quick,
        "passed": sum(r["ok"] for r in results),
        "failed": sum(not r["ok"] for r in results),
        "results": results,
    }
