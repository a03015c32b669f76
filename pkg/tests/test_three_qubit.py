"""Effective qutrit channel, fidelities, coherent information, capacity."""

import math

import numpy as np
import pytest

from su2drift import numerics, three_qubit as tq


def test_pure_qubit_state_is_normalized():
    rho = tq.pure_qubit_state(0.7, 1.3)
    assert rho.shape == (3, 3)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(rho, rho.conj().T, atol=1e-14)
    assert np.linalg.eigvalsh(rho).max() == pytest.approx(1.0, abs=1e-13)
    assert rho[2, 2] == 0.0


def test_e_basis_self_inverse():
    assert np.allclose(tq.E_BASIS @ tq.E_BASIS, np.eye(2), atol=1e-15)


def test_channel_closed_form_matches_general_machinery():
    rng = np.random.default_rng(30)
    for t in (0.0, 0.2, 1.0, 3.0):
        for _ in range(12):
            rho = tq.pure_qubit_state(
                rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
            )
            a = tq.qutrit_channel(rho, t)
            b = tq.qutrit_channel_general(rho, t)
            assert np.abs(a - b).max() < 1e-10
        a = tq.qutrit_channel(tq.SYMMETRIC_STATE, t)
        b = tq.qutrit_channel_general(tq.SYMMETRIC_STATE, t)
        assert np.abs(a - b).max() < 1e-10


def test_symmetric_block_exact_diagonal():
    out = tq.qutrit_channel(tq.SYMMETRIC_STATE, math.log(2))
    expect = np.diag([3 / 16, 5 / 48, 17 / 24])
    assert np.abs(out - expect).max() < 1e-12


def test_channel_erases_symmetric_coherences():
    rho = np.full((3, 3), 1 / 3, dtype=complex)
    out = tq.qutrit_channel(rho, 0.5)
    assert abs(out[0, 2]) < 1e-14
    assert abs(out[1, 2]) < 1e-14
    assert abs(out[0, 1]) > 1e-3


def test_dense_qutrit_bridge_roundtrip():
    # the bridge covers the invariant sector: qubit block plus symmetric
    # weight; coherences into the symmetric block are not representable
    rng = np.random.default_rng(31)
    x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = x @ x.conj().T
    rho /= np.trace(rho)
    rho[0:2, 2] = 0.0
    rho[2, 0:2] = 0.0
    back = tq.dense_to_qutrit(tq.qutrit_to_dense(rho))
    assert np.abs(back - rho).max() < 1e-12


def test_bloch_map_shrink_factors():
    t = 0.9
    m = tq.effective_qubit_map(t)
    et, e2t = math.exp(-t), math.exp(-2 * t)
    assert np.allclose(np.diag(m.shrink), [et, e2t, (2 * e2t + et) / 3], atol=1e-13)
    assert m.translation[2] == pytest.approx((e2t - et) / 3, abs=1e-13)
    # the map is a contraction toward a point on the z axis
    assert np.abs(m.shrink).max() < 1.0


def test_fidelity_formula_equals_bloch_form():
    rng = np.random.default_rng(32)
    for _ in range(100):
        th = rng.uniform(0, math.pi)
        ph = rng.uniform(0, 2 * math.pi)
        t = rng.uniform(0, 3)
        assert tq.fidelity(th, ph, t) == pytest.approx(
            tq.fidelity_bloch(th, ph, t), abs=1e-12
        )


def test_fidelity_optimum_location():
    # grid + polish: best states sit on the phi in {0, pi} meridians
    # at cos(theta) = -1/4 for every diffusion time
    from scipy.optimize import minimize

    for t in (0.3, 0.9, 2.0):
        best = None
        for th in np.linspace(0.01, math.pi - 0.01, 45):
            for ph in np.linspace(0, 2 * math.pi, 60, endpoint=False):
                f = tq.fidelity(th, ph, t)
                if best is None or f > best[0]:
                    best = (f, th, ph)
        res = minimize(
            lambda x: -tq.fidelity(x[0], x[1], t),
            [best[1], best[2]],
            method="Nelder-Mead",
            options={"xatol": 1e-8, "fatol": 1e-12},
        )
        th_opt, ph_opt = res.x
        assert math.cos(th_opt) == pytest.approx(-0.25, abs=1e-4)
        ph_mod = ph_opt % (2 * math.pi)
        assert min(abs(ph_mod - 0), abs(ph_mod - math.pi), abs(ph_mod - 2 * math.pi)) < 1e-3


def test_fidelity_at_t0_is_one():
    for th, ph in [(0.3, 0.0), (1.2, 2.0), (2.9, 4.0)]:
        assert tq.fidelity(th, ph, 0.0) == pytest.approx(1.0, abs=1e-13)


def test_average_fidelity_formula_vs_quadrature():
    for t in (0.2, 1.0):
        val, err = numerics.sphere_quadrature(
            lambda th, ph: tq.fidelity(th, ph, t), (24, 48)
        )
        assert val == pytest.approx(tq.average_fidelity(t), abs=1e-10)
        mc, stderr = numerics.sphere_quadrature(
            lambda th, ph: tq.fidelity(th, ph, t), 20000, seed=3
        )
        assert abs(mc - tq.average_fidelity(t)) < 3.5 * stderr


def test_average_fidelity_monotone_decreasing():
    ts = np.linspace(0.0, 3.0, 40)
    vals = [tq.average_fidelity(t) for t in ts]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[0] == pytest.approx(1.0, abs=1e-13)
    # infinite-time floor of the average fidelity
    assert tq.average_fidelity(80.0) == pytest.approx(0.5, abs=1e-10)


def test_great_circle_fidelity_optimum():
    t = 0.7
    best = tq.great_circle_fidelity(math.pi / 2, math.pi / 2, t)
    et, e2t = math.exp(-t), math.exp(-2 * t)
    assert best == pytest.approx((3 + 2 * et + e2t) / 6, abs=1e-13)
    for th_c in (0.3, 1.0, 1.5):
        for ph_c in (0.0, 1.0, 2.5):
            assert tq.great_circle_fidelity(th_c, ph_c, t) <= best + 1e-12


def test_kraus_operators_complete():
    for t in (0.1, 0.8):
        ops = tq.kraus_operators(t)
        total = sum(k.conj().T @ k for k in ops)
        assert np.allclose(total, np.eye(3), atol=1e-10)
        rng = np.random.default_rng(33)
        x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = x @ x.conj().T
        rho /= np.trace(rho)
        out = sum(k @ rho @ k.conj().T for k in ops)
        assert np.abs(out - tq.qutrit_channel(rho, t)).max() < 1e-10


def test_coherent_information_gauge_invariance():
    # entropy exchange must not depend on the Kraus representation
    rng = np.random.default_rng(34)
    t = 0.4
    rho = tq._diagonal_family_state(0.6)
    base = tq.coherent_information(rho, t)
    ops = tq.kraus_operators(t)
    m = len(ops)
    # random unitary remixing of the Kraus set
    z = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    q, _ = np.linalg.qr(z)
    mixed = tuple(sum(q[i, j] * ops[j] for j in range(m)) for i in range(m))
    w = np.array([[np.trace(a @ rho @ b.conj().T) for b in mixed] for a in mixed])
    s_env = numerics.von_neumann_entropy(w)
    s_out = numerics.von_neumann_entropy(tq.qutrit_channel(rho, t))
    assert s_out - s_env == pytest.approx(base, abs=1e-10)


def test_coherent_information_pure_input_is_zero():
    for t in (0.2, 0.9):
        val = tq.coherent_information(tq.pure_qubit_state(1.0, 0.5), t)
        assert abs(val) < 1e-10


def test_maximize_coherent_info_endpoints():
    r0 = tq.maximize_coherent_info(0.0)
    assert r0.value == pytest.approx(1.0, abs=1e-6)
    assert r0.epsilon == pytest.approx(0.5, abs=1e-3)
    r = tq.maximize_coherent_info(0.3)
    assert r.value < 1e-8


def test_coherent_info_weak_diffusion_band():
    r = tq.maximize_coherent_info(0.05)
    assert abs(r.value - tq.coherent_info_weak(0.05)) < 0.1
    assert r.epsilon >= 0.5
    assert r.general_value <= r.value + 1e-6


def test_coherent_info_threshold_band():
    thr = tq.coherent_info_threshold(tol=1e-3)
    assert 0.265 <= thr <= 0.285


def test_holevo_chi_basics():
    ens = tq._family_ensemble(1 / 3, math.pi / 2)
    ens.validate()
    assert tq.holevo_chi(ens, 0.0) == pytest.approx(math.log2(3), abs=1e-10)
    assert tq.holevo_chi(ens, 0.5) < math.log2(3)


def test_maximize_holevo_t0():
    r = tq.maximize_holevo(0.0, general_search=False)
    assert r.capacity == pytest.approx(tq.LOG2_3, abs=1e-6)
    assert r.q == pytest.approx(1 / 3, abs=1e-3)
    assert r.theta == pytest.approx(math.pi / 2, abs=1e-3)


def test_maximize_holevo_nonorthogonal_states():
    for t in (0.25, 0.5, 1.0):
        r = tq.maximize_holevo(t, general_search=False)
        assert abs(math.cos(r.theta)) > 1e-3
        assert r.q > 1 / 3


def test_general_search_matches_family():
    r = tq.maximize_holevo(0.5, general_search=True)
    assert r.matched_family
    assert r.general_capacity <= r.family_capacity + 2e-4


def test_orthogonal_benchmark_ordering():
    for t in (0.3, 0.8):
        r = tq.maximize_holevo(t, general_search=False)
        best, worst = tq.orthogonal_benchmark(t)
        assert best >= worst - 1e-10
        assert best <= r.capacity + 1e-6
        assert r.capacity - best < r.capacity - worst + 1e-10


def test_weak_diffusion_curves_shape():
    # small-t behavior of the optimizing parameters
    ts = [0.02, 0.05, 0.1]
    for t in ts:
        assert tq.epsilon_weak(t) >= 0.5
        assert tq.q_weak(t) >= 1 / 3
    eps = [tq.epsilon_weak(t) for t in ts]
    assert eps == sorted(eps)
