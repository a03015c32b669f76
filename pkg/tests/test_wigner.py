"""Coupling-coefficient tests against an independent symbolic oracle."""

import itertools
import math

import numpy as np
import pytest
from sympy import Rational, S
from sympy.physics.quantum.cg import CG
from sympy.physics.wigner import wigner_6j as sympy_6j

from su2drift.halfint import HalfInteger, projection_valid, twice
from su2drift.wigner import (
    clebsch_gordan,
    recoupling_u,
    selection_ok_cg,
    triangle_ok,
    u_jk,
    wigner_6j,
)

H = HalfInteger


def test_half_integer_arithmetic():
    a, b = H(3), H(1)
    assert (a + b).twice == 4
    assert (a - b).twice == 2
    assert float(a) == 1.5
    assert H.of(2).twice == 4
    assert H.of(0.5).twice == 1
    with pytest.raises(ValueError):
        H.of(0.3)


def test_projection_validity():
    assert projection_valid(3, 1)
    assert not projection_valid(3, 2)  # parity mismatch
    assert not projection_valid(1, 3)  # |m| > j


def test_triangle_rule():
    assert triangle_ok(1, 1, 2)
    assert triangle_ok(1, 1, 0)
    assert not triangle_ok(1, 1, 1)  # parity
    assert not triangle_ok(0, 1, 3)


def test_cg_against_symbolic_oracle():
    for tj1, tj2 in itertools.product(range(0, 5), repeat=2):
        for tm1 in range(-tj1, tj1 + 1, 2):
            for tm2 in range(-tj2, tj2 + 1, 2):
                for tJ in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
                    tM = tm1 + tm2
                    if abs(tM) > tJ:
                        continue
                    got = clebsch_gordan(H(tj1), H(tm1), H(tj2), H(tm2), H(tJ), H(tM))
                    ref = float(
                        CG(
                            Rational(tj1, 2), Rational(tm1, 2),
                            Rational(tj2, 2), Rational(tm2, 2),
                            Rational(tJ, 2), Rational(tM, 2),
                        ).doit()
                    )
                    assert got == pytest.approx(ref, abs=1e-13)


def test_cg_selection_rules_zero():
    assert clebsch_gordan(H(1), H(1), H(1), H(1), H(0), H(0)) == 0.0
    assert clebsch_gordan(H(2), H(0), H(2), H(0), H(1), H(0)) == 0.0
    assert not selection_ok_cg(H(1), H(1), H(1), H(1), H(0), H(2))
    assert selection_ok_cg(H(1), H(1), H(1), H(-1), H(0), H(0))


def test_cg_known_values():
    s = clebsch_gordan(H(1), H(1), H(1), H(-1), H(0), H(0))
    assert s == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    t = clebsch_gordan(H(1), H(1), H(1), H(-1), H(2), H(0))
    assert t == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert clebsch_gordan(H(1), H(-1), H(1), H(1), H(0), H(0)) == pytest.approx(
        -1 / math.sqrt(2), abs=1e-15
    )


def test_sixj_against_symbolic_oracle():
    rng = np.random.default_rng(0)
    checked = 0
    for _ in range(400):
        ts = rng.integers(0, 7, size=6)
        t1, t2, t3, t4, t5, t6 = (int(x) for x in ts)
        got = wigner_6j(*(H(x) for x in (t1, t2, t3, t4, t5, t6)))
        try:
            ref = float(
                sympy_6j(*(Rational(x, 2) for x in (t1, t2, t3, t4, t5, t6)))
            )
        except ValueError:
            ref = 0.0
        assert got == pytest.approx(ref, abs=1e-13)
        checked += 1
    assert checked == 400


def test_sixj_large_arguments():
    got = wigner_6j(H(16), H(16), H(16), H(16), H(16), H(16))
    ref = float(sympy_6j(*(S(8),) * 6))
    assert got == pytest.approx(ref, abs=1e-13)


def test_recoupling_u_unitarity():
    t1, t2, tJ, t3 = 2, 1, 3, 2
    t12s = [t for t in range(abs(t1 - t2), t1 + t2 + 1, 2) if triangle_ok(t, t3, tJ)]
    t23s = [t for t in range(abs(t2 - t3), t2 + t3 + 1, 2) if triangle_ok(t1, t, tJ)]
    mat = np.array(
        [
            [
                recoupling_u(H(t1), H(t2), H(tJ), H(t3), H(t12), H(t23))
                for t23 in t23s
            ]
            for t12 in t12s
        ]
    )
    assert np.allclose(mat @ mat.T, np.eye(len(t12s)), atol=1e-13)


def test_recoupling_u_resolves_basis_change():
    # U must equal the overlap of the two coupled three-spin bases.
    from su2drift.coupling import CouplingPath, coupled_basis_vector

    t1 = t2 = t3 = 1
    tJ = 1
    for t12 in (0, 2):
        for t23 in (0, 2):
            a = CouplingPath(2, (1, t12), (1,))
            b = CouplingPath(1, (1,), (t23, 1))
            va = coupled_basis_vector(3, H(tJ), H(tJ), a)
            vb = coupled_basis_vector(3, H(tJ), H(tJ), b)
            u = recoupling_u(H(t1), H(t2), H(tJ), H(t3), H(t12), H(t23))
            assert np.vdot(vb, va) == pytest.approx(u, abs=1e-13)


def test_u_jk_requires_neighbors_when_ambiguous():
    with pytest.raises(ValueError):
        u_jk(H(2), 3, H(3), H(2), 6)
    val = u_jk(H(2), 1, H(1), H(1), 4, j_next=H(1))
    assert isinstance(val, float)
