import itertools
import json

import numpy as np
import pytest

from extgeom.algebra import (
    PRESETS, StructureConstants, check_representation, check_structure_constants, load_constants, preset,
)
from extgeom.expr import evaluate_many
from extgeom.frames import VectorField, apply, commutator
from extgeom.report import FAIL, PASS, points_for


def _jacobi_brute_force(f):
    """Loop over every (a, b, c, d) and evaluate the cyclic sum directly."""
    n = f.shape[0]
    worst = 0.0
    for a, b, c, d in itertools.product(range(n), repeat=4):
        s = 0.0
        for e in range(n):
            s += f[e, a, b] * f[d, e, c] + f[e, b, c] * f[d, e, a] + f[e, c, a] * f[d, e, b]
        worst = max(worst, abs(s))
    return worst


def test_abelian_constants_pass_with_zero_residual():
    rep = check_structure_constants(StructureConstants.abelian(4))
    assert rep.verdict == PASS and rep.max_abs == 0.0


def test_su2_is_levi_civita():
    f = StructureConstants.su2().f
    for a, b, c in itertools.product(range(3), repeat=3):
        eps = np.linalg.det(np.eye(3)[[a, b, c]])
        assert f[c, a, b] == eps


def test_su2_jacobi_matches_brute_force():
    sc = StructureConstants.su2()
    rep = check_structure_constants(sc)
    assert rep.verdict == PASS
    assert _jacobi_brute_force(sc.f) == 0.0 == rep.extra["jacobi"]


def test_perturbed_su2_breaks_jacobi():
    f = StructureConstants.su2().f.copy()
    f[0, 0, 1] += 0.1
    f[0, 1, 0] -= 0.1
    rep = check_structure_constants(StructureConstants(f))
    assert rep.verdict == FAIL
    assert rep.extra["antisymmetry"] == 0.0
    assert rep.extra["jacobi"] == pytest.approx(_jacobi_brute_force(f))
    assert rep.witness is not None


def test_rescaled_bracket_is_still_a_lie_algebra():
    # [X0, X1] = 1.1 X2 is su(2) in a rescaled basis
    f = StructureConstants.su2().f.copy()
    f[2, 0, 1], f[2, 1, 0] = 1.1, -1.1
    assert check_structure_constants(StructureConstants(f)).verdict == PASS


def test_asymmetric_constants_fail():
    f = np.zeros((2, 2, 2))
    f[0, 0, 1] = 1.0
    rep = check_structure_constants(StructureConstants(f))
    assert rep.verdict == FAIL and rep.extra["antisymmetry"] == 1.0


@pytest.mark.parametrize("name", PRESETS)
def test_presets_satisfy_constants_and_representation(name):
    p = preset(name)
    assert check_structure_constants(p.constants).max_abs < 1e-12
    rep = check_representation(p, points_for(p.chart, 64, 5))
    assert rep.verdict == PASS and rep.max_abs < 1e-8


def test_abelian4_uses_coordinate_fields():
    p = preset("abelian4")
    for a, X in enumerate(p.fiber_fields):
        assert X == VectorField.coordinate(p.chart, f"th{a}")
    assert not p.constants.f.any()


def test_su2xu1_block_structure():
    p = preset("su2xu1")
    assert p.dim == 4 == p.chart.base_count
    f = p.constants.f
    for c, a, b in itertools.product(range(4), repeat=3):
        if 3 in (a, b, c):
            assert f[c, a, b] == 0.0


def test_su2_commutators_reproduce_epsilon():
    p = preset("su2")
    X = p.fiber_fields
    pts = points_for(p.chart, 64, 2)
    for a, b in itertools.permutations(range(3), 2):
        c = 3 - a - b
        sign = p.constants.f[c, a, b]
        diff = commutator(X[a], X[b]) - X[c].scale(sign)
        vals = evaluate_many(diff.comps, p.chart, pts)
        assert np.abs(vals).max() < 1e-12


def test_adjoint_lift_has_adjoint_behaviour():
    # X_a(M[b, c]) = f^b_{da} M[d, c]
    p = preset("su2")
    M = p.adjoint_matrix()
    f = p.constants.f
    pts = points_for(p.chart, 32, 1)
    for a, b, c in itertools.product(range(3), repeat=3):
        lhs = apply(p.fiber_fields[a], M[b, c])
        rhs = sum(f[b, d, a] * M[d, c] for d in range(3))
        v = evaluate_many([lhs - rhs], p.chart, pts)
        assert np.abs(v).max() < 1e-12


def test_broken_realisation_fails_representation():
    p = preset("su2")
    bad = list(p.fiber_fields)
    bad[2] = bad[2].scale(1.01)
    q = type(p)(p.name, p.constants, p.chart, tuple(bad), p.adjoint_factory)
    rep = check_representation(q, points_for(p.chart, 64, 0))
    assert rep.verdict == FAIL and rep.witness is not None


def test_unknown_preset():
    with pytest.raises(KeyError):
        preset("so3")


def test_load_constants_from_file(tmp_path):
    path = tmp_path / "su2.json"
    path.write_text(json.dumps({"f": StructureConstants.su2().f.tolist()}))
    assert np.array_equal(load_constants(path).f, StructureConstants.su2().f)


def test_constants_are_read_only():
    sc = StructureConstants.su2()
    with pytest.raises(ValueError):
        sc.f[0, 0, 0] = 1.0
