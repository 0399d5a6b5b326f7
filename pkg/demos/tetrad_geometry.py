"""Geometry from a tetrad on su(2)+u(1).

A tetrad H^a_mu identifies the four base directions with the four algebra
directions, X'_mu = H^a_mu X_a.  Everything else follows: the connection
coefficients C', the anholonomy (whose negative is the torsion), the
curvature with its anholonomy completion, and the Bianchi identities.

The contracted identity for the Einstein-like tensor does not close for
either tetrad.  The script prints its size next to the defect in the pair
antisymmetry of the curvature.  For the Killing tetrad the metric is
preserved and that defect vanishes, yet the contracted identity still misses.
"""
import time

import numpy as np

from extgeom import dynamics, geometry
from extgeom.algebra import preset
from extgeom.expr import evaluate_many
from extgeom.random_fields import killing_tetrad, random_tetrad
from extgeom.report import points_for
from extgeom.tensors import elementwise

p = preset("su2xu1")
X, f = p.fiber_fields, p.constants.f
pts = points_for(p.chart, 32, 0)


def worst(arr):
    arr = np.asarray(arr, dtype=object)
    return float(np.abs(evaluate_many(list(arr.ravel()), p.chart, pts)).max())


for label, H in (("generic", random_tetrad(p.chart, np.random.default_rng(13))),
                 ("Killing", killing_tetrad(p, np.random.default_rng(14)))):
    t0 = time.perf_counter()
    tet = geometry.Tetrad(H)
    g = geometry.TetradGeometry.build(tet, X, f)
    print(f"--- {label} tetrad (built in {time.perf_counter() - t0:.1f}s)")
    print(tet.validate(p.chart, pts))
    print(f"torsion + anholonomy: {worst(elementwise(lambda a, b: a + b, g.T, g.beta_space)):.1e}")
    for r in geometry.beta_erre_residual(g.beta_internal, g.Rprime, X, f, p.chart, pts, 1e-8,
                                         g.curv.spacetime, g.beta_space, g.base_fields):
        print(r)
    for r in geometry.bianchi1_residual(g.curv.spacetime, g.beta_space, g.base_fields, p.chart, pts):
        print(r)
    print(geometry.bianchi2_residual(g.curv.spacetime, g.D, p.chart, pts))

    m = dynamics.metric_from_tetrad(tet)
    print(dynamics.metric_preservation_residual(m, g.D, p.chart, pts))
    _, _, G = geometry.ricci_and_einstein(g.curv.spacetime, m.g, m.ginv)
    print(f"contracted identity D_a G^(a s): {worst(geometry.contracted_bianchi(G, g.D)):.2e}")
    print(f"pair antisymmetry defect:        {worst(geometry.antisymmetry_defect(g.curv.spacetime, m.g)):.2e}")

    J = dynamics.source_current(g.beta_internal, g.Cprime, dynamics.flat_metric(), g.base_fields)
    print(dynamics.current_conservation_residual(J, g.D, p.chart, pts))
