"""Gauge fields as a change of frame on a fiber bundle.

Start from the trivial frame {d/dx_mu, X_a} of su(2) realised on its group
manifold, and shift the base fields by a one-form with adjoint behaviour:

    Y'_mu = d/dx_mu - alpha^a_mu X_a

The new frame closes with coefficients C' and beta'.  Because alpha behaves
like a connection, C' vanishes and beta' is the familiar non-abelian field
strength.  A transverse u(1) plane wave then solves the sourceless equation.
"""
import numpy as np

from extgeom import dynamics, frames
from extgeom.algebra import preset
from extgeom.expr import ZERO, evaluate_many, parse
from extgeom.random_fields import adjoint_one_form
from extgeom.report import points_for
from extgeom.tensors import elementwise, zeros


def change(p, alpha):
    fr = frames.basis_change(frames.trivial_frame(p.chart, p.fiber_fields), alpha)
    C = frames.transformed_C(zeros(p.dim, 4, p.dim), alpha, p.fiber_fields, p.constants)
    beta = frames.transformed_beta(zeros(p.dim, 4, 4), alpha, C, p.constants, fr.base_fields, p.fiber_fields)
    return fr, C, beta


p = preset("su2")
pts = points_for(p.chart, 64, 0)
alpha = adjoint_one_form(p, np.random.default_rng(1))
print("alpha^0_0 =", alpha[0, 0])

fr, C, beta = change(p, alpha)
Cv = evaluate_many(list(C.ravel()), p.chart, pts)
print(f"max |C'| over 64 points: {np.abs(Cv).max():.1e}")

# the symbolic laws agree with the commutators of the new frame, computed numerically
print(frames.transformation_crosscheck(fr, C, beta, p.constants, p.chart, pts))
for r in frames.jacobi_residuals(fr.base_fields, p.fiber_fields, C, beta, p.constants, p.chart, pts):
    print(r)
print(frames.central_extension_check(beta, p.fiber_fields, p.constants, p.chart, pts))

fs = frames.field_strength(alpha, p.constants, p.chart)
gap = elementwise(lambda a, b: a - b, beta, fs)
print(f"beta' minus the field strength: {np.abs(evaluate_many(list(gap.ravel()), p.chart, pts)).max():.1e}")

# abelian plane waves: only the transverse polarisation is a solution
u1 = preset("u1")
upts = points_for(u1.chart, 64, 0)
for label, slot in (("transverse", 2), ("longitudinal", 1)):
    a = np.array([[ZERO] * 4], dtype=object)
    a[0, slot] = parse("cos(x0 - x1)", u1.chart)
    ufr, _, ub = change(u1, a)
    rep = dynamics.yang_mills_residual(ub, dynamics.flat_metric("minkowski"), ufr.base_fields, u1.chart, upts)
    print(f"{label:>12} wave:", rep)
