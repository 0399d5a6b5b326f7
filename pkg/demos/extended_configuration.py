"""Leaving the direct product: a second, non-covariant change of frame.

After the gauge change on su(2)+u(1), shift the base fields again by a
one-form gamma that depends on the fiber coordinates.  The frame no longer
splits: C' picks up the deviation of alpha + gamma from adjoint behaviour,
and the field equation gains the -C' beta' term.  Whatever the left-hand
side turns out to be, read as a source current it is conserved under the
enlarged derivative.
"""
import numpy as np

from extgeom import dynamics, frames
from extgeom.algebra import preset
from extgeom.expr import evaluate_many
from extgeom.geometry import EnlargedDerivative
from extgeom.random_fields import adjoint_one_form, random_one_form
from extgeom.report import points_for
from extgeom.tensors import elementwise, zeros

p = preset("su2xu1")
X, f = p.fiber_fields, p.constants
pts = points_for(p.chart, 64, 0)
rng = np.random.default_rng(12)

alpha = adjoint_one_form(p, rng)
gamma = random_one_form(p.chart, rng, 4, scale=0.3)

fr1 = frames.basis_change(frames.trivial_frame(p.chart, X), alpha)
C1 = frames.transformed_C(zeros(4, 4, 4), alpha, X, f)
b1 = frames.transformed_beta(zeros(4, 4, 4), alpha, C1, f, fr1.base_fields, X)

fr2 = frames.basis_change(fr1, gamma)
C2 = frames.transformed_C(C1, gamma, X, f)
b2 = frames.transformed_beta(b1, gamma, C2, f, fr2.base_fields, X)
print(f"max |C'| after the second change: {np.abs(evaluate_many(list(C2.ravel()), p.chart, pts)).max():.3f}")

for r in frames.jacobi_residuals(fr2.base_fields, X, C2, b2, f, p.chart, pts):
    print(r)

# two changes equal one change by the sum
sigma = elementwise(lambda a, b: a + b, alpha, gamma)
gap = elementwise(lambda a, b: a - b, b2, frames.generalized_field_strength(sigma, C2, f, p.chart))
print(f"beta' minus the deformed field strength: {np.abs(evaluate_many(list(gap.ravel()), p.chart, pts)).max():.1e}")
strict, corrected = frames.adjoint_behavior_residual(sigma, X, f, p.chart, pts, Cprime=C2)
print("sigma as a connection:     ", strict)
print("sigma corrected by C':     ", corrected)

metric = dynamics.flat_metric("minkowski")
print(dynamics.extended_field_eq_residual(b2, C2, metric, fr2.base_fields, p.chart, pts))
J = dynamics.source_current(b2, C2, metric, fr2.base_fields)
D = EnlargedDerivative(fr2.base_fields, C2)
print(dynamics.current_conservation_residual(J, D, p.chart, pts))
