"""Residual diagnostics: how close is an operator to the good classes?

Each check measures an operator identity on a deterministic probe set and
reports a residual against a tolerance.  The key property for the
decomposition engine is power compatibility of the canonical left inverse,
(T^n)~ = (T~)^n; isometries, left-invertible quasinormal operators,
bounded-below weighted shifts and weighted translations all satisfy it, and
the checks below watch it hold (or fail) numerically.

    python3 demos/03_membership_checks.py
"""

import numpy as np

from woldkit import (
    bergman_shift,
    classd_residual,
    dirichlet_shift,
    double_commuting_residual,
    identity,
    isometry_residual,
    product_closure_check,
    quasinormal_block,
    quasinormal_residual,
    tensor_pair,
    unilateral_shift,
    weighted_translation,
    PhiFamily,
)
from woldkit.bandop import bergman, dirichlet


def show(rep):
    print(f"  {rep.name:18s} residual {rep.residual:10.3e}  "
          f"tol {rep.tolerance:.0e}  -> {rep.verdict}")


print("== the plain shift is an isometry; Bergman is not ==")
for T, label in ((unilateral_shift(), "unilateral shift"),
                 (bergman_shift(), "Bergman shift")):
    rep = isometry_residual(T)
    print(f"{label}:")
    show(rep)
    print(f"  {'':18s} left inverse vs adjoint: "
          f"{rep.details['left_inverse_vs_adjoint']:.3e}")

print()
print("== power compatibility of the left inverse ==")
for T, label in ((bergman_shift(), "Bergman shift"),
                 (dirichlet_shift(), "Dirichlet shift"),
                 (weighted_translation(PhiFamily.exp(1.0), 1, 1), "translation e^x"),
                 (quasinormal_block(np.diag([2.0, 3.0])), "block shift diag(2,3)")):
    print(f"{label}:")
    show(classd_residual(T))

print()
print("== quasinormality: commutation with the Gram operator ==")
show(quasinormal_residual(quasinormal_block(np.diag([2.0, 3.0]))))
show(quasinormal_residual(bergman_shift()))
print("  (a weighted shift with nonconstant weights is never quasinormal)")

print()
print("== double-commuting pairs and their products ==")
T1, T2 = tensor_pair(bergman(), dirichlet())
show(double_commuting_residual(T1, T2))
show(product_closure_check(T1, T2))
B = bergman_shift()
print("a normal invertible factor also preserves the class:")
show(product_closure_check(B, 2 * identity(B.lattice)))

print()
print("probe sets are seeded and reproduce bit-identical residuals:",
      classd_residual(B).residual == classd_residual(B).residual)
