"""Tour of the operator zoo: shifts, translations, blocks, sums.

Every operator is a set of bands acting exactly on finitely supported
vectors; nothing here is truncated.  Run from the repository root after
`pip install -e .`:

    python3 demos/01_shift_operators.py
"""

import numpy as np

from woldkit import (
    bergman_shift,
    bilateral_shift,
    dirichlet_shift,
    direct_sum,
    lower_bound_estimate,
    quasinormal_block,
    unit,
    unilateral_shift,
    weighted_translation,
    PhiFamily,
)
from woldkit.zoo import embed_summand

print("== unilateral shift: the model isometry ==")
S = unilateral_shift()
print("S e3      =", S.apply(unit(3)))
print("S* e3     =", S.adjoint().apply(unit(3)))
print("S* e0     =", S.adjoint().apply(unit(0)), " (the defect direction)")
print("S*S == I  ->", S.gram().apply(unit(5)) == unit(5))

print()
print("== Bergman and Dirichlet shifts: bounded below, not isometric ==")
B, D = bergman_shift(), dirichlet_shift()
print("Bergman weights  w_k = sqrt((k+1)/(k+2)):",
      [round(abs(B.apply(unit(k)).items()[0][1]), 6) for k in range(4)])
print("Dirichlet weights w_k = sqrt((k+2)/(k+1)):",
      [round(abs(D.apply(unit(k)).items()[0][1]), 6) for k in range(4)])
gb = B.gram()
print("Gram of the Bergman shift is exactly diagonal:",
      [gb.bands[0][1].evaluate((k,), gb.lattice).real for k in range(4)])
print("bound-below constants on window 16:",
      round(lower_bound_estimate(B, 16), 6), "and",
      round(lower_bound_estimate(D, 16), 6))

print()
print("== weighted translation on a grid ==")
T = weighted_translation(PhiFamily.exp(0.5), t=2.0, h=1.0)
print("step:", T.offsets[0][0], " weight e^{alpha t} =",
      T.bands[0][1].evaluate((0,), T.lattice).real)
Tp = weighted_translation(PhiFamily.power(2.0), t=1.0, h=1.0)
print("power envelope weights ((j+2)/(j+1))^2:",
      [round(Tp.bands[0][1].evaluate((j,), Tp.lattice).real, 6) for j in range(4)])

print()
print("== block shift with a matrix weight ==")
Q = quasinormal_block(np.diag([2.0, 3.0]))
print("Q e_(0,0) =", Q.apply(unit((0, 0))))
print("Q e_(0,1) =", Q.apply(unit((0, 1))))
print("its Gram is the squared matrix on each site:",
      Q.gram().apply(unit((4, 1))))

print()
print("== direct sum: an invertible part next to a pure shift ==")
W = direct_sum(bilateral_shift(), unilateral_shift())
left = embed_summand(unit(0), 0)
right = embed_summand(unit(0), 1)
print("left summand shifts freely:   W e_(0,0) =", W.apply(left))
print("adjoint drops at the boundary: W* e_(1,0) =", W.adjoint().apply(right))
print("lower bound of the sum on window 8:", round(lower_bound_estimate(W, 8), 6))
