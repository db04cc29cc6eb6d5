"""Fourfold splits under double-commuting pairs.

Two operators that commute with each other and with each other's adjoints
induce commuting range-limit projections Q1, Q2, and every vector splits
into four orthogonal parts along

    I = Q1 Q2 + Q1 (I - Q2) + (I - Q1) Q2 + (I - Q1)(I - Q2),

tagged inf_inf / inf_s / s_inf / s_s by which factor keeps or loses them.

    python3 demos/05_fourfold_pairs.py
"""

import numpy as np

from woldkit import fourfold, tensor_pair, unit
from woldkit.bandop import bergman, constant, dirichlet
from woldkit.seqspace import FinVec
from woldkit.wold2d import PART_TAGS


def show(res):
    for tag in PART_TAGS:
        print(f"  {tag:8s} norm {res.parts[tag].norm():.6f}")
    print(f"  residual {res.residual:.3e}  cross terms {res.cross_terms:.3e}")


print("== both factors pure shifts: the s_s corner carries everything ==")
T1, T2 = tensor_pair(constant(1.0), constant(1.0))
show(fourfold(T1, T2, unit((0, 0))))

print()
print("== both factors bilateral: the inf_inf corner carries everything ==")
U1, U2 = tensor_pair(constant(1.0), constant(1.0), "int", "int")
show(fourfold(U1, U2, unit((0, 0))))

print()
print("== one of each: the mixed corner ==")
M1, M2 = tensor_pair(constant(1.0), constant(1.0), "int", "nat")
show(fourfold(M1, M2, unit((0, 0))))

print()
print("== weighted factors on a random grid vector ==")
B1, B2 = tensor_pair(bergman(), dirichlet())
rng = np.random.default_rng(7)
amps = rng.standard_normal((6, 6))
h = FinVec({(i, j): complex(amps[i, j]) for i in range(6) for j in range(6)})
h = h * (1.0 / h.norm())
res = fourfold(B1, B2, h)
show(res)
print("  (both factors are pure shifts here, so the s_s corner wins)")

print()
print("== a pair that fails to double-commute is flagged, not rejected ==")
from woldkit import bergman_shift, dirichlet_shift
res = fourfold(bergman_shift(), dirichlet_shift(), unit(0) + unit(2))
print("flags:", res.flags[0][:72], "...")
print("measured commutation residual:", round(res.double_commuting, 4))
