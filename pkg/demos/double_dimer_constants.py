"""Double-dimer loops: the magnetic determinant and the Z^2 loop densities."""

import math

from dimerlab.corpus import make_grid
from dimerlab.double_dimer import (
    CLOSED_FORMS,
    magnetic_partition,
    verify_magnetic_identity,
    z2_loop_density,
    z2_pair_probability,
)

g = make_grid(2, 4)
poly = magnetic_partition(g)
print("det K(q) det K(1/q) on the 2x4 grid:", poly)
print("matches the loop/area sum:", verify_magnetic_identity(g)[0], " at q=1:", poly(1))

print("P(two parallel dimers on a square of Z^2) =", z2_pair_probability([((0, 0), (1, 0)), ((0, 1), (1, 1))]))
for k in (1, 2, 3):
    label, value = CLOSED_FORMS[k].get("derived", CLOSED_FORMS[k]["printed"])
    print(f"area {k}: {z2_loop_density(k):.12f}   closed form {label} = {value:.12f}")
label, value = CLOSED_FORMS[3]["printed"]
print(f"commonly quoted area-3 form {label} = {value:.6f} (negative, so not a probability)")
print("area 2 check:", math.isclose(z2_loop_density(2), (math.pi - 1) ** 2 / (2 * math.pi**4), rel_tol=1e-9))
