"""The random walk on permutations driven by dimer covers."""

from dimerlab.corpus import make_grid
from dimerlab.walk import (
    coordinate_quotient,
    group_algebra_operator,
    k4_model,
    mixing_profile,
    operator_spectrum,
    torus_walk_experiment,
    walk_model,
)

g = make_grid(2, 3)
model = walk_model(g)
op = group_algebra_operator(model, coordinate_quotient(g))
print("3x2 grid, x-coordinate quotient: group of order", op.size)
print("spectrum:", [str(x) for x in operator_spectrum(op)])
prof = mixing_profile(model, 8, coordinate_quotient(g))
print("TV distance to uniform by step:", [round(float(x), 4) for x in prof.tv], "period", prof.period)

k4 = group_algebra_operator(k4_model())
print("K4 walk transition matrix:", [[str(x) for x in row] for row in k4.transition_matrix()])

res = torus_walk_experiment(4, steps=200, trials=200, seed=0)
print("4x4 torus, mean relative winding after 200 steps:", res.mean().round(3))
print("95% confidence interval per axis:", res.confidence_interval().round(3).tolist())
