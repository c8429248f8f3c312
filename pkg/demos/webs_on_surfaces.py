"""SL_2 and SL_3 connections, web traces, lamination counts and skein reduction."""

import numpy as np

from dimerlab.corpus import corpus_holes, make_annulus, make_grid, ring_face
from dimerlab.multiweb import (
    MatrixLocalSystem,
    annulus_coefficients,
    annulus_oracle,
    block_det,
    pants_coefficients,
    trace_sum,
)
from dimerlab.oracle import enumerate_multiwebs
from dimerlab.skein import is_reduced, skein_reduce

rng = np.random.default_rng(0)
g = make_grid(2, 4)
for n in (2, 3):
    phi = MatrixLocalSystem.random(g, n, rng)
    print(f"SL{n}: det of block Kasteleyn = {block_det(g, phi)}, trace sum = {trace_sum(g, phi)}")

ann = make_annulus(3, 4)
hole = ring_face(ann, 0)
print("annulus, loops by winding count:", annulus_coefficients(ann, hole), "brute force:", annulus_oracle(ann, hole))

pants = make_grid(3, 4)
h1, h2 = corpus_holes("pants", pants)
print("pair of pants coefficients:", pants_coefficients(pants, h1, h2))

g = make_grid(3, 4)
webs = enumerate_multiwebs(g, 3)
reducible = [m for m in webs if not is_reduced(g, m)]
m = max(reducible, key=lambda w: sum(x == 1 for x in w))
print(f"{len(webs)} 3-webs on the 3x4 grid, {len(reducible)} reducible; reducing {m}:")
for w, c in skein_reduce(g, m):
    print(f"  {c:+d} x {w}")
