"""Embedding curvature of metric quadruples and Wald curvature at mesh vertices.

Run: python3 demos/wald_demo.py
"""

import numpy as np

from ricciflow import MetricQuadruple, build_surface, embedding_curvature, lengths_from_embedding
from ricciflow import shapes, v_kappa, vertex_wald_curvature
from ricciflow.mesh import LengthAssignment

# Four vertices of a regular tetrahedron inscribed in the unit sphere, with geodesic distances.
d = np.arccos(-1 / 3)
q = MetricQuadruple.from_distances(d, d, d, d, d, d)
res = embedding_curvature(q)
print(f"spherical tetrahedron: kappa = {res.kappa:.10f} ({res.branch})")

# A unit square is planar.
s2 = np.sqrt(2)
square = MetricQuadruple.from_distances(1, s2, 1, 1, s2, 1)
res = embedding_curvature(square)
print(f"unit square: kappa = {res.kappa} ({res.branch})")

# V_kappa grows with kappa; the quadruple lies in a region of curvature >= kappa
# while every apex sum stays below 2 pi.
for kappa in (-1.0, 0.0, 1.0, 2.0):
    print(f"  square V_kappa at apex 0, kappa = {kappa:+.1f}: {v_kappa(square, 0, kappa):.6f}")

# Vertex Wald curvature: positive on convex solids, zero on flat stars, -inf at the saddle.
p, f = shapes.tetrahedron()
s = build_surface(f)
print(f"tetrahedron vertex 0: {vertex_wald_curvature(s, lengths_from_embedding(p, s), 0):.6f}")
s = build_surface(shapes.torus_grid())
print(f"flat torus vertex 0: {vertex_wald_curvature(s, LengthAssignment(np.ones(s.n_edges)), 0):.2e}")
s = build_surface(shapes.heptagon_saddle())
print(f"7-valent saddle vertex 0: {vertex_wald_curvature(s, LengthAssignment(np.ones(s.n_edges)), 0)}")
