"""Angular defect on closed meshes and its total.

Run: python3 demos/curvature_demo.py
"""

import numpy as np

from ricciflow import build_surface, curvature, euler_characteristic, lengths_from_embedding
from ricciflow import shapes
from ricciflow.mesh import LengthAssignment

# Embedded solids: lengths come from vertex positions.
for name, (pos, faces) in {"tetrahedron": shapes.tetrahedron(),
                           "icosahedron": shapes.icosahedron(),
                           "icosphere(3)": shapes.icosphere(3)}.items():
    s = build_surface(faces)
    field = curvature(s, lengths_from_embedding(pos, s))
    chi = euler_characteristic(s)
    print(f"{name:13s} V={s.n_vertices:4d} chi={chi:+d}  sum K = {field.total:.12f}"
          f"  2 pi chi = {2 * np.pi * chi:.12f}")

# Abstract surfaces: any valid edge lengths give the same total.
rng = np.random.default_rng(0)
for name, faces in {"torus 3x3": shapes.torus_grid(), "genus 2": shapes.genus2_octagon()}.items():
    s = build_surface(faces)
    l = LengthAssignment(1 + 0.1 * rng.uniform(-1, 1, s.n_edges))
    field = curvature(s, l)
    print(f"{name:13s} V={s.n_vertices:4d} chi={euler_characteristic(s):+d}  sum K = "
          f"{field.total:.12f}  (range of K_i: {field.defects.min():+.3f} .. "
          f"{field.defects.max():+.3f})")
