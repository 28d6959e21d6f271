"""Local embeddability test at mesh vertices.

Run: python3 demos/embeddability_demo.py
"""

import numpy as np

from ricciflow import build_surface, check_surface, check_vertex, lengths_from_embedding, shapes
from ricciflow.mesh import LengthAssignment

p, f = shapes.hexagonal_pillow(0.0)
s = build_surface(f)
r = check_vertex(s, lengths_from_embedding(p, s), 0)
print(f"flat 6-valent vertex: embeddable = {r.embeddable}, A0 - 2 pi = {r.a0 - 2 * np.pi:.1e}")

s = build_surface(shapes.heptagon_saddle())
r = check_vertex(s, LengthAssignment(np.ones(s.n_edges)), 0)
print(f"7-valent saddle: embeddable = {r.embeddable}, A0 = {r.a0:.4f} (2 pi = {2 * np.pi:.4f})")
for w in r.witnesses:
    print(f"  witness {w.check}: neighbours {w.neighbours}, {w.value:.4f} > {w.bound:.4f}")

p, f = shapes.icosahedron()
s = build_surface(f)
reports = check_surface(s, lengths_from_embedding(p, s))
print(f"icosahedron: {sum(r.embeddable for r in reports.values())}/{len(reports)} vertices pass, "
      f"max A0 = {max(r.a0 for r in reports.values()):.4f}")
