"""A packing with obtuse intersection angles whose flow degenerates a face in finite time.

Run: python3 demos/singularity_demo.py
"""

import os

from ricciflow import FlowProblem, integrate
from ricciflow.meshio import read_cps

path = os.path.join(os.path.dirname(__file__), "..", "tests", "data", "adversarial.cps")
s, packing = read_cps(path)
tr = integrate(FlowProblem(s, packing, t_end=1.0))
print(f"termination: {tr.termination} after {tr.steps} accepted steps")
sg = tr.singularity
v = sg.violation
print(f"t = {sg.t:.6f}: face {v.face} with vertices {v.vertices}")
print(f"  sides {tuple(round(x, 6) for x in v.lengths)}, triangle margin {v.margin:.2e}")
print(f"  last valid radii {sg.last_valid.round(6)}")
print(f"  rejected stage radii {sg.rejected.round(6)}")
