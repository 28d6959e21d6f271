"""Local isometric embeddability test for polyhedral vertices.

For a vertex ``v`` with neighbours ``v_j`` the test evaluates, over every
triple of neighbours and with distances measured inside the star of ``v``:

* ``A0(v) <= 2 pi`` where ``A0`` is the largest Euclidean apex sum ``V_0(v)``;
* the triangle inequality between Euclidean comparison angles at ``v``;
* ``V_kappa(v) <= 2 pi`` at the requested ``kappa``.
"""

from dataclasses import dataclass, field

import numpy as np

from ._trig import model_angle
from .curvature import face_angles
from .mesh import require_valid
from .wald import _star_triples, star_distances

TOL = 1e-9


def _first_max(x):
    """Index of the first entry within rounding of the maximum (stable under rescaling)."""
    m = x.max()
    return int(np.flatnonzero(x >= m - 1e-12 * max(1.0, abs(m)))[0])


@dataclass(frozen=True)
class Witness:
    check: str            # "a0" | "angle_triangle" | "v_kappa"
    neighbours: tuple     # vertex ids of the offending triple
    value: float          # left-hand side of the failed inequality
    bound: float          # right-hand side (before tolerance)


@dataclass(frozen=True)
class VertexEmbeddabilityReport:
    vertex: int
    kappa: float
    a0: float
    a0_triple: tuple
    angle_triangle_ok: bool
    a0_ok: bool
    vk_ok: bool
    max_v_kappa: float
    witnesses: list = field(default_factory=list)

    @property
    def embeddable(self):
        return self.a0_ok and self.angle_triangle_ok and self.vk_ok


def _vertex_report(s, l, v, kappa, tol, angles):
    link, D = star_distances(s, l, v, angles)
    tri, (a, b, c, djk, djm, dkm) = _star_triples(D)
    ids = np.asarray(link)[tri - 1]

    # Euclidean comparison angles at v for the pairs (j,k), (j,m), (k,m)
    ajk = model_angle(djk, a, b, 0.0)
    ajm = model_angle(djm, a, c, 0.0)
    akm = model_angle(dkm, b, c, 0.0)
    v0 = ajk + ajm + akm
    worst = _first_max(v0)
    a0 = float(v0.max())
    witnesses = []

    a0_ok = a0 <= 2 * np.pi + tol
    if not a0_ok:
        witnesses.append(Witness("a0", tuple(int(x) for x in ids[worst]), a0, 2 * np.pi))

    # each angle must not exceed the sum of the other two
    pair = np.stack([ajk, ajm, akm], axis=1)
    excess = 2 * pair - v0[:, None]
    bad = np.argwhere(excess > tol)
    angle_triangle_ok = len(bad) == 0
    if not angle_triangle_ok:
        i, k = (int(x) for x in bad[np.argmax(excess[bad[:, 0], bad[:, 1]])])
        val = float(pair[i, k])
        witnesses.append(Witness("angle_triangle", tuple(int(x) for x in ids[i]),
                                 val, float(v0[i] - val)))

    if kappa == 0:
        vk = v0
    else:
        vk = (model_angle(djk, a, b, kappa) + model_angle(djm, a, c, kappa)
              + model_angle(dkm, b, c, kappa))
    worst_k = _first_max(vk)
    vk_max = float(vk.max())
    vk_ok = vk_max <= 2 * np.pi + tol
    if not vk_ok:
        witnesses.append(Witness("v_kappa", tuple(int(x) for x in ids[worst_k]),
                                 vk_max, 2 * np.pi))

    return VertexEmbeddabilityReport(
        vertex=int(v), kappa=float(kappa), a0=a0,
        a0_triple=tuple(int(x) for x in ids[worst]),
        angle_triangle_ok=bool(angle_triangle_ok), a0_ok=bool(a0_ok), vk_ok=vk_ok,
        max_v_kappa=vk_max, witnesses=witnesses)


def check_vertex(s, l, v, kappa=0.0, tol=TOL):
    """Embeddability report for vertex ``v`` (raises StarTooSmall below 3 neighbours)."""
    require_valid(s, l)
    return _vertex_report(s, l, v, kappa, tol, face_angles(s, l, check=False))


def check_surface(s, l, kappa=0.0, tol=TOL):
    """Reports for every vertex, keyed and ordered by vertex id."""
    require_valid(s, l)
    angles = face_angles(s, l, check=False)
    return {v: _vertex_report(s, l, v, kappa, tol, angles) for v in range(s.n_vertices)}
