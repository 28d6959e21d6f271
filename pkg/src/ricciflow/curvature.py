"""Face angles and angular-defect curvature on Euclidean or hyperbolic triangles."""

from dataclasses import dataclass

import numpy as np

from ._trig import model_angle, slack
from .errors import NumericalDomain
from .mesh import EUCLIDEAN, HYPERBOLIC, face_sides, require_valid

# relative rounding slack tolerated before an angle is declared out of domain
DOMAIN_TOL = 1e-10


@dataclass(frozen=True)
class CurvatureField:
    defects: np.ndarray
    background: str
    total: float
    average: float
    area: float = 0.0  # total hyperbolic area; 0 for Euclidean


def _angles_from_sides(sides, background):
    a, b, c = sides[:, 0], sides[:, 1], sides[:, 2]
    s, sa, sb, sc = slack(a, b, c)
    worst = np.minimum(np.minimum(sa, sb), sc)
    if np.any(worst < -DOMAIN_TOL * s):
        f = int(np.argmin(worst / s))
        raise NumericalDomain(f"face {f}: side lengths outside the triangle domain")
    kappa = 0.0 if background == EUCLIDEAN else -1.0
    return np.stack([model_angle(a, b, c, kappa),
                     model_angle(b, c, a, kappa),
                     model_angle(c, a, b, kappa)], axis=1)


def face_angles(s, l, check=True):
    """Corner angles, shape (F, 3); entry ``[f, k]`` is the angle at ``s.faces[f, k]``.

    The hyperbolic case uses curvature -1.
    """
    if check:
        require_valid(s, l)
    return _angles_from_sides(face_sides(s, l.lengths), l.background)


def vertex_defects(s, angles, background=EUCLIDEAN):
    """Angular defect ``2 pi - sum of corner angles`` at every vertex."""
    angles = np.asarray(angles)
    sums = np.bincount(s.faces.ravel(), weights=angles.ravel(), minlength=s.n_vertices)
    defects = 2.0 * np.pi - sums
    area = 0.0
    if background == HYPERBOLIC:
        area = float(np.sum(np.pi - angles.sum(axis=1)))
    total = float(defects.sum())
    return CurvatureField(defects, background, total, total / s.n_vertices, area)


def curvature(s, l, check=True):
    """Shortcut for ``vertex_defects(s, face_angles(s, l))``."""
    return vertex_defects(s, face_angles(s, l, check), l.background)


def average_curvature(field):
    return field.average


def face_areas(s, l, angles=None):
    """Per-face area: Heron for Euclidean, angle deficit for hyperbolic (curvature -1)."""
    if l.background == HYPERBOLIC:
        if angles is None:
            angles = face_angles(s, l, check=False)
        return np.pi - angles.sum(axis=1)
    sides = face_sides(s, l.lengths)
    _, sa, sb, sc = slack(sides[:, 0], sides[:, 1], sides[:, 2])
    half = sa + sb + sc
    return np.sqrt(np.maximum(half * sa * sb * sc, 0.0))


def vertex_areas(s, l, angles=None):
    """One third of the area of the faces around each vertex."""
    fa = face_areas(s, l, angles)
    return np.bincount(s.faces.ravel(), weights=np.repeat(fa / 3.0, 3),
                       minlength=s.n_vertices)
