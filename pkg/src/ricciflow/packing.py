"""Circle-packing metrics: radii per vertex, intersection angles per edge."""

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    AngleOutOfRange,
    HyperbolicScaleUnsupported,
    MissingAngle,
    MissingRadius,
    NonPositiveScale,
    PackingError,
)
from .mesh import EUCLIDEAN, HYPERBOLIC, LengthAssignment, check_background

# rounding slack on the [0, pi/2] range check
_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class CirclePacking:
    """Radii ``r_i`` (aligned with vertices) and angles ``phi`` (aligned with edges).

    Intersection angles must lie in ``[0, pi/2]``. ``obtuse=True`` widens
    the range to ``[0, pi]``; such packings may produce faces violating the
    triangle inequality and are meant for singularity experiments.
    """

    radii: np.ndarray
    phi: np.ndarray
    background: str = EUCLIDEAN
    obtuse: bool = False

    def __post_init__(self):
        check_background(self.background)
        r = np.array(self.radii, dtype=float)
        phi = np.array(self.phi, dtype=float)
        if r.ndim != 1 or phi.ndim != 1:
            raise PackingError("radii and phi must be one-dimensional")
        if np.any(~np.isfinite(r)) or np.any(r <= 0):
            raise PackingError("radii must be finite and positive")
        upper = np.pi if self.obtuse else np.pi / 2
        if np.any(~np.isfinite(phi)) or np.any(phi < -_ANGLE_TOL) or np.any(phi > upper + _ANGLE_TOL):
            raise AngleOutOfRange(f"intersection angles must lie in [0, {upper:.6g}]")
        r.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def uniform(cls, s, radius=1.0, phi=0.0, background=EUCLIDEAN):
        return cls(np.full(s.n_vertices, float(radius)), np.full(s.n_edges, float(phi)),
                   background)

    @classmethod
    def from_mappings(cls, s, radii, phi, background=EUCLIDEAN, obtuse=False):
        """Build from ``{vertex: r}`` and ``{(i, j): phi}`` dictionaries."""
        r = np.empty(s.n_vertices)
        for v in range(s.n_vertices):
            if v not in radii:
                raise MissingRadius(f"no radius for vertex {v}")
            r[v] = radii[v]
        norm = {(min(i, j), max(i, j)): float(x) for (i, j), x in phi.items()}
        p = np.empty(s.n_edges)
        for k, (a, b) in enumerate(s.edges.tolist()):
            if (a, b) not in norm:
                raise MissingAngle(f"no intersection angle for edge ({a}, {b})")
            p[k] = norm[(a, b)]
        return cls(r, p, background, obtuse)

    def with_radii(self, radii):
        return replace(self, radii=radii)


def edge_lengths(radii, phi, edges, background=EUCLIDEAN):
    """Vectorised edge lengths for radii ``radii`` on ``edges`` (shape (E, 2))."""
    ri = radii[edges[:, 0]]
    rj = radii[edges[:, 1]]
    half = np.sin(0.5 * phi) ** 2
    if background == EUCLIDEAN:
        # l^2 = r_i^2 + r_j^2 + 2 r_i r_j cos(phi) = (r_i + r_j)^2 - 4 r_i r_j sin^2(phi/2)
        sq = (ri + rj) ** 2 - 4.0 * ri * rj * half
        return np.sqrt(np.maximum(sq, 0.0))
    # cosh l = cosh r_i cosh r_j + sinh r_i sinh r_j cos(phi), in half-length form
    sh2 = np.sinh(0.5 * (ri + rj)) ** 2 - np.sinh(ri) * np.sinh(rj) * half
    return 2.0 * np.arcsinh(np.sqrt(np.maximum(sh2, 0.0)))


def lengths_from_packing(p, s):
    """Edge lengths induced by the packing; validity is not checked here."""
    if len(p.radii) != s.n_vertices:
        raise MissingRadius(f"{len(p.radii)} radii for {s.n_vertices} vertices")
    if len(p.phi) != s.n_edges:
        raise MissingAngle(f"{len(p.phi)} angles for {s.n_edges} edges")
    return LengthAssignment(edge_lengths(p.radii, p.phi, s.edges, p.background),
                            p.background)


def scale_packing(p, factor):
    if not factor > 0:
        raise NonPositiveScale(f"scale must be positive, got {factor}")
    if p.background == HYPERBOLIC:
        raise HyperbolicScaleUnsupported("hyperbolic lengths are not homogeneous in the radii")
    return replace(p, radii=p.radii * factor)
