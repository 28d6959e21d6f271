"""Closed triangulated surfaces and edge-length assignments on them."""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    CoincidentVertices,
    DanglingVertex,
    DegenerateFace,
    InvalidLengths,
    MissingEdgeLength,
    NonManifold,
    NonOrientable,
)

EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"
BACKGROUNDS = (EUCLIDEAN, HYPERBOLIC)

TRIANGLE_EPS = 1e-12


def check_background(background):
    if background not in BACKGROUNDS:
        raise ValueError(f"unknown background geometry {background!r}")
    return background


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


class TriangulatedSurface:
    """Immutable combinatorics of a closed, oriented triangle mesh.

    Do not instantiate directly; use :func:`build_surface`.

    Attributes
    ----------
    n_vertices : int
    faces : (F, 3) int array, consistently oriented
    edges : (E, 2) int array of ``(min, max)`` pairs in lexicographic order
    face_edges : (F, 3) int array; ``face_edges[f, k]`` is the edge opposite
        corner ``k`` of face ``f``
    edge_faces : (E, 2) int array
    links : tuple of int arrays; ``links[v]`` lists the neighbours of ``v``
        in cyclic order following the face orientation
    """

    def __init__(self, n_vertices, faces, edges, face_edges, edge_faces,
                 vertex_faces, links):
        self.n_vertices = int(n_vertices)
        self.faces = _frozen(faces)
        self.edges = _frozen(edges)
        self.face_edges = _frozen(face_edges)
        self.edge_faces = _frozen(edge_faces)
        self.vertex_faces = tuple(_frozen(f) for f in vertex_faces)
        self.links = tuple(_frozen(l) for l in links)
        self._edge_index = {(int(a), int(b)): k for k, (a, b) in enumerate(edges)}

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_edges(self):
        return len(self.edges)

    def edge_index(self, i, j):
        """Index of the edge joining ``i`` and ``j`` (order irrelevant)."""
        key = (i, j) if i < j else (j, i)
        try:
            return self._edge_index[key]
        except KeyError:
            raise KeyError(f"no edge between {i} and {j}") from None

    def has_edge(self, i, j):
        key = (i, j) if i < j else (j, i)
        return key in self._edge_index

    def vertex_edges(self, v):
        return np.array([self.edge_index(v, int(u)) for u in self.links[v]])

    def degree(self, v):
        return len(self.links[v])

    def star_faces(self, v):
        """Faces around ``v`` ordered like ``links[v]``.

        Entry ``k`` is the face containing ``links[v][k]`` and
        ``links[v][k + 1]``.
        """
        link = self.links[v]
        n = len(link)
        out = []
        for k in range(n):
            a, b = int(link[k]), int(link[(k + 1) % n])
            for f in self.vertex_faces[v]:
                face = self.faces[f]
                if a in face and b in face:
                    out.append(int(f))
                    break
        return np.array(out)

    def __repr__(self):
        return (f"TriangulatedSurface(V={self.n_vertices}, E={self.n_edges}, "
                f"F={self.n_faces})")


def _orient(faces, n_vertices):
    """Flip faces so that every shared edge is traversed in opposite directions."""
    faces = [list(f) for f in faces]
    directed = {}
    for fi, (a, b, c) in enumerate(faces):
        for u, w in ((a, b), (b, c), (c, a)):
            directed.setdefault((min(u, w), max(u, w)), []).append(fi)

    seen = [False] * len(faces)
    for start in range(len(faces)):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        while queue:
            fi = queue.popleft()
            a, b, c = faces[fi]
            for u, w in ((a, b), (b, c), (c, a)):
                for gj in directed[(min(u, w), max(u, w))]:
                    if gj == fi:
                        continue
                    g = faces[gj]
                    # same direction u->w inside g means inconsistent winding
                    same = any(g[k] == u and g[(k + 1) % 3] == w for k in range(3))
                    if not seen[gj]:
                        if same:
                            faces[gj] = [g[0], g[2], g[1]]
                        seen[gj] = True
                        queue.append(gj)
                    elif same:
                        raise NonOrientable("surface is not orientable")
    return np.array(faces, dtype=np.int64).reshape(-1, 3)


def build_surface(faces, n_vertices=None):
    """Validate a face list and build a :class:`TriangulatedSurface`.

    ``faces`` is a sequence of vertex-index triples over ``0..V-1``.
    Winding is normalised to agree with the first face of each component.
    """
    faces = np.asarray(faces, dtype=np.int64)
    if faces.ndim != 2 or faces.shape[1] != 3 or len(faces) == 0:
        raise NonManifold("need a nonempty list of vertex triples")
    if faces.min() < 0:
        raise ValueError("vertex indices must be nonnegative")
    V = int(faces.max()) + 1 if n_vertices is None else int(n_vertices)
    if faces.max() >= V:
        raise ValueError("face refers to vertex beyond n_vertices")

    for f in faces:
        if len(set(f.tolist())) != 3:
            raise DegenerateFace(f"face {tuple(f.tolist())} repeats a vertex")
    keys = {tuple(sorted(f.tolist())) for f in faces}
    if len(keys) != len(faces):
        raise DegenerateFace("duplicate faces")

    used = np.zeros(V, dtype=bool)
    used[faces.ravel()] = True
    if not used.all():
        raise DanglingVertex(f"vertex {int(np.flatnonzero(~used)[0])} is in no face")

    edge_faces = {}
    for fi, (a, b, c) in enumerate(faces.tolist()):
        for u, w in ((b, c), (c, a), (a, b)):
            edge_faces.setdefault((min(u, w), max(u, w)), []).append(fi)
    for e, fs in edge_faces.items():
        if len(fs) != 2:
            raise NonManifold(f"edge {e} belongs to {len(fs)} faces")

    faces = _orient(faces, V)

    edges = np.array(sorted(edge_faces), dtype=np.int64)
    eidx = {(int(a), int(b)): k for k, (a, b) in enumerate(edges)}
    face_edges = np.empty_like(faces)
    ef = np.empty((len(edges), 2), dtype=np.int64)
    fill = np.zeros(len(edges), dtype=np.int64)
    for fi, (a, b, c) in enumerate(faces.tolist()):
        for k, (u, w) in enumerate(((b, c), (c, a), (a, b))):
            e = eidx[(min(u, w), max(u, w))]
            face_edges[fi, k] = e
            ef[e, fill[e]] = fi
            fill[e] += 1

    vertex_faces = [[] for _ in range(V)]
    succ = [dict() for _ in range(V)]
    for fi, (a, b, c) in enumerate(faces.tolist()):
        for v, x, y in ((a, b, c), (b, c, a), (c, a, b)):
            vertex_faces[v].append(fi)
            succ[v][x] = y

    links = []
    for v in range(V):
        nxt = succ[v]
        start = min(nxt)
        cycle = [start]
        u = nxt[start]
        while u != start:
            cycle.append(u)
            u = nxt[u]
            if len(cycle) > len(nxt):
                break
        if len(cycle) != len(nxt):
            raise NonManifold(f"link of vertex {v} is not a single cycle")
        links.append(np.array(cycle, dtype=np.int64))

    surf = TriangulatedSurface(V, faces, edges, face_edges, ef,
                               [np.array(f, dtype=np.int64) for f in vertex_faces],
                               links)
    _check_connected(surf)
    return surf


def _check_connected(s):
    seen = np.zeros(s.n_vertices, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for u in s.links[v]:
            if not seen[u]:
                seen[u] = True
                stack.append(int(u))
    if not seen.all():
        raise NonManifold("surface is not connected")


def euler_characteristic(s):
    return s.n_vertices - s.n_edges + s.n_faces


def genus(s):
    return (2 - euler_characteristic(s)) // 2


@dataclass(frozen=True)
class LengthAssignment:
    """Edge lengths aligned with ``surface.edges``."""

    lengths: np.ndarray
    background: str = EUCLIDEAN

    def __post_init__(self):
        check_background(self.background)
        lengths = np.array(self.lengths, dtype=float)
        if lengths.ndim != 1:
            raise ValueError("lengths must be one-dimensional")
        if not np.all(np.isfinite(lengths)) or np.any(lengths <= 0):
            raise InvalidLengths("edge lengths must be finite and strictly positive")
        lengths.setflags(write=False)
        object.__setattr__(self, "lengths", lengths)

    @classmethod
    def from_mapping(cls, s, mapping, background=EUCLIDEAN):
        """Build from ``{(i, j): length}``; keys may be in either order."""
        norm = {(min(i, j), max(i, j)): float(v) for (i, j), v in mapping.items()}
        out = np.empty(s.n_edges)
        for k, (a, b) in enumerate(s.edges.tolist()):
            try:
                out[k] = norm[(a, b)]
            except KeyError:
                raise MissingEdgeLength(f"no length for edge ({a}, {b})") from None
        return cls(out, background)

    def length(self, s, i, j):
        return float(self.lengths[s.edge_index(i, j)])

    def scaled(self, factor):
        return LengthAssignment(self.lengths * factor, self.background)


def _check_aligned(s, l):
    if len(l.lengths) != s.n_edges:
        raise MissingEdgeLength(
            f"{len(l.lengths)} lengths given for {s.n_edges} edges")


def face_sides(s, lengths):
    """(F, 3) array; column ``k`` is the side opposite corner ``k``."""
    return np.asarray(lengths)[s.face_edges]


def face_margins(s, l):
    """Relative triangle-inequality slack ``1 - max / (sum of other two)`` per face."""
    _check_aligned(s, l)
    sides = face_sides(s, l.lengths)
    longest = sides.max(axis=1)
    others = sides.sum(axis=1) - longest
    return 1.0 - longest / others


def validate_lengths(s, l, eps=TRIANGLE_EPS):
    """Indices of faces whose longest side is ``>= (sum of others) * (1 - eps)``."""
    _check_aligned(s, l)
    sides = face_sides(s, l.lengths)
    longest = sides.max(axis=1)
    others = sides.sum(axis=1) - longest
    return np.flatnonzero(longest >= others * (1.0 - eps)).tolist()


def require_valid(s, l, eps=TRIANGLE_EPS):
    bad = validate_lengths(s, l, eps)
    if bad:
        raise InvalidLengths(
            f"{len(bad)} face(s) violate the triangle inequality, first: face {bad[0]}",
            bad)


def lengths_from_embedding(positions, s):
    """Euclidean edge lengths of a mesh with given vertex positions."""
    p = np.asarray(positions, dtype=float)
    if p.ndim != 2 or len(p) != s.n_vertices:
        raise ValueError("need one position per vertex")
    d = np.linalg.norm(p[s.edges[:, 0]] - p[s.edges[:, 1]], axis=1)
    if np.any(d == 0):
        k = int(np.flatnonzero(d == 0)[0])
        a, b = s.edges[k]
        raise CoincidentVertices(f"vertices {a} and {b} coincide")
    return LengthAssignment(d, EUCLIDEAN)
