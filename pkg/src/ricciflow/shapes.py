"""Standard closed meshes used throughout the tests and demos.

Each builder returns ``(positions, faces)`` when the shape has a natural
embedding in R^3, or only ``faces`` for purely combinatorial ones.
"""

import numpy as np


def tetrahedron():
    """Regular tetrahedron with unit edges."""
    p = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    p /= np.sqrt(8.0)
    faces = [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]]
    return p, np.array(faces)


def octahedron():
    p = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0],
                  [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float)
    faces = [[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
             [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]]
    return p, np.array(faces)


def icosahedron():
    """Regular icosahedron with unit edges."""
    t = (1.0 + np.sqrt(5.0)) / 2.0
    p = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float) / 2.0
    faces = [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]
    return p, np.array(faces)


def icosphere(levels):
    """Geodesic sphere: icosahedron split ``levels`` times into 4, projected to the unit sphere.

    Each original face ends up as ``4**levels`` triangles.
    """
    p, faces = icosahedron()
    verts = [v / np.linalg.norm(v) for v in p]
    faces = [tuple(f) for f in faces]
    for _ in range(levels):
        cache = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return np.array(verts), np.array(faces)


def torus_grid(m=3, n=3):
    """Triangulated flat torus on an ``m`` x ``n`` grid (``m, n >= 3``).

    All vertices have degree 6, so unit edge lengths give a flat metric.
    """
    if m < 3 or n < 3:
        raise ValueError("grid torus needs m, n >= 3")

    def vid(i, j):
        return (i % m) * n + (j % n)

    faces = []
    for i in range(m):
        for j in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            faces += [[a, b, c], [a, c, d]]
    return np.array(faces)


def torus_embedded(m=8, n=6, R=2.0, r=0.7):
    """Grid torus of revolution embedded in R^3."""
    faces = torus_grid(m, n)
    u = 2 * np.pi * np.arange(m) / m
    v = 2 * np.pi * np.arange(n) / n
    uu, vv = np.meshgrid(u, v, indexing="ij")
    x = (R + r * np.cos(vv)) * np.cos(uu)
    y = (R + r * np.cos(vv)) * np.sin(uu)
    z = r * np.sin(vv)
    return np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1), faces


def genus2_octagon(subdivisions=3, rings=1):
    """Genus-2 surface from an octagon with sides glued as a b a^-1 b^-1 c d c^-1 d^-1.

    Every octagon side is cut into ``subdivisions`` segments (at least 3,
    otherwise the gluing creates multi-edges). The disk interior is filled
    with ``rings`` concentric rings of ``8 * subdivisions`` vertices and a
    centre vertex. With the defaults: V = 34, E = 108, F = 72.
    """
    if subdivisions < 3:
        raise ValueError("need at least 3 segments per side")
    k = subdivisions
    nb = 8 * k
    # boundary position p = side * k + step, step 0 is the side's start corner
    word = [("a", 1), ("b", 1), ("a", -1), ("b", -1),
            ("c", 1), ("d", 1), ("c", -1), ("d", -1)]
    interior = {}
    boundary = []
    next_id = 1  # 0 is the single corner class
    for side, (label, sign) in enumerate(word):
        for step in range(k):
            if step == 0:
                boundary.append(0)
                continue
            # position along the label's own direction
            t = step if sign == 1 else k - step
            key = (label, t)
            if key not in interior:
                interior[key] = next_id
                next_id += 1
            boundary.append(interior[key])
    ring_ids = []
    for _ in range(rings):
        ring_ids.append(list(range(next_id, next_id + nb)))
        next_id += nb
    centre = next_id

    faces = []
    outer = boundary
    for ring in ring_ids:
        for i in range(nb):
            j = (i + 1) % nb
            faces.append([outer[i], outer[j], ring[j]])
            faces.append([outer[i], ring[j], ring[i]])
        outer = ring
    for i in range(nb):
        faces.append([outer[i], outer[(i + 1) % nb], centre])
    return np.array(faces)


def hexagonal_pillow(height=0.0):
    """Hexagonal bipyramid; ``height=0`` gives two flat unit hexagons glued at the rim.

    Vertices 0 and 7 are the apexes; with ``height=0`` both are flat
    6-valent vertices surrounded by unit equilateral triangles.
    """
    ang = np.arange(6) * np.pi / 3
    ring = np.stack([np.cos(ang), np.sin(ang), np.zeros(6)], axis=1)
    p = np.vstack([[0, 0, height], ring, [0, 0, -height]])
    faces = []
    for i in range(6):
        a, b = 1 + i, 1 + (i + 1) % 6
        faces.append([0, a, b])
        faces.append([7, b, a])
    return p, np.array(faces)


def heptagon_saddle():
    """Sphere with exactly one 7-valent vertex (vertex 0); every other degree is <= 6.

    With unit edge lengths vertex 0 is an equilateral saddle with defect -pi/3.
    """
    ring = list(range(1, 8))
    a, b = 8, 9
    faces = [[0, ring[i], ring[(i + 1) % 7]] for i in range(7)]
    # cap the heptagon from below with two interior vertices
    for i in range(3):
        faces.append([a, ring[i + 1], ring[i]])
    for i in range(3, 7):
        faces.append([b, ring[(i + 1) % 7], ring[i]])
    faces.append([a, ring[3], b])
    faces.append([a, b, ring[0]])
    return np.array(faces)
