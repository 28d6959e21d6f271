"""Reading and writing OFF, OBJ and ``.cps`` (circle-packing surface) files.

``.cps`` is a line-oriented text format::

    cps 1
    background euclidean
    vertices 4
    faces 4
    f 0 1 2
    ...
    radii
    r 0 1.0
    ...
    phi
    phi 0 1 0.0
    ...

Blank lines and ``#`` comments are ignored. An optional line
``phi-range obtuse`` after the background admits intersection angles up
to pi (singularity experiments).
"""

import os

import numpy as np

from .errors import MeshFormatError
from .mesh import BACKGROUNDS, build_surface
from .packing import CirclePacking

FLOAT = "%.17g"


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for num, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield num, line


def _floats(tokens, num, path):
    try:
        return [float(x) for x in tokens]
    except ValueError:
        raise MeshFormatError(f"{path}:{num}: expected numbers, got {' '.join(tokens)!r}") from None


def _ints(tokens, num, path):
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise MeshFormatError(f"{path}:{num}: expected integers, got {' '.join(tokens)!r}") from None


def _triangle(idx, num, path):
    if len(idx) != 3:
        raise MeshFormatError(f"{path}:{num}: only triangular faces are supported "
                              f"(got {len(idx)} vertices)")
    return idx


# -- OFF -------------------------------------------------------------------

def read_off(path):
    """Return ``(positions, faces)`` from an OFF file."""
    it = _lines(path)
    try:
        num, head = next(it)
    except StopIteration:
        raise MeshFormatError(f"{path}: empty file") from None
    tokens = head.split()
    if tokens[0] != "OFF":
        raise MeshFormatError(f"{path}:{num}: missing OFF header")
    tokens = tokens[1:]
    if not tokens:
        try:
            num, line = next(it)
        except StopIteration:
            raise MeshFormatError(f"{path}: missing counts line") from None
        tokens = line.split()
    counts = _ints(tokens, num, path)
    if len(counts) < 2:
        raise MeshFormatError(f"{path}:{num}: expected 'V F [E]'")
    nv, nf = counts[:2]
    rows = list(it)
    if len(rows) < nv + nf:
        raise MeshFormatError(f"{path}: expected {nv} vertices and {nf} faces")
    pos = np.array([_floats(line.split()[:3], n, path) for n, line in rows[:nv]])
    faces = []
    for n, line in rows[nv:nv + nf]:
        tok = _ints(line.split(), n, path)
        if not tok or len(tok) < tok[0] + 1:
            raise MeshFormatError(f"{path}:{n}: malformed face")
        faces.append(_triangle(tok[1:tok[0] + 1], n, path))
    return pos.reshape(nv, 3), np.array(faces, dtype=int).reshape(nf, 3)


def write_off(path, positions, faces):
    positions = np.asarray(positions, dtype=float)
    faces = np.asarray(faces, dtype=int)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("OFF\n")
        fh.write(f"{len(positions)} {len(faces)} 0\n")
        for p in positions:
            fh.write(" ".join(FLOAT % x for x in p) + "\n")
        for f in faces:
            fh.write("3 " + " ".join(str(int(i)) for i in f) + "\n")


# -- OBJ -------------------------------------------------------------------

def read_obj(path):
    """Return ``(positions, faces)`` from an OBJ file; other records are skipped."""
    pos, faces = [], []
    for num, line in _lines(path):
        tag, *rest = line.split()
        if tag == "v":
            pos.append(_floats(rest[:3], num, path))
        elif tag == "f":
            idx = _ints([tok.split("/")[0] for tok in rest], num, path)
            # negative indices count back from the latest vertex
            idx = [i - 1 if i > 0 else len(pos) + i for i in idx]
            faces.append(_triangle(idx, num, path))
    if not faces:
        raise MeshFormatError(f"{path}: no faces")
    return np.array(pos, dtype=float).reshape(-1, 3), np.array(faces, dtype=int)


def write_obj(path, positions, faces):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in np.asarray(positions, dtype=float):
            fh.write("v " + " ".join(FLOAT % x for x in p) + "\n")
        for f in np.asarray(faces, dtype=int):
            fh.write("f " + " ".join(str(int(i) + 1) for i in f) + "\n")


def read_mesh(path):
    """Dispatch on the extension (``.off`` or ``.obj``)."""
    ext = os.path.splitext(path)[1].lower()
    if ext == ".off":
        return read_off(path)
    if ext == ".obj":
        return read_obj(path)
    raise MeshFormatError(f"{path}: unknown mesh extension {ext!r}")


# -- CPS -------------------------------------------------------------------

def read_cps(path):
    """Return ``(surface, packing)`` from a ``.cps`` file."""
    lines = list(_lines(path))
    if not lines or lines[0][1].split() != ["cps", "1"]:
        raise MeshFormatError(f"{path}: missing 'cps 1' header")
    pos = 1

    def expect(keyword, nargs):
        nonlocal pos
        if pos >= len(lines):
            raise MeshFormatError(f"{path}: unexpected end of file, expected {keyword!r}")
        num, line = lines[pos]
        tok = line.split()
        if tok[0] != keyword or len(tok) != nargs + 1:
            raise MeshFormatError(f"{path}:{num}: expected '{keyword}' with {nargs} field(s)")
        pos += 1
        return num, tok[1:]

    num, (background,) = expect("background", 1)
    if background not in BACKGROUNDS:
        raise MeshFormatError(f"{path}:{num}: unknown background {background!r}")
    obtuse = False
    if pos < len(lines) and lines[pos][1].split()[0] == "phi-range":
        num, (rng,) = expect("phi-range", 1)
        if rng not in ("acute", "obtuse"):
            raise MeshFormatError(f"{path}:{num}: phi-range must be 'acute' or 'obtuse'")
        obtuse = rng == "obtuse"
    num, (nv,) = expect("vertices", 1)
    nv = _ints([nv], num, path)[0]
    num, (nf,) = expect("faces", 1)
    nf = _ints([nf], num, path)[0]
    faces = []
    for _ in range(nf):
        num, tok = expect("f", 3)
        faces.append(_ints(tok, num, path))
    s = build_surface(np.array(faces, dtype=int).reshape(-1, 3), nv)

    expect("radii", 0)
    radii = {}
    while pos < len(lines) and lines[pos][1].startswith("r "):
        num, tok = expect("r", 2)
        radii[_ints(tok[:1], num, path)[0]] = _floats(tok[1:], num, path)[0]
    expect("phi", 0)
    phi = {}
    while pos < len(lines):
        num, tok = expect("phi", 3)
        i, j = _ints(tok[:2], num, path)
        phi[(i, j)] = _floats(tok[2:], num, path)[0]
    return s, CirclePacking.from_mappings(s, radii, phi, background, obtuse)


def write_cps(path, s, packing):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_cps(s, packing))


def format_cps(s, packing):
    out = ["cps 1", f"background {packing.background}"]
    if packing.obtuse:
        out.append("phi-range obtuse")
    out.append(f"vertices {s.n_vertices}")
    out.append(f"faces {s.n_faces}")
    out += [f"f {a} {b} {c}" for a, b, c in s.faces.tolist()]
    out.append("radii")
    out += [f"r {v} {FLOAT % r}" for v, r in enumerate(packing.radii)]
    out.append("phi")
    out += [f"phi {a} {b} {FLOAT % x}" for (a, b), x in zip(s.edges.tolist(), packing.phi)]
    return "\n".join(out) + "\n"
