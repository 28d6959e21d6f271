"""Metric quadruples, embedding curvature and Wald-Berestovskii vertex curvature.

The embedding curvature of four points is the curvature ``kappa`` of the
model surface S_kappa they embed in isometrically. Away from the flat case
it is a root of the gauge determinant ``det(cos(sqrt(kappa) d_ij))``
(``cosh(sqrt(-kappa) d_ij)`` for negative kappa), which we solve with a
logarithmic sign scan followed by bisection.

The 4x4 gauge determinant is evaluated through its Schur complement with
respect to the first point, written in versine form and divided by
``kappa**3``. The resulting function

    h(kappa) = det(N(kappa)),  N_ij = q_0i + q_0j - q_ij - kappa q_0i q_0j,
    q_ij = (1 - cos(sqrt(kappa) d_ij)) / kappa

is smooth through ``kappa = 0`` where it equals the Euclidean Gram
determinant ``D / 8`` (D = Cayley-Menger determinant), and has the same
nonzero roots as the gauge determinant. Evaluating the 4x4 determinant
directly near ``kappa = 0`` cancels away every significant digit.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from ._trig import model_angle, slack
from .curvature import face_angles
from .errors import (
    AmbiguousRoot,
    DomainExceeded,
    InvalidQuadruple,
    InvalidTriangle,
    NoAdmissibleRoot,
    SphericalDomain,
    StarTooSmall,
    ZeroKappa,
)
from .mesh import HYPERBOLIC

PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# relative slack accepted on triangle inequalities and on the spherical domain
TRIANGLE_TOL = 1e-10
STRAIGHT_EPS = 1e-12


@dataclass(frozen=True)
class MetricQuadruple:
    """Four points given by their symmetric 4x4 distance matrix ``d``."""

    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        if d.shape != (4, 4):
            raise InvalidQuadruple("distance matrix must be 4x4")
        if not np.allclose(d, d.T, rtol=0, atol=0) or np.any(np.diag(d) != 0):
            raise InvalidQuadruple("distance matrix must be symmetric with zero diagonal")
        off = d[np.triu_indices(4, 1)]
        if np.any(~np.isfinite(off)) or np.any(off <= 0):
            raise InvalidQuadruple("distances must be finite and positive")
        scale = off.max()
        for i, j, k in itertools.permutations(range(4), 3):
            if d[i, j] > d[i, k] + d[k, j] + TRIANGLE_TOL * scale:
                raise InvalidQuadruple(f"triangle inequality fails for d[{i},{j}]")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_distances(cls, d12, d13, d14, d23, d24, d34):
        d = np.zeros((4, 4))
        for (i, j), x in zip(PAIRS, (d12, d13, d14, d23, d24, d34)):
            d[i, j] = d[j, i] = x
        return cls(d)

    @property
    def distances(self):
        return tuple(float(self.d[i, j]) for i, j in PAIRS)

    @property
    def scale(self):
        return float(self.d.max())

    def permuted(self, order):
        order = list(order)
        return MetricQuadruple(self.d[np.ix_(order, order)])

    def scaled(self, factor):
        return MetricQuadruple(self.d * factor)


def cayley_menger(q):
    """5x5 Cayley-Menger determinant; equals ``288 * volume**2`` of the tetrahedron."""
    cm = np.ones((5, 5))
    cm[0, 0] = 0.0
    cm[1:, 1:] = q.d ** 2
    return float(np.linalg.det(cm))


def _q(d, kappa):
    """``(1 - cos(sqrt(kappa) d)) / kappa``, continued analytically to kappa <= 0."""
    y = 0.5 * np.sqrt(abs(kappa)) * d
    if kappa > 0:
        ratio = np.sinc(y / np.pi)
    elif kappa < 0:
        with np.errstate(invalid="ignore"):
            ratio = np.where(y > 0, np.sinh(y) / np.where(y > 0, y, 1.0), 1.0)
    else:
        ratio = np.ones_like(d)
    return 0.5 * d ** 2 * ratio ** 2


def _reduced_matrix(d, kappa):
    qm = _q(d, kappa)
    q0 = qm[0, 1:]
    return q0[:, None] + q0[None, :] - qm[1:, 1:] - kappa * np.outer(q0, q0)


def normalized_gauge(q, kappa):
    """``gauge_determinant(q, kappa) / kappa**3``; continuous, equals D/8 at 0."""
    return float(np.linalg.det(_reduced_matrix(q.d, kappa)))


def _gauge_and_scale(q, kappa):
    """Normalised gauge value and its Hadamard bound (product of row norms)."""
    n = _reduced_matrix(q.d, kappa)
    return float(np.linalg.det(n)), float(np.prod(np.linalg.norm(n, axis=1)))


def _check_spherical_domain(q, kappa):
    if kappa > 0 and np.sqrt(kappa) * q.scale > np.pi * (1 + 1e-12):
        raise DomainExceeded(f"sqrt(kappa) * max d = {np.sqrt(kappa) * q.scale:.6g} > pi")


def gauge_determinant(q, kappa):
    """4x4 determinant of ``cos(sqrt(k) d_ij)`` (k > 0) or ``cosh(sqrt(-k) d_ij)`` (k < 0)."""
    if kappa == 0:
        raise ZeroKappa("the gauge determinant is defined for nonzero kappa only")
    _check_spherical_domain(q, kappa)
    return kappa ** 3 * normalized_gauge(q, kappa)


def gauge_matrix(q, kappa):
    """The plain 4x4 gauge matrix (for inspection; see :func:`gauge_determinant`)."""
    if kappa == 0:
        raise ZeroKappa("the gauge matrix is defined for nonzero kappa only")
    if kappa > 0:
        return np.cos(np.sqrt(kappa) * q.d)
    return np.cosh(np.sqrt(-kappa) * q.d)


def spherical_minors(q, kappa):
    """The four order-3 principal minors of ``cos(sqrt(kappa) d)``."""
    g = np.cos(np.sqrt(kappa) * q.d)
    return np.array([np.linalg.det(g[np.ix_(idx, idx)])
                     for idx in itertools.combinations(range(4), 3)])


@dataclass
class KappaSolverOptions:
    flat_eps: float = 1e-10       # |D| <= flat_eps * scale**6 counts as flat (D ~ volume^2)
    grid_lo: float = 1e-8         # smallest |kappa| * scale**2 on the scan grid
    grid_hi: float = 1e4          # largest |kappa| * scale**2 on the scan grid
    nodes: int = 200              # scan nodes per sign
    rel_width: float = 1e-12      # bisection stops at this relative bracket width
    minor_tol: float = 1e-10      # spherical principal minors must be >= -minor_tol
    require_unique: bool = False


@dataclass(frozen=True)
class EmbeddingCurvatureResult:
    kappa: float
    branch: str  # "flat" | "spherical" | "hyperbolic"
    residual: float
    roots: tuple = field(default=())


def _bisect(fn, lo, hi, flo, rel_width):
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if abs(hi - lo) <= rel_width * max(abs(lo), abs(hi)) or mid in (lo, hi):
            break
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# a sign change counts only if one bracket end clears this fraction of the
# Hadamard bound; below it the determinant is rounding noise
SIGNIFICANCE = 1e-11


def _scan_roots(q, nodes, f0, s0, rel_width):
    """Bisect every significant sign change of the normalised gauge along ``0, nodes...``."""
    fn = lambda k: normalized_gauge(q, k)
    roots = []
    prev_k, prev_f, prev_sig = 0.0, f0, abs(f0) > SIGNIFICANCE * s0
    for k in nodes:
        fk, sk = _gauge_and_scale(q, k)
        sig = abs(fk) > SIGNIFICANCE * sk
        if (fk > 0) != (prev_f > 0) and (sig or prev_sig) and fk != 0 and prev_f != 0:
            roots.append(_bisect(fn, prev_k, k, prev_f, rel_width))
        prev_k, prev_f, prev_sig = k, fk, sig
    return roots


def embedding_curvature(q, opts=None):
    """Embedding curvature of a metric quadruple.

    Returns the admissible root of smallest ``|kappa|``; all admissible
    roots are listed in ``result.roots``.
    """
    opts = opts or KappaSolverOptions()
    ell = q.scale
    D = cayley_menger(q)
    if abs(D) <= opts.flat_eps * ell ** 6:
        return EmbeddingCurvatureResult(0.0, "flat", D, (0.0,))

    f0, s0 = _gauge_and_scale(q, 0.0)
    grid = np.logspace(np.log10(opts.grid_lo), np.log10(opts.grid_hi), opts.nodes) / ell ** 2
    cap = (np.pi / ell) ** 2
    sph_nodes = np.append(grid[grid < cap], cap)
    hyp_nodes = -grid

    roots = []
    for k in _scan_roots(q, hyp_nodes, f0, s0, opts.rel_width):
        roots.append((k, "hyperbolic"))
    for k in _scan_roots(q, sph_nodes, f0, s0, opts.rel_width):
        if np.all(spherical_minors(q, k) >= -opts.minor_tol):
            roots.append((k, "spherical"))
    if not roots:
        raise NoAdmissibleRoot("gauge determinant has no admissible sign change")
    roots.sort(key=lambda r: abs(r[0]))
    if opts.require_unique and len(roots) > 1:
        raise AmbiguousRoot(f"{len(roots)} admissible roots", [r[0] for r in roots])
    kappa, branch = roots[0]
    return EmbeddingCurvatureResult(float(kappa), branch, gauge_determinant(q, kappa),
                                    tuple(float(r[0]) for r in roots))


def comparison_angle(a, b, opp, kappa):
    """Apex angle between sides ``a`` and ``b`` of the model triangle in S_kappa."""
    if min(a, b, opp) < 0 or min(a, b) == 0:
        raise InvalidTriangle("sides adjacent to the apex must be positive")
    s, sa, sb, sc = slack(opp, a, b)
    if min(sa, sb, sc) < -TRIANGLE_TOL * s:
        raise InvalidTriangle(f"sides ({a}, {b}, {opp}) violate the triangle inequality")
    if kappa > 0 and np.sqrt(kappa) * 2 * s > 2 * np.pi * (1 + TRIANGLE_TOL):
        raise SphericalDomain("perimeter exceeds 2 pi / sqrt(kappa)")
    return float(model_angle(opp, a, b, kappa))


def _others(apex):
    return [i for i in range(4) if i != apex]


def v_kappa(q, apex, kappa):
    """Sum of the three comparison angles at ``apex`` (an index 0..3)."""
    j, l, m = _others(apex)
    d = q.d
    return (comparison_angle(d[apex, j], d[apex, l], d[j, l], kappa)
            + comparison_angle(d[apex, j], d[apex, m], d[j, m], kappa)
            + comparison_angle(d[apex, l], d[apex, m], d[l, m], kappa))


def region_curvature_at_least(quadruples, kappa, tol=1e-9):
    """Check ``V_kappa <= 2 pi`` at every apex of every quadruple.

    Returns ``(True, None)`` or ``(False, (quadruple_index, apex, V_kappa))``
    for the first failure.
    """
    if len(quadruples) == 0:
        raise ValueError("need at least one quadruple")
    for n, q in enumerate(quadruples):
        for apex in range(4):
            v = v_kappa(q, apex, kappa)
            if v > 2 * np.pi + tol:
                return False, (n, apex, v)
    return True, None


# -- vertex stars ----------------------------------------------------------

def _chord(r1, r2, angle, hyperbolic):
    if hyperbolic:
        ch = np.cosh(r1) * np.cosh(r2) - np.sinh(r1) * np.sinh(r2) * np.cos(angle)
        return float(np.arccosh(max(ch, 1.0)))
    return float(np.sqrt(max(r1 * r1 + r2 * r2 - 2 * r1 * r2 * np.cos(angle), 0.0)))


def star_distances(s, l, v, angles=None):
    """Intrinsic distances inside the closed star of ``v``.

    Returns ``(neighbours, D)`` where ``D`` is a square matrix over
    ``[v] + neighbours``: shortest paths through the star unfolded into the
    plane (or the hyperbolic plane), made of straight pieces between star
    vertices.
    """
    link = s.links[v]
    n = len(link)
    if n < 3:
        raise StarTooSmall(f"vertex {v} has only {n} neighbours")
    hyperbolic = l.background == HYPERBOLIC
    if angles is None:
        angles = face_angles(s, l)
    faces = s.star_faces(v)
    gaps = np.array([angles[f][list(s.faces[f]).index(v)] for f in faces])
    rad = np.array([l.length(s, v, int(u)) for u in link])

    big = np.inf
    D = np.full((n + 1, n + 1), big)
    np.fill_diagonal(D, 0.0)
    D[0, 1:] = D[1:, 0] = rad
    for p in range(n):
        acc = 0.0
        k = p
        for step in range(1, n):
            acc += gaps[k]
            k = (k + 1) % n
            if acc >= np.pi:
                break
            if _segment_inside(rad, gaps, p, k, acc, hyperbolic):
                d = _chord(rad[p], rad[k], acc, hyperbolic)
                D[p + 1, k + 1] = min(D[p + 1, k + 1], d)
                D[k + 1, p + 1] = D[p + 1, k + 1]
    # Floyd-Warshall on a graph of at most a few dozen nodes
    for k in range(n + 1):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    return link.copy(), D


def _segment_inside(rad, gaps, p, q, span, hyperbolic):
    n = len(rad)
    chart = np.tanh(rad) if hyperbolic else rad
    rp, rq = chart[p], chart[q]
    acc = 0.0
    k = p
    while True:
        acc += gaps[k]
        k = (k + 1) % n
        if k == q:
            return True
        t = rp * rq * np.sin(span) / (rp * np.sin(acc) + rq * np.sin(span - acc))
        if t > chart[k] * (1 + 1e-12):
            return False


def star_quadruples(s, l, v, angles=None):
    """All metric quadruples ``(v, a, b, c)`` over triples of neighbours of ``v``."""
    link, D = star_distances(s, l, v, angles)
    out = []
    for j, k, m in itertools.combinations(range(1, len(link) + 1), 3):
        idx = [0, j, k, m]
        out.append(((int(link[j - 1]), int(link[k - 1]), int(link[m - 1])),
                    MetricQuadruple(D[np.ix_(idx, idx)])))
    return out


def _star_triples(D):
    n = len(D) - 1
    tri = np.array(list(itertools.combinations(range(1, n + 1), 3)))
    j, k, m = tri[:, 0], tri[:, 1], tri[:, 2]
    return tri, (D[0, j], D[0, k], D[0, m], D[j, k], D[j, m], D[k, m])


def _apex_sums(sides, kappa):
    a, b, c, djk, djm, dkm = sides
    return (model_angle(djk, a, b, kappa) + model_angle(djm, a, c, kappa)
            + model_angle(dkm, b, c, kappa))


def vertex_wald_curvature(s, l, v, tol=1e-12, angles=None):
    """``sup{kappa : V_kappa(v) <= 2 pi}`` over all quadruples in the star of ``v``.

    ``V_kappa`` is nondecreasing in kappa, so the supremum is found by
    bisection. On the spherical side kappa is capped where the largest
    comparison triangle reaches perimeter ``2 pi / sqrt(kappa)``; if the
    condition still holds there the cap is returned. Cone points whose
    star holds two geodesically straight comparison triangles at ``v``
    (typical for equilateral saddles) return ``-inf``.
    """
    _, D = star_distances(s, l, v, angles)
    _, sides = _star_triples(D)
    ell = D.max()
    a, b, c, djk, djm, dkm = sides
    perim = np.max(np.concatenate([a + b + djk, a + c + djm, b + c + dkm]))
    k_hi = (2 * np.pi / perim) ** 2

    def holds(kappa):
        return np.max(_apex_sums(sides, kappa)) <= 2 * np.pi + tol

    # comparison triangles with opp = a + b stay straight for every kappa; two
    # of them at one apex already sum to 2 pi, and the third angle is positive
    straight = ((djk >= (a + b) * (1 - STRAIGHT_EPS)).astype(int)
                + (djm >= (a + c) * (1 - STRAIGHT_EPS))
                + (dkm >= (b + c) * (1 - STRAIGHT_EPS)))
    if np.any(straight >= 2):
        return float("-inf")
    if holds(k_hi):
        return float(k_hi)
    k_lo = -1.0 / ell ** 2
    while not holds(k_lo):
        k_lo *= 2
        if k_lo < -1e12 / ell ** 2:
            # two straight (angle pi) comparison triangles share the apex:
            # no model surface of finite curvature fits
            return float("-inf")
    if holds(0.0):
        k_lo = 0.0
    else:
        k_hi = 0.0
    for _ in range(200):
        mid = 0.5 * (k_lo + k_hi)
        if k_hi - k_lo <= 1e-13 / ell ** 2 or mid in (k_lo, k_hi):
            break
        if holds(mid):
            k_lo = mid
        else:
            k_hi = mid
    return float(k_lo)


def surface_wald_curvature(s, l):
    angles = face_angles(s, l)
    return np.array([vertex_wald_curvature(s, l, v, angles=angles)
                     for v in range(s.n_vertices)])
