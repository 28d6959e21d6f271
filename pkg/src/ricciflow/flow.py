"""Combinatorial Ricci flow on circle packings.

The radii evolve by ``dr_i/dt = -2 K_i r_i`` (forward), with ``K_i``
replaced by ``K_i - Kbar`` for the normalised flow; the backward flow flips
the sign of the right-hand side. Intersection angles stay fixed.

Backward runs integrate their own time ``tau = -t`` forwards, so every
trace has increasing sample times starting at 0.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import rk
from .curvature import CurvatureField, _angles_from_sides, vertex_areas, vertex_defects
from .errors import InitialStateInvalid, InsufficientSamples, InvalidLengths, StepUnderflow
from .mesh import TRIANGLE_EPS, LengthAssignment, face_sides
from .packing import edge_lengths

FORWARD = "forward"
BACKWARD = "backward"

REACHED_T_END = "reached_t_end"
CONVERGED = "converged"
SINGULARITY = "singularity"
STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class FlowOptions:
    rtol: float = 1e-9
    atol: float = 1e-9
    h0: float = None
    h_min: float = 1e-12
    h_max: float = np.inf
    fixed_step: float = None     # constant step size, disables error control
    tol_conv: float = 1e-10      # spread threshold for convergence
    converge_steps: int = 3      # consecutive accepted steps below tol_conv
    stop_on_convergence: bool = True
    stride: int = 1              # record every stride-th accepted step
    average: str = "vertex"      # "vertex" or "area" weighting of Kbar
    eps_tri: float = TRIANGLE_EPS


@dataclass(frozen=True)
class FlowProblem:
    surface: object
    packing: object
    direction: str = FORWARD
    normalized: bool = False
    t_end: float = 1.0
    options: FlowOptions = field(default_factory=FlowOptions)

    def __post_init__(self):
        if self.direction not in (FORWARD, BACKWARD):
            raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
        if not self.t_end >= 0:
            raise ValueError("t_end must be nonnegative")
        if self.options.average not in ("vertex", "area"):
            raise ValueError("average must be 'vertex' or 'area'")


@dataclass(frozen=True)
class FlowSample:
    t: float
    radii: np.ndarray
    curvature: CurvatureField
    kbar: float
    lengths: np.ndarray

    @property
    def spread(self):
        return float(np.max(np.abs(self.curvature.defects - self.kbar)))


@dataclass(frozen=True)
class Violation:
    face: int
    vertices: tuple
    lengths: tuple
    margin: float


@dataclass(frozen=True)
class SingularityInfo:
    t: float
    violation: Violation
    last_valid: np.ndarray
    rejected: np.ndarray


@dataclass
class FlowTrace:
    problem: FlowProblem
    samples: list
    termination: str
    singularity: SingularityInfo = None
    steps: int = 0

    @property
    def times(self):
        return np.array([s.t for s in self.samples])

    @property
    def radii(self):
        return np.array([s.radii for s in self.samples])

    @property
    def defects(self):
        return np.array([s.curvature.defects for s in self.samples])

    @property
    def spreads(self):
        return np.array([s.spread for s in self.samples])

    @property
    def final(self):
        return self.samples[-1]


# -- evaluation ------------------------------------------------------------

def _lengths(radii, problem):
    p = problem.packing
    return edge_lengths(radii, p.phi, problem.surface.edges, p.background)


def _violations(sides, eps):
    longest = sides.max(axis=1)
    others = sides.sum(axis=1) - longest
    return np.flatnonzero(longest >= others * (1.0 - eps))


def _evaluate(radii, problem):
    """Curvature field, Kbar and lengths at ``radii``; raises InvalidLengths."""
    s = problem.surface
    if np.any(radii <= 0) or not np.all(np.isfinite(radii)):
        raise InvalidLengths("radii left the positive orthant")
    lengths = _lengths(radii, problem)
    sides = face_sides(s, lengths)
    bad = _violations(sides, problem.options.eps_tri)
    if len(bad):
        raise InvalidLengths(f"face {int(bad[0])} violates the triangle inequality", bad)
    bg = problem.packing.background
    angles = _angles_from_sides(sides, bg)
    field_ = vertex_defects(s, angles, bg)
    if problem.options.average == "area":
        w = vertex_areas(s, LengthAssignment(lengths, bg), angles)
        kbar = float(np.dot(field_.defects, w) / w.sum())
    else:
        kbar = field_.average
    return field_, kbar, lengths


def _rhs_from(field_, kbar, radii, problem):
    k = field_.defects - kbar if problem.normalized else field_.defects
    out = -2.0 * k * radii
    return -out if problem.direction == BACKWARD else out


def flow_rhs(radii, problem):
    """Time derivative of the radii for ``problem``'s flavour of the flow."""
    radii = np.asarray(radii, dtype=float)
    field_, kbar, _ = _evaluate(radii, problem)
    return _rhs_from(field_, kbar, radii, problem)


def detect_singularity(radii, problem):
    """First face (lowest index) whose induced lengths break the triangle inequality, or None."""
    radii = np.asarray(radii, dtype=float)
    s = problem.surface
    sides = face_sides(s, _lengths(radii, problem))
    bad = _violations(sides, problem.options.eps_tri)
    if not len(bad):
        return None
    f = int(bad[0])
    sd = sides[f]
    margin = 1.0 - sd.max() / (sd.sum() - sd.max())
    return Violation(f, tuple(int(v) for v in s.faces[f]), tuple(float(x) for x in sd),
                     float(margin))


def _sample(t, radii, problem):
    field_, kbar, lengths = _evaluate(radii, problem)
    return FlowSample(float(t), radii.copy(), field_, kbar, lengths)


def _drive(sample, problem):
    """Size of the curvature driving the flow: the spread when normalised, else max |K_i|."""
    if problem.normalized:
        return sample.spread
    return float(np.max(np.abs(sample.curvature.defects)))


def integrate(problem):
    """Integrate the flow from ``t = 0`` to ``problem.t_end``.

    Stops early on convergence (the driving curvature, ``max |K_i - Kbar|``
    for the normalised flow and ``max |K_i|`` otherwise, below ``tol_conv``
    for ``converge_steps`` consecutive accepted steps) or when the induced
    lengths cannot be kept valid down to the minimum step size
    (termination ``"singularity"``). Raises :class:`StepUnderflow` if the
    step size collapses for accuracy reasons alone.
    """
    opts = problem.options
    r0 = np.array(problem.packing.radii, dtype=float)
    try:
        first = _sample(0.0, r0, problem)
    except InvalidLengths as exc:
        raise InitialStateInvalid(f"initial packing is invalid: {exc}") from exc

    def fun(t, y):
        field_, kbar, _ = _evaluate(y, problem)
        return _rhs_from(field_, kbar, y, problem)

    samples = [first]
    below = 1 if _drive(first, problem) < opts.tol_conv else 0
    n_steps = 0
    last_y = r0
    termination = REACHED_T_END
    singular = None
    if opts.stop_on_convergence and below >= opts.converge_steps:
        termination = CONVERGED
    else:
        stepper = rk.steps(fun, 0.0, r0, problem.t_end, atol=opts.atol, rtol=opts.rtol,
                           h0=opts.h0, h_min=opts.h_min, h_max=opts.h_max,
                           fixed=opts.fixed_step, catch=(InvalidLengths,))
        try:
            for t, y in stepper:
                n_steps += 1
                last_y = y
                cur = _sample(t, y, problem)
                below = below + 1 if _drive(cur, problem) < opts.tol_conv else 0
                done = opts.stop_on_convergence and below >= opts.converge_steps
                if n_steps % opts.stride == 0 or done or t >= problem.t_end:
                    samples.append(cur)
                if done:
                    termination = CONVERGED
                    break
        except rk.Underflow as uf:
            if samples[-1].t != uf.t:
                samples.append(_sample(uf.t, uf.y, problem))
            if uf.last_failure is None:
                trace = FlowTrace(problem, samples, STEP_UNDERFLOW, None, n_steps)
                raise StepUnderflow(str(uf), trace) from uf
            rejected = uf.last_failure.y
            termination = SINGULARITY
            singular = SingularityInfo(float(uf.t), detect_singularity(rejected, problem)
                                       or _nonpositive(rejected), uf.y.copy(), rejected.copy())
    return FlowTrace(problem, samples, termination, singular, n_steps)


def _nonpositive(radii):
    v = int(np.argmin(radii))
    return Violation(-1, (v,), (float(radii[v]),), float("-inf"))


def roundtrip(problem, t_mid):
    """Flow to ``t_mid`` and back with the reversed flow; max relative radius error."""
    if t_mid == 0:
        return 0.0
    opts = replace(problem.options, stop_on_convergence=False)
    fwd = integrate(replace(problem, t_end=t_mid, options=opts))
    if fwd.termination != REACHED_T_END:
        raise RuntimeError(f"forward leg ended with {fwd.termination}")
    back_dir = BACKWARD if problem.direction == FORWARD else FORWARD
    back_pack = problem.packing.with_radii(fwd.final.radii)
    bwd = integrate(replace(problem, packing=back_pack, direction=back_dir,
                            t_end=t_mid, options=opts))
    if bwd.termination != REACHED_T_END:
        raise RuntimeError(f"backward leg ended with {bwd.termination}")
    r0 = np.asarray(problem.packing.radii)
    return float(np.max(np.abs(bwd.final.radii - r0) / r0))


# -- diagnostics -----------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceReport:
    fitted_rate: float
    times: np.ndarray
    spread: np.ndarray
    distortion: np.ndarray        # (samples, edges) ratios l(t)/l(0)
    k_max: float
    envelope_rate: float          # 2 pi chi / V, the exponent of the curvature envelope
    sign_case: str                # "negative" | "zero" | "positive", from the sign of chi
    c_metric: float               # smallest C with 1/C <= l(t)/l(0) <= C
    c_prime: float                # envelope constant fitted on the first half of the trace
    corridor_ok: bool
    corridor_violations: int
    envelope_ok: bool
    max_log_distortion_rate: float


ZERO_CURVATURE = 1e-9


def _envelope_need(t, K, centre, rate, case):
    """Per-sample smallest C' for the curvature envelope of the given sign case."""
    e = np.exp(rate * t)
    dev = K - centre[:, None]
    if case == "negative":
        return np.max(np.abs(dev), axis=1) / e
    if case == "positive":
        # -C' e^{Kt} <= K_i(t) <= K + C' e^{Kt}
        return np.maximum(np.max(-K, axis=1), np.max(dev, axis=1)).clip(min=0) / e
    # zero case: -C'/(1 + C' t) <= K_i(t) <= C'
    upper = np.max(K, axis=1).clip(min=0)
    m = np.max(-K, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = np.where(m <= 0, 0.0, np.where(m * t < 1, m / (1 - m * t), np.inf))
    return np.maximum(upper, lower)


def convergence_report(trace, min_samples=10, envelope_atol=0.0):
    """Convergence rate and distortion diagnostics for a flow trace."""
    samples = trace.samples
    if len(samples) < min_samples:
        raise InsufficientSamples(f"need {min_samples} samples, trace has {len(samples)}")
    t = trace.times
    spread = trace.spreads
    K = trace.defects

    tail = slice(len(t) // 2, None)
    tt, ss = t[tail], spread[tail]
    keep = ss > 0
    if keep.sum() >= 2 and np.ptp(tt[keep]) > 0:
        rate = float(np.polyfit(tt[keep], np.log(ss[keep]), 1)[0])
    else:
        rate = 0.0

    L = np.array([s.lengths for s in samples])
    ratio = L / L[0]
    k_max = float(np.max(np.abs(K)))
    lo = np.exp(-k_max * t)[:, None] * (1 - 1e-12)
    hi = np.exp(k_max * t)[:, None] * (1 + 1e-12)
    violations = int(np.sum((ratio < lo) | (ratio > hi)))
    logr = np.abs(np.log(ratio))
    with np.errstate(invalid="ignore", divide="ignore"):
        rates = np.where(t[:, None] > 0, logr / t[:, None], 0.0)

    surf = trace.problem.surface
    chi = surf.n_vertices - surf.n_edges + surf.n_faces
    case = "zero" if chi == 0 else "negative" if chi < 0 else "positive"
    env_rate = 2 * np.pi * chi / surf.n_vertices
    centre = np.array([s.kbar for s in samples])
    need = _envelope_need(t, K, centre, env_rate, case)
    fit = need[: max(len(need) // 2, 1)]
    c_prime = float(fit.max())
    envelope_ok = bool(np.isfinite(c_prime)
                       and np.all(need <= c_prime * (1 + 1e-12) + envelope_atol))
    return ConvergenceReport(
        fitted_rate=rate, times=t, spread=spread, distortion=ratio, k_max=k_max,
        envelope_rate=env_rate, sign_case=case,
        c_metric=float(np.max(np.maximum(ratio, 1 / ratio))),
        c_prime=c_prime, corridor_ok=violations == 0, corridor_violations=violations,
        envelope_ok=envelope_ok,
        max_log_distortion_rate=float(rates.max()))
