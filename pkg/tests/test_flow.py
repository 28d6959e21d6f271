import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ricciflow import shapes
from ricciflow.errors import InitialStateInvalid, InsufficientSamples, InvalidLengths
from ricciflow.flow import (BACKWARD, CONVERGED, REACHED_T_END, SINGULARITY, FlowOptions,
                            FlowProblem, convergence_report, detect_singularity, flow_rhs,
                            integrate, roundtrip)
from ricciflow.mesh import build_surface, validate_lengths
from ricciflow.packing import CirclePacking, lengths_from_packing

TIGHT = FlowOptions(rtol=1e-12, atol=1e-12)
# mpmath: exp(-0.2 pi)
R_AT_01 = 0.533488091091103232568368232564
ADVERSARIAL_R = np.array([1.31, 0.25, 1.49, 0.23])
ADVERSARIAL_PHI = np.array([2.38, 1.61, 2.92, 0.21, 2.64, 0.21])


@pytest.fixture(scope="module")
def tet():
    return build_surface(shapes.tetrahedron()[1])


def uniform(s, r=1.0):
    return CirclePacking.uniform(s, r, 0.0)


def perturbed(s, seed, amp=0.1):
    rng = np.random.default_rng(seed)
    return CirclePacking(1 + amp * rng.uniform(-1, 1, s.n_vertices), np.zeros(s.n_edges))


# -- right-hand side -------------------------------------------------------

def test_rhs_uniform_normalized_is_zero(tet):
    assert np.allclose(flow_rhs(np.ones(4), FlowProblem(tet, uniform(tet), normalized=True)),
                       0, atol=1e-14)


def test_rhs_uniform_unnormalized(tet):
    assert np.allclose(flow_rhs(np.ones(4), FlowProblem(tet, uniform(tet))), -2 * np.pi,
                       rtol=1e-14)


def test_rhs_backward_flips(tet):
    r = np.array([1.0, 1.3, 0.8, 1.1])
    for norm in (False, True):
        fwd = flow_rhs(r, FlowProblem(tet, uniform(tet), normalized=norm))
        bwd = flow_rhs(r, FlowProblem(tet, uniform(tet), BACKWARD, normalized=norm))
        assert np.array_equal(bwd, -fwd)


def test_rhs_rejects_invalid_state(tet):
    p = CirclePacking(ADVERSARIAL_R, ADVERSARIAL_PHI, obtuse=True)
    with pytest.raises(InvalidLengths):
        flow_rhs(np.full(4, 0.5), FlowProblem(tet, p))


def test_fixed_points_of_symmetric_states():
    for mesh in (shapes.icosahedron()[1], shapes.octahedron()[1], shapes.tetrahedron()[1]):
        s = build_surface(mesh)
        for bg in ("euclidean", "hyperbolic"):
            p = CirclePacking.uniform(s, 0.4, 0.3, bg)
            assert np.allclose(flow_rhs(p.radii, FlowProblem(s, p, normalized=True)), 0,
                               atol=1e-13)


# -- integration -----------------------------------------------------------

def test_uniform_normalized_stays_fixed(tet):
    tr = integrate(FlowProblem(tet, uniform(tet), normalized=True, t_end=1.0))
    assert tr.termination in (REACHED_T_END, CONVERGED)
    assert np.all(tr.radii == 1.0)


def test_closed_form_tetrahedron(tet):
    opts = FlowOptions(rtol=1e-12, atol=1e-12, stop_on_convergence=False)
    tr = integrate(FlowProblem(tet, uniform(tet), t_end=0.1, options=opts))
    assert tr.termination == REACHED_T_END
    assert tr.final.t == 0.1
    assert np.allclose(tr.final.radii, R_AT_01, rtol=0, atol=1e-6)
    # the scalar ODE is solved to much better than the stated tolerance
    assert np.allclose(tr.final.radii, R_AT_01, rtol=1e-10)


def test_perturbed_tetrahedron_converges(tet):
    tr = integrate(FlowProblem(tet, perturbed(tet, 1), normalized=True, t_end=50, options=TIGHT))
    assert tr.termination == CONVERGED
    assert tr.final.spread < 1e-8
    assert np.all(np.diff(tr.spreads) <= 0)


def test_invalid_initial_state(tet):
    p = CirclePacking(np.full(4, 0.5), ADVERSARIAL_PHI, obtuse=True)
    assert validate_lengths(tet, lengths_from_packing(p, tet))
    with pytest.raises(InitialStateInvalid):
        integrate(FlowProblem(tet, p))


def test_sample_times_increase(tet):
    for direction in ("forward", "backward"):
        tr = integrate(FlowProblem(tet, perturbed(tet, 2), direction, True, 0.5))
        assert tr.times[0] == 0.0
        assert np.all(np.diff(tr.times) > 0)


def test_stride(tet):
    opts = FlowOptions(stride=3, stop_on_convergence=False)
    full = integrate(FlowProblem(tet, perturbed(tet, 3), normalized=True, t_end=2.0))
    thin = integrate(FlowProblem(tet, perturbed(tet, 3), normalized=True, t_end=2.0,
                                 options=opts))
    assert thin.steps == full.steps
    assert len(thin.samples) == 1 + full.steps // 3 + (full.steps % 3 != 0)
    assert thin.final.t == 2.0


def test_area_weighted_average(tet):
    p = perturbed(tet, 4, 0.3)
    opts = FlowOptions(average="area", rtol=1e-12, atol=1e-12)
    tr = integrate(FlowProblem(tet, p, normalized=True, t_end=30, options=opts))
    assert tr.termination == CONVERGED


def test_determinism(tet):
    runs = [integrate(FlowProblem(tet, perturbed(tet, 5), normalized=True, t_end=3.0))
            for _ in range(2)]
    assert np.array_equal(runs[0].radii, runs[1].radii)
    assert np.array_equal(runs[0].times, runs[1].times)


def test_step_halving_order(tet):
    exact = np.exp(-2 * np.pi * 0.2)
    err = []
    for h in (0.02, 0.01, 0.005):
        opts = FlowOptions(fixed_step=h, stop_on_convergence=False)
        tr = integrate(FlowProblem(tet, uniform(tet), t_end=0.2, options=opts))
        err.append(abs(tr.final.radii[0] - exact))
    order = np.log2(np.array(err[:-1]) / np.array(err[1:]))
    assert np.all(order >= 3.5)


def test_gauss_bonnet_along_flow(tet):
    tr = integrate(FlowProblem(tet, perturbed(tet, 6, 0.3), t_end=0.2))
    for smp in tr.samples:
        assert smp.curvature.total == pytest.approx(4 * np.pi, abs=1e-8)


# -- singularities ---------------------------------------------------------

def test_detect_singularity_examples(tet):
    prob = FlowProblem(tet, CirclePacking(ADVERSARIAL_R, ADVERSARIAL_PHI, obtuse=True))
    assert detect_singularity(np.ones(4), FlowProblem(tet, uniform(tet))) is None
    assert detect_singularity(ADVERSARIAL_R, prob) is None
    bad = np.full(4, 0.5)          # lengths are homogeneous: uniform radii fail for these angles
    v = detect_singularity(bad, prob)
    faces = validate_lengths(tet, lengths_from_packing(prob.packing.with_radii(bad), tet))
    assert v is not None and v.face == faces[0]
    assert tuple(tet.faces[v.face]) == v.vertices


def test_adversarial_packing_hits_singularity(tet):
    p = CirclePacking(ADVERSARIAL_R, ADVERSARIAL_PHI, obtuse=True)
    tr = integrate(FlowProblem(tet, p, t_end=2.0))
    assert tr.termination == SINGULARITY
    sg = tr.singularity
    assert sg.violation.face == 1 and set(sg.violation.vertices) == {0, 1, 3}
    assert sg.t == pytest.approx(0.149996, abs=1e-5)
    assert np.array_equal(sg.last_valid, tr.final.radii)
    assert detect_singularity(sg.last_valid, tr.problem) is None
    assert detect_singularity(sg.rejected, tr.problem) is not None


# -- round trips -----------------------------------------------------------

def test_roundtrip_examples(tet):
    assert roundtrip(FlowProblem(tet, uniform(tet)), 0.0) == 0.0
    assert roundtrip(FlowProblem(tet, uniform(tet)), 0.1) <= 1e-8
    assert roundtrip(FlowProblem(tet, perturbed(tet, 7), normalized=True), 0.5) <= 1e-6


def test_roundtrip_improves_with_tolerance(tet):
    errs = []
    for tol in (1e-6, 1e-7):
        opts = FlowOptions(rtol=tol, atol=tol)
        errs.append(roundtrip(FlowProblem(tet, perturbed(tet, 8), normalized=True,
                                          options=opts), 0.5))
    assert errs[0] / errs[1] >= 4


# -- convergence report ----------------------------------------------------

def test_report_stationary(tet):
    opts = FlowOptions(fixed_step=0.05, stop_on_convergence=False)
    tr = integrate(FlowProblem(tet, uniform(tet), normalized=True, t_end=1.0, options=opts))
    rep = convergence_report(tr)
    assert np.all(rep.spread < 1e-14)
    assert rep.corridor_ok and rep.envelope_ok
    assert np.allclose(rep.distortion, 1.0)
    assert np.isfinite(rep.fitted_rate)


def test_report_perturbed(tet):
    tr = integrate(FlowProblem(tet, perturbed(tet, 9), normalized=True, t_end=50, options=TIGHT))
    rep = convergence_report(tr)
    assert rep.fitted_rate < 0
    assert rep.corridor_ok
    assert rep.sign_case == "positive"


def test_report_needs_samples(tet):
    tr = integrate(FlowProblem(tet, uniform(tet), normalized=True, t_end=1.0))
    with pytest.raises(InsufficientSamples):
        convergence_report(tr, min_samples=len(tr.samples) + 1)


def test_genus2_hyperbolic_report(genus2):
    rng = np.random.default_rng(1)
    p = CirclePacking(0.5 * (1 + 0.1 * rng.uniform(-1, 1, genus2.n_vertices)),
                      np.zeros(genus2.n_edges), "hyperbolic")
    tr = integrate(FlowProblem(genus2, p, normalized=True, t_end=60, options=TIGHT))
    rep = convergence_report(tr)
    assert tr.termination == CONVERGED
    assert rep.fitted_rate < 0
    assert rep.sign_case == "negative"
    assert rep.envelope_ok


# -- corridor invariant ----------------------------------------------------

@settings(max_examples=15)
@given(seed=st.integers(0, 2**32 - 1), normalized=st.booleans(),
       amp=st.floats(0.0, 0.3))
def test_corridor_holds_on_generated_traces(seed, normalized, amp):
    s = build_surface(shapes.tetrahedron()[1])
    tr = integrate(FlowProblem(s, perturbed(s, seed, amp), normalized=normalized, t_end=0.3,
                               options=FlowOptions(stop_on_convergence=False, h_max=0.02)))
    assert convergence_report(tr).corridor_ok
