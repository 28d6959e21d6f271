"""Command-line front end: ``curvature``, ``flow``, ``wald`` and ``embed-check``.

Exit codes: 0 success (including converged and reached_t_end), 2 flow
singularity, 3 invalid input, 4 numerical failure.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import errors
from .curvature import curvature
from .embed import check_surface
from .flow import (BACKWARD, FORWARD, SINGULARITY, FlowOptions, FlowProblem,
                   convergence_report, integrate)
from .mesh import (LengthAssignment, build_surface, euler_characteristic, face_margins,
                   lengths_from_embedding)
from .meshio import FLOAT, format_cps, read_cps, read_mesh
from .packing import lengths_from_packing
from .wald import MetricQuadruple, embedding_curvature, vertex_wald_curvature

EXIT_OK = 0
EXIT_SINGULARITY = 2
EXIT_INVALID = 3
EXIT_NUMERIC = 4

INPUT_KINDS = ("off", "obj", "cps")


def fmt(x):
    return FLOAT % x


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str = None
    kind: str = None
    output: str = None
    normalized: bool = False
    backward: bool = False
    t_end: float = 1.0
    tol: float = None
    kappa: float = 0.0
    stride: int = 1
    distances: tuple = None

    def __post_init__(self):
        if self.input is not None and not self.input:
            raise ValueError("input path is empty")
        if self.output is not None and not self.output:
            raise ValueError("output path is empty")
        if self.kind is not None and self.kind not in INPUT_KINDS:
            raise ValueError(f"unsupported input kind {self.kind!r}")
        if not self.t_end >= 0:
            raise ValueError("--t-end must be nonnegative")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("--tol must be positive")
        if self.stride < 1:
            raise ValueError("--stride must be at least 1")


def input_kind(path):
    ext = os.path.splitext(path)[1].lower().lstrip(".")
    if ext not in INPUT_KINDS:
        raise errors.MeshFormatError(f"{path}: expected one of .off, .obj, .cps")
    return ext


def load_lengths(cfg):
    """``(surface, lengths)`` from a mesh file (embedding) or a ``.cps`` packing."""
    if cfg.kind == "cps":
        s, packing = read_cps(cfg.input)
        return s, lengths_from_packing(packing, s)
    pos, faces = read_mesh(cfg.input)
    s = build_surface(faces, len(pos))
    return s, lengths_from_embedding(pos, s)


def _emit(cfg, text):
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# -- commands --------------------------------------------------------------

def cmd_curvature(cfg):
    s, l = load_lengths(cfg)
    field = curvature(s, l)
    rows = [("vertex", "K")]
    rows += [(v, fmt(k)) for v, k in enumerate(field.defects)]
    rows += [("total", fmt(field.total)), ("average", fmt(field.average)),
             ("chi", euler_characteristic(s))]
    _emit(cfg, _csv(rows))
    return EXIT_OK


def _trace_rows(trace):
    s = trace.problem.surface
    n = s.n_vertices
    head = (["t"] + [f"r_{i}" for i in range(n)] + [f"K_{i}" for i in range(n)]
            + ["spread", "min_face_margin"])
    rows = [head]
    for smp in trace.samples:
        margin = face_margins(s, LengthAssignment(smp.lengths, trace.problem.packing.background))
        rows.append([fmt(smp.t)] + [fmt(x) for x in smp.radii]
                    + [fmt(x) for x in smp.curvature.defects]
                    + [fmt(smp.spread), fmt(float(margin.min()))])
    return rows


def _report(trace):
    out = {
        "termination": trace.termination,
        "t_final": trace.final.t,
        "accepted_steps": trace.steps,
        "samples": len(trace.samples),
        "final_spread": trace.final.spread,
        "singularity": None,
        "diagnostics": None,
    }
    if trace.singularity is not None:
        sg = trace.singularity
        out["singularity"] = {
            "t": sg.t,
            "face": sg.violation.face,
            "vertices": list(sg.violation.vertices),
            "lengths": list(sg.violation.lengths),
            "margin": sg.violation.margin,
            "last_valid_radii": sg.last_valid.tolist(),
            "rejected_radii": sg.rejected.tolist(),
        }
    try:
        rep = convergence_report(trace)
    except errors.InsufficientSamples as exc:
        out["diagnostics_skipped"] = str(exc)
    else:
        out["diagnostics"] = {
            "fitted_rate": rep.fitted_rate,
            "K_max": rep.k_max,
            "C": rep.c_metric,
            "C_prime": rep.c_prime,
            "sign_case": rep.sign_case,
            "envelope_rate": rep.envelope_rate,
            "envelope_ok": rep.envelope_ok,
            "corridor_ok": rep.corridor_ok,
            "corridor_violations": rep.corridor_violations,
        }
    return out


def cmd_flow(cfg):
    if cfg.kind != "cps":
        raise errors.MeshFormatError("flow needs a .cps packing as input")
    s, packing = read_cps(cfg.input)
    opts = FlowOptions(stride=cfg.stride)
    if cfg.tol is not None:
        opts = FlowOptions(rtol=cfg.tol, atol=cfg.tol, stride=cfg.stride)
    problem = FlowProblem(s, packing, BACKWARD if cfg.backward else FORWARD,
                          cfg.normalized, cfg.t_end, opts)
    trace = integrate(problem)
    prefix = cfg.output or os.path.splitext(cfg.input)[0] + ".flow"
    with open(prefix + ".trace.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_csv(_trace_rows(trace)))
    with open(prefix + ".final.cps", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_cps(s, packing.with_radii(trace.final.radii)))
    with open(prefix + ".report.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_report(trace), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(trace.termination)
    if trace.termination == SINGULARITY:
        sg = trace.singularity.violation
        print(f"singularity at t={fmt(trace.singularity.t)} on face {sg.face} "
              f"{list(sg.vertices)}", file=sys.stderr)
        return EXIT_SINGULARITY
    return EXIT_OK


def cmd_wald(cfg):
    if cfg.distances is not None:
        q = MetricQuadruple.from_distances(*cfg.distances)
        res = embedding_curvature(q)
        _emit(cfg, _csv([("kappa", "branch", "residual"),
                         (fmt(res.kappa), res.branch, fmt(res.residual))]))
        return EXIT_OK
    if cfg.input is None:
        raise ValueError("wald needs --input or --distances")
    s, l = load_lengths(cfg)
    kw = {} if cfg.tol is None else {"tol": cfg.tol}
    rows = [("vertex", "wald_curvature")]
    rows += [(v, fmt(vertex_wald_curvature(s, l, v, **kw))) for v in range(s.n_vertices)]
    _emit(cfg, _csv(rows))
    return EXIT_OK


def cmd_embed_check(cfg):
    s, l = load_lengths(cfg)
    kw = {} if cfg.tol is None else {"tol": cfg.tol}
    reports = check_surface(s, l, cfg.kappa, **kw)
    rows = [("vertex", "embeddable", "A0", "a0_ok", "angle_triangle_ok", "vk_ok",
             "max_V_kappa", "witnesses")]
    for v, r in reports.items():
        wit = ";".join(f"{w.check}:{' '.join(map(str, w.neighbours))}" for w in r.witnesses)
        rows.append((v, str(r.embeddable).lower(), fmt(r.a0), str(r.a0_ok).lower(),
                     str(r.angle_triangle_ok).lower(), str(r.vk_ok).lower(),
                     fmt(r.max_v_kappa), wit))
    _emit(cfg, _csv(rows))
    return EXIT_OK


COMMANDS = {
    "curvature": cmd_curvature,
    "flow": cmd_flow,
    "wald": cmd_wald,
    "embed-check": cmd_embed_check,
}


# -- argument handling -----------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="ricciflow",
        description="Combinatorial Ricci flow, curvature and embeddability tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", help="mesh (.off, .obj) or packing (.cps) file")
        p.add_argument("--output", help="output file (flow: output prefix)")
        return p

    add("curvature", "per-vertex angular defect as CSV")

    p = add("flow", "integrate the combinatorial Ricci flow from a .cps packing")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--backward", action="store_true")
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--tol", type=float, help="integrator rtol = atol (default 1e-9)")
    p.add_argument("--stride", type=int, default=1, help="record every n-th accepted step")

    p = add("wald", "Wald curvature per vertex, or kappa(Q) of one quadruple")
    p.add_argument("--distances", type=float, nargs=6,
                   metavar=("D12", "D13", "D14", "D23", "D24", "D34"))
    p.add_argument("--tol", type=float, help="bisection tolerance (default 1e-12)")

    p = add("embed-check", "local embeddability test for every vertex")
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--tol", type=float, help="tolerance on the 2 pi comparisons (default 1e-9)")
    return parser


def config_from_args(ns):
    fields = {k: v for k, v in vars(ns).items()
              if k in RunConfig.__dataclass_fields__ and v is not None}
    if ns.input is not None:
        fields["kind"] = input_kind(ns.input)
    if "distances" in fields:
        fields["distances"] = tuple(fields["distances"])
    if ns.command != "wald" and ns.input is None:
        raise ValueError("--input is required")
    return RunConfig(**fields)


NUMERIC_ERRORS = (errors.NumericalDomain, errors.NoAdmissibleRoot, errors.AmbiguousRoot,
                  errors.StepUnderflow, errors.DomainExceeded, errors.SphericalDomain,
                  errors.ZeroKappa, errors.InvalidTriangle, ArithmeticError,
                  np.linalg.LinAlgError)


def main(argv=None):
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except errors.InvalidLengths as exc:
        print(f"error: {exc} (faces {exc.faces})", file=sys.stderr)
        return EXIT_INVALID
    except (errors.RicciFlowError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

if __name__ == "__main__":
    sys.exit(main())
