"""Command line front end: ``razzaboni {solve,synthesize,transform,verify}``.

All commands share one working directory (``--out``):

=====================  ===========================================
``manifest.json``      grid, case tag, A, B, mode, profile, boundary
``fields.txt``         sampled kappa, tau, lambda, gamma
``mesh.obj/.json``     synthesized surface and its frames
``dual.obj/.json``     transformed surface
``*_report.json``      one report per command
=====================  ===========================================

Exit codes: 0 when every criterion passes, 1 when one fails, 2 for usage,
configuration or missing-file errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, gmc, io, transform
from .errors import (
    CausalObstruction,
    ConfigError,
    DegenerateTangentPlane,
    KappaNearZero,
    RazzaboniError,
)
from .expr import parse_profile
from .frenet import BertrandParams, Frame
from .gmc import BoundarySpec, GridSpec, Mode
from .lorentz import SignatureCase, canonical_frame, mcross, mdot
from .report import SCHEMA, VerificationReport
from .surface import (
    compatibility_residual,
    first_form,
    first_form_target,
    gauss_curvature_intrinsic,
    gauss_curvature_measured,
    geodesic_residual,
    second_form,
    synthesize,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

TOLERANCES = {
    "gmc_residual": 1e-2,
    "constraint": 1e-10,
    "dym": 1e-2,
    "theta": 1e-2,
    "compatibility": 1e-3,
    "geodesic": 1e-3,
    "first_form": 1e-3,
    "gauss": 1e-2,
    "frame_defect": 1e-8,
    "algebra": 1e-12,
    "dual_constants": 1e-12,
    "reproduce": 1e-12,
    **transform.DEFAULT_TOLERANCES,
}

MANIFEST, FIELDS, MESH, DUAL = "manifest.json", "fields.txt", "mesh", "dual"
REPORTS = {c: f"{c}_report.json" for c in ("solve", "synthesize", "transform", "verify")}


@dataclass
class RunConfig:
    out: Path
    case: SignatureCase | None = None
    params: BertrandParams | None = None
    grid: GridSpec | None = None
    mode: Mode | None = None
    boundary: tuple = (1.0, 0.0, 0.0)
    profile: str | None = None
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))
    seed: int = 0

    def echo(self) -> dict:
        d = {"out": str(self.out), "seed": self.seed, "tolerances": self.tolerances,
             "boundary": list(self.boundary), "profile": self.profile}
        if self.case is not None:
            d["case"] = self.case.tag
        if self.params is not None:
            d["A"], d["B"] = self.params.A, self.params.B
        if self.grid is not None:
            d["grid"] = io.grid_to_dict(self.grid)
        if self.mode is not None:
            d["mode"] = self.mode.value
        return d


# -- argument parsing -------------------------------------------------------------

def parse_grid(text: str, periodic_u: bool = False) -> GridSpec:
    """``u0:u1:Nu,v0:v1:Nv`` -> :class:`GridSpec`."""
    try:
        su, sv = text.split(",")
        u0, u1, nu = su.split(":")
        v0, v1, nv = sv.split(":")
        return GridSpec(float(u0), float(u1), int(nu), float(v0), float(v1), int(nv),
                        periodic_u)
    except ValueError as exc:
        raise ConfigError(f"bad --grid {text!r} (want u0:u1:Nu,v0:v1:Nv): {exc}") from None


def parse_tolerances(items) -> dict:
    tol = dict(TOLERANCES)
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        if name not in tol:
            raise ConfigError(f"unknown tolerance {name!r}; known: {', '.join(sorted(tol))}")
        try:
            tol[name] = float(value)
        except ValueError:
            raise ConfigError(f"tolerance {name} is not a number: {value!r}") from None
    return tol


def parse_boundary(text: str) -> tuple:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"bad --boundary {text!r}") from None
    if len(vals) not in (1, 3):
        raise ConfigError("--boundary takes l0,l1,l2 (or a single gauge for mode b0)")
    return vals


def default_mode(params: BertrandParams) -> Mode:
    if params.B == 0:
        return Mode.B0
    return Mode.A0 if params.A == 0 else Mode.GENERAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="razzaboni",
                                description="Surfaces swept by Bertrand geodesics in "
                                            "Euclidean and Minkowski 3-space.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", required=True, help="working directory")
        sp.add_argument("--tol", action="append", metavar="NAME=VALUE", default=[])
        sp.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("solve", help="evolve the GMC system and write fields.txt")
    common(s)
    s.add_argument("--case", required=True, choices=[c.tag for c in SignatureCase])
    s.add_argument("--A", type=float, required=True)
    s.add_argument("--B", type=float, required=True)
    s.add_argument("--grid", required=True, help="u0:u1:Nu,v0:v1:Nv")
    s.add_argument("--periodic-u", action="store_true")
    s.add_argument("--mode", choices=[m.value for m in Mode])
    s.add_argument("--boundary", default="1,0,0",
                   help="lambda, lambda_u, lambda_uu at u0 (mode b0: the gauge)")
    s.add_argument("--profile", required=True,
                   help="kappa(u, v0), or tau(u, v0) in mode b0, e.g. '1+0.1*sin(u)'")

    y = sub.add_parser("synthesize", help="integrate frames into mesh.obj/mesh.json")
    common(y)
    y.add_argument("--fields", help="fields file (default OUT/fields.txt)")

    t = sub.add_parser("transform", help="offset the mesh along n into dual.obj/dual.json")
    common(t)

    v = sub.add_parser("verify", help="re-check every artifact in OUT")
    common(v)
    return p


# -- reports ----------------------------------------------------------------------

def write_report(cfg: RunConfig, command: str, suites: dict, extra=None) -> bool:
    passed = all(r.passed for r in suites.values())
    io.dump_json({
        "schema": SCHEMA,
        "command": command,
        "tool_version": __version__,
        "config": cfg.echo() if extra is None else {**cfg.echo(), **extra},
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "passed": passed,
        "suites": {name: r.to_dict() for name, r in suites.items()},
    }, cfg.out / REPORTS[command])
    for name, r in suites.items():
        print(f"== {name}: {'PASS' if r.passed else 'FAIL'}")
        for line in r.lines():
            print("  " + line)
    return passed


def _fail_report(title: str, name: str, exc: Exception) -> VerificationReport:
    rep = VerificationReport(title)
    c = rep.check(name, float("nan"), 0.0, error=type(exc).__name__)
    c.detail["message"] = str(exc)
    return rep


def _load_run(out: Path):
    grid, sig, params, manifest = io.read_manifest(out / MANIFEST)
    return grid, sig, params, manifest


# -- suites -------------------------------------------------------------------------

def solve_suite(fields, mode: Mode, tol: dict, gauge: float = 1.0) -> VerificationReport:
    rep = VerificationReport(f"GMC fields ({fields.sig.tag}, mode {mode.value})")
    r_k, r_t, r_l = gmc.gmc_residual(fields)
    rep.check("gmc_residual", np.maximum(np.abs(r_k), np.maximum(np.abs(r_t), np.abs(r_l))),
              tol["gmc_residual"])
    rep.check("constraint", fields.params.A * fields.kappa + fields.params.B * fields.tau - 1,
              tol["constraint"])
    rep.note("lambda_min", float(np.min(fields.lam)))
    rep.note("lambda_max", float(np.max(fields.lam)))
    euclid = fields.sig is SignatureCase.EUCLIDEAN
    if euclid and mode is Mode.B0:
        rep.check("dym", gmc.reduction_residual_dym(fields.tau, fields.grid,
                                                    fields.params.A, gauge), tol["dym"])
    if euclid and mode is Mode.A0:
        theta = gmc.theta_from_fields(fields)
        rep.check("theta", gmc.reduction_residual_theta(theta, fields.grid), tol["theta"])
    return rep


def surface_suite(mesh, tol: dict) -> VerificationReport:
    f = mesh.fields
    rep = VerificationReport(f"synthesized surface ({mesh.sig.tag})")
    rep.check("compatibility", compatibility_residual(mesh), tol["compatibility"])
    try:
        rep.check("geodesic", geodesic_residual(mesh), tol["geodesic"])
    except DegenerateTangentPlane as exc:
        rep.check("geodesic", float("nan"), tol["geodesic"], error=str(exc))
    ff = first_form(mesh)
    E0, F0, G0 = first_form_target(f)
    rep.check("first_form_E", ff.E - E0, tol["first_form"])
    rep.check("first_form_F", ff.F - F0, tol["first_form"])
    rep.check("first_form_G", ff.G - G0, tol["first_form"])
    K_in = gauss_curvature_intrinsic(f)
    K_me = gauss_curvature_measured(mesh)
    rep.check("gauss", K_me - K_in, tol["gauss"])
    rep.check("frame_defect", mesh.defect(), tol["frame_defect"])
    rep.note("constraint_defect", f.constraint_defect())
    centered = mesh.positions.reshape(-1, 3) - mesh.positions.reshape(-1, 3).mean(0)
    sv = np.linalg.svd(centered, compute_uv=False)
    rep.note("planarity", float(sv[-1] / np.sqrt(centered.shape[0])))
    if mesh.sig.is_minkowski:
        try:
            rep.note("second_form_discrepancy", second_form(mesh).discrepancy)
        except KappaNearZero as exc:
            rep.note("second_form_discrepancy", f"skipped: {exc}")
    return rep


def algebra_suite(seed: int, tol: dict, count: int = 1000) -> VerificationReport:
    """Randomized identities of the inner and cross products and of the dual constants."""
    rng = np.random.default_rng(seed)
    rep = VerificationReport(f"algebra (seed {seed}, {count} samples)")
    x, y, z = rng.uniform(-10, 10, (3, count, 3))
    a, b = rng.uniform(-3, 3, (2, count, 1))
    sig = SignatureCase.CASE1
    scale = np.linalg.norm(x, axis=-1) * np.linalg.norm(y, axis=-1)
    lin = mdot(a * x + b * z, y, sig) - (a[:, 0] * mdot(x, y, sig) + b[:, 0] * mdot(z, y, sig))
    rep.check("bilinearity", lin / (scale + np.linalg.norm(z, axis=-1)
                                    * np.linalg.norm(y, axis=-1)), tol["algebra"])
    rep.check("symmetry", (mdot(x, y, sig) - mdot(y, x, sig)) / scale, tol["algebra"])
    c = mcross(x, y, sig)
    rep.check("cross_orthogonality",
              np.maximum(np.abs(mdot(c, x, sig)), np.abs(mdot(c, y, sig)))
              / (scale * np.linalg.norm(x + y, axis=-1)), tol["algebra"])
    lag = mdot(c, c, sig) + (mdot(x, x, sig) * mdot(y, y, sig) - mdot(x, y, sig) ** 2)
    rep.check("lagrange_identity", lag / scale**2, tol["algebra"])

    worst = 0.0
    for case in (SignatureCase.CASE1, SignatureCase.CASE2, SignatureCase.CASE3):
        A = rng.uniform(-2, 2, count)
        B = rng.uniform(-2, 2, count)
        if case is not SignatureCase.CASE1:
            B = np.sign(B) * (np.abs(A) + 0.1 + np.abs(B))
        kappa = rng.uniform(0.2, 3, count)
        tau = (1 - A * kappa) / B
        keep = np.abs(tau) > 1e-3
        for Ai, Bi, ki, ti in zip(A[keep], B[keep], kappa[keep], tau[keep]):
            p = BertrandParams(float(Ai), float(Bi))
            ks, ts = transform.dual_kappa_tau(ki, ti, p, case)
            d = transform.dual_bertrand_constants(p, case)
            worst = max(worst, abs(d.A * ks + d.B * ts - 1.0))
    rep.check("dual_constants", worst, tol["dual_constants"])
    return rep


def transform_suites(mesh, params, tol: dict) -> dict:
    pair = transform.razzaboni_transform(mesh, params)
    cert = transform.certificate(pair, tol)
    if params.A == 0:
        cert.note("identity", "A = 0: the transformation leaves the surface unchanged")
    suites = {"transform": cert}
    if mesh.sig is SignatureCase.CASE1:
        suites["double_transform"] = transform.double_transform_check(mesh, params, tol)
    return pair, suites


# -- commands -------------------------------------------------------------------------

def cmd_solve(cfg: RunConfig) -> int:
    grid, sig, params, mode = cfg.grid, cfg.case, cfg.params, cfg.mode
    profile = parse_profile(cfg.profile)
    if mode is Mode.B0:
        boundary = BoundarySpec(mode, gauge=cfg.boundary[0])
    else:
        if len(cfg.boundary) != 3:
            raise ConfigError(f"mode {mode.value} needs --boundary l0,l1,l2")
        boundary = BoundarySpec(mode, *cfg.boundary)
    try:
        gmc._check_mode(params, boundary, grid)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cfg.out.mkdir(parents=True, exist_ok=True)
    io.write_manifest(cfg.out / MANIFEST, grid, sig, params, mode.value,
                      profile=cfg.profile, boundary=list(cfg.boundary))
    (cfg.out / FIELDS).unlink(missing_ok=True)
    try:
        fields = gmc.solve(profile(grid.u), grid, sig, params, boundary)
    except RazzaboniError as exc:
        name = "step_guard" if type(exc).__name__ == "StepTooLarge" else "solve"
        write_report(cfg, "solve", {"solve": _fail_report("GMC solve", name, exc)})
        return EXIT_FAIL
    io.write_fields(cfg.out / FIELDS, fields)
    ok = write_report(cfg, "solve", {"solve": solve_suite(fields, mode, cfg.tolerances,
                                                          cfg.boundary[0])})
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_synthesize(cfg: RunConfig, fields_path: Path | None = None) -> int:
    grid, sig, params, manifest = _load_run(cfg.out)
    fields = io.read_fields(fields_path or cfg.out / FIELDS, grid, sig, params)
    extra = {"case": sig.tag, "A": params.A, "B": params.B, "grid": io.grid_to_dict(grid)}
    try:
        mesh = synthesize(fields, Frame(*canonical_frame(sig), sig),
                          residual_threshold=cfg.tolerances["gmc_residual"])
    except RazzaboniError as exc:
        write_report(cfg, "synthesize",
                     {"surface": _fail_report("synthesis", "synthesis", exc)}, extra)
        return EXIT_FAIL
    io.write_mesh(cfg.out / MESH, mesh, params,
                  {"tool_version": __version__, "source": "synthesize", "mode": manifest["mode"]})
    ok = write_report(cfg, "synthesize", {"surface": surface_suite(mesh, cfg.tolerances)}, extra)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_transform(cfg: RunConfig) -> int:
    _, sig, params, _ = _load_run(cfg.out)
    mesh = io.read_mesh(cfg.out / MESH)
    if not sig.is_minkowski:
        raise ConfigError("the transformation is defined for case1, case2 and case3")
    try:
        pair, suites = transform_suites(mesh, params, cfg.tolerances)
    except CausalObstruction as exc:
        raise ConfigError(str(exc)) from None
    io.write_mesh(cfg.out / DUAL, pair.dual, pair.dual_params,
                  {"tool_version": __version__, "source": "transform",
                   "offset_sign": pair.offset})
    extra = {"case": sig.tag, "A": params.A, "B": params.B}
    ok = write_report(cfg, "transform", suites, extra)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    """Recompute every suite from the files in the working directory."""
    out = cfg.out
    for required in (MANIFEST, REPORTS["solve"]):
        if not (out / required).is_file():
            raise FileNotFoundError(f"missing file: {out / required} (run solve first)")
    grid, sig, params, manifest = _load_run(out)
    mode = Mode(manifest["mode"])
    suites = {}
    if (out / FIELDS).is_file():
        fields = io.read_fields(out / FIELDS, grid, sig, params)
        gauge = float(manifest.get("boundary", [1.0])[0])
        suites["solve"] = solve_suite(fields, mode, cfg.tolerances, gauge)
    else:
        # a failed solve leaves only its report; carry its verdict over
        recorded = io.load_json(out / REPORTS["solve"])
        rep = VerificationReport("GMC solve (recorded)")
        for c in recorded["suites"]["solve"]["criteria"]:
            rep.check(c["name"], float("nan") if c["value"] is None else c["value"],
                      c["tolerance"], **c["detail"])
        suites["solve"] = rep
    mesh = None
    if (out / f"{MESH}.json").is_file():
        mesh = io.read_mesh(out / MESH)
        suites["surface"] = surface_suite(mesh, cfg.tolerances)
    if mesh is not None and (out / f"{DUAL}.json").is_file():
        stored = io.read_mesh(out / DUAL)
        pair, tsuites = transform_suites(mesh, params, cfg.tolerances)
        repro = VerificationReport("stored dual reproduces")
        repro.check("reproduce_positions",
                    np.linalg.norm(stored.positions - pair.dual.positions, axis=-1),
                    cfg.tolerances["reproduce"])
        repro.check("reproduce_frames", np.abs(stored.frames - pair.dual.frames),
                    cfg.tolerances["reproduce"])
        suites.update(tsuites)
        suites["dual_files"] = repro
    suites["algebra"] = algebra_suite(cfg.seed, cfg.tolerances)
    extra = {"case": sig.tag, "A": params.A, "B": params.B, "grid": io.grid_to_dict(grid),
             "mode": mode.value, "artifacts": sorted(p.name for p in out.iterdir()
                                                     if p.name != REPORTS["verify"])}
    ok = write_report(cfg, "verify", suites, extra)
    return EXIT_PASS if ok else EXIT_FAIL


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(out=Path(ns.out), tolerances=parse_tolerances(ns.tol), seed=ns.seed)
    if ns.command == "solve":
        cfg.case = SignatureCase.from_tag(ns.case)
        try:
            cfg.params = BertrandParams(ns.A, ns.B)
        except ValueError as exc:
            raise ConfigError(f"--A/--B: {exc}") from None
        cfg.grid = parse_grid(ns.grid, ns.periodic_u)
        cfg.mode = Mode(ns.mode) if ns.mode else default_mode(cfg.params)
        cfg.boundary = parse_boundary(ns.boundary)
        cfg.profile = ns.profile
        parse_profile(ns.profile)
    return cfg


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        if ns.command == "solve":
            return cmd_solve(cfg)
        if ns.command == "synthesize":
            return cmd_synthesize(cfg, Path(ns.fields) if ns.fields else None)
        if ns.command == "transform":
            return cmd_transform(cfg)
        return cmd_verify(cfg)
    except FileNotFoundError as exc:
        print(f"razzaboni: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ValueError) as exc:
        print(f"razzaboni: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
