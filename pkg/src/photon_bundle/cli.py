"""photon-bundle: reproducible verification runs and field exports.

Exit codes: 0 when every check passes, 1 on a failed check or a runtime or
I/O error, 2 on a usage error.
"""

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import checks, frames, helicity
from .geometry import PhotonBundleError, SphereMesh, sample

EXPORTS = ("frame1", "frame2", "u", "eplus", "eminus")
FIELD_HEADER = ["theta", "phi", "re_x", "im_x", "re_y", "im_y", "re_z", "im_z"]


class ConfigError(Exception):
    pass


class IoError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    subcommand: str
    mesh: tuple = None
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    out: str = None
    fmt: str = "json"
    timings: bool = False
    options: dict = field(default_factory=dict)


def parse_mesh(text):
    m = re.fullmatch(r"(\d+)x(\d+)", text or "")
    if m:
        return int(m.group(1)), int(m.group(2))
    m = re.fullmatch(r"ico(\d+)", text or "")
    if m:
        return SphereMesh.icosahedral(int(m.group(1)))
    raise ConfigError(f"mesh must look like NxM or icoL, got {text!r}")


def parse_tol(items):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or name not in checks.TOLERANCES:
            raise ConfigError(f"--tol expects NAME=VALUE with NAME in {sorted(checks.TOLERANCES)}, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise ConfigError(f"tolerance {name} is not a number: {value!r}") from None
    return out


def parse_seed(text):
    try:
        seed = int(text, 0)
    except ValueError:
        raise ConfigError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")
    return seed


def parse_vector(text):
    try:
        v = [float(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError(f"expected three comma-separated numbers, got {text!r}") from None
    if len(v) != 3:
        raise ConfigError(f"expected three comma-separated numbers, got {text!r}")
    return v


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--mesh", help="mesh resolution NxM (or icoL for an icosahedral mesh)")
    common.add_argument("--seed", default="0", help="unsigned 64-bit seed for the PCG64 generator")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a check tolerance")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timings", action="store_true", help="add wall times under a metadata key")

    p = _Parser(prog="photon-bundle", description="Photon bundle verification harness.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    s = sub.add_parser("spectrum", parents=[common], help="Maxwell 6x6 spectrum")
    s.add_argument("--k", type=parse_vector, help="single wave vector kx,ky,kz")
    s = sub.add_parser("frame", parents=[common], help="global frame checks, or a CSV dump")
    s.add_argument("action", nargs="?", choices=("check", "dump"), default="check")
    s = sub.add_parser("zeros", parents=[common], help="zero scan of P+ v1")
    s.add_argument("--refine", action="store_true")
    s = sub.add_parser("chern", parents=[common], help="Chern numbers")
    s.add_argument("--bundle", choices=tuple(checks.CHERN_TARGETS))
    s.add_argument("--method", choices=("analytic", "lattice"))
    s = sub.add_parser("boost-check", parents=[common], help="Poincare action checks")
    s.add_argument("--samples", type=int, default=1000)
    sub.add_parser("commutators", parents=[common], help="operator algebra residuals")
    sub.add_parser("wigner-demo", parents=[common], help="Weinberg L(k) versus the smooth frame near the poles")
    sub.add_parser("all", parents=[common], help="every suite")
    s = sub.add_parser("export", parents=[common], help="CSV dump of a built-in field")
    s.add_argument("--section", choices=EXPORTS, required=True)
    return p


def config_from_args(argv):
    a = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(a).items()
            if k not in ("subcommand", "mesh", "seed", "tol", "out", "format", "timings") and v is not None}
    return RunConfig(a.subcommand, parse_mesh(a.mesh) if a.mesh else None, parse_seed(a.seed),
                     parse_tol(a.tol), a.out, a.format, a.timings, opts)


def _suite_kwargs(name, cfg):
    o, mesh = cfg.options, cfg.mesh
    if name == "spectrum":
        return {"k": o.get("k")}
    if name == "frame":
        return {"mesh": mesh} if mesh else {}
    if name == "zeros":
        return {"meshes": (mesh,), "refine": o.get("refine", False)} if mesh else {"refine": o.get("refine", False)}
    if name == "chern":
        return {"bundle": o.get("bundle"), "method": o.get("method"), "mesh": mesh}
    if name == "boost-check":
        return {"samples": o.get("samples", 1000)}
    return {}


def run(cfg):
    """Execute the configured suite(s); returns the list of SuiteResults in registry order."""
    names = list(checks.SUITES) if cfg.subcommand == "all" else [cfg.subcommand]
    if cfg.subcommand == "all":
        cfg = RunConfig("all", None, cfg.seed, cfg.tolerances, cfg.out, cfg.fmt, cfg.timings, {})

    def one(name):
        try:
            return checks.run_suite(name, cfg.seed, cfg.tolerances, **_suite_kwargs(name, cfg))
        except (PhotonBundleError, ValueError, ArithmeticError) as exc:
            return checks.SuiteResult(name, {}, [], error=f"{type(exc).__name__}: {exc}")

    threads = max(1, int(os.environ.get("PHOTON_BUNDLE_THREADS", os.cpu_count() or 1)))
    results = []
    if threads == 1 or len(names) == 1:
        for n in names:
            results.append(one(n))
            if results[-1].error:
                break
        return results
    with ThreadPoolExecutor(max_workers=min(threads, len(names))) as pool:
        futures = [pool.submit(one, n) for n in names]
        for f in futures:
            results.append(f.result())
            if results[-1].error:
                for g in futures:
                    g.cancel()
                break
    return results


def report_dict(results, cfg):
    suites = []
    for r in results:
        d = {"suite": r.suite, **r.payload, "checks": [c.as_dict() for c in r.checks], "pass": r.passed}
        if r.error:
            d["error"] = r.error
        suites.append(d)
    out = suites[0] if len(suites) == 1 and cfg.subcommand != "all" else {"suites": suites}
    out["pass"] = all(r.passed for r in results)
    out["config"] = {"subcommand": cfg.subcommand, "seed": cfg.seed, "tolerances": {**checks.TOLERANCES, **cfg.tolerances}}
    if cfg.timings:
        out["metadata"] = {"wall_time": {r.suite: r.wall_time for r in results}}
    return out


def report_csv(results):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "name", "target", "value", "residual", "tolerance", "pass"])
    for r in results:
        for c in r.checks:
            w.writerow([r.suite, c.name, c.target, repr(c.value), repr(c.residual), repr(c.tolerance), c.passed])
        if r.error:
            w.writerow([r.suite, "error", "", r.error, "", "", False])
    return buf.getvalue()


def field_values(section, mesh):
    """(theta, phi, (N, 3) complex values) of a built-in field on the unit-sphere mesh."""
    if section in ("frame1", "frame2"):
        v = frames.frame_arrays(mesh.theta, mesh.phi)[int(section[-1]) - 1]
    elif section == "u":
        v = sample(frames.u_components, mesh.points())
    else:
        v = helicity.circular_arrays(mesh.theta, mesh.phi, helicity.PLUS if section == "eplus" else helicity.MINUS)
    return mesh.theta, mesh.phi, v


def export_field(section, mesh, path=None):
    """CSV text (written to ``path`` when given) with one row per mesh node."""
    if section not in EXPORTS:
        raise ConfigError(f"unknown section {section!r}")
    t, p, v = field_values(section, mesh)
    rows = np.column_stack([t, p] + [f(v[:, i]) for i in range(3) for f in (np.real, np.imag)])
    return _write_csv(FIELD_HEADER, rows, path)


def frame_dump(mesh, path=None):
    """CSV of theta, phi and the real and imaginary parts of both frame vectors."""
    v1, v2 = frames.frame_arrays(mesh.theta, mesh.phi)
    header = ["theta", "phi"] + [f"{ri}_v{n}{c}" for n in (1, 2) for c in "xyz" for ri in ("re", "im")]
    rows = np.column_stack([mesh.theta, mesh.phi] + [f(v[:, i]) for v in (v1, v2) for i in range(3)
                                                     for f in (np.real, np.imag)])
    return _write_csv(header, rows, path)


def _write_csv(header, rows, path):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows([[repr(float(x)) for x in r] for r in rows])
    _emit(buf.getvalue(), path)
    return buf.getvalue()


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _mesh_obj(mesh, default):
    m = mesh or default
    return m if isinstance(m, SphereMesh) else SphereMesh.latlon(*m)


def main(argv=None):
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"photon-bundle: usage error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.subcommand == "export":
            export_field(cfg.options["section"], _mesh_obj(cfg.mesh, (16, 32)), cfg.out)
            return 0
        if cfg.subcommand == "frame" and cfg.options.get("action") == "dump":
            frame_dump(_mesh_obj(cfg.mesh, (16, 32)), cfg.out)
            return 0
        if cfg.subcommand in ("frame", "zeros") and isinstance(cfg.mesh, SphereMesh):
            raise ConfigError(f"{cfg.subcommand} needs a latitude-longitude NxM mesh")
        results = run(cfg)
        if cfg.fmt == "csv":
            _emit(report_csv(results), cfg.out)
        else:
            _emit(json.dumps(report_dict(results, cfg), indent=2) + "\n", cfg.out)
    except ConfigError as exc:
        print(f"photon-bundle: usage error: {exc}", file=sys.stderr)
        return 2
    except (IoError, PhotonBundleError) as exc:
        print(f"photon-bundle: {exc}", file=sys.stderr)
        return 1
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
