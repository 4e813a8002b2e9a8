"""Command-line interface.

    okalab stein eval|monodromy|zeros ...
    okalab pairing ...
    okalab oka decide --config FILE
    okalab lattice pair|verdict ...
    okalab curve count|compose|phicheck ...
    okalab sweep pairing|zeros|curve ...

Results go to stdout as one JSON document (CSV for sweeps).  Exit codes:
0 success, 1 unknown subcommand, 2 bad input, 3 numerical rejection.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from importlib import resources
from pathlib import Path

from . import __version__
from ._accel import configure_threads
from .branchlog import BranchedPoint, principal_branch
from .bundlecalc import DivisorSpec, restrict_and_decide
from .curvelab import (
    DEFAULT_SEED,
    LaurentPoly,
    SteinOnCurve,
    compose_curve,
    count_intersections,
    nondegenerate,
    phi_injectivity,
)
from .errors import NumericalRejection, PreconditionError
from .latticeforms import (
    GaussianLatticeVector,
    HermitianFormSpec,
    SublatticeDecl,
    pair_form,
    takayama_verdict,
)
from .monodromy import (
    TorusCycle,
    chern_pairing,
    handle_from_spec,
    torus_intersection_count,
    w_loop_factor,
    z_loop_factor,
)
from .steinfn import TruncationBudget, sheet_moduli_between, zero_count_annulus

SUBCOMMANDS = ("stein", "pairing", "oka", "lattice", "curve", "sweep")
EXIT_OK, EXIT_UNKNOWN, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(PreconditionError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- serialisation ---------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    s = format(x, ".17g")
    return s if ("e" in s or "." in s) else s + ".0"


def dumps(obj) -> str:
    """Deterministic JSON: insertion-ordered keys, floats at 17 significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_fmt_float(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


# -- argument helpers ------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """``re,im`` or a Python complex literal such as ``1+2j``."""
    text = text.strip()
    if "," in text:
        re_, im = text.split(",", 1)
        try:
            return complex(float(re_), float(im))
        except ValueError as exc:
            raise UsageError(f"bad complex number {text!r}") from exc
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"bad complex number {text!r}") from exc


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _branch(args) -> BranchedPoint:
    base = principal_branch(parse_complex(args.z))
    return base.shifted(args.branch_shift) if args.branch_shift else base


def _budget(args) -> TruncationBudget:
    return TruncationBudget(args.target, args.max_terms)


def _add_budget(p):
    p.add_argument("--target", type=float, default=1e-12, help="relative error target")
    p.add_argument("--max-terms", type=int, default=1000)


def _add_point(p, w=True):
    p.add_argument("--z", required=True, help="z as re,im")
    p.add_argument("--branch-shift", type=int, default=0,
                   help="sheets added to the principal log z (multiples of 2 pi i)")
    if w:
        p.add_argument("--w", required=True, help="w as re,im")


def _add_handle(p):
    p.add_argument("--handle", default="fplus",
                   help="fplus, fminus, fplus_lam or a '*'-product of them")
    p.add_argument("--lam", default="1,0", help="lambda for fplus_lam as re,im")


def _add_form(p):
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--diagonal-only", action="store_true", help="drop the off-diagonal part")


def _add_poly_target(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", help="Laurent polynomial, e.g. 'z + w - 2'")
    g.add_argument("--stein-lam", help="count zeros of F+_lambda on the curve; lambda as re,im")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="okalab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"okalab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    stein = sub.add_parser("stein", help="evaluate Stein's functions")
    ssub = stein.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = ssub.add_parser("eval")
    _add_point(p)
    p.add_argument("--function", default="fplus", choices=("fplus", "fminus", "fplus_lam"))
    p.add_argument("--lam", default="0,0")
    _add_budget(p)
    p = ssub.add_parser("monodromy")
    _add_point(p)
    _add_handle(p)
    _add_budget(p)
    p = ssub.add_parser("zeros")
    _add_point(p, w=False)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    _add_budget(p)

    p = sub.add_parser("pairing", help="Chern pairing on a coordinate torus")
    _add_handle(p)
    p.add_argument("--rz", type=float, default=1.0)
    p.add_argument("--rw", type=float, default=1.3)
    p.add_argument("--orientation", type=int, default=1, choices=(1, -1))
    _add_budget(p)

    oka = sub.add_parser("oka", help="extra-zero decision procedure")
    osub = oka.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = osub.add_parser("decide")
    p.add_argument("--config", required=True)

    lat = sub.add_parser("lattice", help="(1,1)-form pairings on lattice cycles")
    lsub = lat.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = lsub.add_parser("pair")
    _add_form(p)
    p.add_argument("--u", required=True, help="lattice vector, e.g. ie1 or e2+3*e3")
    p.add_argument("--v", required=True)
    p = lsub.add_parser("verdict")
    _add_form(p)
    p.add_argument("--config", help="JSON with n, d, offdiag, sublattice")
    p.add_argument("--sublattice", help="comma-separated generators (default ie1,e2,...,en)")

    curve = sub.add_parser("curve", help="entire curve (e^z, e^{iz}) against divisors")
    csub = curve.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = csub.add_parser("count")
    _add_poly_target(p)
    p.add_argument("--radius", type=float, required=True)
    _add_budget(p)
    p = csub.add_parser("compose")
    p.add_argument("--poly", required=True)
    p.add_argument("--zeta", default=None, help="optional evaluation point re,im")
    p = csub.add_parser("phicheck")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--halfwidth", type=float, default=math.pi)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sw = sub.add_parser("sweep", help="CSV tables over parameter grids")
    wsub = sw.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = wsub.add_parser("pairing")
    _add_handle(p)
    p.add_argument("--rz", default="0.5,1,2")
    p.add_argument("--rw", default="1.3,2,3")
    _add_budget(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p = wsub.add_parser("zeros")
    _add_point(p, w=False)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", required=True, help="comma-separated outer radii")
    _add_budget(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p = wsub.add_parser("curve")
    _add_poly_target(p)
    p.add_argument("--radii", default="4,8,16,32")
    _add_budget(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


# -- commands ------------------------------------------------------------------------


def _handle(args):
    return handle_from_spec(args.handle, parse_complex(args.lam))


def cmd_stein(args):
    budget = _budget(args)
    if args.action == "eval":
        zb = _branch(args)
        w = parse_complex(args.w)
        h = handle_from_spec(args.function, parse_complex(args.lam))
        r = h(zb, w, budget)
        return {
            "function": args.function,
            "log_z": zb.log_value,
            "value": r.value,
            "rel_error_bound": r.rel_error_bound,
            "nu_terms": r.nu_terms,
            "mu_terms": r.mu_terms,
            "scale": r.scale,
        }
    if args.action == "monodromy":
        zb = _branch(args)
        w = parse_complex(args.w)
        h = _handle(args)
        zf = z_loop_factor(h, zb, w, budget)
        wf = w_loop_factor(h, zb, w, budget)
        return {
            "handle": h.tag,
            "log_z": zb.log_value,
            "w": w,
            "z_loop_factor": zf,
            "w_loop_factor": wf,
            "rel_error_bound": 2 * h(zb, w, budget).rel_error_bound,
        }
    zb = _branch(args)
    res = zero_count_annulus(zb, args.r1, args.r2, budget)
    sheets = sheet_moduli_between(zb.theta, args.r1, args.r2)
    return {"count": res.winding, "residual": res.residual, "sheet_indices": sheets}


def cmd_pairing(args):
    h = _handle(args)
    T = TorusCycle(args.rz, args.rw, args.orientation)
    res = chern_pairing(h, T, _budget(args))
    return {
        "handle": h.tag,
        "torus": {"r_z": T.r_z, "r_w": T.r_w, "orientation": T.orientation},
        "pairing": res.pairing,
        "residual": res.residual,
        "samples_used": res.samples_used,
    }


def resolve_config(path: str) -> Path:
    """The path itself, or a bundled scenario with the same file name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("okalab") / "scenarios" / p.name
    if bundled.is_file():
        return Path(str(bundled))
    raise UsageError(f"config file {path} not found")


def cmd_oka(args):
    spec = DivisorSpec.load(resolve_config(args.config))
    return restrict_and_decide(spec).to_dict()


def _form(args, data=None):
    data = data or {}
    return HermitianFormSpec(
        int(data.get("n", args.n)),
        int(data.get("d", args.d)),
        bool(data.get("offdiag", not args.diagonal_only)),
    )


def cmd_lattice(args):
    if args.action == "pair":
        omega = _form(args)
        u = GaussianLatticeVector.parse(args.u, omega.n)
        v = GaussianLatticeVector.parse(args.v, omega.n)
        val = pair_form(omega, u, v)
        return {"n": omega.n, "d": omega.d, "offdiag": omega.offdiag,
                "u": u.label(), "v": v.label(), "value": int(val)}
    data = {}
    if args.config:
        try:
            data = json.loads(resolve_config(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed lattice config: {exc}") from exc
    omega = _form(args, data)
    gens = data.get("sublattice") or (args.sublattice.split(",") if args.sublattice else None)
    sub = None
    if gens:
        sub = SublatticeDecl(tuple(GaussianLatticeVector.parse(g, omega.n) for g in gens))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = takayama_verdict(omega, sub)
    return {"n": omega.n, "d": omega.d, "offdiag": omega.offdiag, **report.to_dict()}


def _curve_target(args):
    if args.poly is not None:
        return LaurentPoly.parse(args.poly), args.poly
    lam = parse_complex(args.stein_lam)
    return SteinOnCurve(lam, _budget(args)), f"fplus_lam({lam.real:g},{lam.imag:g})"


def cmd_curve(args):
    if args.action == "count":
        target, label = _curve_target(args)
        res = count_intersections(target, args.radius, _budget(args))
        return {"target": label, "count": res.count, "radius": res.radius,
                "residual": res.residual, "samples_used": res.samples_used}
    if args.action == "compose":
        P = LaurentPoly.parse(args.poly)
        out = {
            "terms": [{"frequency": complex(j, k), "coefficient": c} for j, k, c in P.terms],
            "nondegenerate": nondegenerate(P),
        }
        if args.zeta is not None:
            zeta = parse_complex(args.zeta)
            g = compose_curve(P)
            values, scales = g.evaluate([zeta])
            out["zeta"] = zeta
            out["value"] = complex(values[0])
            out["scale"] = float(scales[0])
        return out
    ok = phi_injectivity(args.samples, args.halfwidth, args.seed)
    return {"injective_on_samples": ok, "samples": args.samples,
            "halfwidth": args.halfwidth, "seed": args.seed}


def cmd_sweep(args):
    budget = _budget(args)
    if args.action == "pairing":
        h = _handle(args)
        header = ["r_z", "r_w", "pairing", "residual", "samples_used", "intersection_count"]
        rows = []
        for rz in parse_floats(args.rz):
            for rw in parse_floats(args.rw):
                T = TorusCycle(rz, rw)
                res = chern_pairing(h, T, budget)
                rows.append([rz, rw, res.pairing, res.residual, res.samples_used,
                             torus_intersection_count(h, T)])
    elif args.action == "zeros":
        zb = _branch(args)
        header = ["r1", "r2", "count", "residual", "oracle"]
        rows = []
        for r2 in parse_floats(args.r2):
            res = zero_count_annulus(zb, args.r1, r2, budget)
            rows.append([args.r1, r2, res.winding, res.residual,
                         len(sheet_moduli_between(zb.theta, args.r1, r2))])
    else:
        target, _ = _curve_target(args)
        header = ["radius", "count", "residual", "samples_used"]
        rows = []
        for R in parse_floats(args.radii):
            res = count_intersections(target, R, budget)
            rows.append([res.radius, res.count, res.residual, res.samples_used])
    if args.format == "json":
        return [dict(zip(header, r)) for r in rows]
    return _csv(rows, header)


COMMANDS = {
    "stein": cmd_stein,
    "pairing": cmd_pairing,
    "oka": cmd_oka,
    "lattice": cmd_lattice,
    "curve": cmd_curve,
    "sweep": cmd_sweep,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    """Execute one subcommand; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    first = next((a for a in argv if not a.startswith("-")), None)
    if first is not None and first not in SUBCOMMANDS:
        print(f"okalab: unknown subcommand {first!r}", file=stderr)
        return EXIT_UNKNOWN
    configure_threads()
    try:
        args = build_parser().parse_args(argv)
        out = COMMANDS[args.command](args)
    except PreconditionError as exc:
        print(f"okalab: {exc}", file=stderr)
        return EXIT_INPUT
    except NumericalRejection as exc:
        print(f"okalab: numerical rejection: {exc}", file=stderr)
        return EXIT_NUMERIC
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)
    stdout.write(out if isinstance(out, str) else dumps(out) + "\n")
    return EXIT_OK


def main():
    sys.exit(run())
