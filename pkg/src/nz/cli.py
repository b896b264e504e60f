"""Command-line front end.

Subcommands
-----------
spheres   --b-ratio R --charge-e Q [--method closed|quad|asym]
loop      --radius-m A --current-a I [--method closed|quad]
hydrogen  [--part electric|magnetic|both|energy] [--nonrelativistic]
atom      --element He|Ne|Ar|Kr|Xe | --Z n --A m
figure    --id 1|2|3 --out PATH          (writes the CSV data files)
validate  [--fast]                       (oracle + invariant suite, JSON report)

Results are emitted as JSON (default) or CSV key/value rows; figure data
always goes to CSV (comma separated, header row, '.' decimal, LF newlines,
UTF-8).  Exit codes: 0 success, 2 usage error, 3 non-convergence,
4 validation failure.  Constants may be overridden with --constants FILE
or the NZ_CONSTANTS environment variable (key = value lines).

Re-running any command with identical flags and seed produces
byte-identical output: floats are serialized with shortest round-trip
repr and nothing time- or path-dependent enters the files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, oracle
from .fields import enclosed_charge, field_grid
from .sources import (
    NOBLE_GASES,
    CurrentLoop,
    HydrogenAtom,
    NobleGasAtom,
    PhysConst,
    SpherePair,
    noble_gas,
)
from .zeldovich import (
    NonConvergenceError,
    NzBreakdown,
    field_energy,
    nz_atom_electric,
    nz_hydrogen_electric,
    nz_hydrogen_magnetic,
    nz_loop,
    nz_sphere_pair,
)

_METHOD_ALIASES = {"closed": "closed", "quad": "quadrature", "asym": "asymptotic"}

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3
EXIT_VALIDATION = 4


def _load_constants(args) -> PhysConst:
    path = getattr(args, "constants", None) or os.environ.get("NZ_CONSTANTS")
    return PhysConst.from_file(path) if path else PhysConst()


def _result_payload(breakdown, constants: PhysConst, flags: dict,
                    energy_mc2: float | None = None) -> dict:
    return {
        "schema_version": 1,
        "nz_electric": breakdown.electric,
        "nz_magnetic": breakdown.magnetic,
        "nz_total": breakdown.total,
        "energy_mc2": energy_mc2,
        "quad_error": breakdown.quad_error,
        "metadata": {
            "method": breakdown.method,
            "constants": constants.to_dict(),
            "flags": {k: v for k, v in sorted(flags.items())},
            "paper_notes": list(breakdown.notes),
        },
    }


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return
    # csv: flattened key,value rows
    rows = []

    def flatten(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                flatten(f"{prefix}{k}." if prefix else f"{k}.", obj[k])
        elif isinstance(obj, (list, tuple)):
            for i, v in enumerate(obj):
                flatten(f"{prefix}{i}.", v)
        else:
            rows.append((prefix.rstrip("."), obj))

    flatten("", payload)
    out = "key,value\n"
    for key, val in rows:
        sval = repr(val) if isinstance(val, float) else str(val)
        if "," in sval or '"' in sval:
            sval = '"' + sval.replace('"', '""') + '"'
        out += f"{key},{sval}\n"
    sys.stdout.write(out)


def _cmd_spheres(args) -> int:
    constants = _load_constants(args)
    method = _METHOD_ALIASES[args.method]
    pair = SpherePair.from_b_ratio(args.b_ratio, charge_over_e=args.charge_e)
    kwargs = {"alpha": constants.alpha}
    if args.rel_tol:
        kwargs["rel_tol"] = args.rel_tol
    res = nz_sphere_pair(pair, method, **kwargs)
    _emit(_result_payload(res, constants,
                          {"b_ratio": args.b_ratio, "charge_e": args.charge_e,
                           "method": args.method}), args.output_format)
    return EXIT_OK


def _cmd_loop(args) -> int:
    constants = _load_constants(args)
    method = _METHOD_ALIASES[args.method]
    loop = CurrentLoop(args.radius_m, args.current_a)
    kwargs = {"alpha": constants.alpha}
    if args.rel_tol:
        kwargs["rel_tol"] = args.rel_tol
    res = nz_loop(loop, method, **kwargs)
    _emit(_result_payload(res, constants,
                          {"radius_m": args.radius_m, "current_a": args.current_a,
                           "method": args.method}), args.output_format)
    return EXIT_OK


def _cmd_hydrogen(args) -> int:
    constants = _load_constants(args)
    atom = HydrogenAtom(constants=constants, relativistic=not args.nonrelativistic)
    flags = {"part": args.part, "nonrelativistic": args.nonrelativistic}
    tol = {"rel_tol": args.rel_tol} if args.rel_tol else {}
    energy = None
    if args.part == "electric":
        res = nz_hydrogen_electric(atom, **tol)
    elif args.part == "magnetic":
        res = nz_hydrogen_magnetic(atom, **tol)
    elif args.part == "both":
        re_ = nz_hydrogen_electric(atom, **tol)
        rm = nz_hydrogen_magnetic(atom, **tol)
        res = NzBreakdown(re_.electric, rm.magnetic, re_.electric + rm.magnetic,
                          re_.quad_error + rm.quad_error,
                          evaluations=re_.evaluations + rm.evaluations,
                          method="kappa", notes=re_.notes + rm.notes)
    elif args.part == "energy":
        re_ = nz_hydrogen_electric(atom, **tol)
        rm = nz_hydrogen_magnetic(atom, **tol)
        en = field_energy(atom, "total")
        res = NzBreakdown(re_.electric, rm.magnetic, re_.electric + rm.magnetic,
                          re_.quad_error + rm.quad_error + en.quad_error,
                          evaluations=re_.evaluations + rm.evaluations,
                          method="kappa",
                          notes=re_.notes + rm.notes + (
                              "energy_mc2 is the electric field energy plus the "
                              "moment-current magnetic self-energy; the electric "
                              "part alone matches the uniform-ball value "
                              "(3/5) alpha lbar/a", ))
        energy = en.total_mc2
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.part)
    _emit(_result_payload(res, constants, flags, energy), args.output_format)
    return EXIT_OK


def _cmd_atom(args) -> int:
    constants = _load_constants(args)
    if args.element:
        atom = noble_gas(args.element, constants)
    else:
        if args.Z is None or args.A is None:
            raise SystemExit("atom: provide --element or both --Z and --A")
        roster = {a.Z: a for a in NOBLE_GASES.values()}
        if args.Z not in roster:
            raise SystemExit(f"atom: no closed-shell configuration for Z={args.Z}; "
                             f"known Z: {sorted(roster)}")
        base = roster[args.Z]
        atom = NobleGasAtom(base.symbol, base.Z, args.A, base.shells, constants)
    tol = {"rel_tol": args.rel_tol} if args.rel_tol else {}
    res = nz_atom_electric(atom, **tol)
    _emit(_result_payload(res, constants,
                          {"element": atom.symbol, "Z": atom.Z, "A": atom.A}),
          args.output_format)
    return EXIT_OK


def _fmt(x: float) -> str:
    return repr(float(x))


def _figure1_csv(constants: PhysConst) -> str:
    atom = HydrogenAtom(constants=constants)
    b, a = constants.bohr_b, constants.proton_a
    lines = ["r_over_b,enclosed_charge"]
    for r in np.geomspace(1e-3 * b, 20.0 * b, 400):
        lines.append(f"{_fmt(r / b)},{_fmt(enclosed_charge(atom, float(r)))}")
    for r in np.linspace(0.0, 3.0 * a, 200):
        q = 0.0 if r == 0.0 else enclosed_charge(atom, float(r))
        lines.append(f"inset,{_fmt(r / a)},{_fmt(q)}")
    return "\n".join(lines) + "\n"


def _figure2_csv(constants: PhysConst) -> str:
    atom = HydrogenAtom(constants=constants)
    lbar = constants.lambda_bar
    samples = field_grid(atom, extent=6.0 * lbar, resolution=41)
    lines = ["x_over_lbar,z_over_lbar,Hx,Hz"]
    for s in samples:
        lines.append(",".join([
            _fmt(s.position[0] / lbar), _fmt(s.position[2] / lbar),
            _fmt(s.H[0]), _fmt(s.H[2]),
        ]))
    return "\n".join(lines) + "\n"


def _figure3_csv(constants: PhysConst, rel_tol: float | None) -> str:
    tol = {"rel_tol": rel_tol} if rel_tol else {}
    rows = []
    for symbol in ("He", "Ne", "Ar", "Kr", "Xe"):
        atom = noble_gas(symbol, constants)
        res = nz_atom_electric(atom, **tol)
        rows.append((atom.Z, symbol, res.total))
    zs = np.array([r[0] for r in rows], dtype=float)
    ns = np.array([r[2] for r in rows])
    coeff = float(np.sum(zs**2 * ns) / np.sum(zs**4))  # least squares c Z^2
    lines = ["Z,element,nz_electric,quadratic_fit"]
    for z, sym, val in rows:
        lines.append(f"{z},{sym},{_fmt(val)},{_fmt(coeff * z * z)}")
    return "\n".join(lines) + "\n"


def _cmd_figure(args) -> int:
    constants = _load_constants(args)
    if args.id == 1:
        text = _figure1_csv(constants)
    elif args.id == 2:
        text = _figure2_csv(constants)
    else:
        text = _figure3_csv(constants, args.rel_tol)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    sys.stdout.write(f"wrote figure {args.id} data: {args.out}\n")
    return EXIT_OK


def _cmd_validate(args) -> int:
    constants = _load_constants(args)
    fast = args.fast
    checks = []

    audit = oracle.spectrum_audit(constants, points=6 if fast else 12)
    checks.append({"name": "spectrum audit", "passed": audit["passed"],
                   "detail": {"worst_rel_dev": audit["worst_rel_dev"],
                              "entries": audit["entries"]}})

    separations = [1.0] if fast else [0.5, 1.0, 2.0]
    kernel = []
    for sep in separations:
        lhs, rhs = oracle.kernel_identity_check(sep, 2000.0 / sep)
        kernel.append({"separation": sep, "lhs": lhs, "rhs": rhs,
                       "ratio": lhs / rhs})
    kernel_ok = all(abs(k["ratio"] - 1.0) <= 0.01 for k in kernel)
    checks.append({"name": "fourier kernel identity", "passed": kernel_ok,
                   "detail": kernel})

    pair = SpherePair.from_b_ratio(3.0)
    c = nz_sphere_pair(pair, "closed", alpha=constants.alpha)
    q = nz_sphere_pair(pair, "quadrature", alpha=constants.alpha)
    rel = abs(q.total - c.total) / c.total
    checks.append({"name": "sphere-pair route equivalence (b=3)",
                   "passed": rel <= 1e-6, "detail": {"rel_dev": rel}})

    loop = CurrentLoop(1.0, 1.0)
    cl = nz_loop(loop, "closed", alpha=constants.alpha)
    ql = nz_loop(loop, "quadrature", alpha=constants.alpha)
    rel = abs(ql.total - cl.total) / cl.total
    checks.append({"name": "loop route equivalence", "passed": rel <= 1e-6,
                   "detail": {"rel_dev": rel}})

    atom = HydrogenAtom(constants=constants)
    m1 = nz_hydrogen_magnetic(atom, route="kappa")
    m2 = nz_hydrogen_magnetic(atom, route="k")
    rel = abs(m1.total - m2.total) / m1.total
    checks.append({"name": "hydrogen magnetic route equivalence",
                   "passed": rel <= 1e-6, "detail": {"rel_dev": rel}})

    if not fast:
        mc = oracle.McSpec(samples=512_000, seed=args.seed,
                           importance_scale=loop.radius_m)
        est = oracle.nz_loop_position_space(loop, mc, alpha=constants.alpha)
        dev = abs(est.value - cl.total) / cl.total
        checks.append({"name": "loop position-space oracle",
                       "passed": dev <= 0.10,
                       "detail": {"estimate": est.value, "stderr": est.stderr,
                                  "rel_dev": dev}})
        ref = nz_hydrogen_electric(atom)
        mch = oracle.McSpec(samples=64_000, seed=args.seed,
                            importance_scale=constants.bohr_b)
        esth = oracle.nz_hydrogen_electric_position_space(atom, mch)
        dev = abs(esth.value - ref.total) / ref.total
        checks.append({"name": "hydrogen electric position-space oracle",
                       "passed": dev <= 0.15,
                       "detail": {"estimate": esth.value, "stderr": esth.stderr,
                                  "rel_dev": dev}})

    passed = all(c["passed"] for c in checks)
    report = {"passed": passed, "fast": fast, "seed": args.seed,
              "checks": checks}
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nz",
        description="Dimensionless photon-number measure of electromagnetic "
                    "field strength for classical and atomic sources.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output-format", choices=["json", "csv"], default="json")
        p.add_argument("--rel-tol", type=float, default=None,
                       help="override the integration relative tolerance")
        p.add_argument("--seed", type=int, default=20260808,
                       help="Monte Carlo seed (validate)")
        p.add_argument("--constants", default=None,
                       help="constants override file (key = value lines); "
                            "NZ_CONSTANTS env var is the fallback")

    p = sub.add_parser("spheres", help="two oppositely charged spheres")
    p.add_argument("--b-ratio", type=float, required=True,
                   help="separation over sphere radius, d/a")
    p.add_argument("--charge-e", type=float, default=1.0,
                   help="charge in units of the elementary charge")
    p.add_argument("--method", choices=list(_METHOD_ALIASES), default="closed")
    common(p)
    p.set_defaults(func=_cmd_spheres)

    p = sub.add_parser("loop", help="circular current loop")
    p.add_argument("--radius-m", type=float, required=True)
    p.add_argument("--current-a", type=float, required=True)
    p.add_argument("--method", choices=["closed", "quad"], default="closed")
    common(p)
    p.set_defaults(func=_cmd_loop)

    p = sub.add_parser("hydrogen", help="ground-state hydrogen atom")
    p.add_argument("--part", choices=["electric", "magnetic", "both", "energy"],
                   default="electric")
    p.add_argument("--nonrelativistic", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_hydrogen)

    p = sub.add_parser("atom", help="closed-shell noble-gas atom")
    p.add_argument("--element", choices=sorted(NOBLE_GASES), default=None)
    p.add_argument("--Z", type=int, default=None)
    p.add_argument("--A", type=int, default=None)
    common(p)
    p.set_defaults(func=_cmd_atom)

    p = sub.add_parser("figure", help="emit figure data as CSV")
    p.add_argument("--id", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("validate", help="run the oracle and invariant suite")
    p.add_argument("--fast", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonConvergenceError as exc:
        sys.stderr.write(f"non-convergence: {exc}\n")
        return EXIT_NONCONVERGENCE
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
