"""Command-line front end.

Subcommands: identities, fibration, deform, flow, lift, residual, cs,
obstruct, report.  Every subcommand prints a JSON document on stdout
(deterministic for a fixed seed: sorted keys, shortest-repr floats) and
exits 0 on success, 1 on validation errors and 2 on numerical failures,
with a machine-readable error JSON on stderr.

Randomness everywhere flows through the documented 64-bit splitmix-style
generator (see rng.py for the exact recurrence), keyed by ``--seed``.
The ``G2LAB_THREADS`` environment variable caps BLAS parallelism; set it
before launching for fully reproducible timing runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .exterior import ConstForm, interior, lex_basis, hodge
from .fibration import (FibrationSpec, build_fibration, decompose_deformation)
from .g2core import eigen_split, standard_phi, standard_star_phi
from .gauge.fibered import q_map
from .gauge.lattice import (
    CoolingDivergence, add_link_noise, asd_residual_4d, clover_charge,
    chirality_energies, constant_flux_field, cool_to_sd, lift_lattice_7d,
    read_snapshot, residual_7d, write_snapshot,
)
from .gauge.fourier import (
    constant_curvature_u1, instanton_residual_field, lift_to_7d,
    topological_charge,
)
from .chernsimons import (
    CSContext, obstruction_verdict, obstruction_verdict_lattice,
    perturbed_rho, rho_lattice, rho_on_translation, random_offsets,
    translation_tangent, cs_one_form,
)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2


class ValidationFailure(Exception):
    pass


class NumericalFailure(Exception):
    pass


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    sys.stdout.write("\n")


def _emit_error(code: str, message: str) -> None:
    sys.stderr.write(json.dumps(
        {"error": {"code": code, "message": message}}, sort_keys=True))
    sys.stderr.write("\n")


def _load_json(path: str) -> dict:
    if not os.path.exists(path):
        raise ValidationFailure(f"file not found: {path}")
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"invalid JSON in {path}: {exc}") from exc


def _load_spec(path: str | None) -> FibrationSpec:
    if path is None:
        return FibrationSpec.standard()
    try:
        return FibrationSpec.from_json_dict(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationFailure(f"invalid fibration spec: {exc}") from exc


def _parse_dims(text: str, n: int) -> tuple:
    parts = text.lower().split("x")
    if len(parts) != n or not all(p.isdigit() and int(p) >= 2 for p in parts):
        raise ValidationFailure(
            f"expected {n} lattice extents >= 2 like 6x6x6x6, got {text!r}")
    return tuple(int(p) for p in parts)


# ---------------------------------------------------------------------------
# identities


def identity_suite(mode: str) -> list:
    """The exact identity checks behind ``g2lab identities``.

    In exact mode every residual must be exactly zero (rational
    arithmetic); double mode tolerates accumulated rounding.
    """
    exact = mode == "exact"
    phi = standard_phi() if exact else standard_phi().to_double()
    s = eigen_split(phi)
    items = []

    def add(name, residual):
        tol = 0.0 if exact else 1e-12
        r = float(residual)
        items.append({"name": name, "residual": r, "pass": r <= tol})

    # the coassociative 4-form in closed form
    target = standard_star_phi() if exact else standard_star_phi().to_double()
    add("coassociative-dual",
        max((abs(float(c)) for c in (s.star_phi - target).coeffs.values()),
            default=0.0))

    # the induced metric of the model form is the identity
    g = s.metric.mat
    add("induced-metric-identity",
        max(abs(float(g[i][j]) - (1.0 if i == j else 0.0))
            for i in range(7) for j in range(7)))

    # the 7-block is spanned by the vector contractions of phi
    res = 0.0
    one = 1 if exact else 1.0
    for i in range(7):
        v = [one if j == i else one * 0 for j in range(7)]
        gen = interior(v, phi)
        diff = s.apply_p7(gen) - gen
        res = max(res, max((abs(float(c)) for c in diff.coeffs.values()),
                           default=0.0))
    add("two-form-7-block-span", res)

    # wedging with the coassociative form kills the 14-block and has rank 7
    kill = 0.0
    cols = []
    for idx in lex_basis(7, 2):
        eta = ConstForm.basis(7, idx, one)
        img14 = s.apply_p14(eta)
        from .g2core import l_star_phi
        dead = l_star_phi(img14, s)
        kill = max(kill, max((abs(float(c)) for c in dead.coeffs.values()),
                             default=0.0))
        cols.append([float(c) for c in l_star_phi(eta, s).coeff_vector(
            lex_basis(7, 6))])
    rank = int(np.linalg.matrix_rank(np.array(cols).T, tol=1e-9))
    add("coassociative-wedge-kernel", kill)
    add("coassociative-wedge-rank", abs(rank - 7))

    # the fiber-plane map sends the three coordinate planes to the omegas
    from .fibration import OMEGA_BASE
    res = 0.0
    blocks = [([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], OMEGA_BASE[2]),
              ([[0, 0, 0], [0, 0, 1], [0, -1, 0]], OMEGA_BASE[0]),
              ([[0, 0, -1], [0, 0, 0], [1, 0, 0]], OMEGA_BASE[1])]
    for blk, want in blocks:
        diff = q_map(blk) - want
        res = max(res, max((abs(float(c)) for c in diff.coeffs.values()),
                           default=0.0))
    add("fiber-plane-map", res)

    # the 4-form split round-trips and its blocks count 1+12+9+9+4 = 35
    res = 0.0
    active = [set(), set(), set(), set(), set()]
    for idx in lex_basis(7, 4):
        xi = ConstForm.basis(7, idx, one)
        sp = decompose_deformation(xi)
        back = sp.reassemble() - xi
        res = max(res, max((abs(float(c)) for c in back.coeffs.values()),
                           default=0.0))
        if sp.c_i != 0:
            active[0].add(0)
        for a in range(3):
            for b in range(4):
                if sp.c_ii[a][b] != 0:
                    active[1].add((a, b))
            for b in range(3):
                if sp.c_iii_pp[a][b] != 0:
                    active[2].add((a, b))
                if sp.c_iii_mp[a][b] != 0:
                    active[3].add((a, b))
        for b in range(4):
            if sp.c_iv[b] != 0:
                active[4].add(b)
    add("deformation-split-roundtrip", res)
    counts = tuple(len(a) for a in active)
    add("deformation-split-dimensions",
        0.0 if counts == (1, 12, 9, 9, 4) else 1.0)
    return items


def cmd_identities(args) -> int:
    items = identity_suite(args.mode)
    ok = all(it["pass"] for it in items)
    _emit({"command": "identities", "mode": args.mode, "identities": items,
           "all_pass": ok})
    if not ok:
        raise NumericalFailure("identity suite failed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# fibration / deform


def cmd_fibration(args) -> int:
    spec = _load_spec(args.spec)
    fib = build_fibration(spec)
    g = fib.g2.metric.mat
    ortho = max(abs(float(g[i][j]) - (1.0 if i == j else 0.0))
                for i in range(7) for j in range(7))
    mixing = fib.mixing_block()
    product = bool(np.abs(mixing).max() == 0.0)
    _emit({
        "command": "fibration",
        "mode": args.mode,
        "generator_matrix": [[float(x) for x in row] for row in fib.ltilde],
        "phi": _form_json(fib.phi),
        "orthonormality_residual": float(ortho),
        "diagnosis": "product" if product else "non-product",
    })
    return EXIT_OK


def _form_json(a: ConstForm) -> dict:
    return a.to_json_dict()


def cmd_deform(args) -> int:
    d = _load_json(args.xi)
    try:
        xi = ConstForm.from_json_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationFailure(f"invalid form JSON: {exc}") from exc
    if (xi.dim, xi.degree) != (7, 4):
        raise ValidationFailure("xi must be a 4-form on the 7-torus")
    sp = decompose_deformation(xi)
    _emit({"command": "deform", "mode": args.mode,
           "split": sp.to_json_dict()})
    return EXIT_OK


# ---------------------------------------------------------------------------
# lattice pipeline


_HALF_FLUX = ((0, 0.5, 0.5, 0), (-0.5, 0, 0, -0.5),
              (-0.5, 0, 0, 0.5), (0, 0.5, -0.5, 0))
_UNIT_SD_FLUX = ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0))


def _flow_start(dims, group: str, start: str, noise: float, seed: int):
    if start == "auto":
        start = "half-flux" if group == "su2" else "sd-flux"
    if start == "half-flux":
        if group != "su2":
            raise ValidationFailure("half-flux start requires --group su2")
        U = constant_flux_field(dims, _HALF_FLUX, "su2")
    elif start == "sd-flux":
        U = constant_flux_field(dims, _UNIT_SD_FLUX, group)
    elif start == "identity":
        from .gauge.lattice import identity_field
        U = identity_field(dims, group)
    else:
        raise ValidationFailure(f"unknown start {start!r}")
    if noise > 0:
        U = add_link_noise(U, noise, seed)
    return U


def cmd_flow(args) -> int:
    dims = _parse_dims(args.lattice, 4)
    if args.group not in ("u1", "su2"):
        raise ValidationFailure("group must be u1 or su2")
    U = _flow_start(dims, args.group, args.start, args.noise, args.seed)
    try:
        result = cool_to_sd(U, max_steps=args.steps, tol=args.tol)
    except CoolingDivergence as exc:
        _write_history_csv(args.out + ".csv", exc.history)
        raise NumericalFailure(str(exc)) from exc
    field = result["field"]
    write_snapshot(field, args.out)
    _write_history_csv(args.out + ".csv", result["history"])
    from .gauge.lattice import plaquette_chirality_energies
    en = plaquette_chirality_energies(field)
    _emit({
        "command": "flow", "mode": args.mode, "seed": args.seed,
        "lattice": list(dims), "group": args.group, "start": args.start,
        "noise": args.noise, "tol": args.tol,
        "converged": bool(result["converged"]),
        "plateau": bool(result["plateau"]),
        "steps": int(result["steps"]),
        "final_asd_fraction": float(en["asd_fraction"]),
        "final_charge": float(clover_charge(field)),
        "out": args.out, "history_csv": args.out + ".csv",
    })
    if not result["converged"]:
        raise NumericalFailure("cooling did not reach tolerance")
    return EXIT_OK


def _write_history_csv(path: str, history) -> None:
    with open(path, "w") as fh:
        fh.write("step,asd_fraction,charge\n")
        for step, frac, charge in history:
            fh.write(f"{step},{frac!r},{charge!r}\n")


def cmd_lift(args) -> int:
    U = _read_field(args.infile, ndim=4)
    _load_spec(args.spec)  # validated; lattice lift runs in adapted coords
    t_dims = _parse_dims(args.tgrid, 3)
    U7 = lift_lattice_7d(U, t_dims)
    write_snapshot(U7, args.out)
    _emit({"command": "lift", "mode": args.mode,
           "base_dims": list(U.dims), "t_dims": list(t_dims),
           "dims": list(U7.dims), "out": args.out})
    return EXIT_OK


def _read_field(path: str, ndim: int):
    if not os.path.exists(path):
        raise ValidationFailure(f"file not found: {path}")
    try:
        U = read_snapshot(path)
    except (ValueError, EOFError) as exc:
        raise ValidationFailure(f"bad snapshot {path}: {exc}") from exc
    if U.ndim != ndim:
        raise ValidationFailure(f"expected a {ndim}D snapshot, got {U.ndim}D")
    return U


def cmd_residual(args) -> int:
    U7 = _read_field(args.infile, ndim=7)
    spec = _load_spec(args.spec)
    fib = build_fibration(spec)
    res = residual_7d(U7, fib.adapted_g2())
    _emit({"command": "residual", "mode": args.mode,
           "dims": list(U7.dims),
           "r_a": res["r_a"], "r_b": res["r_b"], "f7_norm": res["f7_norm"]})
    return EXIT_OK


def cmd_cs(args) -> int:
    U7 = _read_field(args.field, ndim=7)
    spec = _load_spec(args.spec)
    fib = build_fibration(spec)
    ctx = CSContext(fib, fib.g2)
    v = tuple(float(x) for x in (1, 0, 0, 0, 0, 0, 0))
    values = [rho_lattice(ctx, U7, v)]
    for k in range(args.probe_offsets):
        probe = add_link_noise(U7, args.probe_amplitude, args.seed + k + 1)
        values.append(rho_lattice(ctx, probe, v))
    _emit({
        "command": "cs", "mode": args.mode, "seed": args.seed,
        "v": list(v), "probe_offsets": args.probe_offsets,
        "probe_amplitude": args.probe_amplitude,
        "rho_values": values,
        "spread": max(values) - min(values),
    })
    return EXIT_OK


def cmd_obstruct(args) -> int:
    U7 = _read_field(args.field, ndim=7)
    d = _load_json(args.xi)
    try:
        xi = ConstForm.from_json_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationFailure(f"invalid form JSON: {exc}") from exc
    if (xi.dim, xi.degree) != (7, 4):
        raise ValidationFailure("xi must be a 4-form on the 7-torus")
    spec = _load_spec(args.spec)
    fib = build_fibration(spec)
    ctx = CSContext(fib, fib.g2)
    rep = obstruction_verdict_lattice(ctx, U7, xi)
    _emit({"command": "obstruct", "mode": args.mode,
           "report": rep.to_json_dict()})
    return EXIT_OK


# ---------------------------------------------------------------------------
# report


def cmd_report(args) -> int:
    ids = identity_suite("exact")

    spec = FibrationSpec.standard()
    fib = build_fibration(spec)
    ctx = CSContext(fib, fib.g2)

    # continuum lift of the unit SD flux and its residual triple
    F4 = constant_curvature_u1(_UNIT_SD_FLUX)
    F7 = lift_to_7d(F4, fib)
    res = instanton_residual_field(F7, fib.adapted_g2())

    # Chern-Simons constancy probe on the lifted field
    v = (1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    offsets = random_offsets(7, 1, 5, seed=args.seed)
    rho_vals = rho_on_translation(ctx, F7, v, offsets)

    # obstruction verdicts: transverse perturbation vs conformal one
    from .exterior import wedge
    xi_iv = wedge(ConstForm.basis(7, (1,), -2.0), ConstForm.basis(7, (5, 6, 7)))
    xi_i = ConstForm.basis(7, (1, 2, 3, 4), 1.0)
    rep_iv = obstruction_verdict(ctx, F7, xi_iv)
    rep_i = obstruction_verdict(ctx, F7, xi_i)

    # small abelian lattice flow for the pipeline section
    U = _flow_start((4, 4, 4, 4), "u1", "sd-flux", 0.02, args.seed)
    flow = cool_to_sd(U, max_steps=2000, tol=1e-3)
    en = chirality_energies(flow["field"])

    report = {
        "command": "report",
        "mode": args.mode,
        "seed": args.seed,
        "identities": {"items": ids, "all_pass": all(i["pass"] for i in ids)},
        "fibration": {
            "generator_matrix": [[float(x) for x in row] for row in fib.ltilde],
            "diagnosis": "product" if np.abs(fib.mixing_block()).max() == 0
            else "non-product",
        },
        "lift": {
            "flux": [list(r) for r in _UNIT_SD_FLUX],
            "charge": float(topological_charge(F4)),
            "residual": {k: float(vv) for k, vv in res.items()},
        },
        "cs": {
            "v": list(v),
            "rho_values": [float(x) for x in rho_vals],
            "spread": float(max(rho_vals) - min(rho_vals)),
        },
        "obstruction": {
            "transverse": rep_iv.to_json_dict(),
            "conformal": rep_i.to_json_dict(),
        },
        "flow": {
            "lattice": [4, 4, 4, 4], "group": "u1",
            "converged": bool(flow["converged"]),
            "steps": int(flow["steps"]),
            "final_asd_fraction": float(en["asd_fraction"]),
            "final_charge": float(clover_charge(flow["field"])),
        },
    }
    text = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _print_report_table(report)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _print_report_table(report: dict) -> None:
    rows = [
        ("identity suite", "pass" if report["identities"]["all_pass"] else "FAIL"),
        ("fibration", report["fibration"]["diagnosis"]),
        ("lift charge", f"{report['lift']['charge']:+.3f}"),
        ("lift residual r_a", f"{report['lift']['residual']['r_a']:.2e}"),
        ("rho spread", f"{report['cs']['spread']:.2e}"),
        ("transverse verdict", report["obstruction"]["transverse"]["verdict"]),
        ("conformal verdict", report["obstruction"]["conformal"]["verdict"]),
        ("flow converged", str(report["flow"]["converged"]).lower()),
        ("flow charge", f"{report['flow']['final_charge']:+.3f}"),
    ]
    width = max(len(k) for k, _ in rows)
    for k, val in rows:
        sys.stdout.write(f"{k.ljust(width)}  {val}\n")


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "double"), default="exact",
                        help="arithmetic mode for form computations")
    common.add_argument("--seed", type=int, default=42,
                        help="seed for the documented splitmix-style PRNG")

    p = argparse.ArgumentParser(prog="g2lab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("identities", parents=[common],
                   help="run the exact identity suite")

    q = sub.add_parser("fibration", parents=[common],
                       help="build a torus fibration from a spec file")
    q.add_argument("--spec", default=None, help="fibration spec JSON")

    q = sub.add_parser("deform", parents=[common],
                       help="split a 4-form perturbation into its blocks")
    q.add_argument("--xi", required=True, help="4-form JSON file")

    q = sub.add_parser("flow", parents=[common], help="cool a lattice field")
    q.add_argument("--lattice", default="6x6x6x6")
    q.add_argument("--group", default="su2")
    q.add_argument("--tol", type=float, default=1e-3)
    q.add_argument("--steps", type=int, default=5000)
    q.add_argument("--noise", type=float, default=0.005)
    q.add_argument("--start", default="auto",
                   choices=("auto", "half-flux", "sd-flux", "identity"))
    q.add_argument("--out", required=True)

    q = sub.add_parser("lift", parents=[common], help="lift a 4D snapshot")
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--spec", default=None)
    q.add_argument("--tgrid", default="4x4x4")
    q.add_argument("--out", required=True)

    q = sub.add_parser("residual", parents=[common],
                       help="7D instanton residuals of a snapshot")
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--spec", default=None)

    q = sub.add_parser("cs", parents=[common],
                       help="Chern-Simons 1-form on translation tangents")
    q.add_argument("--field", required=True)
    q.add_argument("--spec", default=None)
    q.add_argument("--probe-offsets", type=int, default=5)
    q.add_argument("--probe-amplitude", type=float, default=0.02)

    q = sub.add_parser("obstruct", parents=[common],
                       help="deformation obstruction verdict")
    q.add_argument("--field", required=True)
    q.add_argument("--xi", required=True)
    q.add_argument("--spec", default=None)

    q = sub.add_parser("report", parents=[common],
                       help="bundle module outputs into one JSON report")
    q.add_argument("--out", default=None)

    return p


_COMMANDS = {
    "identities": cmd_identities,
    "fibration": cmd_fibration,
    "deform": cmd_deform,
    "flow": cmd_flow,
    "lift": cmd_lift,
    "residual": cmd_residual,
    "cs": cmd_cs,
    "obstruct": cmd_obstruct,
    "report": cmd_report,
}


def run(argv=None) -> int:
    threads = os.environ.get("G2LAB_THREADS")
    if threads and threads.isdigit():
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            _emit_error("validation", "invalid arguments")
            return EXIT_VALIDATION
        return 0
    try:
        return _COMMANDS[args.command](args)
    except ValidationFailure as exc:
        _emit_error("validation", str(exc))
        return EXIT_VALIDATION
    except NumericalFailure as exc:
        _emit_error("numerical", str(exc))
        return EXIT_NUMERICAL
    except (ValueError, ArithmeticError) as exc:
        _emit_error("numerical", str(exc))
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
