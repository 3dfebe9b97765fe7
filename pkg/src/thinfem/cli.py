"""Command-line front end.

Subcommands: gen, classify, check-cover, interp-error, solve, table1.
Exit codes: 0 success (and check satisfied), 1 domain-level failure,
2 usage errors. Output is deterministic for identical flags: JSON is
emitted with sorted keys and repr-roundtrip floats, CSV with fixed
5-significant-digit formatting in table1 mode.
"""

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from . import covering, fields, interp, mesh, poisson, quality
from .errors import ThinFEMError


def _angle(value, deg):
    return math.radians(value) if deg else value


def _emit(payload, path=None):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if path:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_mesh(args):
    return mesh.read_mesh(args.mesh)


def _field(name):
    try:
        return fields.NAMED_FIELDS[name](), fields.NAMED_LOADS[name]()
    except KeyError:
        raise ThinFEMError(
            f"unknown field {name!r}; choose from {sorted(fields.NAMED_FIELDS)}"
        ) from None


def _sig5(x):
    """5-significant-digit decimal, the table1 CSV convention."""
    return f"{x:.5g}"


def cmd_gen(args):
    if args.generator == "square-six":
        if args.alpha is None:
            raise ThinFEMError("square-six requires --alpha")
        m = mesh.generate_square_six(args.K, args.alpha)
    elif args.generator == "uniform-right":
        m = mesh.generate_uniform_right(args.K)
    else:
        m = mesh.generate_refined_diag(args.K, args.eps)
    mesh.write_mesh(m, args.output)
    print(f"wrote {args.output}: {m.n_vertices} vertices, {m.n_elements} elements")
    return 0


def cmd_classify(args):
    m = _load_mesh(args)
    theta = _angle(args.theta, args.deg)
    report = quality.classify(m, theta)
    wmin, emin = report.worst_theta_min
    wmax, emax = report.worst_theta_max
    _emit(
        {
            "config": {"mesh": args.mesh, "theta": theta},
            "elements": m.n_elements,
            "dim": m.dim,
            "counts": report.counts,
            "worst_theta_min": {"value": wmin, "element": emin},
            "worst_theta_max": {"value": wmax, "element": emax},
            "classes": report.class_string(),
        },
        args.output,
    )
    return 0


def cmd_check_cover(args):
    m = _load_mesh(args)
    if (args.phi is None) == (args.plan is None):
        raise ThinFEMError("pass exactly one of --phi (auto mode) or --plan")
    if args.phi is not None:
        phi = _angle(args.phi, args.deg)
        report = covering.verify_isosceles_cover(m, phi)
        plan = covering.derive_isosceles_cover(m, phi)
        mode = {"mode": "isosceles", "phi": phi, "covers": len(plan.covers)}
    else:
        plan = covering.read_plan(args.plan)
        report = covering.verify_cover_plan(m, plan)
        mode = {"mode": "general", "plan": args.plan, "covers": len(plan.covers)}
    payload = {
        "config": {"mesh": args.mesh, **mode},
        "params": {
            "theta": plan.params.theta,
            "psi": plan.params.psi,
            "C": plan.params.C,
            "M": plan.params.M,
            "N": plan.params.N,
        },
        **report.to_dict(),
    }
    _emit(payload, args.output)
    return 0 if report.satisfied else 1


def cmd_interp_error(args):
    m = _load_mesh(args)
    phi = _angle(args.phi, args.deg)
    u, _ = _field(args.field)
    rule = interp.quadrature_rule(args.degree)
    report = covering.verify_isosceles_cover(m, phi)
    plan = covering.derive_isosceles_cover(m, phi)
    pi1 = interp.lagrange_interpolate(u, m)
    pistar = interp.cover_interpolate(u, m, plan, force=True)
    h = mesh.mesh_h(m)
    e1 = interp.h1_seminorm_diff(m, u, pi1, rule)
    estar = interp.h1_seminorm_diff(m, u, pistar, rule)
    h2 = interp.h2_seminorm(u, m, rule) if u.hessian is not None else None
    payload = {
        "config": {
            "mesh": args.mesh, "phi": phi, "field": args.field,
            "degree": args.degree,
        },
        "cover_satisfied": report.satisfied,
        "h": h,
        "error_pi1": e1,
        "error_pistar": estar,
        "h2_seminorm": h2,
        "ratio": (estar / (h * h2)) if h2 else None,
    }
    _emit(payload, args.output)
    return 0 if report.satisfied else 1


def cmd_solve(args):
    m = _load_mesh(args)
    u, f = _field(args.field)
    rule = interp.quadrature_rule(args.degree)
    sol = poisson.solve_poisson(m, f, rule, rel_tol=args.tol)
    h = mesh.mesh_h(m)
    e_h = poisson.fem_h1_error(m, u, sol, rule) if u.gradient is not None else None
    payload = {
        "config": {
            "mesh": args.mesh, "field": args.field, "degree": args.degree,
            "tol": args.tol,
        },
        "vertices": m.n_vertices,
        "free": int(len(sol.nodal.values) - len(m.boundary_vertices)),
        "h": h,
        "e_h": e_h,
        "e_h_over_h": (e_h / h) if e_h is not None else None,
        "iterations": sol.iterations,
        "residual": sol.residual,
    }
    _emit(payload, args.output)
    return 0


def _cell(item):
    K, alpha, degree, tol = item
    row = poisson.run_cell(K, alpha, degree=degree, rel_tol=tol)
    return row


def cmd_table1(args):
    K_list = args.K or list(poisson.DEFAULT_K_LIST)
    alpha_list = args.alpha or list(poisson.DEFAULT_ALPHA_LIST)
    items = [
        (K, alpha, args.degree, args.tol) for K in K_list for alpha in alpha_list
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_cell, items))
    else:
        rows = [_cell(it) for it in items]

    header = ["K", "alpha", "h", "e_h", "e_h_over_h"]
    compare = args.reference == "table1"
    if compare:
        header += ["ref_e_h", "rel_dev_e_h", "ref_ratio", "abs_dev_ratio"]
    lines = [",".join(header)]
    worst_rel = 0.0
    for row in rows:
        rec = [
            str(row.K), _sig5(row.alpha), _sig5(row.h), f"{row.e_h:.4e}",
            _sig5(row.ratio),
        ]
        if compare:
            ref = poisson.REFERENCE_TABLE.get((row.K, row.alpha))
            if ref is None:
                rec += ["", "", "", ""]
            else:
                ref_e, ref_r = ref
                rel = abs(row.e_h - ref_e) / ref_e
                worst_rel = max(worst_rel, rel)
                rec += [f"{ref_e:.4e}", f"{rel:.2e}", _sig5(ref_r),
                        f"{abs(row.ratio - ref_r):.2e}"]
        lines.append(",".join(rec))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if compare:
        print(f"max relative e_h deviation: {worst_rel:.3e}", file=sys.stderr)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="thinfem",
        description="P1 finite elements and covers on meshes with thin elements",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a mesh file")
    g.add_argument("generator", choices=["square-six", "uniform-right", "refined-diag"])
    g.add_argument("--K", type=int, required=True)
    g.add_argument("--alpha", type=float, help="square-six flatness parameter")
    g.add_argument("--eps", type=float, default=0.05, help="refined-diag offset")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("classify", help="good/ordinary/bad classification report")
    c.add_argument("--mesh", required=True)
    c.add_argument("--theta", type=float, required=True)
    c.add_argument("--deg", action="store_true", help="angles given in degrees")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("check-cover", help="verify a cover plan (auto or explicit)")
    k.add_argument("--mesh", required=True)
    k.add_argument("--phi", type=float, help="auto isosceles covers with base angle phi")
    k.add_argument("--plan", help="explicit plan file")
    k.add_argument("--deg", action="store_true")
    k.add_argument("-o", "--output")
    k.set_defaults(func=cmd_check_cover)

    i = sub.add_parser("interp-error", help="interpolation error study")
    i.add_argument("--mesh", required=True)
    i.add_argument("--phi", type=float, required=True)
    i.add_argument("--field", default="quartic")
    i.add_argument("--degree", type=int, default=interp.DEFAULT_DEGREE)
    i.add_argument("--deg", action="store_true")
    i.add_argument("-o", "--output")
    i.set_defaults(func=cmd_interp_error)

    s = sub.add_parser("solve", help="solve the Poisson problem on a mesh file")
    s.add_argument("--mesh", required=True)
    s.add_argument("--field", default="quartic")
    s.add_argument("--degree", type=int, default=interp.DEFAULT_DEGREE)
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("table1", help="convergence table over (K, alpha) cells")
    t.add_argument("--K", type=int, action="append")
    t.add_argument("--alpha", type=float, action="append")
    t.add_argument("--degree", type=int, default=interp.DEFAULT_DEGREE)
    t.add_argument("--tol", type=float, default=1e-12)
    t.add_argument("--reference", choices=["table1"], help="compare to bundled values")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_table1)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ThinFEMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
