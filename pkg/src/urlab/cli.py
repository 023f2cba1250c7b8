"""Command-line front end.

Subcommands::

    urlab verify [--only GROUP ...] [--tol T] [--report PATH]
    urlab fig1 --out PATH [--n 100] [--orders 1,2,3] [--mu-min 1e-4] [--mu-max 1] [--points 50]
    urlab negativity --out PATH [--n 3,10,100] [--mu 1.0]
    urlab bound SPEC          e.g. thermal-jz:n=10,beta=1  dicke:n=4,k=2  squeezed:n=100,mu=0.1

Exit codes: 0 success, 1 failed check, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .bounds import qfi_bound, robertson, schroedinger
from .errors import URLabError
from .opcore import TOLERANCES
from .operators import ansatz_basis, collective_spin, collective_spin_full, ladder_pair, quadrature
from .optimizer import best_in_span, choose_nu, dicke_quadratic_observable, fig1_sweep
from .states import GaussianSpec, dicke, gaussian, gibbs, rank_two_gibbs, spin_squeezed, thermal_jz
from .symmetry import dicke_negativity_approx, negativity_dicke, negativity_squeezed
from .verify import GROUPS, verify_examples

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Locale-independent float with 17 significant digits."""
    return format(float(x), ".17g")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def fig1_csv(n, orders, mu_min, mu_max, points, workers=None) -> str:
    if points < 2:
        raise UsageError("points must be >= 2")
    if not 0 < mu_min < mu_max:
        raise UsageError("need 0 < mu-min < mu-max")
    grid = np.logspace(math.log10(mu_min), math.log10(mu_max), points)
    rows = fig1_sweep(n, orders, grid, workers=workers)
    return _csv_text(
        ["mu", "nu", "qfi_over_n", "order", "bound_over_n"],
        [[fmt(r.mu), fmt(r.nu), fmt(r.qfi_over_n), r.order, fmt(r.bound_over_n)] for r in rows],
    )


def negativity_rows(n_list, mus):
    rows = []
    for n in n_list:
        if n < 3:
            raise UsageError("negativity scan needs n >= 3")
        for k in sorted({1, n // 2}):
            rows.append([n, k, fmt(negativity_dicke(n, k)), fmt(dicke_negativity_approx(n, k)), "dicke"])
        for mu in mus:
            rows.append([n, "", fmt(negativity_squeezed(n, mu)), "", f"squeezed(mu={fmt(mu)})"])
    return rows


def negativity_csv(n_list, mus) -> str:
    return _csv_text(["n", "k", "N_exact", "N_eq29", "family"], negativity_rows(n_list, mus))


def parse_state_spec(spec: str):
    """Split ``family:key=value,...`` into the family name and a parameter dict."""
    family, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, (t.strip() for t in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise UsageError(f"malformed parameter {item!r} in {spec!r}")
        params[key.strip()] = value.strip()
    return family.strip(), params


def _num(params, key, default=None, kind=float):
    if key not in params:
        if default is None:
            raise UsageError(f"missing parameter {key!r}")
        return default
    try:
        return kind(params[key])
    except ValueError:
        raise UsageError(f"bad value for {key!r}: {params[key]!r}")


def build_bound_problem(spec: str):
    """State and observable pair ``(rho, A, B, description)`` for a state-spec string."""
    family, p = parse_state_spec(spec)
    if family == "thermal-jz":
        n = _num(p, "n", kind=int)
        if not 1 <= n <= 12:
            raise UsageError("thermal-jz uses the full 2^n space; need 1 <= n <= 12")
        rho = thermal_jz(n, _num(p, "beta"))
        return rho, collective_spin_full(n, "x"), collective_spin_full(n, "y"), "A = Jx, B = Jy"
    if family == "rank-two":
        sys_, beta = rank_two_gibbs(_num(p, "g"))
        a, b = ladder_pair(sys_)
        return gibbs(sys_, beta), a, b, "A = L+ + L-, B = i(L+ - L-)"
    if family == "dicke":
        n, k = _num(p, "n", kind=int), _num(p, "k", kind=int)
        sym = dicke(n, k)
        a = dicke_quadratic_observable(n, n / 2 - k)
        return sym.density(), a, collective_spin(n, "y"), "A = quadratic Dicke optimum, B = Jy"
    if family == "squeezed":
        n, mu = _num(p, "n", kind=int), _num(p, "mu")
        nu = _num(p, "nu", choose_nu(n, mu))
        order = _num(p, "order", 1, kind=int)
        sym = spin_squeezed(n, mu, nu)
        opt = best_in_span(sym, ansatz_basis(n, order))
        return sym.density(), opt.operator, collective_spin(n, "y"), f"A = best order-{order} polynomial, B = Jy"
    if family == "gaussian":
        try:
            alpha = complex(p.get("alpha", "0").replace("i", "j"))
        except ValueError:
            raise UsageError(f"bad alpha {p.get('alpha')!r}")
        theta = _num(p, "theta", 0.0)
        rho = gaussian(GaussianSpec(_num(p, "beta"), _num(p, "r", 0.0), theta, alpha))
        a = quadrature(rho.dim, theta / 2)
        b = quadrature(rho.dim, theta / 2 + math.pi / 2)
        return rho, a, b, "A = X(theta/2), B = X(theta/2 + pi/2)"
    raise UsageError(f"unknown state family {family!r}")


def bound_report(spec: str) -> dict:
    rho, a, b, pair = build_bound_problem(spec)
    return {
        "version": __version__,
        "state": spec,
        "observables": pair,
        "conventions": {"hbar": 1.0},
        "tolerances": dict(TOLERANCES),
        "robertson": robertson(rho, a, b).to_dict(),
        "schroedinger": schroedinger(rho, a, b).to_dict(),
        "qfi_bound": qfi_bound(rho, a, b).to_dict(),
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="urlab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"urlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the closed-form example checks")
    v.add_argument("--only", action="append", choices=GROUPS, help="restrict to a check group (repeatable)")
    v.add_argument("--tol", type=float, help="override every check tolerance")
    v.add_argument("--report", default="-", help="JSON report path (default stdout)")

    f = sub.add_parser("fig1", help="QFI versus polynomial-observable bounds for twisted states")
    f.add_argument("--n", type=int, default=100)
    f.add_argument("--orders", type=_int_list, default=[1, 2, 3])
    f.add_argument("--mu-min", type=float, default=1e-4)
    f.add_argument("--mu-max", type=float, default=1.0)
    f.add_argument("--points", type=int, default=50)
    f.add_argument("--workers", type=int, default=None, help="thread count (default UR_LAB_THREADS or 1)")
    f.add_argument("--out", required=True, help="CSV path, '-' for stdout")

    g = sub.add_parser("negativity", help="two-qubit negativity of reduced Dicke and twisted states")
    g.add_argument("--n", type=_int_list, default=[3, 4, 10, 30, 100])
    g.add_argument("--mu", type=_float_list, default=[1.0])
    g.add_argument("--out", required=True, help="CSV path, '-' for stdout")

    b = sub.add_parser("bound", help="evaluate Robertson, Schroedinger and QFI bounds for one state")
    b.add_argument("spec", help="state spec, e.g. thermal-jz:n=10,beta=1")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            report = verify_examples(args.only, args.tol)
            _write_text(args.report, json.dumps(report, indent=2) + "\n")
            return EXIT_OK if report["passed"] else EXIT_FAIL
        if args.command == "fig1":
            _write_text(args.out, fig1_csv(args.n, args.orders, args.mu_min, args.mu_max, args.points, args.workers))
            return EXIT_OK
        if args.command == "negativity":
            _write_text(args.out, negativity_csv(args.n, args.mu))
            return EXIT_OK
        if args.command == "bound":
            report = bound_report(args.spec)
            print("# units: hbar = 1", file=sys.stderr)
            _write_text("-", json.dumps(report, indent=2) + "\n")
            return EXIT_OK
    except (UsageError, URLabError) as exc:
        print(f"urlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"urlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
