"""Command-line front end: ``chromakit <subcommand> [options]``."""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__, acceptance, cesaro, chromdiff, config, expand, filterbank, mkernel
from .errors import ChromaError
from .opoly import get_family

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _num(x):
    """Shortest round-trip text for a float, with -0.0 printed as 0.0."""
    return repr(float(x) + 0.0)


def parse_grid(text):
    """``tmin:tmax:steps`` to an evenly spaced array with ``steps`` points."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be tmin:tmax:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must be tmin:tmax:steps, got {text!r}") from None
    if steps < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError("grid needs finite bounds and steps >= 1")
    return np.linspace(lo, hi, steps)


def parse_list(text):
    """Comma list of floats or a ``lo:hi:steps`` grid."""
    if ":" in text:
        return parse_grid(text)
    try:
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _family(args):
    try:
        return get_family(args.family, getattr(args, "p", None))
    except ValueError as e:
        raise UsageError(str(e)) from None


def _meta(args, **extra):
    meta = {"subcommand": args.command, "library_version": __version__}
    for key in ("family", "order", "seed"):
        if getattr(args, key, None) is not None:
            meta[key] = getattr(args, key)
    meta.update(extra)
    return meta


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _emit(args, header, rows, meta, extra_json=None):
    if args.format == "json":
        doc = {"meta": meta, "columns": header,
               "rows": [[float(v) if isinstance(v, (float, np.floating)) else v for v in r]
                        for r in rows]}
        if extra_json:
            doc.update(extra_json)
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        text = _csv_text(header, rows)
    _write(args.output, text)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_tables(args):
    fam = _family(args)
    table = chromdiff.build_table(fam, args.order)
    which = ["A", "B"] if args.which == "both" else [args.which]
    header = ["table", "n"] + [f"k{k}" for k in range(args.order + 1)]
    rows = []
    for name in which:
        M = table.A if name == "A" else table.B
        for n in range(args.order + 1):
            rows.append([name, n] + [float(x) for x in M[n]])
    _emit(args, header, rows, _meta(args, normalization="A[n,k] = K^n[t^k/k!](0); B = A^-1"))
    return EXIT_OK


def cmd_kernel(args):
    fam = _family(args)
    t = parse_grid(args.grid)
    grid = mkernel.kernel_grid(fam, args.order, t, mkernel.Method(args.method))
    header = ["t"] + [f"K{n}" for n in range(args.order + 1)]
    _emit(args, header, grid.tolist(), _meta(args, method=args.method))
    return EXIT_OK


def cmd_expand(args):
    if args.family != "legendre":
        raise UsageError("expand reconstructs sampled signals in the legendre family only")
    t = parse_grid(args.grid)
    sig = expand.BandlimitedSignal.random(args.window, args.seed)
    rep = expand.approximation_report(sig, args.order, args.base, t, args.trunc_window)
    header = ["t", "f", "chromatic", "taylor", "E_n", "bound", "chromatic_error", "taylor_error"]
    rows = np.column_stack([rep.t, rep.f, rep.approx, rep.taylor, rep.E, rep.bound,
                            rep.error, rep.taylor_error]).tolist()
    meta = _meta(args, base=args.base, window=args.window, tail=rep.tail,
                 bound_violations=int(rep.bound_violations().size))
    extra = {"samples": {str(k): v for k, v in sig.as_dict().items()}}
    _emit(args, header, rows, meta, extra)
    return EXIT_OK


def cmd_filter(args):
    d = filterbank.design_fir(n=args.order, taps=args.taps,
                              passband_fraction=args.passband, grid_density=args.grid_density)
    report = d.report()
    report["meets_1.3e-4"] = bool(d.max_passband_error <= 1.3e-4)
    if args.emit_taps:
        T = d.half_length
        rows = [[k, k * d.spacing, float(c)] for k, c in zip(range(-T, T + 1), d.taps)]
        _write(args.emit_taps, _csv_text(["k", "offset", "c_k"], rows))
    if args.emit_response:
        w = np.linspace(0.0, math.pi, args.response_points)
        H = filterbank.freq_response(d, w)
        target = filterbank.target_response(args.order, w)
        rows = np.column_stack([w, w / 2, np.abs(target), np.abs(H), np.abs(H - target)]).tolist()
        _write(args.emit_response, _csv_text(
            ["omega", "omega_half", "abs_target", "abs_achieved", "error"], rows))
    header = ["key", "value"]
    rows = [[k, v] for k, v in report.items()]
    if args.format == "json":
        _write(args.output, json.dumps({"meta": _meta(args), "report": report},
                                       indent=1, sort_keys=True) + "\n")
    else:
        _write(args.output, _csv_text(header, rows))
    return EXIT_OK


def cmd_conjecture(args):
    omegas = parse_list(args.omega_grid)
    fam = get_family(args.family) if args.family else None
    rows = []
    for r in cesaro.conjecture_scan(args.p, omegas, args.nmax, family=fam):
        for n, m in zip(r.n, r.means):
            rows.append([float(r.omega), int(n), float(m), float(r.decade_ratio), r.verdict])
    header = ["omega", "n", "cesaro_mean", "decade_ratio", "verdict"]
    meta = _meta(args, p=args.p, nmax=args.nmax,
                 family_used=fam.name if fam else f"power-{args.p:g}",
                 verdict_rule="mean(N)/mean(N/10) in [0.5, 2] and mean > 0; heuristic")
    _emit(args, header, rows, meta)
    return EXIT_OK


def cmd_selftest(args):
    select = None
    if args.only:
        try:
            select = {int(v) for v in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes a comma list of criterion numbers") from None
    results = acceptance.run_all(select)
    for r in results:
        print(r.line())
    if args.archive:
        _write(args.archive, acceptance.conjecture_archive())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_NUMERIC


def build_parser():
    p = argparse.ArgumentParser(
        prog="chromakit",
        description="Chromatic derivatives, chromatic expansions and related numerics. "
                    "Signals are band-limited to [-pi, pi] (angular frequency, rad per unit "
                    "time) and sampled at the integers unless stated otherwise.",
    )
    p.add_argument("--version", action="version", version=f"chromakit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, family=True):
        sp.add_argument("--format", choices=["csv", "json"], default="csv",
                        help="output format (default csv)")
        sp.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        if family:
            sp.add_argument("--family", default="legendre",
                            help="legendre, chebyshev, hermite, herron or power-p (default legendre)")
            sp.add_argument("--p", type=float, default=None,
                            help="exponent for the power family gamma_n = (n+1)^p")

    sp = sub.add_parser("tables", help="operator tables A and B",
                        description="Dump A[n,k] = K^n[t^k/k!](0) and its inverse B, which "
                                    "give K^n = sum A[n,k] D^k and D^n = sum B[n,k] K^k. "
                                    "D is d/dt in the family's time unit. Orders above the cap "
                                    f"({config.DEFAULT_MAX_ORDER}) need {config.ENV_MAX_ORDER}.")
    common(sp)
    sp.add_argument("--order", type=int, required=True, help="largest order N")
    sp.add_argument("--which", choices=["A", "B", "both"], default="both")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("kernel", help="K^n[m](t) on a grid",
                        description="Tabulate K^0[m](t)..K^N[m](t), m the family's kernel "
                                    "(sinc(t) = sin(pi t)/(pi t) for legendre). t is in signal "
                                    "time units.")
    common(sp)
    sp.add_argument("--order", type=int, default=8, help="largest order N (default 8)")
    sp.add_argument("--grid", default="-8:8:401", help="tmin:tmax:steps (default -8:8:401)")
    sp.add_argument("--method", choices=["closed_form", "series"], default="closed_form")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("expand", help="chromatic vs Taylor approximation of a random signal",
                        description="Generate f(t) = sum f(n) sinc(t-n) with samples uniform in "
                                    "(-1,1) on [-window, window], expand it about --base and "
                                    "tabulate f, the order-n chromatic and Taylor approximations, "
                                    "E_n(t - base) and the error bound tail*E_n. Time in sample "
                                    "units.")
    common(sp)
    sp.add_argument("--order", type=int, default=16)
    sp.add_argument("--base", type=float, default=0.0, help="expansion point u")
    sp.add_argument("--grid", default="-4:4:801", help="tmin:tmax:steps")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--window", type=int, default=32, help="half-width W of the sample window")
    sp.add_argument("--trunc-window", type=int, default=None,
                    help="drop samples beyond this |n| (default 4W, keeps all)")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("filter", help="FIR estimator of a chromatic derivative",
                        description="Design T[f](t) = sum_{k=-T}^{T} c_k f(t + k/2) matching "
                                    "i^n P_n(w) (legendre) for |w| <= passband*pi, free up to "
                                    "(2-passband)*pi, zero beyond; w in rad per sample unit, "
                                    "taps at spacing 1/2. Response files list w and w/2; the "
                                    "latter is the axis on which the target reads P_n(2 w') "
                                    "for |w'| <= pi/2.")
    common(sp, family=False)
    sp.add_argument("--order", type=int, default=15, help="derivative order n (<= 24)")
    sp.add_argument("--taps", type=int, default=129, help="odd number of taps 2T+1")
    sp.add_argument("--passband", type=float, default=0.9, help="passband fraction of pi (<= 0.95)")
    sp.add_argument("--grid-density", type=int, default=16, help="grid points per tap (>= 16)")
    sp.add_argument("--emit-taps", default=None, help="write k, offset, c_k CSV here")
    sp.add_argument("--emit-response", default=None,
                    help="write omega, omega_half, |target|, |achieved|, error CSV here")
    sp.add_argument("--response-points", type=int, default=513)
    sp.set_defaults(func=cmd_filter)

    sp = sub.add_parser("conjecture", help="Cesaro means of sum P_k(w)^2",
                        description="For gamma_n = (n+1)^p tabulate (n+1)^(p-1) sum_{k<=n} "
                                    "P_k(w)^2 at log-spaced n with a heuristic verdict from the "
                                    "ratio of the means at nmax and nmax/10. w is the "
                                    "polynomial variable in rad per unit time, unnormalized "
                                    "(support [-2, 2] when p = 0).")
    common(sp, family=False)
    sp.add_argument("--p", type=float, required=True, help="exponent p in [0, 1)")
    sp.add_argument("--omega-grid", default="0.25,0.5,1.0,1.5",
                    help="comma list or lo:hi:steps")
    sp.add_argument("--nmax", type=int, default=10000)
    sp.add_argument("--family", default=None,
                    help="use this family instead of the power family (e.g. hermite)")
    sp.set_defaults(func=cmd_conjecture)

    sp = sub.add_parser("selftest", help="run the acceptance suite",
                        description="Run the eleven acceptance criteria and print one "
                                    "PASS/FAIL line each. Exit status 1 if any fails. "
                                    "Errors are in the units of the quantity checked; times "
                                    "are wall-clock seconds against each runtime budget.")
    sp.add_argument("--only", default=None, help="comma list of criterion numbers")
    sp.add_argument("--archive", default=None, help="write the conjecture scan CSV here")
    sp.set_defaults(func=cmd_selftest)
    return p


def _error_record(command, exc):
    rec = {"error": type(exc).__name__, "message": str(exc), "subcommand": command}
    for key in ("order", "index"):
        if getattr(exc, key, None) is not None:
            rec[key] = getattr(exc, key)
    return json.dumps(rec, sort_keys=True)


# options whose values may start with a minus sign
_RANGE_OPTIONS = ("--grid", "--omega-grid")


def _attach_range_values(argv):
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _RANGE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_range_values(argv))
    try:
        return args.func(args)
    except (UsageError, ValueError, TypeError) as exc:
        # bad parameter values, including library domain checks
        sys.stderr.write(_error_record(args.command, exc) + "\n")
        return EXIT_USAGE
    except (ChromaError, ArithmeticError) as exc:
        sys.stderr.write(_error_record(args.command, exc) + "\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
