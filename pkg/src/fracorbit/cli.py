"""Command-line frontend: ``fracorbit <command> [options]``.

Errors are printed as one JSON object on stderr and mapped to exit codes
(2 validation, 3 precision cap, 4 undecidable rounding, 1 internal).
"""
from __future__ import annotations

import argparse
import io as _stdio
import json
import sys
from contextlib import redirect_stdout
from fractions import Fraction
from typing import Sequence

from . import __version__
from .algebraic import delta_threshold, invariants, parse_algebraic, rational_algebraic
from .counting import (
    DEFAULT_S,
    check_recurrence_in_runs,
    count_hits,
    geometric_growth_check,
    logN_fit,
    max_runs,
    solve_theta,
)
from .enclosure import to_fraction
from .errors import EXIT_INTERNAL, EXIT_OK, FracOrbitError, ValidationError
from .orbit import PrecisionBudget, compute_orbit
from .realspec import parse_realspec
from .selfsim import IFSpec, decay_fit, lyons_partial_sum, mu_hat_many
from .serialize import digest, dumps, fourier_csv, manifest, orbit_csv, runs_csv


def _alpha(text: str, root: str):
    s = text.strip()
    if "x" not in s and not s.startswith("["):
        return rational_algebraic(to_fraction(s))
    return parse_algebraic(s, root if root in ("largest", "smallest") else int(root))


def _ifs(text: str) -> IFSpec:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    return IFSpec.from_json(text)


def _budget(args) -> PrecisionBudget:
    kw = {"guard_bits": args.precision_bits}
    if args.cap_bits is not None:
        kw["cap_bits"] = args.cap_bits
    return PrecisionBudget(**kw)


def _orbit(args, N: int):
    alpha = _alpha(args.alpha, args.root)
    xi = parse_realspec(args.xi, alpha)
    return alpha, compute_orbit(xi, alpha, args.eta, N, _budget(args))


def _fmt(args, default: str) -> str:
    return args.format or default


def _csv_lines(header: Sequence[str], rows) -> str:
    out = [",".join(header)]
    out.extend(",".join(str(v) for v in row) for row in rows)
    return "\n".join(out) + "\n"


# -- commands -------------------------------------------------------------


def cmd_classify(args) -> str:
    alpha = _alpha(args.alpha, args.root)
    inv = invariants(alpha, args.tol)
    rec = {"alpha": str(alpha), "degree": alpha.degree, **inv.to_json()}
    if _fmt(args, "json") == "csv":
        keys = ("degree", "L", "L_tilde", "classification")
        return _csv_lines(keys, [[rec[k] for k in keys]])
    return dumps(rec)


def cmd_thresholds(args) -> str:
    alpha = _alpha(args.alpha, args.root)
    delta = delta_threshold(alpha, args.eta)
    if _fmt(args, "text") == "json":
        return dumps({"alpha": str(alpha), "eta": str(to_fraction(args.eta)), "delta": str(delta)})
    return f"{delta}\n"


def cmd_orbit(args) -> str:
    _, orbit = _orbit(args, args.N)
    if _fmt(args, "csv") == "json":
        return dumps({"N": orbit.N, "exact": orbit.exact, "points": [
            {"n": p.n, "A": str(p.A) if orbit.has_A() else None,
             "eps": p.eps.to_json(20), "dist": p.dist.to_json(20)} for p in orbit]})
    return orbit_csv(orbit)


def _n_values(args) -> list[int]:
    if args.N_list:
        Ns = sorted({int(x) for x in args.N_list.split(",")})
    else:
        Ns = [args.N]
    if Ns[0] < 1:
        raise ValidationError("N must be positive")
    return Ns


def cmd_count(args) -> str:
    Ns = _n_values(args)
    _, orbit = _orbit(args, Ns[-1])
    reports = [count_hits(orbit, args.delta, N) for N in Ns]
    if _fmt(args, "json") == "csv":
        return _csv_lines(("N", "count_ge", "count_lt", "uncertain"),
                          ([r.N, r.count_ge, r.count_lt, r.uncertain] for r in reports))
    out: dict[str, object] = {"reports": [r.to_json() for r in reports]}
    if len(Ns) >= 3 and Ns[0] > 1:
        out["log_fit"] = logN_fit([(r.N, r.count_ge) for r in reports]).to_json()
    return dumps(out)


def cmd_runs(args) -> str:
    _, orbit = _orbit(args, args.N)
    rep = max_runs(orbit, args.delta, args.S)
    if _fmt(args, "json") == "csv":
        return runs_csv(rep.runs)
    return dumps(rep.to_json())


def cmd_verify(args) -> str:
    alpha, orbit = _orbit(args, args.N)
    violations = check_recurrence_in_runs(orbit, alpha, args.delta)
    rep = max_runs(orbit, args.delta, args.S)
    out: dict[str, object] = {
        "N": orbit.N,
        "violations": [v.to_json() for v in violations],
        "runs_checked": len(rep.runs),
    }
    d = alpha.degree
    if d >= 2:
        window_run = next(((s, k) for s, k in rep.runs if k >= d), None)
        if window_run is not None:
            n = window_run[0]
            sol = solve_theta([orbit.A(n + k) for k in range(d)], alpha, n)
            out["theta"] = sol.to_json()
    hits = count_hits(orbit, args.delta, keep_indices=True).hit_indices or ()
    if rep.envelope is not None:
        out["growth"] = geometric_growth_check(hits, rep.gamma, rep.gamma0).to_json()
    return dumps(out)


def _u_values(args) -> list[Fraction]:
    if args.u:
        return [to_fraction(x) for x in args.u.split(",")]
    if args.u_range:
        a, b, count = args.u_range.split(":")
        lo, hi, m = to_fraction(a), to_fraction(b), int(count)
        if m < 1:
            raise ValidationError("u-range needs a positive count")
        if m == 1:
            return [lo]
        return [lo + (hi - lo) * Fraction(i, m - 1) for i in range(m)]
    raise ValidationError("give --u or --u-range")


def cmd_fourier(args) -> str:
    spec = _ifs(args.ifs)
    samples = mu_hat_many(spec, _u_values(args), args.tol)
    if _fmt(args, "csv") == "json":
        return dumps([s.to_json() for s in samples])
    return fourier_csv(samples)


def cmd_decay(args) -> str:
    spec = _ifs(args.ifs)
    fit = decay_fit(spec, (args.j_min, args.j_max), args.samples, args.tol, not args.no_anchors)
    if _fmt(args, "json") == "csv":
        return _csv_lines(("j", "u", "max_abs", "samples"),
                          ([w.j, repr(w.u), repr(w.value), w.samples] for w in fit.maxima))
    return dumps(fit.to_json())


def cmd_lyons(args) -> str:
    spec = _ifs(args.ifs)
    Ms = sorted({int(x) for x in args.M.split(",")})
    sums = [(M, lyons_partial_sum(spec, M, args.tol)) for M in Ms]
    if _fmt(args, "json") == "csv":
        return _csv_lines(("M", "lo", "hi"), ([M, repr(float(s.lo)), repr(float(s.hi))] for M, s in sums))
    return dumps({"partial_sums": [{"M": M, "lo": float(s.lo), "hi": float(s.hi)} for M, s in sums]})


def cmd_replay(args) -> str:
    with open(args.manifest_file, encoding="utf-8") as fh:
        rec = json.load(fh)
    out = _run_capture(rec["argv"])
    got = digest(out)
    same = got == rec["output_sha256"]
    if not same:
        raise _ReplayMismatch(got, rec["output_sha256"])
    return dumps({"match": True, "output_sha256": got})


class _ReplayMismatch(FracOrbitError):
    code = "ReplayMismatch"

    def __init__(self, got: str, want: str):
        super().__init__(f"output digest {got} differs from the recorded {want}")


COMMANDS = {
    "classify": cmd_classify,
    "thresholds": cmd_thresholds,
    "orbit": cmd_orbit,
    "count": cmd_count,
    "runs": cmd_runs,
    "verify": cmd_verify,
    "fourier": cmd_fourier,
    "decay": cmd_decay,
    "lyons": cmd_lyons,
    "replay": cmd_replay,
}


# -- parser -----------------------------------------------------------------


def _add_alpha(p, xi: bool = False, delta: bool = False, N: bool = False):
    p.add_argument("--alpha", "--poly", dest="alpha", required=True, help='minimal polynomial ("x^2-x-1", "[-1,-1,1]") or a rational "3/2"')
    p.add_argument("--root", default="largest", help="which real root above 1: largest, smallest or an index")
    p.add_argument("--eta", default="0", help="rational shift eta")
    if xi:
        p.add_argument("--xi", required=True, help='multiplier: "p/q", "field:[c0,c1]", "lacunary:2^k", "const:pi" or JSON')
    if delta:
        p.add_argument("--delta", required=True, help="rational threshold in (0, 1/2)")
        p.add_argument("--S", type=int, default=DEFAULT_S, help="envelope offset S (gamma0 = S gamma)")
    if N:
        p.add_argument("--N", type=int, default=100)


GLOBAL_DEFAULTS = {"precision_bits": 40, "cap_bits": None, "tol": 1e-10, "format": None,
                   "manifest": None, "output": None}


def _add_globals(p: argparse.ArgumentParser, defaults: dict) -> None:
    p.add_argument("--precision-bits", type=int, default=defaults["precision_bits"],
                   help="guard bits g: eps widths stay below 2^-g")
    p.add_argument("--cap-bits", type=int, default=defaults["cap_bits"], help="refinement cap in bits")
    p.add_argument("--tol", type=float, default=defaults["tol"], help="tolerance for invariants and Fourier samples")
    p.add_argument("--format", choices=("json", "csv", "text"), default=defaults["format"])
    p.add_argument("--manifest", default=defaults["manifest"], help="write a replayable manifest to this path")
    p.add_argument("--output", default=defaults["output"], help="write the result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracorbit", description="Certified fractional-part orbits and self-similar Fourier decay.")
    ap.add_argument("--version", action="version", version=f"fracorbit {__version__}")
    _add_globals(ap, GLOBAL_DEFAULTS)
    # the same flags are accepted after the subcommand; SUPPRESS keeps the top-level value unless given
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, {k: argparse.SUPPRESS for k in GLOBAL_DEFAULTS})
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="algebraic invariants and classification", parents=[common])
    _add_alpha(p)
    p = sub.add_parser("thresholds", help="delta for the given alpha and eta", parents=[common])
    _add_alpha(p)
    p = sub.add_parser("orbit", help="orbit points as CSV", parents=[common])
    _add_alpha(p, xi=True, N=True)
    p = sub.add_parser("count", help="certified hit counts", parents=[common])
    _add_alpha(p, xi=True, delta=True, N=True)
    p.add_argument("--N-list", default=None, help="comma-separated N values evaluated on one orbit")
    p = sub.add_parser("runs", help="maximal runs and the envelope fit", parents=[common])
    _add_alpha(p, xi=True, delta=True, N=True)
    p = sub.add_parser("verify", help="integer identities in runs, theta solve, growth check", parents=[common])
    _add_alpha(p, xi=True, delta=True, N=True)

    for name, hlp in (("fourier", "Fourier transform samples"), ("decay", "window maxima and decay fit"),
                      ("lyons", "partial sums of |mu(n)|/(n log n)")):
        p = sub.add_parser(name, help=hlp, parents=[common])
        p.add_argument("--ifs", required=True, help='JSON like {"r": "1/3", "branches": [[1,"0","1/2"],[1,"2/3","1/2"]]} or @file')
        if name == "fourier":
            p.add_argument("--u", default=None, help="comma-separated frequencies")
            p.add_argument("--u-range", default=None, help="lo:hi:count evenly spaced frequencies")
        elif name == "decay":
            p.add_argument("--j-min", type=int, default=4)
            p.add_argument("--j-max", type=int, default=18)
            p.add_argument("--samples", type=int, default=64)
            p.add_argument("--no-anchors", action="store_true", help="golden-rotation samples only")
        else:
            p.add_argument("--M", required=True, help="comma-separated upper limits")

    p = sub.add_parser("replay", help="re-run a manifest and compare output digests", parents=[common])
    p.add_argument("manifest_file")
    return ap


def _params(args) -> dict:
    skip = {"manifest", "output", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _strip_manifest(argv: Sequence[str]) -> list[str]:
    out: list[str] = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("--manifest", "--output"):
            skip = True
            continue
        if a.startswith("--manifest=") or a.startswith("--output="):
            continue
        out.append(a)
    return out


def _execute(argv: Sequence[str]) -> tuple[argparse.Namespace, str]:
    args = build_parser().parse_args(list(argv))
    return args, COMMANDS[args.command](args)


def _run_capture(argv: Sequence[str]) -> str:
    _, out = _execute(argv)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, out = _execute(argv)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        if args.manifest:
            rec = manifest(args.command, _params(args), _strip_manifest(argv), out, __version__)
            with open(args.manifest, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(dumps(rec))
        return EXIT_OK
    except FracOrbitError as exc:
        sys.stderr.write(json.dumps(exc.to_json()) + "\n")
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        err = ValidationError(str(exc))
        sys.stderr.write(json.dumps(err.to_json()) + "\n")
        return err.exit_code
    except Exception as exc:  # pragma: no cover - last resort
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc),
                                     "exit_code": EXIT_INTERNAL}) + "\n")
        return EXIT_INTERNAL


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Call ``main`` in-process and capture (exit code, stdout, stderr)."""
    out, err = _stdio.StringIO(), _stdio.StringIO()
    prev = sys.stderr
    sys.stderr = err
    try:
        with redirect_stdout(out):
            code = main(argv)
    finally:
        sys.stderr = prev
    return code, out.getvalue(), err.getvalue()
