"""
geoe: command-line front end.

Exit codes: 0 success, 1 a reported check failed, 2 bad input (flags,
kernel spec, sweep spec), 3 numeric domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import specialfn as sf
from .asymptotics import DEFAULT_P, build_expansion, evaluate_expansion, expansion_to_json
from .energy import euclid_exact, exact_energy
from .errors import GeoEnergyError
from .kernels import KernelSpecError, SincWeighted, parse_complex, parse_kernel
from .verify import geometric_grid, identity_suite, kernel_order_fit, optimality_search

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3
ORDER_DPS = 60
BELOW_REGIME = "below asymptotic regime"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Input helpers


def parse_sweep(text: str, parity: str = "auto") -> list:
    """``start:stop:geom|lin[:count]`` (count defaults to 5)."""
    bits = text.split(":")
    if len(bits) not in (3, 4) or bits[2] not in ("geom", "lin"):
        raise UsageError(f"bad sweep spec {text!r}; expected start:stop:geom|lin[:count]")
    try:
        start, stop = int(bits[0]), int(bits[1])
        count = int(bits[3]) if len(bits) == 4 else 5
    except ValueError:
        raise UsageError(f"bad sweep spec {text!r}") from None
    if start < 2 or stop <= start or count < 2:
        raise UsageError(f"bad sweep spec {text!r}; need 2 <= start < stop and count >= 2")
    want = {"even": 0, "odd": 1}.get(parity)
    if bits[2] == "geom":
        return geometric_grid(start, stop, count, want)
    out = []
    for j in range(count):
        n = start + round(j * (stop - start) / (count - 1))
        if want is not None and n % 2 != want:
            n += 1
        if not out or n > out[-1]:
            out.append(n)
    return out


def _n_values(args) -> list:
    if getattr(args, "sweep", None):
        return parse_sweep(args.sweep, args.parity)
    if args.n is None:
        raise UsageError("give --n or --sweep")
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    want = {"even": 0, "odd": 1}.get(args.parity)
    if want is not None and args.n % 2 != want:
        raise UsageError(f"--n {args.n} does not have parity {args.parity}")
    return [args.n]


def _kernel(args):
    if not args.kernel:
        raise UsageError("--kernel is required")
    return parse_kernel(args.kernel)


def _parallel(fn, items, jobs):
    # rows come back in input order whatever the completion order
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _c(v) -> complex:
    return complex(v)


# ---------------------------------------------------------------------------
# Commands


def cmd_exact(args):
    k = _kernel(args)
    ns = _n_values(args)

    def row(N):
        if args.euclid:
            v = _c(euclid_exact(_sincw_s(k), N, args.dps))
        else:
            v = _c(exact_energy(k, args.length, N, args.dps))
        return {"n": N, "kappa": N % 2, "value_re": v.real, "value_im": v.imag}

    return _parallel(row, ns, args.jobs), None


def _sincw_s(k):
    if not isinstance(k, SincWeighted):
        raise UsageError("--euclid needs a sincw kernel")
    return k.s


def _expansion_for(k, args, kappa):
    return build_expansion(k, args.length, args.p, args.q, kappa, args.dps, euclid=args.euclid)


def cmd_expand(args):
    k = _kernel(args)
    kappa = 1 if args.parity == "odd" else 0
    doc = expansion_to_json(_expansion_for(k, args, kappa))
    return doc, None


def cmd_compare(args):
    k = _kernel(args)
    ns = _n_values(args)
    cache = {}
    for kappa in sorted({N % 2 for N in ns}):
        cache[kappa] = _expansion_for(k, args, kappa)
    p_eff = args.p or args.q or DEFAULT_P
    with_im = _is_complex_kernel(k)

    def row(N):
        e = cache[N % 2]
        if args.euclid:
            exact = _c(euclid_exact(_sincw_s(k), N, args.dps))
        else:
            exact = _c(exact_energy(k, args.length, N, args.dps))
        approx, scale = evaluate_expansion(e, N)
        approx = _c(approx)
        diff = abs(exact - approx)
        r = {
            "n": N,
            "kappa": N % 2,
            "exact": exact.real,
            "asymptotic": approx.real,
            "abs_diff": diff,
            "remainder_scale": scale,
            "ratio": diff / scale if scale else None,
        }
        if with_im:
            r["exact_im"] = exact.imag
            r["asymptotic_im"] = approx.imag
        r["note"] = BELOW_REGIME if N < 2 * p_eff + 2 else ""
        return r

    return _parallel(row, ns, args.jobs), None


def _is_complex_kernel(k) -> bool:
    s = getattr(k, "s", None)
    if s is not None and complex(s).imag != 0:
        return True
    for name in ("coeffs", "weight_coeffs"):
        if any(complex(c).imag != 0 for c in getattr(k, name, ())):
            return True
    return False


def cmd_sweep(args):
    if not args.sweep:
        raise UsageError("sweep needs --sweep start:stop:geom|lin[:count]")
    return cmd_exact(args)


def cmd_order(args):
    k = _kernel(args)
    if not args.sweep:
        raise UsageError("order needs --sweep")
    ns = parse_sweep(args.sweep, args.parity)
    kappas = {N % 2 for N in ns}
    if len(kappas) != 1:
        raise UsageError("order needs a single parity; pass --parity even|odd")
    dps = ORDER_DPS if args.dps is None else args.dps
    rep = kernel_order_fit(k, args.length, ns, args.p, args.q, kappas.pop(), dps, euclid=args.euclid)
    return rep.to_json(), rep.passed


def cmd_optimize(args):
    k = _kernel(args)
    if args.n is None:
        raise UsageError("optimize needs --n")
    rep = optimality_search(k, args.length, args.n, args.restarts, args.seed, args.case, args.jobs)
    return rep.to_json(), rep.passed


SPECIAL = {
    "zeta": (sf.riemann_zeta, "c"),
    "hurwitz": (sf.hurwitz_zeta, "cr"),
    "bernoulli": (lambda n: float(sf.bernoulli_number(n)), "i"),
    "bernoulli_poly": (sf.bernoulli_poly, "ir"),
    "loggamma": (sf.log_gamma, "c"),
    "gamma": (sf.complex_gamma, "c"),
    "rgamma": (sf.reciprocal_gamma, "c"),
    "ei": (sf.exp_integral_ei, "r"),
    "pochhammer": (sf.pochhammer, "ci"),
    "incomplete_zeta": (sf.incomplete_zeta, "irrc"),
    "psi": (sf.psi_p, "irr"),
}


def cmd_special(args):
    if args.function not in SPECIAL:
        raise UsageError(f"unknown function {args.function!r}; choose from {', '.join(sorted(SPECIAL))}")
    fn, sig = SPECIAL[args.function]
    if len(args.args) != len(sig):
        raise UsageError(f"{args.function} takes {len(sig)} argument(s)")
    vals = []
    for kind, text in zip(sig, args.args):
        try:
            vals.append(int(text) if kind == "i" else float(text) if kind == "r" else parse_complex(text))
        except ValueError:
            raise UsageError(f"bad argument {text!r}") from None
    v = complex(fn(*vals))
    return [{"function": args.function, "args": " ".join(args.args), "value_re": v.real, "value_im": v.imag}], None


def cmd_identities(args):
    rep = identity_suite()
    return rep.checks, rep.passed


COMMANDS = {
    "exact": cmd_exact,
    "expand": cmd_expand,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "order": cmd_order,
    "optimize": cmd_optimize,
    "special": cmd_special,
    "identities": cmd_identities,
}


# ---------------------------------------------------------------------------
# Output


def _fmt_csv(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt_csv(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _flatten(payload):
    if isinstance(payload, list):
        return payload
    if "terms" in payload:
        # an expansion: one row per term, scalar metadata repeated
        meta = {k: v for k, v in payload.items() if k != "terms"}
        return [dict(t, **meta) for t in payload["terms"]]
    return [payload]


def to_csv(payload) -> str:
    rows = _flatten(payload)
    buf = io.StringIO()
    if not rows:
        return ""
    fields = list(rows[0].keys())
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt_csv(r.get(f)) for f in fields])
    return buf.getvalue()


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_clean(x) for x in v]
    return v


def to_json(payload) -> str:
    return json.dumps(_clean(payload), indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    jobs_default = os.environ.get("GEOE_JOBS", "1")
    common = _Parser(add_help=False)
    common.add_argument("--kernel", help="kernel spec, e.g. riesz:s=3 or sincw:s=1.5")
    common.add_argument("--length", type=float, default=2 * math.pi, help="curve length L")
    common.add_argument("--n", type=int)
    common.add_argument("--sweep", help="start:stop:geom|lin[:count]")
    common.add_argument("--p", type=int)
    common.add_argument("--q", type=int)
    common.add_argument("--parity", choices=("auto", "even", "odd"), default="auto")
    common.add_argument("--euclid", action="store_true", help="roots-of-unity energy (sincw kernels)")
    common.add_argument("--dps", type=int, help="decimal digits for the high-precision backend")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=50)
    common.add_argument("--case", choices=("A", "B"), default="A",
                        help="optimality reference: A equally spaced, B antipodal")
    common.add_argument("--jobs", type=int, default=None, help="worker threads (default $GEOE_JOBS or 1)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="output file (default standard output)")

    parser = _Parser(prog="geoe", description="Energies of equally spaced points on closed curves.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "special":
            sp.add_argument("function")
            sp.add_argument("args", nargs="*")
    parser.set_defaults(jobs_env=jobs_default)
    return parser


def run(argv=None):
    """Run one command; returns (exit code, text, output path or None).  On errors text is the diagnostic."""
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("missing command")
        if args.jobs is None:
            try:
                args.jobs = max(1, int(args.jobs_env))
            except ValueError:
                raise UsageError("GEOE_JOBS must be an integer") from None
        if args.dps is not None and args.dps < 16:
            raise UsageError("--dps must be >= 16")
        payload, passed = COMMANDS[args.command](args)
    except (UsageError, KernelSpecError) as exc:
        return EXIT_PARSE, _one_line(f"geoe: error: {exc}"), None
    except (GeoEnergyError, ZeroDivisionError, OverflowError) as exc:
        return EXIT_DOMAIN, _one_line(f"geoe: domain error: {exc}"), None
    text = to_csv(payload) if args.format == "csv" else to_json(payload)
    code = EXIT_FAIL if passed is False else EXIT_OK
    return code, text, args.out


def _one_line(text: str) -> str:
    return " ".join(text.split())


def main(argv=None) -> int:
    code, text, out = run(argv)
    if code in (EXIT_PARSE, EXIT_DOMAIN):
        print(text, file=sys.stderr)
        return code
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
