"""Command-line interface: ``summands <command> ...``.

Exit status:

- 0 on success
- 1 when a verification fails
- 2 on input or format errors
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .algebra import AlgebraError
from .fitting import fitting_decomposition
from .hilton_rees import connecting_class
from .homological import ext1, factors_through_projective, stable_hom
from .io import FormatError, certificate_to_json, dumps, load_map, load_rep, rep_to_json, write_json
from .linalg import is_prime
from .realization import PreconditionError, backend, certificate_battery, realize_summand, verify_certificate
from .reps import Rep, RepError, hom_space
from .selftest import SUITES, run_selftest
from .transpose import tor1, tor_iso_check, transpose


class InputError(ValueError):
    """Bad command-line input."""


def _dims(m: Rep) -> dict[str, int]:
    return {v: int(d) for v, d in zip(m.algebra.vertices, m.dims)}


def _dims_text(m: Rep) -> str:
    return " ".join(f"{v}:{d}" for v, d in _dims(m).items())


def _emit(args, text_lines: list[str], payload: dict) -> None:
    if args.json:
        sys.stdout.write(dumps(payload))
    else:
        print("\n".join(text_lines))


def _defaults(args) -> dict:
    return {"default_prime": args.prime, "default_bound": args.nilpotency_bound}


def _rep(args, path: str) -> Rep:
    return load_rep(path, **_defaults(args))


def _map(args, path: str):
    return load_map(path, **_defaults(args))


# -- commands -----------------------------------------------------------------

def cmd_check(args) -> int:
    m = _rep(args, args.module)
    _emit(args, [f"valid module, dims {_dims_text(m)}, total {m.total_dim}"],
          {"valid": True, "dims": _dims(m), "total_dim": m.total_dim})
    return 0


def cmd_hom(args) -> int:
    d = hom_space(_rep(args, args.m), _rep(args, args.n)).dim
    _emit(args, [f"dim Hom = {d}"], {"dim_hom": d})
    return 0


def cmd_ext(args) -> int:
    d = ext1(_rep(args, args.a), _rep(args, args.m)).dim
    _emit(args, [f"dim Ext1 = {d}"], {"dim_ext1": d})
    return 0


def cmd_stable_hom(args) -> int:
    d = stable_hom(_rep(args, args.b), _rep(args, args.a)).dim
    _emit(args, [f"dim stable Hom = {d}"], {"dim_stable_hom": d})
    return 0


def cmd_theta(args) -> int:
    f = _map(args, args.f)
    cls = connecting_class(f)
    through, _ = factors_through_projective(f)
    value = [int(x) for x in cls.value]
    _emit(args, [f"dim Ext1(B, ΩA) = {cls.space.dim}",
                 f"theta f = {value}",
                 f"theta f is zero: {'yes' if cls.is_zero() else 'no'}",
                 f"f factors through a projective: {'yes' if through else 'no'}"],
          {"dim_ext1": cls.space.dim, "theta": value, "zero": cls.is_zero(), "factors_through_projective": through})
    return 0


def cmd_fitting(args) -> int:
    f = _map(args, args.f)
    if not f.is_endo():
        raise InputError("fitting needs an endomorphism (from and to must be the same module)")
    res = fitting_decomposition(f)
    _emit(args, [f"fitting index n = {res.n}",
                 f"Ker f^n dims {_dims_text(res.kernel.rep)}",
                 f"Im f^n dims {_dims_text(res.image.rep)}"],
          {"n": res.n, "kernel_dims": _dims(res.kernel.rep), "image_dims": _dims(res.image.rep)})
    return 0


def cmd_transpose(args) -> int:
    a = _rep(args, args.a)
    tr = transpose(a)
    if args.output:
        write_json(args.output, rep_to_json(tr))
    _emit(args, [f"Tr A (over the opposite algebra) dims {_dims_text(tr)}, total {tr.total_dim}"],
          {"dims": _dims(tr), "total_dim": tr.total_dim})
    return 0


def cmd_tor(args) -> int:
    a, n = _rep(args, args.a), _rep(args, args.n)
    d = tor1(a, n).dim
    lines, payload = [f"dim Tor1 = {d}"], {"dim_tor1": d}
    if args.check:
        rep = tor_iso_check(a, n)
        lines.append(f"dim stable Hom(Tr A, N) = {rep.dim_stable_hom}")
        lines.append(f"comparison map Hom(Tr A, N) -> Tor1(A, N): {'pass' if rep.passed else 'FAIL'}")
        payload.update(dim_stable_hom=rep.dim_stable_hom, iso_check=rep.passed)
        _emit(args, lines, payload)
        return 0 if rep.passed else 1
    _emit(args, lines, payload)
    return 0


def cmd_realize(args) -> int:
    a = _rep(args, args.a)
    f = _map(args, args.f)
    if f.source != a:
        raise InputError("the endomorphism must be defined on the module A")
    be = backend(args.backend)
    cert = realize_summand(a, f, be)
    report = verify_certificate(cert, certificate_battery(cert, args.seed, args.battery_size)) if args.verify else None
    lines = [f"backend {be.tag.value}",
             f"chain length {cert.length}"]
    for i, st in enumerate(cert.steps):
        lines.append(f"A_{i} dims {_dims_text(st.a)} -> A_{i + 1} dims {_dims_text(st.alpha.target)}")
    lines.append(f"B dims {_dims_text(cert.b)}, total {cert.b.total_dim}")
    lines.append(f"stopped: {cert.terminal}")
    if report is not None:
        lines += report.lines()[1:]
        lines.append(f"verification: {'pass' if report.passed else 'FAIL'}")
    doc = certificate_to_json(cert, report)
    if args.output:
        write_json(args.output, doc)
    payload = {"backend": be.tag.value, "chain_length": cert.length, "B_dims": _dims(cert.b),
               "terminal": cert.terminal}
    if report is not None:
        payload["verification"] = doc["verification"]
    _emit(args, lines, payload)
    return 0 if report is None or report.passed else 1


def cmd_selftest(args) -> int:
    timings: dict[int, float] = {}
    ok, lines = run_selftest(args.seed, args.suite, timings)
    if args.timings:
        for n, t in timings.items():
            print(f"suite {n} time {t:.2f} s", file=sys.stderr)
    if args.json:
        sys.stdout.write(dumps({"seed": args.seed, "passed": ok, "report": lines}))
    else:
        print("\n".join(lines))
    return 0 if ok else 1


# -- parser -----------------------------------------------------------------------

def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not (2 <= p < 2 ** 31 and is_prime(p)):
        raise argparse.ArgumentTypeError(f"{p} is not a prime below 2^31")
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=_prime, default=101,
                        help="prime used when an algebra file has no 'prime' field (default 101)")
    common.add_argument("--nilpotency-bound", type=_positive, default=12,
                        help="bound N used when an algebra file has no 'nilpotency_bound' (default 12)")
    common.add_argument("--json", action="store_true", help="print a JSON report instead of text")

    parser = argparse.ArgumentParser(
        prog="summands",
        description="Realize direct summands of homological functors G(A,-) over bound quiver algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a module file")
    p.add_argument("module")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("hom", parents=[common], help="dimension of Hom(M, N)")
    p.add_argument("m")
    p.add_argument("n")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("ext", parents=[common], help="dimension of Ext1(A, M)")
    p.add_argument("a")
    p.add_argument("m")
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("stable-hom", parents=[common], help="dimension of Hom(B, A) modulo projectives")
    p.add_argument("b")
    p.add_argument("a")
    p.set_defaults(func=cmd_stable_hom)

    p = sub.add_parser("theta", parents=[common], help="connecting class of a morphism f: B -> A")
    p.add_argument("f")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("fitting", parents=[common], help="Fitting decomposition of an endomorphism")
    p.add_argument("f")
    p.set_defaults(func=cmd_fitting)

    p = sub.add_parser("transpose", parents=[common], help="transpose Tr A of a module")
    p.add_argument("a")
    p.add_argument("-o", "--output", help="write Tr A as a module file")
    p.set_defaults(func=cmd_transpose)

    p = sub.add_parser("tor", parents=[common], help="dimension of Tor1(A, N) for a right module A")
    p.add_argument("a")
    p.add_argument("n")
    p.add_argument("--check", action="store_true", help="also compare with stable Hom(Tr A, N)")
    p.set_defaults(func=cmd_tor)

    p = sub.add_parser("realize", parents=[common], help="realize the summand cut out by f as G(B, -)")
    p.add_argument("a")
    p.add_argument("f")
    p.add_argument("--backend", choices=["ext1", "stablehom", "tor1"], default="ext1")
    p.add_argument("--verify", action="store_true", help="check the certificate on the default battery")
    p.add_argument("--seed", type=int, default=0, help="seed for the random battery modules (default 0)")
    p.add_argument("--battery-size", type=_positive, default=8, help="number of random battery modules")
    p.add_argument("-o", "--output", help="write the certificate as JSON")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("selftest", parents=[common], help="run the seeded property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", type=int, action="append", choices=sorted(SUITES),
                   help="run only this suite (repeatable)")
    p.add_argument("--timings", action="store_true", help="print per-suite wall time to stderr")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, AlgebraError, RepError, PreconditionError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
