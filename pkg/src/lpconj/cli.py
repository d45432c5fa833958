"""Command-line front end: ``lpconj <command> [options]``.

Descriptors are accepted as inline JSON, a path to a JSON file, or compact
flag syntax::

    constant:2          constant:0.5+1j
    harmonic:1,1        (w_n = c + a/n with c=1, a=1)
    list:2,8,tail=2

Exit codes: 0 success, 1 a verification failed, 2 malformed input,
3 hypothesis violation, 4 I/O failure, 5 exponent mismatch,
6 certificate mismatch. Failures print a JSON error object on stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .conjugacy import build_conjugacy_to_doubling, build_conjugacy_to_halving, conjugacy_defect
from .errors import CertificateMismatch, DescriptorError, ExponentMismatch, HypothesisViolation, LpConjError
from .lp_core import ConstantWeights, FinSeq, HarmonicWeights, ListWeights, WeightSeq, weights_from_json
from .probe import DEFAULT_CAP, escape_profile
from .rotation import rotation_forward, rotation_inverse
from .selftest import run_all
from .warp_map import ExponentSeq, WarpMap, radicand_condition, warp_forward, warp_inverse

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_IO = 4
EXIT_MISMATCH = 5
EXIT_CERTIFICATE = 6

DEFAULT_SEED = 7


class UsageError(DescriptorError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _load_json_arg(value: str) -> Any:
    text = value.strip()
    if not text.startswith(("{", "[")):
        text = Path(value).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid JSON: {exc}") from exc


def _scalar(token: str, real: bool) -> complex | float:
    try:
        z = complex(token.strip().replace(" ", ""))
    except ValueError as exc:
        raise DescriptorError(f"cannot parse number {token!r}") from exc
    if real:
        if z.imag != 0:
            raise DescriptorError(f"expected a real number, got {token!r}")
        return z.real
    return z


def _compact(text: str, real: bool) -> WeightSeq:
    kind, _, args = text.partition(":")
    parts = [a for a in args.split(",") if a.strip()]
    if kind == "constant" and len(parts) == 1:
        return ConstantWeights(_scalar(parts[0], real))
    if kind == "harmonic" and len(parts) == 2:
        return HarmonicWeights(_scalar(parts[0], real), _scalar(parts[1], real))
    if kind == "list" and parts and parts[-1].startswith("tail="):
        vals = tuple(_scalar(v, real) for v in parts[:-1])
        return ListWeights(vals, _scalar(parts[-1][len("tail="):], real))
    raise DescriptorError(f"cannot parse descriptor {text!r}")


def _is_compact(value: str) -> bool:
    return value.split(":", 1)[0] in {"constant", "harmonic", "list"} and not Path(value).exists()


def parse_weights(value: str) -> WeightSeq:
    if _is_compact(value):
        return _compact(value, real=False)
    return weights_from_json(_load_json_arg(value))


def parse_exponents(value: str) -> ExponentSeq:
    if _is_compact(value):
        return ExponentSeq(_compact(value, real=True))
    return ExponentSeq.from_json(_load_json_arg(value))


def parse_indices(value: str) -> list[int]:
    try:
        out = [int(v) for v in value.split(",") if v.strip()]
    except ValueError as exc:
        raise DescriptorError(f"bad index list {value!r}") from exc
    if not out or min(out) < 1:
        raise DescriptorError("indices must be positive integers")
    return out


def _positive(kind):
    def conv(value: str):
        try:
            v = kind(value)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {value}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpconj", description="Conjugacies of diagonal operators on l^p.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(cmd: argparse.ArgumentParser) -> None:
        cmd.add_argument("--out", type=Path, help="write the report here instead of stdout")
        cmd.add_argument("--format", choices=("json", "csv"), default="json")

    for name, help_ in (("warp", "apply the tail-sum warp"), ("unwarp", "invert the tail-sum warp")):
        cmd = sub.add_parser(name, help=help_)
        cmd.add_argument("--exponents", required=True)
        cmd.add_argument("--p", type=float)
        cmd.add_argument("--input", required=True, help="FinSeq JSON (inline or file)")
        common(cmd)

    cmd = sub.add_parser("rotate", help="apply the phase-warp lift F_W")
    cmd.add_argument("--weights", required=True)
    cmd.add_argument("--input", required=True)
    cmd.add_argument("--inverse", action="store_true")
    common(cmd)

    for name, help_ in (("build", "construct a conjugacy to 2I or I/2"), ("verify", "build and measure the defect")):
        cmd = sub.add_parser(name, help=help_)
        cmd.add_argument("--weights", required=True)
        cmd.add_argument("--p", type=float, default=1.0)
        cmd.add_argument("--normal-form", choices=("auto", "doubling", "halving"), default="auto")
        if name == "verify":
            cmd.add_argument("--samples", type=_positive(int), default=1000)
            cmd.add_argument("--seed", type=int, default=DEFAULT_SEED)
            cmd.add_argument("--tolerance", type=_positive(float), default=1e-8)
            cmd.add_argument("--scale-min", type=_positive(float), default=1e-3)
            cmd.add_argument("--scale-max", type=_positive(float), default=1e3)
        common(cmd)

    cmd = sub.add_parser("probe", help="escape-time profile along basis vectors")
    cmd.add_argument("--weights", required=True)
    cmd.add_argument("--p", type=float, default=1.0)
    cmd.add_argument("--indices", type=parse_indices, default=[1, 10, 100, 1000])
    cmd.add_argument("--epsilon", type=_positive(float), default=0.1)
    cmd.add_argument("--radius-factor", type=_positive(float), default=2.0)
    cmd.add_argument("--cap", type=_positive(int), default=DEFAULT_CAP)
    common(cmd)

    cmd = sub.add_parser("selftest", help="run the randomised invariant suite")
    cmd.add_argument("--seed", type=int, default=DEFAULT_SEED)
    cmd.add_argument("--samples", type=_positive(float), default=1.0, help="multiplier on every sample count")
    common(cmd)
    return parser


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.write_text(text, encoding="utf-8")


def _dump(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _finseq_csv(x: FinSeq, extra: dict[str, list[float]] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = list(extra or {})
    w.writerow(["index", "re", "im", "abs", *cols])
    for i, (n, v) in enumerate(zip(x.indices, x.values)):
        w.writerow([int(n), _fmt(v.real), _fmt(v.imag), _fmt(abs(v)), *(_fmt(extra[c][i]) for c in cols)])
    return buf.getvalue()


def _read_vector(args: argparse.Namespace) -> FinSeq:
    x = FinSeq.from_json(_load_json_arg(args.input))
    if getattr(args, "p", None) is not None and args.p != x.p:
        raise ExponentMismatch(f"--p {args.p} disagrees with input vector p={x.p}")
    return x


def _build(args: argparse.Namespace):
    W = parse_weights(args.weights)
    form = args.normal_form
    if form == "auto":
        if W.inf_modulus > 1:
            form = "doubling"
        elif W.inf_modulus > 0 and W.sup_modulus < 1:
            form = "halving"
        else:
            raise HypothesisViolation(
                f"weights with inf |w_n| = {W.inf_modulus}, sup |w_n| = {W.sup_modulus} fit neither "
                "inf |w_n| > 1 (doubling) nor 0 < inf, sup < 1 (halving)"
            )
    builder = build_conjugacy_to_doubling if form == "doubling" else build_conjugacy_to_halving
    return builder(W, args.p), form


def _cmd_warp(args: argparse.Namespace) -> int:
    x = _read_vector(args)
    h = WarpMap(parse_exponents(args.exponents), x.p)
    if args.command == "warp":
        y = warp_forward(h, x)
        cond = [float(c) for c in radicand_condition(h, x)]
    else:
        y = warp_inverse(h, x)
        cond = None
    if args.format == "csv":
        _emit(_finseq_csv(y, {"radicand_condition": cond} if cond else None), args.out)
    else:
        payload: dict[str, Any] = {"command": args.command, "exponents": h.exponents.to_json(), "result": y.to_json()}
        if cond is not None:
            payload["radicand_condition"] = {
                str(int(n)): (c if math.isfinite(c) else None) for n, c in zip(x.indices, cond)
            }
        _emit(_dump(payload), args.out)
    return EXIT_OK


def _cmd_rotate(args: argparse.Namespace) -> int:
    x = _read_vector(args)
    W = parse_weights(args.weights)
    y = rotation_inverse(W, x) if args.inverse else rotation_forward(W, x)
    if args.format == "csv":
        _emit(_finseq_csv(y), args.out)
    else:
        _emit(_dump({"command": "rotate", "inverse": args.inverse, "weights": W.to_json(), "result": y.to_json()}), args.out)
    return EXIT_OK


def _cmd_build(args: argparse.Namespace) -> int:
    m, form = _build(args)
    _emit(_dump({"command": "build", "normal_form": form, "map": m.to_json()}), args.out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    m, form = _build(args)
    rep = conjugacy_defect(m, args.samples, args.seed, (args.scale_min, args.scale_max))
    passed = rep.max_defect <= args.tolerance
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sample", "defect"])
        for i, d in enumerate(rep.defects):
            w.writerow([i, _fmt(float(d))])
        _emit(buf.getvalue(), args.out)
    else:
        payload = {
            "command": "verify",
            "normal_form": form,
            "seed": args.seed,
            "tolerance": args.tolerance,
            "passed": passed,
            "certificate": {"source": m.source.to_json(), "target": m.target.to_json()},
            "report": rep.to_json(),
        }
        _emit(_dump(payload), args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _cmd_probe(args: argparse.Namespace) -> int:
    W = parse_weights(args.weights)
    prof = escape_profile(W, args.p, args.epsilon, args.indices, args.radius_factor, args.cap)
    if args.format == "csv":
        _emit(prof.to_csv(), args.out)
    else:
        _emit(_dump({"command": "probe", "cap": args.cap, "profile": prof.to_json()}), args.out)
    return EXIT_OK


def _cmd_selftest(args: argparse.Namespace) -> int:
    checks = run_all(args.seed, args.samples, log=lambda line: print(line, file=sys.stderr))
    ok = all(c.passed for c in checks)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "passed", "samples", "worst", "bound"])
        for c in checks:
            w.writerow([c.name, int(c.passed), c.samples, _fmt(c.worst), _fmt(c.bound)])
        _emit(buf.getvalue(), args.out)
    else:
        payload = {"command": "selftest", "seed": args.seed, "passed": ok, "checks": [c.to_json() for c in checks]}
        _emit(_dump(payload), args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


_COMMANDS = {
    "warp": _cmd_warp,
    "unwarp": _cmd_warp,
    "rotate": _cmd_rotate,
    "build": _cmd_build,
    "verify": _cmd_verify,
    "probe": _cmd_probe,
    "selftest": _cmd_selftest,
}


def _error(code: str, message: str, exit_code: int) -> int:
    sys.stdout.write(_dump({"error": code, "message": message, "exit_code": exit_code}))
    return exit_code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except HypothesisViolation as exc:
        return _error(exc.code, str(exc), EXIT_HYPOTHESIS)
    except ExponentMismatch as exc:
        return _error(exc.code, str(exc), EXIT_MISMATCH)
    except CertificateMismatch as exc:
        return _error(exc.code, str(exc), EXIT_CERTIFICATE)
    except LpConjError as exc:
        return _error(exc.code, str(exc), EXIT_PARSE)
    except OSError as exc:
        return _error("io", str(exc), EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
