"""Command-line interface: every operation prints one JSON report."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis as an
from . import berkovich as bk
from . import islands as isl
from .field import FieldConfig, FieldError
from .parsing import (
    ParseError,
    format_berkpoint,
    format_disk,
    parse_disk,
    parse_log_radius,
    parse_point,
    parse_rational,
    parse_ratfunc,
    parse_scalar,
)
from .presets import UnknownPreset, load_config, preset

SCHEMA = "ultrametric-islands/1"

EXIT_OK, EXIT_HYPOTHESIS, EXIT_UNDECIDED, EXIT_PARSE, EXIT_CAPABILITY = 0, 1, 2, 3, 4

_STATUS_EXIT = {
    "Found": EXIT_OK,
    "Passed": EXIT_OK,
    "HypothesisAFailed": EXIT_HYPOTHESIS,
    "HypothesisBFailed": EXIT_HYPOTHESIS,
    "SeparationHypothesisFailed": EXIT_HYPOTHESIS,
    "NotFound": EXIT_HYPOTHESIS,
    "Undecided": EXIT_UNDECIDED,
    "ExtensionRequired": EXIT_CAPABILITY,
}


def _mag(m):
    return isl._mag_json(m)


def _field(args) -> FieldConfig:
    if args.prime is None:
        raise ParseError("--prime is required")
    return FieldConfig(args.prime, args.ram)


def _fn(args, K):
    if not args.fn:
        raise ParseError("--fn is required")
    return parse_ratfunc(args.fn, K)


def _nu(args, K) -> bk.TypeII:
    return bk.TypeII(parse_scalar(args.center, K), _logr(args, K))


def _logr(args, K) -> Fraction:
    text = args.logr
    try:
        return parse_rational(text)
    except ParseError:
        return parse_log_radius(text, K)


def _split(text: str | None) -> list[str]:
    if not text:
        return []
    return [s.strip() for s in text.split(";") if s.strip()]


def _read_config(args) -> dict:
    src = args.config
    try:
        if src is None or src == "-":
            raw = sys.stdin.read()
        else:
            with open(src, encoding="utf-8") as fh:
                raw = fh.read()
        data = json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read config: {exc}") from exc
    # command-line flags override file fields
    if args.prime is not None:
        data["prime"] = args.prime
    if args.fn:
        data["fn"] = args.fn
    if args.seeds is not None:
        data["seeds"] = _split(args.seeds)
    if args.audit:
        data["audit"] = True
    return data


def _config_from_flags(args) -> dict | None:
    if args.islands is None:
        return None
    return {
        "prime": args.prime,
        "ram_index": args.ram,
        "fn": args.fn,
        "islands": _split(args.islands),
        "nu1": args.nu1,
        "seeds": _split(args.seeds),
        "audit": args.audit,
    }


def _loaded(args):
    data = _config_from_flags(args) or _read_config(args)
    if data.get("prime") is None:
        raise ParseError("config needs a prime")
    return data, load_config(data)


def _value(text: str, K):
    t = text.strip().lower()
    if t == "ram":
        return an.RAM
    return parse_point(text, K)


# -- commands -------------------------------------------------------------------

def cmd_gauss_norm(args):
    K = _field(args)
    f, nu = _fn(args, K), _nu(args, K)
    return {"fn": args.fn, "nu": format_berkpoint(nu)}, _mag(an.gauss_norm(f, nu)), EXIT_OK


def cmd_pushforward(args):
    K = _field(args)
    f, nu = _fn(args, K), _nu(args, K)
    res = an.pushforward(f, nu)
    out = {"image": format_berkpoint(res.image), "descent_steps": res.descent_steps}
    return {"fn": args.fn, "nu": format_berkpoint(nu)}, out, EXIT_OK


def cmd_profile(args):
    K = _field(args)
    f = _fn(args, K)
    c = parse_scalar(args.center, K)
    lo = parse_rational(args.qlo)
    hi = None if args.qhi in (None, "inf") else parse_rational(args.qhi)
    if args.alpha is not None:
        prof = an.g_profile(f, parse_scalar(args.alpha, K), c, lo, hi)
    else:
        prof = an.norm_profile(f, c, lo, hi)
    inputs = {"fn": args.fn, "center": args.center, "q_lo": str(lo), "q_hi": None if hi is None else str(hi)}
    if args.alpha is not None:
        inputs["alpha"] = args.alpha
    return inputs, prof.to_dict(), EXIT_OK


def cmd_counts(args):
    K = _field(args)
    f = _fn(args, K)
    b = _value(args.value, K)
    c = parse_scalar(args.center, K)
    q = _logr(args, K)
    n = an.counts(f, b, c, q, closed=not args.open)
    inputs = {"fn": args.fn, "value": args.value, "center": args.center, "logr": str(q), "closed": not args.open}
    return inputs, {"count": n}, EXIT_OK


def cmd_L(args):
    K = _field(args)
    f, nu = _fn(args, K), _nu(args, K)
    return {"fn": args.fn, "nu": format_berkpoint(nu)}, _mag(an.boundary_length_L(f, nu)), EXIT_OK


def cmd_G(args):
    K = _field(args)
    f, nu = _fn(args, K), _nu(args, K)
    if args.alpha is None:
        raise ParseError("--alpha is required")
    alpha = parse_scalar(args.alpha, K)
    val = an.g_value(f, alpha, nu)
    return {"fn": args.fn, "alpha": args.alpha, "nu": format_berkpoint(nu)}, _mag(val), EXIT_OK


def _item(text, K):
    t = text.strip()
    if t.startswith(("D", "comp")):
        return parse_disk(t, K)
    return parse_point(t, K)


def cmd_separates(args):
    K = _field(args)
    nu = _nu(args, K)
    items = [_item(s, K) for s in _split(args.items)]
    labels = bk.separation_labels(nu, items)

    def show(lab):
        return lab if isinstance(lab, str) else f"inside:{lab[1]}"

    out = {"separates": bk.separates(nu, items), "labels": [show(lab) for lab in labels]}
    return {"nu": format_berkpoint(nu), "items": _split(args.items)}, out, EXIT_OK


def cmd_ahlfors_radius(args):
    if args.islands is not None:
        K = _field(args)
        islands = [parse_disk(s, K) for s in _split(args.islands)]
        inputs = {"islands": _split(args.islands)}
    else:
        data, L = _loaded(args)
        islands = list(L.cfg.islands)
        inputs = {"islands": data["islands"]}
    return inputs, _mag(isl.ahlfors_radius(islands)), EXIT_OK


def _residue_char(args):
    return None if args.residue_char is None else args.residue_char


def cmd_constants(args):
    data, L = _loaded(args)
    consts = isl.theorem_constants(L.cfg, _residue_char(args), args.precision)
    return data, consts.to_dict(), EXIT_OK


def cmd_check_hypotheses(args):
    data, L = _loaded(args)
    rep = isl.check_hypotheses(L.f, L.cfg, L.seeds, _residue_char(args), args.precision)
    return data, rep.to_dict(), _STATUS_EXIT[rep.status]


def cmd_find_islands(args):
    data, L = _loaded(args)
    runner = isl.find_island_global if args.global_ else isl.find_island
    rep = runner(L.f, L.cfg, L.seeds, audit=L.audit, residue_char=_residue_char(args), precision=args.precision)
    return data, rep.to_dict(), _STATUS_EXIT[rep.status]


def cmd_verify(args):
    K = _field(args)
    f = _fn(args, K)
    if not (args.U and args.V):
        raise ParseError("--U and --V are required")
    U, V = parse_disk(args.U, K), parse_disk(args.V, K)
    ok = isl.verify_one_to_one_onto(f, U, V)
    return {"fn": args.fn, "U": format_disk(U), "V": format_disk(V)}, {"one_to_one_onto": ok}, EXIT_OK


COMMANDS = {
    "gauss-norm": cmd_gauss_norm,
    "pushforward": cmd_pushforward,
    "profile": cmd_profile,
    "counts": cmd_counts,
    "L": cmd_L,
    "G": cmd_G,
    "separates": cmd_separates,
    "ahlfors-radius": cmd_ahlfors_radius,
    "constants": cmd_constants,
    "check-hypotheses": cmd_check_hypotheses,
    "find-islands": cmd_find_islands,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ultraislands", description="Exact Berkovich-line computations.")
    ap.add_argument("command", choices=sorted(list(COMMANDS) + ["preset"]))
    ap.add_argument("name", nargs="?", help="preset name")
    ap.add_argument("--prime", type=int)
    ap.add_argument("--ram", type=int, default=1, help="ramification index M")
    ap.add_argument("--fn")
    ap.add_argument("--center", default="0")
    ap.add_argument("--logr", default="0", help="q in the radius p^-q")
    ap.add_argument("--config", help="config JSON file, '-' or omitted for stdin")
    ap.add_argument("--seeds", help="';'-separated scalars")
    ap.add_argument("--audit", action="store_true")
    ap.add_argument("--precision", type=int, default=64, help="E_p term cap")
    ap.add_argument("--islands", help="';'-separated disks")
    ap.add_argument("--nu1")
    ap.add_argument("--items", help="';'-separated points or disks")
    ap.add_argument("--value", default="0", help="scalar, inf or ram")
    ap.add_argument("--open", action="store_true", help="count in the open disk")
    ap.add_argument("--alpha")
    ap.add_argument("--qlo", default="0")
    ap.add_argument("--qhi")
    ap.add_argument("--U")
    ap.add_argument("--V")
    ap.add_argument("--residue-char", type=int, dest="residue_char")
    ap.add_argument("--global", action="store_true", dest="global_")
    return ap


def _emit(obj, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def run(argv=None, stdout=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.command == "preset":
        try:
            _emit(preset(args.name or ""), stdout)
        except UnknownPreset as exc:
            _emit({"schema": SCHEMA, "operation": "preset", "error": str(exc)}, stdout)
            return EXIT_PARSE
        return EXIT_OK
    report = {"schema": SCHEMA, "operation": args.command}
    try:
        inputs, result, code = COMMANDS[args.command](args)
    except (ParseError, isl.InvalidConfig, isl.OverlappingIslands, UnknownPreset) as exc:
        report.update({"error": str(exc), "error_kind": type(exc).__name__})
        _emit(report, stdout)
        return EXIT_PARSE
    except isl.ThresholdUndecided as exc:
        report.update({"error": str(exc), "error_kind": "Undecided"})
        _emit(report, stdout)
        return EXIT_UNDECIDED
    except an.IterationCapExceeded as exc:
        report.update({"error": str(exc), "error_kind": "IterationCapExceeded"})
        _emit(report, stdout)
        return EXIT_CAPABILITY
    except (FieldError, ValueError, ZeroDivisionError) as exc:
        report.update({"error": str(exc), "error_kind": type(exc).__name__})
        _emit(report, stdout)
        return EXIT_PARSE
    report.update({"inputs": inputs, "result": result, "exact": True})
    _emit(report, stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
