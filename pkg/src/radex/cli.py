"""``radex`` command line.

Exit codes: 0 success, 1 usage or configuration error, 2 forbidden instance
(a denominator vanished), 3 verification mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from . import closed_form
from .coefficients import CoefficientQuad, CoefficientSeq
from .compare import compare_instance
from .engine import InitialState, simulate
from .errors import ConfigError, ForbiddenInstanceError, RadexError
from .numeric import rational_parse, to_string
from .reduction import (
    invariant_seeds,
    invariants_by_recurrence,
    invariants_closed_form,
    invariants_from_trajectory,
)
from .symmetry import BUILTIN_GENERATORS, parse_generator, verify_generator

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORBIDDEN = 2
EXIT_MISMATCH = 3

FORMATS = ("csv", "json")
DEFAULT_STEPS = 10

_TOP_KEYS = {"coefficients", "initial", "defaults"}
_COEFF_KEYS = {"kind", "a", "b", "c", "d"}
_INIT_KEYS = {"x_prev", "x0", "y_prev", "y0"}
_DEFAULT_KEYS = {"format", "steps"}


class UsageError(RadexError):
    pass


@dataclass(frozen=True)
class RunConfig:
    quad: CoefficientQuad
    init: InitialState
    format: str | None = None
    steps: int | None = None


# -- configuration ----------------------------------------------------------


def _line_of(text, needle):
    for lineno, line in enumerate(text.splitlines(), 1):
        if f'"{needle}"' in line:
            return lineno
    return None


def _config_error(text, message, key=None):
    line = _line_of(text, key) if key is not None else None
    where = f" (line {line})" if line else ""
    return ConfigError(f"{message}{where}")


def _literal(text, value, key):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise _config_error(text, f"{key}: rationals must be strings like \"-3/4\" (or integers)", key)
    try:
        return rational_parse(value if isinstance(value, str) else str(value))
    except RadexError as exc:
        raise _config_error(text, f"{key}: {exc}", key) from exc


def _strict(text, obj, allowed, where):
    if not isinstance(obj, dict):
        raise _config_error(text, f"{where} must be an object", where)
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise _config_error(text, f"unknown key {unknown[0]!r} in {where}", unknown[0])


def parse_config(text):
    """Parse a JSON run configuration; unknown keys are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    _strict(text, doc, _TOP_KEYS, "configuration")
    for key in ("coefficients", "initial"):
        if key not in doc:
            raise ConfigError(f"missing {key!r} section")

    coeffs = doc["coefficients"]
    _strict(text, coeffs, _COEFF_KEYS, "coefficients")
    missing = sorted(_COEFF_KEYS - set(coeffs))
    if missing:
        raise _config_error(text, f"coefficients: missing {missing[0]!r}", "coefficients")
    kind = coeffs["kind"]
    if kind not in ("constant", "periodic", "table"):
        raise _config_error(text, f"coefficients: unknown kind {kind!r}", "kind")
    seqs = {}
    for name in "abcd":
        raw = coeffs[name]
        if kind == "constant":
            values = (_literal(text, raw, name),)
        else:
            if not isinstance(raw, list) or not raw:
                raise _config_error(text, f"{name}: {kind} coefficients need a nonempty list", name)
            values = tuple(_literal(text, v, name) for v in raw)
        try:
            seqs[name] = CoefficientSeq(kind, values)
        except RadexError as exc:
            raise _config_error(text, f"{name}: {exc}", name) from exc
    quad = CoefficientQuad(kind, seqs["a"], seqs["b"], seqs["c"], seqs["d"])

    initial = doc["initial"]
    _strict(text, initial, _INIT_KEYS, "initial")
    missing = sorted(_INIT_KEYS - set(initial))
    if missing:
        raise _config_error(text, f"initial: missing {missing[0]!r}", "initial")
    values = {k: _literal(text, initial[k], k) for k in _INIT_KEYS}
    try:
        init = InitialState(values["x_prev"], values["x0"], values["y_prev"], values["y0"])
    except RadexError as exc:
        raise _config_error(text, f"initial: {exc}", "initial") from exc

    fmt = steps = None
    if "defaults" in doc:
        defaults = doc["defaults"]
        _strict(text, defaults, _DEFAULT_KEYS, "defaults")
        fmt = defaults.get("format")
        if fmt is not None and fmt not in FORMATS:
            raise _config_error(text, f"defaults: unknown format {fmt!r}", "format")
        steps = defaults.get("steps")
        if steps is not None and (isinstance(steps, bool) or not isinstance(steps, int) or steps < 0):
            raise _config_error(text, "defaults: steps must be a nonnegative integer", "steps")
    return RunConfig(quad, init, fmt, steps)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text)


def parse_indices(text):
    """``"0..6"``, ``"3"``, ``"-1..4,9"`` -> sorted list of indices >= -1."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        lo, sep, hi = part.partition("..")
        try:
            if sep:
                lo_i, hi_i = int(lo), int(hi)
                if hi_i < lo_i:
                    raise ValueError
                out.update(range(lo_i, hi_i + 1))
            else:
                out.add(int(part))
        except ValueError:
            raise UsageError(f"bad index spec {part!r}") from None
    if not out or min(out) < -1:
        raise UsageError("indices must be >= -1")
    return sorted(out)


# -- output -----------------------------------------------------------------


def _csv(header, rows, comments=()):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    for line in comments:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _json(doc):
    return json.dumps(doc, indent=2) + "\n"


def _status_doc(singular):
    if singular is None:
        return {"state": "completed"}
    return {"state": "singular", "step": singular.step, "equation": singular.equation, "factor": singular.factor}


def _status_line(singular):
    return "status: completed" if singular is None else f"status: {singular.describe()}"


# -- commands ---------------------------------------------------------------


def cmd_simulate(config, steps, fmt):
    traj = simulate(config.quad, config.init, steps)
    rows = [(n, to_string(x), to_string(y)) for n, x, y in traj.entries]
    code = EXIT_OK if traj.singular is None else EXIT_FORBIDDEN
    if fmt == "json":
        doc = {
            "command": "simulate",
            "rows": [{"n": n, "x": x, "y": y} for n, x, y in rows],
            "status": _status_doc(traj.singular),
        }
        return _json(doc), code
    return _csv(("n", "x", "y"), rows, [_status_line(traj.singular)]), code


def cmd_closed_form(config, family, indices, fmt):
    if family == "auto":
        family = closed_form.auto_family(config.quad)
    sess = closed_form.session(family, config.quad, config.init)
    rows, status = [], {"state": "completed"}
    code = EXIT_OK
    for m in indices:
        try:
            x, y = sess.at(m)
        except ForbiddenInstanceError as exc:
            status = {"state": "forbidden", "index": m, "step": exc.step, "equation": exc.equation,
                      "condition": exc.condition}
            code = EXIT_FORBIDDEN
            break
        rows.append((m, to_string(x), to_string(y)))
    if fmt == "json":
        doc = {
            "command": "closed-form",
            "family": family,
            "rows": [{"n": n, "x": x, "y": y} for n, x, y in rows],
            "status": status,
        }
        return _json(doc), code
    comments = [f"family: {family}"]
    if code == EXIT_FORBIDDEN:
        comments.append(
            f"status: forbidden at index {status['index']}: {status['condition']} "
            f"(singular at step {status['step']}, {status['equation']} equation)"
        )
    else:
        comments.append("status: completed")
    return _csv(("n", "x", "y"), rows, comments), code


def cmd_compare(config, steps, fmt, sessions=None):
    report = compare_instance(config.quad, config.init, steps, sessions)
    count = len(report.mismatches)
    summary = f"{count} mismatch" + ("" if count == 1 else "es")
    if count:
        code = EXIT_MISMATCH
    elif report.singular is not None:
        code = EXIT_FORBIDDEN
    else:
        code = EXIT_OK
    if fmt == "json":
        doc = {
            "command": "compare",
            "steps": steps,
            "families": list(report.families),
            "checks": report.checks,
            "mismatches": [vars(m) for m in report.mismatches],
            "status": _status_doc(report.singular),
            "result": summary,
        }
        return _json(doc), code
    rows = [(m.check, m.index, m.expected, m.actual) for m in report.mismatches]
    comments = [
        f"families: {' '.join(report.families)}",
        f"checks: {report.checks}",
        _status_line(report.singular),
        f"result: {summary}",
    ]
    return _csv(("check", "index", "expected", "actual"), rows, comments), code


_GENERATOR_NOTES = {
    "x1-paper": (
        "alpha_n = lambda_n = 1 gives lambda_n + alpha_{n+1} = 2 and alpha_n + lambda_{n+1} = 2, "
        "so x d/dx + y d/dy is not a symmetry of this system; the constant-exponent "
        "solution of the determining relations is x1-corrected (alpha_n = -1, lambda_n = 1)"
    ),
}


def _generators(text):
    if text == "all":
        return list(BUILTIN_GENERATORS.values())
    return [parse_generator(item.strip()) for item in text.split(";")]


def cmd_verify_symmetry(config, generator, samples, seed, steps, fmt):
    reports = [verify_generator(g, config.quad, config.init, samples=samples, seed=seed, steps=steps)
               for g in _generators(generator)]
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH
    rows = []
    for rep in reports:
        name = rep.generator.name
        for n, r1, r2 in rep.determining:
            rows.append((name, "determining", n, "", to_string(r1), to_string(r2)))
        for n, r1, r2 in rep.annihilation:
            rows.append((name, "annihilation", n, "", to_string(r1), to_string(r2)))
        for n, point, r1, r2 in rep.lsc:
            rows.append((name, "lsc", n, " ".join(to_string(v) for v in point), to_string(r1), to_string(r2)))
        for r, traj_ok, inv_ok in rep.invariance:
            rows.append((name, "invariance", "", to_string(r), str(traj_ok).lower(), str(inv_ok).lower()))
    verdicts = []
    for rep in reports:
        verdict = "PASS" if rep.passed else "FAIL"
        residuals = sorted({(r1, r2) for _, r1, r2 in rep.determining if r1 != 0 or r2 != 0})
        determining = "ok" if not residuals else "residuals " + " ".join(
            f"({to_string(r1)}, {to_string(r2)})" for r1, r2 in residuals)
        line = (f"{rep.generator.name}: {verdict} (determining {determining}, "
                f"lsc {'ok' if rep.lsc_ok else 'nonzero'}, invariance {'ok' if rep.invariance_ok else 'broken'})")
        note = _GENERATOR_NOTES.get(rep.generator.name)
        if note and not rep.passed:
            line += f"; {note}"
        verdicts.append(line)
    if fmt == "json":
        doc = {
            "command": "verify-symmetry",
            "seed": seed,
            "samples": samples,
            "rows": [dict(zip(("generator", "check", "n", "detail", "residual_1", "residual_2"), r)) for r in rows],
            "verdicts": verdicts,
        }
        return _json(doc), code
    return _csv(("generator", "check", "n", "detail", "residual_1", "residual_2"), rows, verdicts), code


def cmd_forbidden(config, horizon, fmt):
    report = closed_form.forbidden_scan(config.quad, config.init, horizon)
    code = EXIT_OK if report is None else EXIT_FORBIDDEN
    if fmt == "json":
        doc = {"command": "forbidden", "horizon": horizon, "result": None if report is None else vars(report)}
        return _json(doc), code
    rows = [] if report is None else [(report.step, report.equation, report.factor, report.condition)]
    comment = f"no singular step within {horizon} steps" if report is None else report.describe()
    return _csv(("step", "equation", "factor", "condition"), rows, [comment]), code


def cmd_reduce(config, steps, fmt):
    traj = simulate(config.quad, config.init, steps)
    last = traj.last_index
    U0, V0 = invariant_seeds(config.init)
    inv_traj = invariants_from_trajectory(traj)
    inv_rec = invariants_by_recurrence(config.quad, U0, V0, last)
    rows, agree = [], True
    for n in range(0, last + 1):
        u_cf, v_cf = invariants_closed_form(config.quad, U0, V0, n)
        u = (inv_traj.U[n], inv_rec.U[n], u_cf)
        v = (inv_traj.V[n], inv_rec.V[n], v_cf)
        agree = agree and len(set(u)) == 1 and len(set(v)) == 1
        rows.append((n, *map(to_string, u), *map(to_string, v)))
    code = EXIT_MISMATCH if not agree else (EXIT_OK if traj.singular is None else EXIT_FORBIDDEN)
    header = ("n", "U_traj", "U_rec", "U_cf", "V_traj", "V_rec", "V_cf")
    if fmt == "json":
        doc = {
            "command": "reduce",
            "rows": [dict(zip(header, r)) for r in rows],
            "agree": agree,
            "status": _status_doc(traj.singular),
        }
        return _json(doc), code
    return _csv(header, rows, [f"columns agree: {'yes' if agree else 'no'}", _status_line(traj.singular)]), code


# -- entry point ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="radex", description=__doc__.splitlines()[0])
    parser.add_argument(
        "command", choices=("simulate", "closed-form", "compare", "verify-symmetry", "forbidden", "reduce")
    )
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--steps", type=int, help="number of steps / horizon")
    parser.add_argument("--indices", help='closed-form indices, e.g. "0..6" or "-1,3,5"')
    parser.add_argument("--family", default="auto", choices=("auto",) + closed_form.FAMILIES)
    parser.add_argument("--generator", default="all",
                        help='"all", x2, x1-corrected, x1-paper or custom:c0=P,c1=Q (";"-separated)')
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=FORMATS)
    return parser


def run(argv=None, environ=None):
    """Execute one command; returns (stdout text, stderr text, exit code)."""
    environ = os.environ if environ is None else environ
    try:
        args = build_parser().parse_args(argv)
        config = load_config(args.config)
        fmt = args.format or environ.get("RADEX_FORMAT") or config.format or "csv"
        if fmt not in FORMATS:
            raise UsageError(f"unknown output format {fmt!r}")
        steps = args.steps if args.steps is not None else (config.steps if config.steps is not None else None)
        if steps is not None and steps < 0:
            raise UsageError("--steps must be nonnegative")
        if not 0 <= args.seed < 2**64:
            raise UsageError("--seed must fit in 64 unsigned bits")
        if args.samples < 0:
            raise UsageError("--samples must be nonnegative")
        cmd = args.command
        if cmd == "simulate":
            out, code = cmd_simulate(config, DEFAULT_STEPS if steps is None else steps, fmt)
        elif cmd == "closed-form":
            last = DEFAULT_STEPS if steps is None else steps
            indices = parse_indices(args.indices or f"-1..{last}")
            out, code = cmd_closed_form(config, args.family, indices, fmt)
        elif cmd == "compare":
            out, code = cmd_compare(config, DEFAULT_STEPS if steps is None else steps, fmt)
        elif cmd == "verify-symmetry":
            out, code = cmd_verify_symmetry(config, args.generator, args.samples, args.seed,
                                            12 if steps is None else steps, fmt)
        elif cmd == "forbidden":
            out, code = cmd_forbidden(config, 50 if steps is None else steps, fmt)
        else:
            out, code = cmd_reduce(config, DEFAULT_STEPS if steps is None else steps, fmt)
    except RadexError as exc:
        return "", f"radex: error: {exc}\n", EXIT_USAGE
    return out, "", code


def main(argv=None):
    out, err, code = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
