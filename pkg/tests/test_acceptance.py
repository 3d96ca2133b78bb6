"""Acceptance criteria, one pass/fail line each in the terminal summary.

Every comparison is exact. Expected values come from ``oracle.iterate`` (a
literal Fraction transcription of the recurrences) or from the simulator,
never from the code path under test.
"""
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

import oracle
from instances import random_init, random_periodic_quad, small_rational
from radex import closed_form
from radex.cli import EXIT_FORBIDDEN, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, run
from radex.closed_form import (
    ConstantSession,
    NonUnitSession,
    applicable_families,
    forbidden_scan,
    session,
    solve_general,
)
from radex.coefficients import CoefficientQuad
from radex.engine import InitialState, simulate
from radex.errors import ForbiddenInstanceError
from radex.reduction import (
    invariant_seeds,
    invariants_by_recurrence,
    invariants_closed_form,
    invariants_from_trajectory,
    reconstruct,
)
from radex.symmetry import X1_CORRECTED, X1_PAPER, X2, verify_generator

pytestmark = pytest.mark.acceptance

F = Fraction
HORIZON = 24


def fractions_of(init):
    return tuple(v.to_fraction() for v in (init.x_prev, init.x0, init.y_prev, init.y0))


def forbidden_status(fn):
    try:
        return fn()
    except ForbiddenInstanceError as exc:
        return ("singular", exc.step, exc.equation)


def forced_singular_init(rng, lists, k, equation):
    """Initial data making bracket k vanish in ``equation``, found with Fractions only."""
    init = random_init(rng)
    a, b = (lists[0], lists[1]) if equation == "first" else (lists[2], lists[3])
    # U_k = hom * U_0 + inh for the recurrence u -> a_l u + b_l
    hom, inh = F(1), F(0)
    for l in range(k):
        hom *= a[l % len(a)]
        inh = a[l % len(a)] * inh + b[l % len(b)]
    if inh == 0:
        return None
    product = -hom / inh  # U_0 = 1 / product
    x_prev, x0, y_prev, y0 = fractions_of(init)
    if equation == "first":
        return InitialState(x_prev, x0, product / x0, y0)
    return InitialState(product / y0, x0, y_prev, y0)


def criterion_one_instances():
    """200 seeded random instances plus 20 built to hit a singular step."""
    rng = random.Random(1001)
    out = []
    for _ in range(200):
        quad, lists = random_periodic_quad(rng, max_period=4)
        out.append((quad, lists, random_init(rng)))
    while len(out) < 220:
        quad, lists = random_periodic_quad(rng, max_period=4)
        init = forced_singular_init(rng, lists, rng.randint(1, 12), rng.choice(["first", "second"]))
        if init is not None:
            out.append((quad, lists, init))
    return out


# -- 1 ------------------------------------------------------------------------


def test_criterion_1_general_family_equals_simulation(criterion):
    criterion(1, "general closed form equals direct iteration on 200+ random periodic instances, m <= 24, <= 60 s")
    start = time.perf_counter()
    singular = 0
    for quad, lists, init in criterion_one_instances():
        traj = simulate(quad, init, HORIZON)
        xs, ys, sing = oracle.iterate(oracle.periodic(*lists), *fractions_of(init), HORIZON)
        assert traj.xs == xs and traj.ys == ys
        for m in range(-1, traj.last_index + 1):
            assert solve_general(quad, init, m) == (traj.x(m), traj.y(m))
        if traj.singular is not None:
            singular += 1
            s = traj.singular
            assert (s.step, s.equation) == sing
            assert forbidden_status(lambda: solve_general(quad, init, traj.last_index + 1)) == (
                "singular", s.step, s.equation)
    assert singular >= 20
    assert time.perf_counter() - start <= 60


# -- 2 ------------------------------------------------------------------------


FAMILY_DRAWS = {
    "constant": lambda rng: [small_rational(rng) for _ in range(4)],
    "unit": lambda rng: [1, small_rational(rng), 1, small_rational(rng)],
    "nonunit": lambda rng: [small_rational(rng) for _ in range(4)],
    "neg-unit": lambda rng: [-1, small_rational(rng), -1, small_rational(rng)],
}


def test_criterion_2_specialised_families(criterion):
    criterion(2, "constant/unit/nonunit/neg-unit agree with the oracle and each other (100 each, m <= 24); geometric sum identity")
    rng = random.Random(2002)
    for family, draw in FAMILY_DRAWS.items():
        done = 0
        while done < 100:
            a, b, c, d = draw(rng)
            if family == "nonunit" and (a == 1 or c == 1):
                continue
            quad = CoefficientQuad.constant(a, b, c, d)
            init = random_init(rng)
            xs, ys, sing = oracle.iterate(oracle.constant(a, b, c, d), *fractions_of(init), HORIZON)
            last = len(xs) - 2
            names = applicable_families(quad)
            assert family in names
            sessions = [session(name, quad, init) for name in names]
            for m in range(-1, last + 1):
                for sess in sessions:
                    assert sess.at(m) == (xs[m + 1], ys[m + 1]), (sess.family, m)
            if sing is not None:
                for sess in sessions:
                    assert forbidden_status(lambda: sess.at(last + 1)) == ("singular", *sing)
            if family == "nonunit":
                literal = ConstantSession(a, b, c, d, init)
                closed = NonUnitSession(a, b, c, d, init)
                for k in range(0, HORIZON + 1):
                    assert closed.R(k) == literal.R(k) and closed.P(k) == literal.P(k)
            done += 1


# -- 3 ------------------------------------------------------------------------


def test_criterion_3_reduction_pipeline(criterion):
    criterion(3, "trajectory invariants = recurrence = closed form, and reconstruction = simulation")
    checked = 0
    for quad, _, init in criterion_one_instances():
        traj = simulate(quad, init, HORIZON)
        if traj.singular is not None:
            continue
        U0, V0 = invariant_seeds(init)
        from_traj = invariants_from_trajectory(traj)
        by_rec = invariants_by_recurrence(quad, U0, V0, HORIZON)
        assert from_traj.U == by_rec.U and from_traj.V == by_rec.V
        for n in range(HORIZON + 1):
            assert invariants_closed_form(quad, U0, V0, n) == (by_rec.U[n], by_rec.V[n])
        rebuilt = reconstruct(init, by_rec, HORIZON)
        assert rebuilt.xs == traj.xs and rebuilt.ys == traj.ys
        checked += 1
    assert checked >= 150


# -- 4 ------------------------------------------------------------------------


SYMMETRY_QUADS = [
    CoefficientQuad.constant(1, 1, 1, 1),
    CoefficientQuad.constant(2, 3, 5, 7),
    CoefficientQuad.constant(-1, 2, -1, 3),
    CoefficientQuad.periodic([2, F(-1, 3)], [1], [F(5, 4), 7, -2], [F(-3, 2)]),
    CoefficientQuad.periodic([F(7, 9)], [3, -1], [4], [F(2, 5), -6]),
    CoefficientQuad.periodic([-5, 2, 3, F(1, 2)], [F(9, 7)], [-1, 8], [F(-4, 3), 2, 1]),
]
SYMMETRY_INIT = InitialState(F(2, 3), F(-5, 4), 7, F(1, 9))


def test_criterion_4_symmetry_verification(criterion):
    criterion(4, "X2 and corrected X1 pass every exact test; x1-paper gives nonzero residuals")
    for gen in (X2, X1_CORRECTED):
        points = 0
        for i, quad in enumerate(SYMMETRY_QUADS):
            report = verify_generator(gen, quad, SYMMETRY_INIT, samples=20, seed=i, n_max=10,
                                      scales=("2", "3/2", "-5/7"), steps=16)
            assert report.determining_ok and report.lsc_ok and report.invariance_ok
            assert all(r1 == 0 and r2 == 0 for _, r1, r2 in report.annihilation)
            assert [r for r, _, _ in report.invariance] == [2, F(3, 2), F(-5, 7)]
            points += len(report.lsc)
        assert points >= 100
    for i, quad in enumerate(SYMMETRY_QUADS):
        report = verify_generator(X1_PAPER, quad, SYMMETRY_INIT, samples=20, seed=i)
        assert all((r1, r2) == (2, 2) for _, r1, r2 in report.determining)
        assert all((r1, r2) == (2, 2) for _, r1, r2 in report.annihilation)
        assert all(r1 != 0 and r2 != 0 for _, _, r1, r2 in report.lsc)
        assert not report.passed


def test_criterion_4_report_flags_identity_scaling(criterion, tmp_path):
    criterion(4, "verify-symmetry report flags x1-paper with its residual pattern")
    path = tmp_path / "unit.json"
    path.write_text(json.dumps({
        "coefficients": {"kind": "constant", "a": "1", "b": "1", "c": "1", "d": "1"},
        "initial": {"x_prev": "2", "x0": "3", "y_prev": "5", "y0": "7"},
    }))
    out, _, code = run(["verify-symmetry", "--config", str(path), "--samples", "10"], environ={})
    assert code == EXIT_MISMATCH
    summary = [line for line in out.splitlines() if line.startswith("#")]
    assert any("x2: PASS" in line for line in summary)
    assert any("x1-corrected: PASS" in line for line in summary)
    assert any("x1-paper: FAIL" in line for line in summary)
    assert any("(2, 2)" in line for line in summary)


# -- 5 ------------------------------------------------------------------------


def unit_prediction(b, d, init, horizon):
    """First j with j*b*x_0*y_-1 = -1 or j*d*x_-1*y_0 = -1, as (step, equation)."""
    x_prev, x0, y_prev, y0 = fractions_of(init)
    for j in range(1, horizon + 1):
        if j * b * x0 * y_prev == -1:
            return (j - 1, "first")
        if j * d * x_prev * y0 == -1:
            return (j - 1, "second")
    return None


def test_criterion_5_unit_forbidden_condition(criterion):
    criterion(5, "unit-family analytic condition predicts the oracle's first singular step on 50 instances")
    rng = random.Random(5005)
    horizon = 30
    hits = 0
    for i in range(50):
        b, d = small_rational(rng), small_rational(rng)
        init = random_init(rng)
        if i % 2 == 0:
            # put a zero bracket at a random j in one of the equations
            j = rng.randint(1, 20)
            x_prev, x0, y_prev, y0 = fractions_of(init)
            if rng.random() < 0.5:
                init = InitialState(x_prev, x0, -1 / (j * b * x0), y0)
            else:
                init = InitialState(-1 / (j * d * y0), x0, y_prev, y0)
        predicted = unit_prediction(b, d, init, horizon)
        _, _, sing = oracle.iterate(oracle.constant(1, b, 1, d), *fractions_of(init), horizon)
        assert predicted == sing
        quad = CoefficientQuad.constant(1, b, 1, d)
        report = forbidden_scan(quad, init, horizon)
        assert (None if report is None else (report.step, report.equation)) == sing
        status = forbidden_status(lambda: session("unit", quad, init).at(horizon))
        assert (None if not isinstance(status[0], str) else status[1:]) == sing
        hits += sing is not None
    assert hits >= 25


def family_witnesses():
    """(family, coefficient lists, init, expected (step, equation)) built from each condition."""
    out = []
    # general, periodic: bracket R_4 = 0
    lists = [[2, F(-1, 3)], [1, 5], [3], [F(1, 2), 1]]
    init = forced_singular_init(random.Random(1), lists, 4, "first")
    out.append(("general", lists, init, (3, "first")))
    # constant a = 1, c = 2: 1 + k b p = 0 at k = 5 in the first equation
    lists = [[1], [F(1, 2)], [2], [3]]
    out.append(("constant", lists, InitialState(1, 2, F(-1, 5), 1), (4, "first")))
    # unit: j d x_-1 y_0 = -1 with j = 6
    lists = [[1], [2], [1], [F(1, 3)]]
    out.append(("unit", lists, InitialState(F(-1, 4), 1, 1, 2), (5, "second")))
    # nonunit a = 2: a^k + b p (1 - a^k) / (1 - a) = 0 at k = 3 -> 8 + 7 b p = 0
    lists = [[2], [4], [3], [1]]
    out.append(("nonunit", lists, InitialState(1, 1, F(-2, 7), 1), (2, "first")))
    # neg-unit: b x_0 y_-1 = 1 and d x_-1 y_0 = 1
    lists = [[-1], [2], [-1], [3]]
    out.append(("neg-unit", lists, InitialState(1, F(1, 2), 1, 1), (0, "first")))
    out.append(("neg-unit", lists, InitialState(F(1, 3), 1, 1, 1), (0, "second")))
    return out


@pytest.mark.parametrize("index", range(6))
def test_criterion_5_family_witnesses(criterion, index):
    family, lists, init, expected = family_witnesses()[index]
    criterion(5, f"witness for the {family} condition flagged at step {expected[0]} ({expected[1]} equation)")
    _, _, sing = oracle.iterate(oracle.periodic(*lists), *fractions_of(init), 20)
    assert sing == expected
    if family == "general":
        quad = CoefficientQuad.periodic(*lists)
    else:
        quad = CoefficientQuad.constant(*(v[0] for v in lists))
    report = forbidden_scan(quad, init, 20)
    assert (report.step, report.equation) == expected
    assert forbidden_status(lambda: session(family, quad, init).at(20)) == ("singular", *expected)
    # every index before the singular step is still available
    sess = session(family, quad, init)
    for m in range(-1, expected[0] + 1):
        sess.at(m)


# -- 6 ------------------------------------------------------------------------


@pytest.mark.slow
@pytest.mark.parametrize("coeffs", [(1, 1, 1, 1), (-1, 2, -1, 3), (2, 3, 5, 7), (9, 9, 9, 9)],
                         ids=["unit", "neg-unit", "2-3-5-7", "9-9-9-9"])
def test_criterion_6_simulate_2000_steps(criterion, coeffs):
    criterion(6, f"exact simulation of 2000 steps with coefficients {coeffs} in <= 10 s")
    quad = CoefficientQuad.constant(*coeffs)
    start = time.perf_counter()
    traj = simulate(quad, InitialState.unit(), 2000)
    elapsed = time.perf_counter() - start
    assert traj.last_index == 2000
    assert elapsed <= 10, f"took {elapsed:.1f} s"


@pytest.mark.slow
def test_criterion_6_compare_200(criterion, tmp_path):
    criterion(6, "compare over m <= 200 on one instance in <= 30 s")
    path = tmp_path / "run.json"
    path.write_text(json.dumps({
        "coefficients": {"kind": "constant", "a": "2", "b": "3", "c": "5", "d": "7"},
        "initial": {"x_prev": "2/3", "x0": "-5/7", "y_prev": "9/4", "y0": "-1/8"},
    }))
    start = time.perf_counter()
    out, _, code = run(["compare", "--config", str(path), "--steps", "200"], environ={})
    assert code == EXIT_OK and "0 mismatches" in out
    assert time.perf_counter() - start <= 30


# -- 7 ------------------------------------------------------------------------


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_criterion_7_seeded_reports_byte_identical(criterion, tmp_path):
    criterion(7, "fixed seed gives byte-identical reports across processes")
    path = _write(tmp_path, "run.json", {
        "coefficients": {"kind": "periodic", "a": ["2", "-1/3"], "b": ["1"], "c": ["5/4", "7"], "d": ["-3/2"]},
        "initial": {"x_prev": "2/3", "x0": "-5/4", "y_prev": "7", "y0": "1/9"},
    })
    argv = [sys.executable, "-m", "radex.cli", "verify-symmetry", "--config", path, "--samples", "50",
            "--seed", "18446744073709551615"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False, env={"PYTHONHASHSEED": "12345"})
    assert first.stdout == second.stdout and first.returncode == second.returncode
    assert len(first.stdout) > 1000


def test_criterion_7_exit_code_matrix(criterion, tmp_path, monkeypatch):
    criterion(7, "exit codes 0/1/2/3 on valid, malformed, forbidden and mismatch inputs")
    unit = {
        "coefficients": {"kind": "constant", "a": "1", "b": "1", "c": "1", "d": "1"},
        "initial": {"x_prev": "1", "x0": "1", "y_prev": "1", "y0": "1"},
    }
    valid = _write(tmp_path, "valid.json", unit)
    forbidden = _write(tmp_path, "forbidden.json", dict(unit, initial=dict(unit["initial"], y_prev="-1")))
    malformed = [
        _write(tmp_path, "broken.json", "{\"coefficients\": "),
        _write(tmp_path, "unknown.json", dict(unit, extra={})),
        _write(tmp_path, "zero.json", dict(unit, coefficients=dict(unit["coefficients"], b="0"))),
        _write(tmp_path, "float.json", dict(unit, initial=dict(unit["initial"], x0=0.5))),
    ]
    commands = ["simulate", "closed-form", "compare", "forbidden", "reduce"]
    for cmd in commands:
        assert run([cmd, "--config", valid, "--steps", "6"], environ={})[2] == EXIT_OK, cmd
        assert run([cmd, "--config", forbidden, "--steps", "6"], environ={})[2] == EXIT_FORBIDDEN, cmd
        for path in malformed:
            assert run([cmd, "--config", path], environ={})[2] == EXIT_USAGE, (cmd, path)
    assert run(["verify-symmetry", "--config", valid, "--generator", "x2", "--samples", "10"], environ={})[2] == EXIT_OK
    assert run(["verify-symmetry", "--config", valid, "--generator", "x1-paper", "--samples", "10"],
               environ={})[2] == EXIT_MISMATCH
    for argv in (["simulate"], ["frobnicate", "--config", valid], ["simulate", "--config", valid, "--steps", "x"],
                 ["closed-form", "--config", valid, "--family", "neg-unit"]):
        assert run(argv, environ={})[2] == EXIT_USAGE, argv

    class Corrupted(closed_form.UnitSession):
        def _p_bracket(self, k):
            return super()._p_bracket(k) * (2 if k == 4 else 1)

    monkeypatch.setattr("radex.compare.default_sessions", lambda quad: {"corrupted": lambda q, i: Corrupted(1, 1, i)})
    out, _, code = run(["compare", "--config", valid, "--steps", "10"], environ={})
    assert code == EXIT_MISMATCH and "0 mismatches" not in out
