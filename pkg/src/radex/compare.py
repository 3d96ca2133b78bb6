"""Entrywise exact comparison of every route against direct iteration."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import closed_form
from .engine import FIRST, simulate
from .errors import ForbiddenInstanceError, ReconstructionSingularError
from .reduction import (
    invariant_seeds,
    invariants_by_recurrence,
    invariants_closed_form,
    invariants_from_trajectory,
    reconstruct,
)

__all__ = ["Mismatch", "CompareReport", "default_sessions", "compare_instance"]


@dataclass(frozen=True)
class Mismatch:
    check: str
    index: int
    expected: str
    actual: str


@dataclass
class CompareReport:
    steps: int
    checks: int = 0
    mismatches: list = field(default_factory=list)
    singular: object = None
    families: tuple = ()

    def expect(self, check, index, expected, actual):
        self.checks += 1
        if expected != actual:
            self.mismatches.append(Mismatch(check, index, _fmt(expected), _fmt(actual)))

    @property
    def ok(self):
        return not self.mismatches


def _fmt(value):
    if isinstance(value, tuple):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    return str(value)


def default_sessions(quad):
    """Session factories for every family whose domain contains ``quad``."""
    return {
        name: (lambda q, i, name=name: closed_form.session(name, q, i))
        for name in closed_form.applicable_families(quad)
    }


def _status_of(exc):
    return ("singular", exc.step, exc.equation)


def compare_instance(quad, init, steps, sessions=None):
    """Compare closed forms, invariants and reconstruction with the simulator.

    On a singular trajectory every route is compared up to the last index
    that exists and must then report the same step and equation.
    """
    if sessions is None:
        sessions = default_sessions(quad)
    traj = simulate(quad, init, steps)
    last = traj.last_index
    sing = traj.singular
    expected_status = None if sing is None else ("singular", sing.step, sing.equation)
    report = CompareReport(steps, singular=sing, families=tuple(sessions))

    for name, factory in sessions.items():
        sess = factory(quad, init)
        for m in range(-1, last + 1):
            try:
                got = sess.at(m)
            except ForbiddenInstanceError as exc:
                got = _status_of(exc)
            report.expect(f"closed-form:{name}", m, (traj.x(m), traj.y(m)), got)
        if sing is not None:
            try:
                sess.at(last + 1)
                got = None
            except ForbiddenInstanceError as exc:
                got = _status_of(exc)
            report.expect(f"closed-form:{name}:status", last + 1, expected_status, got)

    U0, V0 = invariant_seeds(init)
    inv_traj = invariants_from_trajectory(traj)
    inv_rec = invariants_by_recurrence(quad, U0, V0, last + (sing is not None))
    for n in range(0, last + 1):
        report.expect("invariants:recurrence", n, (inv_traj.U[n], inv_traj.V[n]), (inv_rec.U[n], inv_rec.V[n]))
        report.expect(
            "invariants:closed-form", n, (inv_traj.U[n], inv_traj.V[n]), invariants_closed_form(quad, U0, V0, n)
        )
    if sing is not None:
        k = last + 1
        if inv_rec.U[k] == 0:
            got = ("singular", last, FIRST)
        elif inv_rec.V[k] == 0:
            got = ("singular", last, "second")
        else:
            got = None
        report.expect("invariants:status", k, expected_status, got)

    rebuilt = reconstruct(init, inv_rec, last)
    for n in range(-1, last + 1):
        report.expect("reconstruct", n, (traj.x(n), traj.y(n)), (rebuilt.x(n), rebuilt.y(n)))
    if sing is not None:
        try:
            reconstruct(init, inv_rec, last + 1)
            got = None
        except ReconstructionSingularError as exc:
            got = _status_of(exc)
        report.expect("reconstruct:status", last + 1, expected_status, got)

    scan = closed_form.forbidden_scan(quad, init, steps)
    got = None if scan is None else ("singular", scan.step, scan.equation)
    report.expect("forbidden-scan", steps, expected_status, got)
    return report
