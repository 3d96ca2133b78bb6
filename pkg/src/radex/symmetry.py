"""Scaling symmetries of the system and exact checks of the symmetry claims.

A generator X = alpha_n x_n d/dx_n + lambda_n y_n d/dy_n (characteristics
Q1 = alpha_n x, Q2 = lambda_n y) is a symmetry when the linearized
condition

    Q1(n+2, Omega_1) - X^[1] Omega_1 = 0,   Q2(n+2, Omega_2) - X^[1] Omega_2 = 0

holds identically, where Omega_1, Omega_2 give x_{n+2}, y_{n+2} in terms of
(x_n, x_{n+1}, y_n, y_{n+1}). For this system that reduces to the
determining relations

    lambda_n + alpha_{n+1} = 0,   alpha_n + lambda_{n+1} = 0,

solved by lambda_n = c0 + (-1)^n c1, alpha_n = -c0 + (-1)^n c1.

Three generators ship built in:

* ``x2``: alpha_n = lambda_n = (-1)^n (c0 = 0, c1 = 1).
* ``x1-corrected``: alpha_n = -1, lambda_n = 1 (c0 = 1, c1 = 0).
* ``x1-paper``: alpha_n = lambda_n = 1, i.e. x d/dx + y d/dy. It violates the
  determining relations (residual 2 in both) and is kept so the discrepancy
  can be reported rather than hidden.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .engine import scale_action, scale_trajectory, simulate, step
from .errors import DomainError, SingularStepError
from .numeric import rational
from .numeric import seed as seed_variables
from .reduction import invariants_from_trajectory

__all__ = [
    "GeneratorSpec",
    "X2",
    "X1_CORRECTED",
    "X1_PAPER",
    "BUILTIN_GENERATORS",
    "parse_generator",
    "characteristic",
    "determining_check",
    "lsc_residual",
    "invariant_annihilation",
    "canonical_coords",
    "abs_invariants_from_coords",
    "finite_invariance",
    "sample_point",
    "SymmetryReport",
    "verify_generator",
]

DEFAULT_SCALES = ("2", "3/2", "-5/7")


@dataclass(frozen=True)
class GeneratorSpec:
    """Characteristic pair alpha_n x, lambda_n y.

    ``from_constants`` builds the two-parameter family that satisfies the
    determining relations by construction; ``explicit`` takes periodic
    sequences (indexed by ``n mod period``, negative n included) and assumes
    nothing about them.
    """

    name: str
    mode: str
    c0: object = None
    c1: object = None
    alpha_values: tuple = ()
    lambda_values: tuple = ()

    @classmethod
    def from_constants(cls, c0, c1, name=None):
        c0, c1 = rational(c0), rational(c1)
        return cls(name or f"custom(c0={c0}, c1={c1})", "from-constants", c0, c1)

    @classmethod
    def explicit(cls, alpha, lam, name="explicit"):
        alpha = tuple(rational(v) for v in alpha)
        lam = tuple(rational(v) for v in lam)
        if not alpha or not lam:
            raise DomainError("explicit generators need at least one alpha and one lambda value")
        return cls(name, "explicit", alpha_values=alpha, lambda_values=lam)

    def alpha(self, n):
        if self.mode == "from-constants":
            return -self.c0 + self.c1 if n % 2 == 0 else -self.c0 - self.c1
        return self.alpha_values[n % len(self.alpha_values)]

    def lam(self, n):
        if self.mode == "from-constants":
            return self.c0 + self.c1 if n % 2 == 0 else self.c0 - self.c1
        return self.lambda_values[n % len(self.lambda_values)]


X2 = GeneratorSpec.from_constants(0, 1, name="x2")
X1_CORRECTED = GeneratorSpec.from_constants(1, 0, name="x1-corrected")
X1_PAPER = GeneratorSpec.explicit((1,), (1,), name="x1-paper")

BUILTIN_GENERATORS = {g.name: g for g in (X2, X1_CORRECTED, X1_PAPER)}


def parse_generator(text):
    """``x2``, ``x1-corrected``, ``x1-paper`` or ``custom:c0=P,c1=Q``."""
    if text in BUILTIN_GENERATORS:
        return BUILTIN_GENERATORS[text]
    if text.startswith("custom:"):
        params = {}
        for item in text[len("custom:"):].split(","):
            key, sep, value = item.partition("=")
            if not sep or key.strip() not in ("c0", "c1"):
                raise DomainError(f"bad custom generator parameter {item!r}")
            params[key.strip()] = rational(value.strip())
        if set(params) != {"c0", "c1"}:
            raise DomainError("custom generator needs both c0 and c1")
        return GeneratorSpec.from_constants(params["c0"], params["c1"], name=text)
    raise DomainError(f"unknown generator {text!r}")


def characteristic(gen, n, x, y):
    return gen.alpha(n) * x, gen.lam(n) * y


def determining_check(gen, n_range):
    """Rows (n, lambda_n + alpha_{n+1}, alpha_n + lambda_{n+1})."""
    return [(n, gen.lam(n) + gen.alpha(n + 1), gen.alpha(n) + gen.lam(n + 1)) for n in n_range]


def _prolonged(gen, n, point, f):
    # X^[1] f for f a DualScalar seeded on (x_n, x_{n+1}, y_n, y_{n+1})
    x_n, x_n1, y_n, y_n1 = point
    weights = (
        gen.alpha(n) * x_n,
        gen.alpha(n + 1) * x_n1,
        gen.lam(n) * y_n,
        gen.lam(n + 1) * y_n1,
    )
    total = rational(0)
    for w, d in zip(weights, f.partials):
        total = total + w * d
    return total


def lsc_residual(gen, quad, n, point):
    """Exact residuals of the linearized symmetry condition at one point.

    ``point`` is (x_n, x_{n+1}, y_n, y_{n+1}). Omega_1, Omega_2 are one step
    of the system taken at step index n + 1, so they use the coefficients
    (a_{n+1}, b_{n+1}, c_{n+1}, d_{n+1}). Partial derivatives come from exact
    dual numbers pushed through the same step function the simulator uses.
    """
    point = tuple(rational(v) for v in point)
    x_n, x_n1, y_n, y_n1 = seed_variables(*point)
    try:
        omega1, omega2 = step(x_n, x_n1, y_n, y_n1, quad.at(n + 1), n + 1)
    except SingularStepError as exc:
        raise DomainError(f"singular point for the map at step {n + 1}: {exc.factor} = 0") from exc
    r1 = gen.alpha(n + 2) * omega1.value - _prolonged(gen, n, point, omega1)
    r2 = gen.lam(n + 2) * omega2.value - _prolonged(gen, n, point, omega2)
    return r1, r2


def invariant_annihilation(gen, n, point=(1, 1, 1, 1)):
    """X applied to ln|y_n x_{n+1}| and ln|x_n y_{n+1}|.

    Computed as X[f]/f on the products themselves, with dual numbers at
    ``point`` = (x_n, x_{n+1}, y_n, y_{n+1}); the result is independent of
    the point and equals (lambda_n + alpha_{n+1}, alpha_n + lambda_{n+1}).
    """
    point = tuple(rational(v) for v in point)
    x_n, x_n1, y_n, y_n1 = seed_variables(*point)
    u = y_n * x_n1
    v = x_n * y_n1
    return _prolonged(gen, n, point, u) / u.value, _prolonged(gen, n, point, v) / v.value


def canonical_coords(traj):
    """Rows (n, s_n, t_n) with s_n = (-1)^n ln|x_n|, t_n = (-1)^n ln|y_n|.

    Floating point and diagnostic only.
    """
    rows = []
    for n, x, y in traj.entries:
        sign = 1 if n % 2 == 0 else -1
        rows.append((n, sign * x.log_abs(), sign * y.log_abs()))
    return rows


def abs_invariants_from_coords(coords):
    """Rows (n, |U_n|, |V_n|) for n >= 0 rebuilt from canonical coordinates.

    ln|x_n y_{n-1}| = (-1)^n (s_n - t_{n-1}) and
    ln|x_{n-1} y_n| = (-1)^n (t_n - s_{n-1}).
    """
    by_n = {n: (s, t) for n, s, t in coords}
    out = []
    for n in range(0, max(by_n) + 1):
        sign = 1 if n % 2 == 0 else -1
        s_n, t_n = by_n[n]
        s_prev, t_prev = by_n[n - 1]
        out.append((n, math.exp(-sign * (s_n - t_prev)), math.exp(-sign * (t_n - s_prev))))
    return out


def finite_invariance(gen, quad, init, r, steps):
    """Compare simulate(scaled init) with the scaled trajectory of init.

    Returns (trajectories_equal, invariants_equal).
    """
    base = simulate(quad, init, steps)
    moved = simulate(quad, scale_action(init, r, gen), steps)
    expected = scale_trajectory(base, r, gen)
    same_traj = (
        moved.xs == expected.xs and moved.ys == expected.ys and moved.singular == expected.singular
    )
    inv_base = invariants_from_trajectory(base)
    inv_moved = invariants_from_trajectory(moved)
    same_inv = inv_base.U == inv_moved.U and inv_base.V == inv_moved.V
    return same_traj, same_inv


def _draw(rng):
    # numerator and denominator uniform on [-9, 9] without 0
    num = rng.choice(_NONZERO_DIGITS)
    den = rng.choice(_NONZERO_DIGITS)
    return rational(num) / den


_NONZERO_DIGITS = tuple(v for v in range(-9, 10) if v)


def sample_point(rng, quad, n):
    """Draw (x_n, x_{n+1}, y_n, y_{n+1}) where the map at step n + 1 is regular."""
    a, b, c, d = quad.at(n + 1)
    while True:
        point = tuple(_draw(rng) for _ in range(4))
        x_n, x_n1, y_n, y_n1 = point
        if a + b * x_n1 * y_n != 0 and c + d * x_n * y_n1 != 0:
            return point


@dataclass
class SymmetryReport:
    generator: GeneratorSpec
    determining: list = field(default_factory=list)
    annihilation: list = field(default_factory=list)
    lsc: list = field(default_factory=list)
    invariance: list = field(default_factory=list)

    @property
    def determining_ok(self):
        return all(r1 == 0 and r2 == 0 for _, r1, r2 in self.determining)

    @property
    def lsc_ok(self):
        return all(r1 == 0 and r2 == 0 for _, _, r1, r2 in self.lsc)

    @property
    def invariance_ok(self):
        return all(traj and inv for _, traj, inv in self.invariance)

    @property
    def passed(self):
        return self.determining_ok and self.lsc_ok and self.invariance_ok


def verify_generator(gen, quad, init, samples=100, seed=0, n_max=10, scales=DEFAULT_SCALES, steps=12):
    """Run all three symmetry tests for one generator.

    LSC points are drawn with ``random.Random(seed)``: n uniform on
    0..n_max, then x_n, x_{n+1}, y_n, y_{n+1} each a ratio of two integers
    uniform on [-9, 9] without 0, redrawn while the map is singular.
    """
    report = SymmetryReport(gen)
    report.determining = determining_check(gen, range(0, n_max + 1))
    report.annihilation = [(n, *invariant_annihilation(gen, n)) for n in range(0, n_max + 1)]
    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(0, n_max)
        point = sample_point(rng, quad, n)
        report.lsc.append((n, point, *lsc_residual(gen, quad, n, point)))
    for r in scales:
        try:
            traj_ok, inv_ok = finite_invariance(gen, quad, init, rational(r), steps)
        except DomainError:
            traj_ok = inv_ok = False
        report.invariance.append((rational(r), traj_ok, inv_ok))
    return report
