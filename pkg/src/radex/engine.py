"""Direct iteration of the coupled system

    x_{n+1} = x_n y_{n-1} / (y_n (a_n + b_n x_n y_{n-1}))
    y_{n+1} = x_{n-1} y_n / (x_n (c_n + d_n x_{n-1} y_n))

for n >= 0, starting from (x_{-1}, x_0, y_{-1}, y_0). This is the ground
truth that every closed form and every reduction is checked against.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .coefficients import require_nonzero
from .errors import DomainError, HorizonError, SingularStepError
from .numeric import DualScalar, rational

__all__ = [
    "InitialState",
    "Singularity",
    "Trajectory",
    "step",
    "simulate",
    "scale_action",
    "scale_trajectory",
]

FIRST = "first"
SECOND = "second"

# denominator factors, in the order they are tested
FACTOR_Y = "y_n"
FACTOR_FIRST = "a_n + b_n*x_n*y_{n-1}"
FACTOR_X = "x_n"
FACTOR_SECOND = "c_n + d_n*x_{n-1}*y_n"


@dataclass(frozen=True)
class InitialState:
    x_prev: object
    x0: object
    y_prev: object
    y0: object

    def __post_init__(self):
        for name in ("x_prev", "x0", "y_prev", "y0"):
            value = rational(getattr(self, name))
            if value == 0:
                raise DomainError(f"initial value {name} must be nonzero")
            object.__setattr__(self, name, value)

    @classmethod
    def unit(cls):
        return cls(1, 1, 1, 1)

    @property
    def p(self):
        """x_0 * y_{-1}, the product driving the first equation."""
        return self.x0 * self.y_prev

    @property
    def q(self):
        """x_{-1} * y_0, the product driving the second equation."""
        return self.x_prev * self.y0


@dataclass(frozen=True)
class Singularity:
    step: int
    equation: str
    factor: str

    def describe(self):
        return f"singular-at {self.step} ({self.equation} equation, {self.factor} = 0)"


@dataclass
class Trajectory:
    """Values x_n, y_n for n = -1, 0, 1, ... ``xs[0]`` holds x_{-1}."""

    xs: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    singular: Singularity | None = None

    @property
    def last_index(self):
        return len(self.xs) - 2

    @property
    def status(self):
        return "completed" if self.singular is None else "singular"

    def x(self, n):
        if not -1 <= n <= self.last_index:
            raise IndexError(f"x_{n} is not part of this trajectory")
        return self.xs[n + 1]

    def y(self, n):
        if not -1 <= n <= self.last_index:
            raise IndexError(f"y_{n} is not part of this trajectory")
        return self.ys[n + 1]

    @property
    def entries(self):
        return [(i - 1, x, y) for i, (x, y) in enumerate(zip(self.xs, self.ys))]

    def truncated(self, last):
        """Prefix up to index ``last`` (drops the singular marker if cut before it)."""
        keep = last + 2
        singular = self.singular if keep >= len(self.xs) else None
        return Trajectory(self.xs[:keep], self.ys[:keep], singular)


def _is_zero(v):
    if isinstance(v, DualScalar):
        return v.value == 0
    return v == 0


def step(x_prev, x_n, y_prev, y_n, coeffs, n=0):
    """Advance one step: return (x_{n+1}, y_{n+1}).

    ``coeffs`` is (a_n, b_n, c_n, d_n). Works over any field type with
    ``+ * /`` (ExactRational, DualScalar, float). Both denominators are
    tested before anything is divided.
    """
    a, b, c, d = coeffs
    p = x_n * y_prev
    q = x_prev * y_n
    w1 = a + b * p
    w2 = c + d * q
    for value, equation, factor in (
        (y_n, FIRST, FACTOR_Y),
        (w1, FIRST, FACTOR_FIRST),
        (x_n, SECOND, FACTOR_X),
        (w2, SECOND, FACTOR_SECOND),
    ):
        if _is_zero(value):
            raise SingularStepError(n, equation, factor)
    # short operands first: one long-by-short division per equation
    return (p / w1) / y_n, (q / w2) / x_n


def simulate(quad, init, steps, exact=True):
    """Iterate ``steps`` times; the result covers n = -1 .. steps.

    Stops early with ``trajectory.singular`` set at the first vanishing
    denominator. ``exact=False`` runs the same recurrence in floating point
    (for speed comparisons only, never as a reference).
    """
    if steps < 0:
        raise DomainError("steps must be nonnegative")
    require_nonzero(quad)
    horizon = quad.horizon
    if horizon is not None and steps > horizon:
        raise HorizonError(f"coefficient table covers {horizon} steps, {steps} requested")
    if exact:
        xs = [init.x_prev, init.x0]
        ys = [init.y_prev, init.y0]
        coeffs_at = quad.at
    else:
        xs = [float(init.x_prev), float(init.x0)]
        ys = [float(init.y_prev), float(init.y0)]

        def coeffs_at(n):
            return tuple(float(v) for v in quad.at(n))

    traj = Trajectory(xs, ys)
    for n in range(steps):
        try:
            x_next, y_next = step(xs[-2], xs[-1], ys[-2], ys[-1], coeffs_at(n), n)
        except SingularStepError as exc:
            traj.singular = Singularity(exc.step, exc.equation, exc.factor)
            break
        xs.append(x_next)
        ys.append(y_next)
    return traj


def _integer_exponent(value, what):
    value = rational(value)
    if not value.is_integer():
        raise DomainError(f"{what} = {value} is not an integer; the finite action needs integer exponents")
    return int(value.numerator)


def _scale(value, r, exponent):
    return value * r ** exponent if exponent else value


def scale_action(init, r, gen):
    """Apply the one-parameter group of ``gen`` with group element ``r``.

    x_n -> r**alpha_n * x_n and y_n -> r**lambda_n * y_n on the four
    initial values; ``r = 1`` is the identity.
    """
    r = rational(r)
    if r == 0:
        raise DomainError("scale factor must be nonzero")
    return InitialState(
        _scale(init.x_prev, r, _integer_exponent(gen.alpha(-1), "alpha_-1")),
        _scale(init.x0, r, _integer_exponent(gen.alpha(0), "alpha_0")),
        _scale(init.y_prev, r, _integer_exponent(gen.lam(-1), "lambda_-1")),
        _scale(init.y0, r, _integer_exponent(gen.lam(0), "lambda_0")),
    )


def scale_trajectory(traj, r, gen):
    """Entrywise image of a trajectory under the same group element."""
    r = rational(r)
    if r == 0:
        raise DomainError("scale factor must be nonzero")
    xs, ys = [], []
    for n, x, y in traj.entries:
        xs.append(_scale(x, r, _integer_exponent(gen.alpha(n), f"alpha_{n}")))
        ys.append(_scale(y, r, _integer_exponent(gen.lam(n), f"lambda_{n}")))
    return Trajectory(xs, ys, traj.singular)
