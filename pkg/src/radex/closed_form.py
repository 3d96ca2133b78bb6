"""Explicit solution formulas, evaluated from initial data alone.

Writing p = x_0 y_{-1} and q = x_{-1} y_0, every family has the shape

    x_{2n-1} = x_{-1}^{1-n} (x_0 y_{-1} / y_0)^n   prod_{s<n} P_{2s}   / R_{2s+1}
    x_{2n}   = x_0^{n+1} (y_{-1} / (x_{-1} y_0))^n prod_{s<n} P_{2s+1} / R_{2s+2}
    y_{2n-1} = y_{-1}^{1-n} (x_{-1} y_0 / x_0)^n   prod_{s<n} R_{2s}   / P_{2s+1}
    y_{2n}   = y_0^{n+1} (x_{-1} / (x_0 y_{-1}))^n prod_{s<n} R_{2s+1} / P_{2s+2}

where R_k = prod_{i<k} a_i + p sum_{l<k} b_l prod_{l<i<k} a_i and P_k is the
same expression in c, d and q. Families differ only in how R_k and P_k are
written out:

=========  ===========================  ======================================
family     domain                       R_k
=========  ===========================  ======================================
general    any sequences                product-sum as above
constant   a, b, c, d constant          a^k + b p sum_{l<k} a^l
unit       a = c = 1                    1 + k b p
nonunit    a != 1 and c != 1            a^k + b p (1 - a^k) / (1 - a)
neg-unit   a = c = -1                   (own formulas, integer powers only)
=========  ===========================  ======================================

R_k and P_k are p U_k and q V_k, so a vanishing bracket is the same event as
the direct iteration dividing by zero at step k - 1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .coefficients import product_range, require_nonzero, weighted_tail_sum
from .engine import FACTOR_FIRST, FACTOR_SECOND, FIRST, SECOND
from .errors import DomainError, FamilyError, ForbiddenInstanceError
from .numeric import ONE, ZERO, rational

__all__ = [
    "FAMILIES",
    "ClosedFormSession",
    "ForbiddenReport",
    "session",
    "solve",
    "solve_general",
    "solve_constant",
    "solve_unit",
    "solve_nonunit",
    "solve_neg_unit",
    "auto_family",
    "applicable_families",
    "forbidden_scan",
]

FAMILIES = ("general", "constant", "unit", "nonunit", "neg-unit")


def _nonzero_constants(*values):
    out = tuple(rational(v) for v in values)
    if any(v == 0 for v in out):
        raise FamilyError("coefficients must be nonzero")
    return out


def _bracket_site(kind, k):
    # where bracket k sits as a denominator: (target formula, s)
    if kind == "R":
        return ("x_{2n-1}", (k - 1) // 2) if k % 2 else ("x_{2n}", (k - 2) // 2)
    return ("y_{2n-1}", (k - 1) // 2) if k % 2 else ("y_{2n}", (k - 2) // 2)


class ClosedFormSession:
    """Evaluate one closed-form family for one initial state.

    Brackets are cached, so sweeping m over a range reuses them; a fresh
    session per call keeps ``solve_*`` pure.
    """

    family = "general"

    def __init__(self, init):
        self.init = init
        self.p = init.p
        self.q = init.q
        self._R = {0: ONE}
        self._P = {0: ONE}

    # subclasses provide the two brackets
    def _r_bracket(self, k):
        raise NotImplementedError

    def _p_bracket(self, k):
        raise NotImplementedError

    def R(self, k):
        try:
            return self._R[k]
        except KeyError:
            value = self._R[k] = self._r_bracket(k)
            return value

    def P(self, k):
        try:
            return self._P[k]
        except KeyError:
            value = self._P[k] = self._p_bracket(k)
            return value

    def _r_condition(self, k):
        target, s = _bracket_site("R", k)
        return f"first-equation bracket R_{k} = 0 (denominator of {target} at s = {s})"

    def _p_condition(self, k):
        target, s = _bracket_site("P", k)
        return f"second-equation bracket P_{k} = 0 (denominator of {target} at s = {s})"

    def check(self, m):
        """Raise ForbiddenInstanceError if index m lies past a vanishing bracket.

        x_m and y_m together use R_1..R_m and P_1..P_m; the smallest
        vanishing index wins, the first equation before the second.
        """
        for k in range(1, m + 1):
            if self.R(k) == 0:
                raise ForbiddenInstanceError(self.family, k - 1, FIRST, self._r_condition(k))
            if self.P(k) == 0:
                raise ForbiddenInstanceError(self.family, k - 1, SECOND, self._p_condition(k))

    def at(self, m):
        """(x_m, y_m) for m >= -1."""
        if m < -1:
            raise DomainError(f"index must be >= -1, got {m}")
        self.check(m)
        init = self.init
        R, P = self.R, self.P
        if m % 2:
            n = (m + 1) // 2
            x = init.x_prev ** (1 - n) * (init.x0 * init.y_prev / init.y0) ** n
            y = init.y_prev ** (1 - n) * (init.x_prev * init.y0 / init.x0) ** n
            for s in range(n):
                x = x * (P(2 * s) / R(2 * s + 1))
                y = y * (R(2 * s) / P(2 * s + 1))
        else:
            n = m // 2
            x = init.x0 ** (n + 1) * (init.y_prev / (init.x_prev * init.y0)) ** n
            y = init.y0 ** (n + 1) * (init.x_prev / (init.x0 * init.y_prev)) ** n
            for s in range(n):
                x = x * (P(2 * s + 1) / R(2 * s + 2))
                y = y * (R(2 * s + 1) / P(2 * s + 2))
        return x, y


class GeneralSession(ClosedFormSession):
    family = "general"

    def __init__(self, quad, init):
        super().__init__(init)
        self.quad = require_nonzero(quad)

    def _r_bracket(self, k):
        a, b = self.quad.a, self.quad.b
        return product_range(a, 0, k - 1) + self.p * weighted_tail_sum(a, b, k)

    def _p_bracket(self, k):
        c, d = self.quad.c, self.quad.d
        return product_range(c, 0, k - 1) + self.q * weighted_tail_sum(c, d, k)


class ConstantSession(ClosedFormSession):
    family = "constant"

    def __init__(self, a, b, c, d, init):
        super().__init__(init)
        self.a, self.b, self.c, self.d = _nonzero_constants(a, b, c, d)

    def _r_bracket(self, k):
        geometric = ZERO
        for l in range(k):
            geometric = geometric + self.a ** l
        return self.a ** k + self.b * self.p * geometric

    def _p_bracket(self, k):
        geometric = ZERO
        for l in range(k):
            geometric = geometric + self.c ** l
        return self.c ** k + self.d * self.q * geometric


class UnitSession(ClosedFormSession):
    family = "unit"

    def __init__(self, b, d, init):
        super().__init__(init)
        self.b, self.d = _nonzero_constants(b, d)

    def _r_bracket(self, k):
        return ONE + k * self.b * self.p

    def _p_bracket(self, k):
        return ONE + k * self.d * self.q

    def check(self, m):
        # eager: j b x_0 y_{-1} != -1 and j d x_{-1} y_0 != -1 for j = 1..m
        bp, dq = self.b * self.p, self.d * self.q
        for j in range(1, m + 1):
            if j * bp == -1:
                raise ForbiddenInstanceError(self.family, j - 1, FIRST, f"j*b*x_0*y_-1 = -1 with j = {j}")
            if j * dq == -1:
                raise ForbiddenInstanceError(self.family, j - 1, SECOND, f"j*d*x_-1*y_0 = -1 with j = {j}")


class NonUnitSession(ClosedFormSession):
    family = "nonunit"

    def __init__(self, a, b, c, d, init):
        super().__init__(init)
        self.a, self.b, self.c, self.d = _nonzero_constants(a, b, c, d)
        if self.a == 1 or self.c == 1:
            raise FamilyError("nonunit family needs a != 1 and c != 1")

    def _r_bracket(self, k):
        ak = self.a ** k
        return ak + self.b * self.p * ((ONE - ak) / (ONE - self.a))

    def _p_bracket(self, k):
        ck = self.c ** k
        return ck + self.d * self.q * ((ONE - ck) / (ONE - self.c))


class NegUnitSession(ClosedFormSession):
    family = "neg-unit"

    def __init__(self, b, d, init):
        super().__init__(init)
        self.b, self.d = _nonzero_constants(b, d)

    def check(self, m):
        if m < 1:
            return
        if self.b * self.p == 1:
            raise ForbiddenInstanceError(self.family, 0, FIRST, "b*x_0*y_-1 = 1")
        if self.d * self.q == 1:
            raise ForbiddenInstanceError(self.family, 0, SECOND, "d*x_-1*y_0 = 1")

    def at(self, m):
        if m < -1:
            raise DomainError(f"index must be >= -1, got {m}")
        self.check(m)
        init = self.init
        bp1 = self.b * self.p - 1
        dq1 = self.d * self.q - 1
        if m == -1:
            return init.x_prev, init.y_prev
        if m % 2:
            n = (m + 1) // 2
            x = init.x_prev ** (1 - n) * (init.x0 * init.y_prev / init.y0) ** n * (ONE / bp1) ** n
            y = init.y_prev ** (1 - n) * (init.x_prev * init.y0 / init.x0) ** n * (ONE / dq1) ** n
        else:
            n = m // 2
            x = init.x0 ** (n + 1) * (init.y_prev / (init.x_prev * init.y0)) ** n * dq1 ** n
            y = init.y0 ** (n + 1) * (init.x_prev / (init.x0 * init.y_prev)) ** n * bp1 ** n
        return x, y


def _require_constant(quad, family):
    values = quad.constants()
    if values is None:
        raise FamilyError(f"{family} family needs constant coefficients")
    return values


def session(family, quad, init):
    """Build a session for ``family`` from a CoefficientQuad, checking its domain."""
    if family == "general":
        return GeneralSession(quad, init)
    if family not in FAMILIES:
        raise FamilyError(f"unknown family {family!r}")
    a, b, c, d = _require_constant(quad, family)
    if family == "constant":
        return ConstantSession(a, b, c, d, init)
    if family == "unit":
        if a != 1 or c != 1:
            raise FamilyError("unit family needs a = c = 1")
        return UnitSession(b, d, init)
    if family == "nonunit":
        return NonUnitSession(a, b, c, d, init)
    if a != -1 or c != -1:
        raise FamilyError("neg-unit family needs a = c = -1")
    return NegUnitSession(b, d, init)


def applicable_families(quad):
    """Families whose parameter domain contains ``quad``, most general first."""
    values = quad.constants()
    if values is None:
        return ["general"]
    a, _, c, _ = values
    out = ["general", "constant"]
    if a == 1 and c == 1:
        out.append("unit")
    if a != 1 and c != 1:
        out.append("nonunit")
    if a == -1 and c == -1:
        out.append("neg-unit")
    return out


def auto_family(quad):
    """The most specialised family that applies."""
    return applicable_families(quad)[-1]


def solve(family, quad, init, m):
    if family == "auto":
        family = auto_family(quad)
    return session(family, quad, init).at(m)


def solve_general(quad, init, m):
    return GeneralSession(quad, init).at(m)


def solve_constant(a, b, c, d, init, m):
    return ConstantSession(a, b, c, d, init).at(m)


def solve_unit(b, d, init, m):
    return UnitSession(b, d, init).at(m)


def solve_nonunit(a, b, c, d, init, m):
    return NonUnitSession(a, b, c, d, init).at(m)


def solve_neg_unit(b, d, init, m):
    return NegUnitSession(b, d, init).at(m)


@dataclass(frozen=True)
class ForbiddenReport:
    step: int
    equation: str
    factor: str
    condition: str
    j: int | None = None

    def describe(self):
        return f"singular at step {self.step} ({self.equation} equation): {self.condition}"


def forbidden_scan(quad, init, horizon):
    """First step < horizon at which a denominator vanishes, or None.

    Read off the general brackets R_k, P_k for k = 1..horizon. For constant
    coefficients the report names the family's own analytic condition.
    """
    general = GeneralSession(quad, init)
    try:
        general.check(horizon)
    except ForbiddenInstanceError as exc:
        first = exc.equation == FIRST
        factor = FACTOR_FIRST if first else FACTOR_SECOND
        k = exc.step + 1
        return ForbiddenReport(exc.step, exc.equation, factor, _analytic_condition(quad, k, first, exc.condition), k)
    return None


def _analytic_condition(quad, k, first, fallback):
    values = quad.constants()
    if values is None:
        return fallback
    a, b, c, d = values
    mult, add, prod = (a, b, "x_0*y_-1") if first else (c, d, "x_-1*y_0")
    letter = "b" if first else "d"
    if a == 1 and c == 1:
        return f"j*{letter}*{prod} = -1 with j = {k}"
    if a == -1 and c == -1:
        return f"{letter}*{prod} = 1"
    if mult == 1:
        return f"1 + {k}*{letter}*{prod} = 0"
    base = "a" if first else "c"
    return f"{base}^{k} + {letter}*{prod}*(1 - {base}^{k})/(1 - {base}) = 0"
