"""Reduction of the system to two first-order linear recurrences.

With U_n = 1/(x_n y_{n-1}) and V_n = 1/(x_{n-1} y_n) the system becomes

    U_{n+1} = a_n U_n + b_n,    V_{n+1} = c_n V_n + d_n,

and the original variables come back through

    x_{n+1} = x_{n-1} V_n / U_{n+1},    y_{n+1} = y_{n-1} U_n / V_{n+1}.

Both products x_n y_{n-1} and x_{n-1} y_n are unchanged by the scaling
symmetries, which is why they make a valid set of reduced variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .engine import FIRST, SECOND, Trajectory
from .errors import DomainError, ReconstructionSingularError
from .coefficients import product_range, weighted_tail_sum
from .numeric import ONE, rational

__all__ = [
    "InvariantSeq",
    "invariant_seeds",
    "invariants_from_trajectory",
    "invariants_by_recurrence",
    "invariants_closed_form",
    "reconstruct",
]


@dataclass
class InvariantSeq:
    """U_n and V_n for n = 0 .. len - 1."""

    U: list = field(default_factory=list)
    V: list = field(default_factory=list)

    def __len__(self):
        return len(self.U)

    @property
    def entries(self):
        return [(n, u, v) for n, (u, v) in enumerate(zip(self.U, self.V))]


def invariant_seeds(init):
    """(U_0, V_0) = (1/(x_0 y_{-1}), 1/(x_{-1} y_0))."""
    return ONE / init.p, ONE / init.q


def invariants_from_trajectory(traj, horizon=None):
    last = traj.last_index if horizon is None else horizon
    if last > traj.last_index:
        raise DomainError(f"trajectory ends at {traj.last_index}, horizon {last} requested")
    inv = InvariantSeq()
    for n in range(0, last + 1):
        inv.U.append(ONE / (traj.x(n) * traj.y(n - 1)))
        inv.V.append(ONE / (traj.x(n - 1) * traj.y(n)))
    return inv


def invariants_by_recurrence(quad, U0, V0, N):
    """Iterate both linear recurrences to index N."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    u, v = rational(U0), rational(V0)
    inv = InvariantSeq([u], [v])
    for n in range(N):
        a, b, c, d = quad.at(n)
        u = a * u + b
        v = c * v + d
        inv.U.append(u)
        inv.V.append(v)
    return inv


def invariants_closed_form(quad, U0, V0, n):
    """(U_n, V_n) from the product-sum solution, without iterating."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    U = rational(U0) * product_range(quad.a, 0, n - 1) + weighted_tail_sum(quad.a, quad.b, n)
    V = rational(V0) * product_range(quad.c, 0, n - 1) + weighted_tail_sum(quad.c, quad.d, n)
    return U, V


def reconstruct(init, inv, N):
    """Rebuild x_n, y_n for n = -1 .. N from the initial state and U, V."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    if len(inv) < N + 1:
        raise DomainError(f"invariants cover indices 0..{len(inv) - 1}, need 0..{N}")
    xs = [init.x_prev, init.x0]
    ys = [init.y_prev, init.y0]
    for n in range(N):
        if inv.U[n + 1] == 0:
            raise ReconstructionSingularError(n, FIRST, f"U_{n + 1}")
        if inv.V[n + 1] == 0:
            raise ReconstructionSingularError(n, SECOND, f"V_{n + 1}")
        xs.append(xs[-2] * (inv.V[n] / inv.U[n + 1]))
        ys.append(ys[-2] * (inv.U[n] / inv.V[n + 1]))
    return Trajectory(xs, ys)
