"""The four coefficient sequences a_n, b_n, c_n, d_n of the system."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, HorizonError
from .numeric import ONE, ZERO, rational

__all__ = ["CoefficientSeq", "CoefficientQuad", "coeff_at", "require_nonzero", "product_range", "weighted_tail_sum"]

KINDS = ("constant", "periodic", "table")


@dataclass(frozen=True)
class CoefficientSeq:
    """One coefficient sequence, indexed by n >= 0.

    Entries must be nonzero unless ``nonzero=False``; zero entries are only
    meaningful for the linear recurrences of the reduced system.
    """

    kind: str
    values: tuple
    nonzero: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown sequence kind {self.kind!r}")
        values = tuple(rational(v) for v in self.values)
        if not values:
            raise DomainError("a coefficient sequence needs at least one entry")
        if self.kind == "constant" and len(values) != 1:
            raise DomainError("a constant sequence holds exactly one value")
        if self.nonzero and any(v == 0 for v in values):
            raise DomainError("coefficient sequences must be nonzero")
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, value, nonzero=True):
        return cls("constant", (value,), nonzero)

    @classmethod
    def periodic(cls, values, nonzero=True):
        return cls("periodic", tuple(values), nonzero)

    @classmethod
    def table(cls, values, nonzero=True):
        return cls("table", tuple(values), nonzero)

    @property
    def horizon(self):
        """Number of valid indices, or None when unbounded."""
        return len(self.values) if self.kind == "table" else None

    def __getitem__(self, n):
        if n < 0:
            raise IndexError(f"coefficient index must be nonnegative, got {n}")
        if self.kind == "constant":
            return self.values[0]
        if self.kind == "periodic":
            return self.values[n % len(self.values)]
        if n >= len(self.values):
            raise HorizonError(f"table sequence has {len(self.values)} entries, index {n} requested")
        return self.values[n]


def _as_seq(source, kind, nonzero):
    if isinstance(source, CoefficientSeq):
        if nonzero and not source.nonzero:
            return CoefficientSeq(source.kind, source.values)
        return source
    if kind == "constant":
        return CoefficientSeq.constant(source, nonzero)
    return CoefficientSeq(kind, tuple(source), nonzero)


@dataclass(frozen=True)
class CoefficientQuad:
    """Coefficient sequences of both equations.

    ``CoefficientQuad.constant(1, 1, 1, 1)`` gives the unit system;
    ``CoefficientQuad.periodic([2, 3], [1], [1], [1])`` cycles each list by
    ``n mod len``, periods may differ between components. Pass
    ``nonzero=False`` to allow zero entries when only the reduced linear
    recurrences will read the quad.
    """

    kind: str
    a: CoefficientSeq
    b: CoefficientSeq
    c: CoefficientSeq
    d: CoefficientSeq
    nonzero: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown coefficient kind {self.kind!r}")
        for name in "abcd":
            object.__setattr__(self, name, _as_seq(getattr(self, name), self.kind, self.nonzero))

    @classmethod
    def constant(cls, a, b, c, d, nonzero=True):
        return cls("constant", a, b, c, d, nonzero)

    @classmethod
    def periodic(cls, a, b, c, d, nonzero=True):
        return cls("periodic", a, b, c, d, nonzero)

    @classmethod
    def table(cls, a, b, c, d, nonzero=True):
        return cls("table", a, b, c, d, nonzero)

    @property
    def horizon(self):
        """Largest n + 1 for which all four sequences are defined (None if unbounded)."""
        limits = [s.horizon for s in (self.a, self.b, self.c, self.d) if s.horizon is not None]
        return min(limits) if limits else None

    def at(self, n):
        return coeff_at(self, n)

    def constants(self):
        """``(a, b, c, d)`` for a constant-kind quad, else None."""
        if self.kind != "constant":
            return None
        return tuple(s.values[0] for s in (self.a, self.b, self.c, self.d))


def require_nonzero(quad):
    """Refuse a quad built with ``nonzero=False`` where the full system is needed."""
    if not quad.nonzero:
        raise DomainError("the system needs nonzero coefficient sequences")
    return quad


def coeff_at(quad, n):
    if n < 0:
        raise IndexError(f"coefficient index must be nonnegative, got {n}")
    return quad.a[n], quad.b[n], quad.c[n], quad.d[n]


def product_range(seq, start, stop):
    """Product of ``seq[k]`` for ``start <= k <= stop``; 1 when empty."""
    if stop < start:
        return ONE
    if seq.kind == "constant":
        return seq.values[0] ** (stop - start + 1)
    result = ONE
    for k in range(start, stop + 1):
        result = result * seq[k]
    return result


def weighted_tail_sum(mult, add, count):
    """``sum(add[l] * prod(mult[l+1 .. count-1]) for l < count)``.

    This is the inhomogeneous part of the product-sum solution of
    ``u_{k+1} = mult_k u_k + add_k``. The inner products are accumulated
    from the top index down, each one reusing the previous.
    """
    total = ZERO
    tail = ONE
    for l in range(count - 1, -1, -1):
        total = total + add[l] * tail
        tail = tail * mult[l]
    return total
