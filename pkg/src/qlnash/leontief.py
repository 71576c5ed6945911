"""Quasi-Leontief functions on finite meet-semilattices.

A tabulated function u is quasi-Leontief (QL) when u(x ^ y) equals
min(u(x), u(y)) for every pair, equivalently when each nonempty upper
level set {x : u(x) >= t} is a principal up-set. QL functions are isotone
and admit two derived operators used throughout the game layer:

* ``least_attaining(t)``: the least element whose value reaches t, i.e.
  the meet (and generator) of the level set; None when the level is
  unattained. Satisfies the adjunction u(z) >= t iff z >= least_attaining(t).
* ``project_efficient(x)``: the least element with the same value as x.
  Idempotent, sits below x, and its fixed points are exactly the
  efficient elements.

All values are exact rationals; floats are rejected everywhere.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InvariantViolationError,
    NotQuasiLeontiefError,
    ValidationError,
)
from .semilattice import InfSemilattice, ProductSemilattice


def to_rational(value) -> Fraction:
    """Coerce to Fraction, rejecting floats and other inexact types."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError("boolean is not a rational value")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse rational from {value!r}") from exc
    raise ValidationError(
        f"values must be exact rationals (Fraction, int, or string), got {type(value).__name__}"
    )


@dataclass(frozen=True)
class QLCertificate:
    """Verdict of the quasi-Leontief check, with witnesses on failure.

    ``failed_pair`` breaks the meet-min law: u(x ^ y) != min(u(x), u(y)).
    ``failed_level`` is an attained level whose upper level set is not the
    up-set of its own meet ``level_meet``: either the meet's value falls
    short of the level, or some element above the meet does.
    """

    is_ql: bool
    failed_pair: tuple | None = None
    failed_level: Fraction | None = None
    level_meet: object | None = None


class TabulatedFunction:
    """Total rational-valued function on one space, given by its table."""

    def __init__(self, space: InfSemilattice, values):
        self.space = space
        elems = list(space.elements)
        if isinstance(values, dict):
            table = {}
            for k, v in values.items():
                table[space.check_element(k)] = to_rational(v)
        else:
            seq = list(values)
            if len(seq) != len(elems):
                raise ValidationError(
                    f"expected {len(elems)} values, got {len(seq)}"
                )
            table = {e: to_rational(v) for e, v in zip(elems, seq)}
        missing = [e for e in elems if e not in table]
        if missing:
            raise ValidationError(f"no value for element {missing[0]!r}")
        if len(table) != len(elems):
            raise ValidationError("values given for elements outside the space")
        self._values = table
        self._elements = elems
        self._ql: QLCertificate | None = None
        self._levels: list[Fraction] | None = None
        self._level_meets: list | None = None

    def __call__(self, x) -> Fraction:
        try:
            return self._values[x]
        except (KeyError, TypeError):
            pass
        return self._values[self.space.check_element(x)]

    def items(self):
        return self._values.items()

    @property
    def max_value(self) -> Fraction:
        return max(self._values.values())

    @property
    def min_value(self) -> Fraction:
        return min(self._values.values())

    # -- quasi-Leontief certification -------------------------------------

    def ql_certificate(self) -> QLCertificate:
        if self._ql is None:
            self._ql = self._compute_certificate()
        return self._ql

    @property
    def is_quasi_leontief(self) -> bool:
        return self.ql_certificate().is_ql

    def require_quasi_leontief(self) -> None:
        cert = self.ql_certificate()
        if not cert.is_ql:
            raise NotQuasiLeontiefError(
                "function is not quasi-Leontief: "
                f"pair {cert.failed_pair!r} breaks the meet-min law; "
                f"level {cert.failed_level} has a non-principal upper level set",
                certificate=cert,
            )

    def _compute_certificate(self) -> QLCertificate:
        space = self.space
        vals = self._values
        elems = self._elements
        pair = None
        for i, x in enumerate(elems):
            vx = vals[x]
            for y in elems[i + 1 :]:
                m = space.meet(x, y)
                if vals[m] != min(vx, vals[y]):
                    pair = (x, y)
                    break
            if pair:
                break
        if pair is None:
            return QLCertificate(is_ql=True)
        # find a level whose upper level set is not the up-set of its meet
        for t in sorted(set(vals.values()), reverse=True):
            level = [e for e in elems if vals[e] >= t]
            m = space.meet_all(level)
            if vals[m] < t:
                return QLCertificate(False, pair, t, m)
            if any(space.leq(m, y) and vals[y] < t for y in elems):
                return QLCertificate(False, pair, t, m)
        raise InvariantViolationError(
            "meet-min law failed but every upper level set looks principal"
        )

    # -- level structure ---------------------------------------------------

    def _level_cache(self):
        if self._levels is None:
            self.require_quasi_leontief()
            by_value: dict[Fraction, list] = {}
            for e in self._elements:
                by_value.setdefault(self._values[e], []).append(e)
            levels = sorted(by_value)
            meets: list = [None] * len(levels)
            acc = None
            for k in range(len(levels) - 1, -1, -1):
                for e in by_value[levels[k]]:
                    acc = e if acc is None else self.space.meet(acc, e)
                meets[k] = acc
            self._levels = levels
            self._level_meets = meets
        return self._levels, self._level_meets

    def least_attaining(self, level):
        """Least element with value >= level; None if the level is unattained.

        Ties cannot arise: the level set of a QL function is generated by
        its meet. For levels at or below the minimum value this is the
        bottom of the space.
        """
        t = to_rational(level)
        levels, meets = self._level_cache()
        if t > levels[-1]:
            return None
        return meets[bisect_left(levels, t)]

    def project_efficient(self, x):
        """Least element with the same value as x (never None)."""
        out = self.least_attaining(self(x))
        if out is None:
            raise InvariantViolationError("attained value reported unattained")
        return out

    # -- subset operators ----------------------------------------------------

    def _subset(self, members) -> list:
        if members is None:
            return list(self._elements)
        return sorted(self.space.check_element(x) for x in members)

    def argmax_set(self, members=None) -> frozenset:
        """Maximizers over a nonempty subset (whole space by default)."""
        sub = self._subset(members)
        if not sub:
            raise ValidationError("argmax over an empty subset is undefined")
        best = max(self._values[e] for e in sub)
        return frozenset(e for e in sub if self._values[e] == best)

    def max_over(self, members=None) -> Fraction:
        sub = self._subset(members)
        if not sub:
            raise ValidationError("max over an empty subset is undefined")
        return max(self._values[e] for e in sub)

    def efficient_set(self, members=None) -> frozenset:
        """Elements of the subset not weakly dominated at their own level.

        x is efficient in S when every y in S with u(y) >= u(x) satisfies
        y >= x. For the whole space this coincides with the fixed points
        (and the image) of ``project_efficient``, and it is always a chain.
        Empty subsets yield an empty set.
        """
        self.require_quasi_leontief()
        sub = self._subset(members)
        space = self.space
        vals = self._values
        out = []
        for x in sub:
            vx = vals[x]
            if all(space.leq(x, y) for y in sub if vals[y] >= vx):
                out.append(x)
        return frozenset(out)

    # -- inf-quasiconcavity ---------------------------------------------------

    def is_inf_quasiconcave(self) -> bool:
        """min over every two-point bracket >= min of the endpoint values."""
        space = self.space
        vals = self._values
        elems = self._elements
        for i, x in enumerate(elems):
            for y in elems[i:]:
                floor = min(vals[x], vals[y])
                if any(vals[z] < floor for z in space.bracket(x, y)):
                    return False
        return True


class MinAggregate:
    """Pointwise minimum of per-factor components over profile tuples."""

    def __init__(self, components):
        self.components = tuple(components)
        if not self.components:
            raise ValidationError("min aggregate needs at least one component")

    def __call__(self, profile) -> Fraction:
        if len(profile) != len(self.components):
            raise ValidationError(
                f"profile arity {len(profile)} != component count {len(self.components)}"
            )
        return min(c(x) for c, x in zip(self.components, profile))

    def tabulate(self, space: ProductSemilattice) -> TabulatedFunction:
        """Materialize on a product space whose factors match the components."""
        if len(space.factors) != len(self.components):
            raise ValidationError("factor count does not match component count")
        for k, (f, c) in enumerate(zip(space.factors, self.components)):
            if c.space is not f:
                raise ValidationError(f"component {k} is not defined on factor {k}")
        return TabulatedFunction(
            space, {e: self(e) for e in space.elements}
        )


def min_aggregate(components) -> MinAggregate:
    """Evaluator x -> min_j components[j](x[j])."""
    return MinAggregate(components)
