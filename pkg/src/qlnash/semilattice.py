"""Finite meet-semilattices with explicit meet tables.

A space is a carrier {0, ..., n-1} plus a total binary meet. The order is
the induced one: a <= b iff a ^ b == a. Tables are validated eagerly at
construction (idempotence, commutativity, associativity, antisymmetry of
the induced order), and every valid space has a bottom element, the meet
of the whole carrier. Elements are identified by index; labels are for
display and lookup only.

Products hold their factors and compute meets componentwise; they never
materialize a product meet table. Chain-completeness conditions on upper
sets are vacuous here: every chain in a finite order has a supremum, so no
operation checks for them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolationError, UnknownElementError, ValidationError

# Elements of a base space are ints; elements of a product are int tuples.
Element = "int | tuple[int, ...]"

MAX_VIOLATIONS_PER_LAW = 10_000


@dataclass(frozen=True)
class AxiomViolation:
    law: str  # idempotence | commutativity | associativity | antisymmetry
    elements: tuple[int, ...]


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of checking a raw meet table.

    ``violations`` lists every offending instance per law, capped at
    MAX_VIOLATIONS_PER_LAW each (``truncated`` set when the cap bites).
    ``bottom`` is the meet of the whole carrier when the table is valid.
    """

    size: int
    ok: bool
    violations: tuple[AxiomViolation, ...]
    bottom: int | None
    truncated: bool = False

    def summary(self, limit: int = 5) -> str:
        if self.ok:
            return f"valid meet table on {self.size} elements, bottom={self.bottom}"
        shown = ", ".join(
            f"{v.law}@{v.elements}" for v in self.violations[:limit]
        )
        more = len(self.violations) - limit
        tail = f" (+{more} more)" if more > 0 else ""
        return f"invalid meet table: {shown}{tail}"


def _collect(law: str, rows, out: list[AxiomViolation]) -> None:
    for row in rows:
        out.append(AxiomViolation(law, tuple(int(x) for x in np.atleast_1d(row))))


def check_meet_table(table) -> AxiomReport:
    """Validate a square meet table; report violations or certify it.

    Accepts any nested sequence of ints. Raises ValidationError only for
    structural problems (non-square shape, out-of-range entries); algebraic
    failures are reported, not raised.
    """
    try:
        t = np.asarray(table, dtype=np.intp)
    except (ValueError, TypeError, OverflowError) as exc:
        raise ValidationError(f"meet table is not a square int array: {exc}") from exc
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValidationError(f"meet table must be square, got shape {t.shape}")
    n = int(t.shape[0])
    if n == 0:
        raise ValidationError("meet table must have at least one element")
    if ((t < 0) | (t >= n)).any():
        raise ValidationError("meet table entries must be element indices in [0, n)")

    r = np.arange(n)
    # min-tables (chains and anything order-isomorphic to one by index) are
    # valid by inspection; skip the cubic associativity scan for them.
    if np.array_equal(t, np.minimum.outer(r, r)):
        return AxiomReport(size=n, ok=True, violations=(), bottom=0)

    violations: list[AxiomViolation] = []
    truncated = False

    bad_idem = np.flatnonzero(np.diagonal(t) != r)
    truncated |= len(bad_idem) > MAX_VIOLATIONS_PER_LAW
    _collect("idempotence", bad_idem[:MAX_VIOLATIONS_PER_LAW], violations)

    bad_comm = np.argwhere(t != t.T)
    truncated |= len(bad_comm) > MAX_VIOLATIONS_PER_LAW
    _collect("commutativity", bad_comm[:MAX_VIOLATIONS_PER_LAW], violations)

    assoc_rows: list[np.ndarray] = []
    count = 0
    if n <= 256:
        bad = np.argwhere(t[t] != t[:, t])
        count = len(bad)
        assoc_rows = list(bad[:MAX_VIOLATIONS_PER_LAW])
    else:
        # chunk over the first index to bound memory at O(n^2)
        for a in range(n):
            if count > MAX_VIOLATIONS_PER_LAW:
                break
            bad = np.argwhere(t[t[a], :] != t[a, t])
            count += len(bad)
            for row in bad[: max(0, MAX_VIOLATIONS_PER_LAW - len(assoc_rows))]:
                assoc_rows.append(np.concatenate(([a], row)))
    truncated |= count > MAX_VIOLATIONS_PER_LAW
    _collect("associativity", assoc_rows, violations)

    leq = t == r[:, None]  # leq[a, b] iff a ^ b == a
    bad_anti = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))
    truncated |= len(bad_anti) > MAX_VIOLATIONS_PER_LAW
    _collect("antisymmetry", bad_anti[:MAX_VIOLATIONS_PER_LAW], violations)

    ok = not violations
    bottom = None
    if ok:
        b = 0
        for x in range(1, n):
            b = int(t[b, x])
        if not leq[b].all():
            raise InvariantViolationError("valid table without a bottom element")
        bottom = b
    return AxiomReport(
        size=n, ok=ok, violations=tuple(violations), bottom=bottom, truncated=truncated
    )


class InfSemilattice:
    """Shared derived operations; concrete spaces define meet and elements."""

    def meet(self, a, b):
        raise NotImplementedError

    def check_element(self, e):
        raise NotImplementedError

    @property
    def elements(self):
        raise NotImplementedError

    def label(self, e) -> str:
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        return self.meet(a, b) == a

    def meet_all(self, xs):
        """Meet of a nonempty iterable of elements."""
        it = iter(xs)
        try:
            out = next(it)
        except StopIteration:
            raise ValidationError("meet over an empty collection is undefined") from None
        self.check_element(out)
        for x in it:
            out = self.meet(out, x)
        return out

    def interval(self, a, b) -> frozenset:
        """All z with a <= z <= b. Requires a <= b."""
        if not self.leq(a, b):
            raise ValidationError(
                f"interval endpoints must satisfy a <= b, got {self.label(a)} and {self.label(b)}"
            )
        return frozenset(z for z in self.elements if self.leq(a, z) and self.leq(z, b))

    def bracket(self, x1, x2) -> frozenset:
        """Union of the two intervals from x1 ^ x2 up to each endpoint."""
        m = self.meet(x1, x2)
        return self.interval(m, x1) | self.interval(m, x2)


class FiniteInfSemilattice(InfSemilattice):
    """Carrier {0..n-1} with an explicit, eagerly validated meet table."""

    def __init__(self, meet_table, labels=None):
        report = check_meet_table(meet_table)
        if not report.ok:
            raise ValidationError(report.summary())
        self.n = report.size
        self.axiom_report = report
        self.bottom = report.bottom
        self._table = np.asarray(meet_table, dtype=np.intp).copy()
        self._table.setflags(write=False)
        self._leq = self._table == np.arange(self.n)[:, None]
        self._leq.setflags(write=False)
        if labels is None:
            labels = tuple(f"e{i}" for i in range(self.n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != self.n:
                raise ValidationError(
                    f"expected {self.n} labels, got {len(labels)}"
                )
            if len(set(labels)) != self.n:
                raise ValidationError("labels must be unique")
        self.labels = labels
        self._label_index = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def chain(cls, labels_or_size) -> "FiniteInfSemilattice":
        """Chain under min of indices; labels ascend with the order."""
        if isinstance(labels_or_size, int):
            n = labels_or_size
            labels = None
        else:
            labels = list(labels_or_size)
            n = len(labels)
        if n < 1:
            raise ValidationError("a chain needs at least one element")
        r = np.arange(n)
        return cls(np.minimum.outer(r, r), labels=labels)

    def __len__(self) -> int:
        return self.n

    def __contains__(self, e) -> bool:
        return isinstance(e, (int, np.integer)) and not isinstance(e, bool) and 0 <= e < self.n

    def __repr__(self) -> str:
        return f"FiniteInfSemilattice(n={self.n})"

    @property
    def elements(self) -> range:
        return range(self.n)

    def check_element(self, e) -> int:
        if e not in self:
            raise UnknownElementError(f"unknown element {e!r} for space of size {self.n}")
        return int(e)

    def meet(self, a, b) -> int:
        return int(self._table[self.check_element(a), self.check_element(b)])

    def leq(self, a, b) -> bool:
        return bool(self._leq[self.check_element(a), self.check_element(b)])

    def interval(self, a, b) -> frozenset:
        a = self.check_element(a)
        b = self.check_element(b)
        if not self._leq[a, b]:
            raise ValidationError(
                f"interval endpoints must satisfy a <= b, got {self.label(a)} and {self.label(b)}"
            )
        mask = self._leq[a, :] & self._leq[:, b]
        return frozenset(int(z) for z in np.flatnonzero(mask))

    def upset(self, a) -> frozenset:
        """All z with a <= z."""
        a = self.check_element(a)
        return frozenset(int(z) for z in np.flatnonzero(self._leq[a, :]))

    def label(self, e) -> str:
        return self.labels[self.check_element(e)]

    def index_of(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise UnknownElementError(f"unknown element label {label!r}") from None


class _ProductElements:
    """Re-iterable view of a product carrier."""

    def __init__(self, factors):
        self._factors = factors

    def __iter__(self):
        return itertools.product(*(f.elements for f in self._factors))

    def __len__(self):
        out = 1
        for f in self._factors:
            out *= len(f)
        return out


class ProductSemilattice(InfSemilattice):
    """Componentwise product of finite meet-semilattices.

    Elements are tuples of factor indices; the meet table is never
    materialized (use ``explicit`` for small spaces when one is needed).
    """

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValidationError("a product needs at least one factor")
        for k, f in enumerate(factors):
            if not isinstance(f, FiniteInfSemilattice):
                raise ValidationError(f"factor {k} is not a FiniteInfSemilattice")
        self.factors = factors
        self.bottom = tuple(f.bottom for f in factors)

    def __len__(self) -> int:
        out = 1
        for f in self.factors:
            out *= len(f)
        return out

    def __contains__(self, e) -> bool:
        return (
            isinstance(e, tuple)
            and len(e) == len(self.factors)
            and all(x in f for f, x in zip(self.factors, e))
        )

    def __repr__(self) -> str:
        return f"ProductSemilattice({'x'.join(str(len(f)) for f in self.factors)})"

    @property
    def elements(self) -> _ProductElements:
        return _ProductElements(self.factors)

    def check_element(self, e) -> tuple:
        if e not in self:
            raise UnknownElementError(
                f"unknown element {e!r} for product of arities "
                f"{tuple(len(f) for f in self.factors)}"
            )
        return tuple(int(x) for x in e)

    def meet(self, a, b) -> tuple:
        a = self.check_element(a)
        b = self.check_element(b)
        return tuple(f.meet(x, y) for f, x, y in zip(self.factors, a, b))

    def leq(self, a, b) -> bool:
        a = self.check_element(a)
        b = self.check_element(b)
        return all(f.leq(x, y) for f, x, y in zip(self.factors, a, b))

    def interval(self, a, b) -> frozenset:
        a = self.check_element(a)
        b = self.check_element(b)
        if not self.leq(a, b):
            raise ValidationError(
                f"interval endpoints must satisfy a <= b, got {self.label(a)} and {self.label(b)}"
            )
        per_axis = [
            sorted(f.interval(x, y)) for f, x, y in zip(self.factors, a, b)
        ]
        return frozenset(itertools.product(*per_axis))

    def upset(self, a) -> frozenset:
        a = self.check_element(a)
        per_axis = [sorted(f.upset(x)) for f, x in zip(self.factors, a)]
        return frozenset(itertools.product(*per_axis))

    def label(self, e) -> str:
        e = self.check_element(e)
        return "(" + ", ".join(f.label(x) for f, x in zip(self.factors, e)) + ")"

    def explicit(self, max_size: int = 4096):
        """Materialize as a FiniteInfSemilattice; returns (space, elements).

        ``elements[i]`` is the tuple represented by index i in the result.
        Guarded by max_size since the table is quadratic in the carrier.
        """
        if len(self) > max_size:
            raise ValidationError(
                f"refusing to materialize a product with {len(self)} elements"
            )
        elems = list(self.elements)
        index = {e: i for i, e in enumerate(elems)}
        table = [
            [index[self.meet(a, b)] for b in elems]
            for a in elems
        ]
        labels = [self.label(e) for e in elems]
        return FiniteInfSemilattice(table, labels=labels), elems


def product(factors) -> ProductSemilattice:
    """Product space with componentwise meet."""
    return ProductSemilattice(factors)


def _validated_subset(space, members) -> frozenset:
    out = frozenset(space.check_element(x) for x in members)
    return out


@dataclass(frozen=True)
class InfConvexityReport:
    """Three equivalent readings of inf-convexity, computed independently."""

    sub_semilattice: bool
    order_convex: bool
    inf_convex: bool


def is_inf_convex(space, members) -> InfConvexityReport:
    """Check a subset three ways: meet-closure, order-convexity, brackets.

    The bracket form (every two-point bracket stays inside) must agree with
    the conjunction of the other two; disagreement raises, since it cannot
    happen for a correct implementation.
    """
    c = _validated_subset(space, members)
    clist = sorted(c)
    sub = all(space.meet(x, y) in c for x, y in itertools.combinations_with_replacement(clist, 2))
    order_convex = True
    for x, y in itertools.permutations(clist, 2):
        if space.leq(x, y) and not space.interval(x, y) <= c:
            order_convex = False
            break
    inf_convex = all(
        space.bracket(x, y) <= c
        for x, y in itertools.combinations_with_replacement(clist, 2)
    )
    if inf_convex != (sub and order_convex):
        raise InvariantViolationError(
            "bracket-based inf-convexity disagrees with meet-closure + order-convexity"
        )
    return InfConvexityReport(sub, order_convex, inf_convex)


def is_comprehensive(space, members) -> bool:
    """True iff the subset is downward closed in the space."""
    s = _validated_subset(space, members)
    for x in s:
        for y in space.elements:
            if space.leq(y, x) and y not in s:
                return False
    return True


def maximal_elements(space, members) -> frozenset:
    """Elements of a nonempty subset with nothing strictly above them in it."""
    s = _validated_subset(space, members)
    if not s:
        raise ValidationError("maximal_elements of an empty subset is undefined")
    out = set()
    for x in s:
        if not any(y != x and space.leq(x, y) for y in s):
            out.add(x)
    return frozenset(out)


def replace_coordinate(profile: tuple, i: int, value) -> tuple:
    """Profile with coordinate i swapped out."""
    return profile[:i] + (value,) + profile[i + 1 :]
