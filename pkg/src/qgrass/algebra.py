"""Z_n-graded Grassmann algebra with Berezin integration.

Generators come in conjugate pairs theta_i / theta_bar_i.  Every generator
is nilpotent of order n, and for two generators x, y with x preceding y in
the canonical order the product reorders as

    x * y = q**eps(x, y) * y * x,      q = exp(2*pi*i/n).

The canonical order places the barred partner first at each index:
theta_bar_1 < theta_1 < theta_bar_2 < theta_2 < ...  With eps = +1 for
every ordered pair this single rule gives

    theta_i theta_j   = q theta_j theta_i          (i < j)
    tbar_i  tbar_j    = q tbar_j  tbar_i           (i < j)
    theta_i tbar_i    = conj(q) tbar_i theta_i

simultaneously.  The phase table is plain data and can be overridden per
context for experiments with other commutation conventions.

Berezin integration is the linear functional

    integral d(theta) theta**k = delta(k, n-1),

evaluated operationally: the integrated variable's block is commuted to
the leftmost position (collecting q-phases), then the term survives iff
the block's exponent is exactly n - 1.

All q-phases are tracked as integer exponents reduced mod n and converted
to a complex scalar only at the end, so repeated reordering accumulates no
floating-point phase drift.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

PRUNE_TOL = 1e-12
CMP_TOL = 1e-9

Blocks = Sequence[tuple["Variable", int]]


@dataclass(frozen=True)
class GradeConfig:
    """Nilpotency order n and the primitive root q = exp(2*pi*i/n)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"grade must be >= 2, got {self.n}")

    @property
    def q(self) -> complex:
        return q_power(self.n, 1)

    @property
    def q_bar(self) -> complex:
        return q_power(self.n, -1)


def q_power(n_or_cfg: Union[int, GradeConfig], k: int) -> complex:
    """exp(2*pi*i*k/n), with the exponent reduced mod n before evaluation."""
    n = n_or_cfg.n if isinstance(n_or_cfg, GradeConfig) else int(n_or_cfg)
    k = k % n
    if k == 0:
        return 1.0 + 0.0j
    return cmath.exp(2j * cmath.pi * k / n)


@dataclass(frozen=True)
class Variable:
    """A Grassmann generator theta_index (barred=False) or tbar_index."""

    index: int
    barred: bool = False

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError("variable index must be >= 1")

    @property
    def sort_key(self) -> tuple[int, int]:
        # barred partner precedes the plain variable at the same index
        return (self.index, 0 if self.barred else 1)

    @property
    def name(self) -> str:
        return f"theta_bar_{self.index}" if self.barred else f"theta_{self.index}"

    @property
    def conjugate(self) -> "Variable":
        return Variable(self.index, not self.barred)

    def __lt__(self, other: "Variable") -> bool:
        return self.sort_key < other.sort_key

    def __repr__(self) -> str:
        return self.name


def parse_variable(name: str) -> Variable:
    """Inverse of Variable.name ('theta_3', 'theta_bar_1')."""
    if name.startswith("theta_bar_"):
        return Variable(int(name[len("theta_bar_"):]), barred=True)
    if name.startswith("theta_"):
        return Variable(int(name[len("theta_"):]), barred=False)
    raise ValueError(f"cannot parse variable name {name!r}")


@dataclass(frozen=True)
class PhaseTable:
    """eps(x, y) for canonically ordered pairs x < y.

    x*y = q**eps(x,y) * y*x.  eps is antisymmetric and defaults to +1 for
    every pair; individual pairs can be overridden.
    """

    default_eps: int = 1
    overrides: tuple[tuple[Variable, Variable, int], ...] = ()

    def eps(self, x: Variable, y: Variable) -> int:
        if x == y:
            return 0
        if y < x:
            return -self.eps(y, x)
        for (a, b, e) in self.overrides:
            if (a, b) == (x, y):
                return e
            if (a, b) == (y, x):
                return -e
        return self.default_eps


@dataclass(frozen=True)
class Monomial:
    """Product of generator powers in canonical variable order.

    exps is a tuple of (Variable, exponent) with variables strictly
    increasing and every exponent in 1..n-1.  The empty tuple is the
    scalar monomial 1.
    """

    exps: tuple[tuple[Variable, int], ...] = ()

    def exponent(self, v: Variable) -> int:
        for (u, e) in self.exps:
            if u == v:
                return e
        return 0

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def degree_split(self) -> tuple[int, int]:
        """(total unbarred exponent, total barred exponent)."""
        unbarred = sum(e for v, e in self.exps if not v.barred)
        barred = sum(e for v, e in self.exps if v.barred)
        return unbarred, barred

    def variables(self) -> tuple[Variable, ...]:
        return tuple(v for v, _ in self.exps)

    def without(self, v: Variable) -> "Monomial":
        return Monomial(tuple((u, e) for (u, e) in self.exps if u != v))

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        return "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in self.exps)


MONOMIAL_ONE = Monomial(())


def normal_order(blocks: Blocks, table: PhaseTable, n: int):
    """Sort a word of (variable, exponent) blocks into canonical order.

    Returns (q_exponent, Monomial) with

        word = q**q_exponent * monomial,

    or (0, None) when the word vanishes by nilpotency.  Insertion sort on
    blocks; moving a block of y**ey leftwards past x**ex (with y < x)
    rewrites x**ex * y**ey = q**(-eps(y,x)*ex*ey) * y**ey * x**ex.
    """
    out: list[list] = []  # list of [Variable, exponent]
    qexp = 0
    for (v, e) in blocks:
        if e == 0:
            continue
        if e < 0:
            raise ValueError("negative exponent in monomial word")
        if e >= n:
            return 0, None
        pos = len(out)
        while pos > 0 and v < out[pos - 1][0]:
            qexp -= table.eps(v, out[pos - 1][0]) * out[pos - 1][1] * e
            pos -= 1
        if pos > 0 and out[pos - 1][0] == v:
            out[pos - 1][1] += e
            if out[pos - 1][1] >= n:
                return 0, None
        else:
            out.insert(pos, [v, e])
    return qexp, Monomial(tuple((v, e) for v, e in out))


def left_extraction_exponent(mono: Monomial, v: Variable, table: PhaseTable) -> int:
    """q-exponent collected when commuting the v-block of mono to the far left."""
    ev = mono.exponent(v)
    qexp = 0
    for (u, e) in mono.exps:
        if u == v:
            break
        qexp += table.eps(u, v) * e * ev
    return qexp


@dataclass(frozen=True)
class AlgebraContext:
    """Grade, phase table and tolerances shared by a family of elements."""

    n: int
    phase_table: PhaseTable = field(default_factory=PhaseTable)
    prune_tol: float = PRUNE_TOL
    cmp_tol: float = CMP_TOL

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"grade must be >= 2, got {self.n}")

    @property
    def cfg(self) -> GradeConfig:
        return GradeConfig(self.n)

    @property
    def q(self) -> complex:
        return q_power(self.n, 1)

    def qp(self, k: int) -> complex:
        return q_power(self.n, k)

    def theta(self, index: int) -> Variable:
        return Variable(index, barred=False)

    def theta_bar(self, index: int) -> Variable:
        return Variable(index, barred=True)

    def scalar(self, c: complex) -> "AlgebraElement":
        return AlgebraElement(self, {MONOMIAL_ONE: complex(c)})

    def one(self) -> "AlgebraElement":
        return self.scalar(1.0)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def gen(self, v: Variable, power: int = 1) -> "AlgebraElement":
        qexp, mono = normal_order([(v, power)], self.phase_table, self.n)
        if mono is None:
            return self.zero()
        return AlgebraElement(self, {mono: q_power(self.n, qexp)})

    def word(self, blocks_or_vars: Iterable) -> "AlgebraElement":
        """Element for an arbitrarily ordered word of variables.

        Accepts either bare Variables or (Variable, exponent) pairs; the
        word is normal-ordered and the reordering phase absorbed into the
        coefficient.
        """
        blocks = []
        for item in blocks_or_vars:
            if isinstance(item, Variable):
                blocks.append((item, 1))
            else:
                blocks.append((item[0], int(item[1])))
        qexp, mono = normal_order(blocks, self.phase_table, self.n)
        if mono is None:
            return self.zero()
        return AlgebraElement(self, {mono: q_power(self.n, qexp)})

    def element(self, terms: Mapping[Monomial, complex]) -> "AlgebraElement":
        return AlgebraElement(self, dict(terms))


class AlgebraElement:
    """Finite sum of complex coefficients times canonical monomials.

    Immutable by convention: every operation returns a new element.
    Coefficients below ctx.prune_tol are dropped at construction time.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AlgebraContext, terms: Mapping[Monomial, complex]):
        self.ctx = ctx
        self.terms = {
            m: complex(c) for m, c in terms.items() if abs(c) >= ctx.prune_tol
        }

    # -- ring structure -------------------------------------------------

    def _check_ctx(self, other: "AlgebraElement") -> None:
        if self.ctx != other.ctx:
            raise ValueError("operands belong to different algebra contexts")

    def __add__(self, other) -> "AlgebraElement":
        other = self._coerce(other)
        self._check_ctx(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0.0) + c
        return AlgebraElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "AlgebraElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "AlgebraElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, (int, float, complex)):
            return AlgebraElement(
                self.ctx, {m: c * other for m, c in self.terms.items()}
            )
        other = self._coerce(other)
        self._check_ctx(other)
        n = self.ctx.n
        table = self.ctx.phase_table
        out: dict[Monomial, complex] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                qexp, mono = normal_order(ma.exps + mb.exps, table, n)
                if mono is None:
                    continue
                out[mono] = out.get(mono, 0.0) + ca * cb * q_power(n, qexp)
        return AlgebraElement(self.ctx, out)

    def __rmul__(self, other) -> "AlgebraElement":
        if isinstance(other, (int, float, complex)):
            return self * other
        return self._coerce(other) * self

    def __pow__(self, k: int) -> "AlgebraElement":
        if k < 0:
            raise ValueError("negative powers are not defined")
        acc = self.ctx.one()
        for _ in range(k):
            acc = acc * self
        return acc

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return other
        if isinstance(other, (int, float, complex)):
            return self.ctx.scalar(other)
        return NotImplemented

    # -- involution and substitutions -----------------------------------

    def conjugate(self) -> "AlgebraElement":
        """Hermitian conjugate: reverse each word, toggle bars, conjugate scalars."""
        n = self.ctx.n
        table = self.ctx.phase_table
        out: dict[Monomial, complex] = {}
        for mono, c in self.terms.items():
            blocks = [(v.conjugate, e) for (v, e) in reversed(mono.exps)]
            qexp, new = normal_order(blocks, table, n)
            if new is None:
                continue
            out[new] = out.get(new, 0.0) + c.conjugate() * q_power(n, qexp)
        return AlgebraElement(self.ctx, out)

    def scale_variable(self, v: Variable, c: complex) -> "AlgebraElement":
        """Substitute v -> c*v, multiplying each term by c**exponent(v)."""
        out = {}
        for mono, coeff in self.terms.items():
            e = mono.exponent(v)
            out[mono] = coeff * (complex(c) ** e if e else 1.0)
        return AlgebraElement(self.ctx, out)

    # -- Berezin integration ---------------------------------------------

    def berezin_integrate(self, v: Variable) -> "AlgebraElement":
        """Keep terms where v has exponent n-1, after extracting v's block leftwards."""
        n = self.ctx.n
        table = self.ctx.phase_table
        out: dict[Monomial, complex] = {}
        for mono, c in self.terms.items():
            if mono.exponent(v) != n - 1:
                continue
            qexp = left_extraction_exponent(mono, v, table)
            new = mono.without(v)
            out[new] = out.get(new, 0.0) + c * q_power(n, qexp)
        return AlgebraElement(self.ctx, out)

    def multi_integrate(self, order: Sequence[Variable]) -> "AlgebraElement":
        """Iterated integral; the differential written last acts first."""
        if len(set(order)) != len(order):
            raise ValueError("repeated variable in integration order")
        acc = self
        for v in reversed(order):
            acc = acc.berezin_integrate(v)
        return acc

    # -- queries ----------------------------------------------------------

    def coefficient(self, mono: Monomial) -> complex:
        return self.terms.get(mono, 0.0 + 0.0j)

    def coefficient_of_word(self, blocks_or_vars: Iterable) -> complex:
        """Coefficient relative to an arbitrarily ordered word.

        Returns c such that the element contains c * (word); the word's
        normal-ordering phase is divided out.
        """
        w = self.ctx.word(blocks_or_vars)
        if len(w.terms) != 1:
            raise ValueError("word vanishes by nilpotency")
        ((mono, phase),) = w.terms.items()
        return self.terms.get(mono, 0.0 + 0.0j) / phase

    def norm(self) -> float:
        return sum(abs(c) ** 2 for c in self.terms.values()) ** 0.5

    def isclose(self, other: "AlgebraElement", tol: float | None = None) -> bool:
        other = self._coerce(other)
        tol = self.ctx.cmp_tol if tol is None else tol
        keys = set(self.terms) | set(other.terms)
        return all(
            abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) <= tol for k in keys
        )

    @property
    def is_scalar(self) -> bool:
        return all(m == MONOMIAL_ONE for m in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def max_degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: tuple(v.sort_key + (e,) for v, e in m.exps)):
            c = self.terms[mono]
            parts.append(f"({c:.6g})*{mono}")
        return " + ".join(parts)


# Module-level aliases matching the operation vocabulary.

def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def conjugate(a: AlgebraElement) -> AlgebraElement:
    return a.conjugate()


def scale_variable(a: AlgebraElement, v: Variable, c: complex) -> AlgebraElement:
    return a.scale_variable(v, c)


def berezin_integrate(a: AlgebraElement, v: Variable) -> AlgebraElement:
    return a.berezin_integrate(v)


def multi_integrate(a: AlgebraElement, order: Sequence[Variable]) -> AlgebraElement:
    return a.multi_integrate(order)
