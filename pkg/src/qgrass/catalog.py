"""Catalog of weight-integral constructions with verification.

Every entry packages a recipe (product of coherent / squeezed states, a
weight function, a differential list) together with its cataloged target
state.  catalog_construct runs the recipe, compares the computed state to
the target under the policy

    exact  >  global_phase  >  signature  >  mismatch,

where "signature" means termwise equal magnitudes and identical Schmidt
spectra across every bipartition (both invariant under local diagonal
phases).  Each entry also attaches an independent least-squares solver
cross-check over a full monomial basis.  Non-exact matches are flagged
with stable discrepancy ids, never silently accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import AlgebraContext, AlgebraElement, Monomial, Variable
from .entangle import (
    DEFAULT_TOL,
    EntanglementReport,
    IntegralSpec,
    WeightSolution,
    entanglement_report,
    integrate_graded,
    monomial_basis,
    solve_weight,
)
from .qstate import (
    GradedState,
    PlainState,
    coherent_state,
    squeezed_state_exp,
    squeezed_state_symmetric,
    tensor,
)

MATCH_EXACT = "exact"
MATCH_GLOBAL_PHASE = "global_phase"
MATCH_SIGNATURE = "signature"
MATCH_MISMATCH = "mismatch"

MATCH_RANK = {
    MATCH_EXACT: 3,
    MATCH_GLOBAL_PHASE: 2,
    MATCH_SIGNATURE: 1,
    MATCH_MISMATCH: 0,
}


def match_at_least(match: str, floor: str) -> bool:
    return MATCH_RANK[match] >= MATCH_RANK[floor]


def compare_states(computed: PlainState, target: PlainState, tol: float = DEFAULT_TOL) -> str:
    """Classify how the computed state relates to the target (both normalized)."""
    if computed.norm() == 0.0:
        return MATCH_MISMATCH
    a = computed.normalized().amps
    b = target.normalized().amps
    if np.max(np.abs(a - b)) <= tol:
        return MATCH_EXACT
    k = int(np.argmax(np.abs(b)))
    if abs(a[k]) > tol:
        phase = a[k] / b[k]
        if abs(abs(phase) - 1.0) <= tol and np.max(np.abs(a - phase * b)) <= tol:
            return MATCH_GLOBAL_PHASE
    if np.max(np.abs(np.abs(a) - np.abs(b))) <= tol:
        ra = entanglement_report(computed.normalized(), tol=tol)
        rb = entanglement_report(target.normalized(), tol=tol)
        same_spectra = all(
            len(ra.bipartition_schmidt[cut]) == len(rb.bipartition_schmidt[cut])
            and max(
                abs(x - y)
                for x, y in zip(ra.bipartition_schmidt[cut], rb.bipartition_schmidt[cut])
            )
            <= tol
            for cut in ra.bipartition_schmidt
        )
        if same_spectra:
            return MATCH_SIGNATURE
    return MATCH_MISMATCH


@dataclass
class Recipe:
    """A cataloged construction before execution."""

    entry_id: str
    params: dict
    ctx: AlgebraContext
    state: GradedState
    weight: AlgebraElement
    differentials: tuple[Variable, ...]
    target: PlainState
    solver_basis: tuple[Monomial, ...]
    phase_flag: str | None = None
    mismatch_flag: str | None = None
    extra_flags: tuple[str, ...] = ()
    notes: str = ""


@dataclass
class ConstructionResult:
    """Computed state, target comparison, entanglement data and solver check."""

    entry_id: str
    params: dict
    computed: PlainState
    target: PlainState
    match: str
    report: EntanglementReport
    solver: WeightSolution
    flags: list[str] = field(default_factory=list)
    grassmann_residual: float = 0.0
    norm_ratio: float = 1.0
    notes: str = ""

    @property
    def passed(self) -> bool:
        return match_at_least(self.match, MATCH_SIGNATURE)


# -- target state helpers -----------------------------------------------------


def plain(dims: Sequence[int], terms: dict) -> PlainState:
    return PlainState.from_terms(dims, terms)


def ghz_target(nsites: int) -> PlainState:
    amp = 1.0 / math.sqrt(2.0)
    return plain((2,) * nsites, {(0,) * nsites: amp, (1,) * nsites: amp})


def w_target(nsites: int) -> PlainState:
    amp = 1.0 / math.sqrt(nsites)
    terms = {}
    for k in range(nsites):
        ket = tuple(1 if i == k else 0 for i in range(nsites))
        terms[ket] = amp
    return plain((2,) * nsites, terms)


def cluster4_target(sign: int) -> PlainState:
    return plain(
        (2, 2, 2, 2),
        {
            (0, 0, 0, 0): sign * 0.5,
            (0, 0, 1, 1): 0.5,
            (1, 1, 0, 0): 0.5,
            (1, 1, 1, 1): -sign * 0.5,
        },
    )


def diagonal_target(n: int) -> PlainState:
    amp = 1.0 / math.sqrt(n)
    return plain((n, n), {(i, i): amp for i in range(n)})


# -- recipe builders ----------------------------------------------------------


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign


def _bell_psi(sign: int = 1) -> Recipe:
    sign = _check_sign(sign)
    ctx = AlgebraContext(2)
    v = ctx.theta(1)
    plus = tensor([coherent_state(ctx, v, 2, 1), coherent_state(ctx, v, 2, sign)])
    minus = tensor([coherent_state(ctx, v, 2, -1), coherent_state(ctx, v, 2, -sign)])
    state = plus - minus
    weight = ctx.scalar(-sign / (2.0 * math.sqrt(2.0)))
    amp = 1.0 / math.sqrt(2.0)
    target = plain((2, 2), {(0, 1): amp, (1, 0): sign * amp})
    return Recipe(
        "bell_psi_pm", {"sign": sign}, ctx, state, weight, (v,), target,
        tuple(monomial_basis(ctx, [v])), phase_flag="QUBIT_SIGNS",
        mismatch_flag="QUBIT_SIGNS",
    )


def _bell_phi(sign: int = 1) -> Recipe:
    sign = _check_sign(sign)
    ctx = AlgebraContext(2)
    t, tb = ctx.theta(1), ctx.theta_bar(1)
    state = tensor([coherent_state(ctx, tb, 2), coherent_state(ctx, t, 2)])
    # exp(sign*theta*tbar) truncates to 1 + sign*theta*tbar by nilpotency
    weight = (sign / math.sqrt(2.0)) * (ctx.one() + sign * ctx.word([t, tb]))
    amp = 1.0 / math.sqrt(2.0)
    target = plain((2, 2), {(0, 0): amp, (1, 1): sign * amp})
    return Recipe(
        "bell_phi_pm", {"sign": sign}, ctx, state, weight, (tb, t), target,
        tuple(monomial_basis(ctx, [tb, t])), phase_flag="QUBIT_SIGNS",
        mismatch_flag="QUBIT_SIGNS",
    )


def _w_n(n: int = 3) -> Recipe:
    if n < 2:
        raise ValueError("W state needs at least two sites")
    ctx = AlgebraContext(2)
    v = ctx.theta(1)
    factor = coherent_state(ctx, v, 2)
    state = tensor([factor] * n)
    weight = ctx.scalar(-1.0 / math.sqrt(n))
    return Recipe(
        "w_n", {"n": n}, ctx, state, weight, (v,), w_target(n),
        tuple(monomial_basis(ctx, [v])), phase_flag="QUBIT_SIGNS",
        mismatch_flag="QUBIT_SIGNS",
    )


def _ghz_n(n: int = 3) -> Recipe:
    if n < 2:
        raise ValueError("GHZ state needs at least two sites")
    ctx = AlgebraContext(2)
    vs = [ctx.theta(i) for i in range(1, n + 1)]
    factors = [coherent_state(ctx, vs[k], 2) for k in range(n - 1, -1, -1)]
    state = tensor(factors)
    weight = (1.0 / math.sqrt(2.0)) * (
        ctx.scalar((-1.0) ** (n // 2)) + ctx.word(list(reversed(vs)))
    )
    return Recipe(
        "ghz_n", {"n": n}, ctx, state, weight, tuple(vs), ghz_target(n),
        tuple(monomial_basis(ctx, vs)), phase_flag="QUBIT_SIGNS",
        mismatch_flag="QUBIT_SIGNS",
    )


def _cluster4(sign: int = 1) -> Recipe:
    sign = _check_sign(sign)
    ctx = AlgebraContext(2)
    t1, t2, t3, t4 = (ctx.theta(i) for i in range(1, 5))
    state = tensor([coherent_state(ctx, v, 2) for v in (t1, t2, t3, t4)])
    weight = 0.5 * (
        sign * ctx.word([t4, t3, t2, t1])
        + ctx.word([t2, t1])
        + ctx.word([t4, t3])
        - sign * ctx.one()
    )
    return Recipe(
        "cluster4_pm", {"sign": sign}, ctx, state, weight,
        (t1, t2, t3, t4), cluster4_target(sign),
        tuple(monomial_basis(ctx, [t1, t2, t3, t4])),
        phase_flag="QUBIT_SIGNS", mismatch_flag="QUBIT_SIGNS",
    )


def _qutrit_pair(ctx: AlgebraContext) -> tuple[GradedState, Variable, Variable]:
    t1, t2 = ctx.theta(1), ctx.theta(2)
    state = tensor([coherent_state(ctx, t1, 3), coherent_state(ctx, t2, 3)])
    return state, t1, t2


def _qutrit_psi(sign: int = 1) -> Recipe:
    sign = _check_sign(sign)
    ctx = AlgebraContext(3)
    state, t1, t2 = _qutrit_pair(ctx)
    q = ctx.q
    weight = (1.0 / math.sqrt(3.0)) * (
        ctx.word([(t2, 2), (t1, 2)]) + sign * q**2 * ctx.word([t1, t2]) + 2 * q
    )
    amp = 1.0 / math.sqrt(3.0)
    target = plain((3, 3), {(0, 0): amp, (1, 1): sign * amp, (2, 2): amp})
    return Recipe(
        "qutrit_psi_pm", {"sign": sign}, ctx, state, weight, (t1, t2), target,
        tuple(monomial_basis(ctx, [t1, t2])), phase_flag="PHASE_CONVENTION",
    )


def _qutrit_phi(sign: int = 1) -> Recipe:
    sign = _check_sign(sign)
    ctx = AlgebraContext(3)
    state, t1, t2 = _qutrit_pair(ctx)
    q = ctx.q
    rt2 = math.sqrt(2.0)
    weight = (1.0 / math.sqrt(3.0)) * (
        rt2 * ctx.gen(t1, 2) + sign * q**2 * ctx.word([t1, t2]) + rt2 * ctx.gen(t2, 2)
    )
    amp = 1.0 / math.sqrt(3.0)
    target = plain((3, 3), {(0, 2): amp, (1, 1): sign * amp, (2, 0): amp})
    return Recipe(
        "qutrit_phi_pm", {"sign": sign}, ctx, state, weight, (t1, t2), target,
        tuple(monomial_basis(ctx, [t1, t2])), phase_flag="PHASE_CONVENTION",
    )


def _qutrit_sub_00_22(sign: int = 1) -> Recipe:
    sign = _check_sign(sign)
    ctx = AlgebraContext(3)
    state, t1, t2 = _qutrit_pair(ctx)
    weight = (1.0 / math.sqrt(2.0)) * (
        ctx.word([(t2, 2), (t1, 2)]) + sign * 2 * ctx.q
    )
    amp = 1.0 / math.sqrt(2.0)
    target = plain((3, 3), {(0, 0): amp, (2, 2): sign * amp})
    return Recipe(
        "qutrit_sub_00_22", {"sign": sign}, ctx, state, weight, (t1, t2), target,
        tuple(monomial_basis(ctx, [t1, t2])), phase_flag="PHASE_CONVENTION",
    )


def _qutrit_sub_00_11(sign: int = 1) -> Recipe:
    sign = _check_sign(sign)
    ctx = AlgebraContext(3)
    state, t1, t2 = _qutrit_pair(ctx)
    weight = (1.0 / math.sqrt(2.0)) * (
        ctx.word([(t2, 2), (t1, 2)]) + sign * ctx.q**2 * ctx.word([t1, t2])
    )
    amp = 1.0 / math.sqrt(2.0)
    target = plain((3, 3), {(0, 0): amp, (1, 1): sign * amp})
    return Recipe(
        "qutrit_sub_00_11", {"sign": sign}, ctx, state, weight, (t1, t2), target,
        tuple(monomial_basis(ctx, [t1, t2])), phase_flag="PHASE_CONVENTION",
    )


def _qutrit_biseparable(sign: int = 1) -> Recipe:
    sign = _check_sign(sign)
    ctx = AlgebraContext(3)
    t1, t2, t3 = (ctx.theta(i) for i in range(1, 4))
    state = tensor([coherent_state(ctx, v, 3) for v in (t1, t2, t3)])
    weight = (1.0 / math.sqrt(3.0)) * (
        ctx.word([(t3, 2), (t2, 2), (t1, 2)])
        + sign * ctx.qp(-1) * ctx.word([(t1, 2), (t2, 1), (t3, 1)])
    )
    amp = 1.0 / math.sqrt(2.0)
    target = plain((3, 3, 3), {(0, 0, 0): amp, (0, 1, 1): sign * amp})
    return Recipe(
        "qutrit_biseparable", {"sign": sign}, ctx, state, weight,
        (t1, t2, t3), target, tuple(monomial_basis(ctx, [t1, t2, t3])),
        phase_flag="PHASE_CONVENTION",
    )


def _qutrit_psi22(omega_power: int = 1) -> Recipe:
    ctx = AlgebraContext(3)
    state, t1, t2 = _qutrit_pair(ctx)
    q = ctx.q
    omega = ctx.qp(omega_power)  # any cube root of unity
    rt2 = math.sqrt(2.0)
    weight = (1.0 / math.sqrt(3.0)) * (
        q**2 * ctx.word([(t1, 2), (t2, 1)])
        + rt2 * omega * ctx.gen(t1)
        + rt2 * omega**2 * ctx.gen(t2, 2)
    )
    amp = 1.0 / math.sqrt(3.0)
    target = plain(
        (3, 3), {(0, 1): amp, (1, 2): omega * amp, (2, 0): omega**2 * amp}
    )
    return Recipe(
        "qutrit_psi22", {"omega_power": omega_power}, ctx, state, weight,
        (t1, t2), target, tuple(monomial_basis(ctx, [t1, t2])),
        phase_flag="PHASE_CONVENTION",
    )


def _qutrit_squeezed_00_22() -> Recipe:
    ctx = AlgebraContext(3)
    xi, xib = ctx.theta(1), ctx.theta_bar(1)
    factor = squeezed_state_symmetric(ctx, xi)
    state = tensor([factor, factor])
    qb = ctx.qp(-1)
    weight = (1.0 / math.sqrt(2.0)) * (
        2 * qb * ctx.gen(xib, 2)
        - 16 * qb * ctx.one()
        - 2 * qb * ctx.word([xi, xib])
        + ctx.word([(xib, 2), (xi, 2)])
    )
    amp = 1.0 / math.sqrt(2.0)
    target = plain((3, 3), {(0, 0): amp, (2, 2): amp})
    return Recipe(
        "qutrit_squeezed_00_22", {}, ctx, state, weight, (xib, xi), target,
        tuple(monomial_basis(ctx, [xib, xi])), phase_flag="PHASE_CONVENTION",
    )


def _qutrit_mixed_02_20() -> Recipe:
    ctx = AlgebraContext(3)
    t = ctx.theta(1)
    state = tensor([squeezed_state_symmetric(ctx, t), coherent_state(ctx, t, 3)])
    weight = ctx.q + ctx.gen(t)
    amp = 1.0 / math.sqrt(2.0)
    target = plain((3, 3), {(0, 2): amp, (2, 0): amp})
    return Recipe(
        "qutrit_mixed_02_20", {}, ctx, state, weight, (t,), target,
        tuple(monomial_basis(ctx, [t])), phase_flag="PHASE_CONVENTION",
        mismatch_flag="MIXED_RECIPE",
    )


def _qutrit_squeezed_exp() -> Recipe:
    ctx = AlgebraContext(3)
    xi = ctx.theta(1)
    factor = squeezed_state_exp(ctx, xi, 3)
    state = tensor([factor, factor])
    weight = (1.0 / math.sqrt(2.0)) * (ctx.one() + ctx.gen(xi, 2))
    amp = 1.0 / math.sqrt(2.0)
    target = plain((3, 3), {(0, 0): amp, (2, 2): amp})
    return Recipe(
        "qutrit_squeezed_exp", {}, ctx, state, weight, (xi,), target,
        tuple(monomial_basis(ctx, [xi])), phase_flag="PHASE_CONVENTION",
    )


def _qudit_mes(n: int = 3) -> Recipe:
    """Diagonal maximally entangled qudit pair from two coherent factors.

    The weight term with monomial theta1^(n-1-k) theta2^(n-1-k) pairs with
    the diagonal amplitude on |kk>, so its coefficient carries 1/c_kk and
    the phase conj(q)**((n-1-k)(n-1) + k^2).  A variant with c and the
    phase indexed by n-1-k instead of k does not produce uniform
    magnitudes; see the QUDIT_WEIGHT_INDEXING note.
    """
    if n < 2:
        raise ValueError("qudit MES needs n >= 2")
    ctx = AlgebraContext(n)
    t1, t2 = ctx.theta(1), ctx.theta(2)
    state = tensor([coherent_state(ctx, t1, n), coherent_state(ctx, t2, n)])
    weight = ctx.zero()
    for k in range(n):
        j = n - 1 - k
        # c_kk = q**(-2k^2)/k!  =>  1/c_kk = k! * q**(2k^2)
        qexp = 2 * k * k - (j * (n - 1) + k * k)
        coeff = (1.0 / math.sqrt(n)) * math.factorial(k) * ctx.qp(qexp)
        weight = weight + coeff * ctx.word([(t1, j), (t2, j)])
    return Recipe(
        "qudit_mes_n", {"n": n}, ctx, state, weight, (t1, t2),
        diagonal_target(n), tuple(monomial_basis(ctx, [t1, t2])),
        phase_flag="PHASE_CONVENTION", extra_flags=("QUDIT_WEIGHT_INDEXING",),
    )


def _qudit_squeezed_mes(n: int = 3) -> Recipe:
    """One-variable squeezed-pair synthesis of the even diagonal MES.

    Weight powers n-2i-1 go negative for 2i+1 > n; those monomials are
    dropped and reported.  Target kets |2k> with 2k > n-1 do not exist in
    the level space, so the reachable even diagonal is used as target.
    """
    if n < 2:
        raise ValueError("squeezed qudit MES needs n >= 2")
    ctx = AlgebraContext(n)
    xi = ctx.theta(1)
    factor = squeezed_state_exp(ctx, xi, n)
    state = tensor([factor, factor])
    weight = ctx.zero()
    infeasible = []
    for i in range(n):
        power = n - 2 * i - 1
        if power < 0:
            infeasible.append(i)
            continue
        # d_ii = conj(q)**(2i(i-1) + (2i-1)i) / (i!)^2
        dexp = 2 * i * (i - 1) + (2 * i - 1) * i
        coeff = (1.0 / math.sqrt(n)) * (math.factorial(i) ** 2) * ctx.qp(dexp)
        weight = weight + coeff * ctx.word([(xi, power)])
    reachable = [k for k in range(n) if 2 * k <= n - 1]
    amp = 1.0 / math.sqrt(n)
    target = plain((n, n), {(2 * k, 2 * k): amp for k in reachable})
    notes = ""
    if infeasible:
        notes = (
            f"weight powers n-2i-1 are negative for i in {infeasible}; "
            f"diagonal kets beyond |{n - 1}> are outside the level space"
        )
    return Recipe(
        "qudit_squeezed_mes_n", {"n": n}, ctx, state, weight, (xi,), target,
        tuple(monomial_basis(ctx, [xi])), phase_flag="PHASE_CONVENTION",
        mismatch_flag="SQUEEZED_QUDIT_WEIGHT",
        extra_flags=("SQUEEZED_QUDIT_WEIGHT",), notes=notes,
    )


_BUILDERS: dict[str, Callable[..., Recipe]] = {
    "bell_psi_pm": _bell_psi,
    "bell_phi_pm": _bell_phi,
    "w_n": _w_n,
    "ghz_n": _ghz_n,
    "cluster4_pm": _cluster4,
    "qutrit_psi_pm": _qutrit_psi,
    "qutrit_phi_pm": _qutrit_phi,
    "qutrit_sub_00_22": _qutrit_sub_00_22,
    "qutrit_sub_00_11": _qutrit_sub_00_11,
    "qutrit_biseparable": _qutrit_biseparable,
    "qutrit_psi22": _qutrit_psi22,
    "qutrit_squeezed_00_22": _qutrit_squeezed_00_22,
    "qutrit_mixed_02_20": _qutrit_mixed_02_20,
    "qutrit_squeezed_exp": _qutrit_squeezed_exp,
    "qudit_mes_n": _qudit_mes,
    "qudit_squeezed_mes_n": _qudit_squeezed_mes,
}


def catalog_ids() -> list[str]:
    return sorted(_BUILDERS)


def build_recipe(entry_id: str, **params) -> Recipe:
    try:
        builder = _BUILDERS[entry_id]
    except KeyError:
        raise KeyError(f"unknown catalog id {entry_id!r}; see catalog_ids()") from None
    return builder(**params)


def catalog_construct(
    entry_id: str, tol: float = DEFAULT_TOL, solver_check: bool = True, **params
) -> ConstructionResult:
    """Run a cataloged recipe and verify it against its target."""
    recipe = build_recipe(entry_id, **params)
    graded = integrate_graded(
        IntegralSpec(recipe.weight, recipe.differentials), recipe.state
    )
    residual = graded.grassmann_part_norm()
    computed = graded.plain_projection()

    flags = list(recipe.extra_flags)
    if residual > tol:
        flags.append("GRASSMANN_RESIDUE")

    match = compare_states(computed, recipe.target, tol=tol)
    if match in (MATCH_GLOBAL_PHASE, MATCH_SIGNATURE) and recipe.phase_flag:
        flags.append(recipe.phase_flag)
    if match == MATCH_MISMATCH and recipe.mismatch_flag:
        flags.append(recipe.mismatch_flag)

    norm_ratio = computed.norm() / recipe.target.norm()
    if abs(norm_ratio - 1.0) > tol:
        flags.append("PREFACTOR_NORM")

    report = entanglement_report(computed.normalized(), tol=tol)

    solver = None
    if solver_check:
        solver = solve_weight(
            recipe.state,
            recipe.differentials,
            recipe.target.normalized(),
            recipe.solver_basis,
            tol=tol,
        )

    seen: list[str] = []
    for f in flags:
        if f not in seen:
            seen.append(f)

    return ConstructionResult(
        entry_id=entry_id,
        params=recipe.params,
        computed=computed,
        target=recipe.target,
        match=match,
        report=report,
        solver=solver,
        flags=seen,
        grassmann_residual=residual,
        norm_ratio=float(norm_ratio),
        notes=recipe.notes,
    )
