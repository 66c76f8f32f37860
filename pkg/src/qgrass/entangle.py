"""Weight-integral pipeline, entanglement measures and the weight solver.

The central operation multiplies a Grassmann weight function onto a
product of graded states from the left and Berezin-integrates the listed
variables (rightmost differential first).  A successful construction is
Grassmann-free afterwards; leftover monomials signal an incomplete
differential list.

Measures operate on plain states: reduced density matrices, the two
purity conventions (qubit average and the d-level linear-entropy
normalization), bipartition Schmidt spectra, and the maximal-entanglement
test (every single-site reduction maximally mixed).

solve_weight inverts the pipeline: it assembles the linear map from
weight coefficients on a monomial basis to integrated amplitudes and
returns the minimum-norm least-squares weight, re-verified through the
actual integration pipeline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import AlgebraElement, Monomial, MONOMIAL_ONE, Variable
from .qstate import BasisKet, GradedState, PlainState

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class IntegralSpec:
    """A weight function together with the ordered differential list."""

    weight: AlgebraElement
    differentials: tuple[Variable, ...]

    def __post_init__(self) -> None:
        if len(set(self.differentials)) != len(self.differentials):
            raise ValueError("differentials must be distinct")


def integrate_graded(spec: IntegralSpec, state: GradedState) -> GradedState:
    """weight * state, integrated right-to-left; may retain Grassmann terms."""
    return state.left_multiply(spec.weight).multi_integrate(spec.differentials)


def apply_weight_and_integrate(
    spec: IntegralSpec, state: GradedState, tol: float = DEFAULT_TOL
) -> PlainState:
    """Integrate and require a Grassmann-free result.

    Raises GrassmannResidueError when monomial content of norm > tol
    survives all integrals.
    """
    return integrate_graded(spec, state).to_plain(tol=tol)


# -- density matrices and measures -------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    dim: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise ValueError("density matrix shape mismatch")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > 1e-10:
            raise ValueError("density matrix trace differs from 1")
        if np.min(np.linalg.eigvalsh(m)) < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")

    def spectrum(self) -> np.ndarray:
        return np.sort(np.linalg.eigvalsh(self.entries))[::-1]

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


def reduced_density(state: PlainState, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace onto the listed sites (0-based), input normalized first."""
    keep = sorted(set(int(k) for k in keep))
    nsites = state.nsites
    if any(k < 0 or k >= nsites for k in keep):
        raise ValueError(f"keep sites {keep} out of range for {nsites} sites")
    psi = state.normalized().amps.reshape(state.dims)
    traced = [ax for ax in range(nsites) if ax not in keep]
    rho = np.tensordot(psi, psi.conj(), axes=(traced, traced))
    dim = 1
    for k in keep:
        dim *= state.dims[k]
    return DensityMatrix(dim, rho.reshape(dim, dim))


def purity_viola(state: PlainState) -> float:
    """(2/n) sum_i tr rho_i^2 - 1 over qubit sites; 0 on maximally entangled."""
    if any(d != 2 for d in state.dims):
        raise ValueError("qubit purity needs two-level sites; use purity_linear")
    n = state.nsites
    total = sum(reduced_density(state, [i]).purity() for i in range(n))
    return (2.0 / n) * total - 1.0


def purity_linear(state: PlainState) -> float:
    """Average of (d_i tr rho_i^2 - 1)/(d_i - 1); matches the qubit formula at d=2."""
    vals = []
    for i, d in enumerate(state.dims):
        p = reduced_density(state, [i]).purity()
        vals.append((d * p - 1.0) / (d - 1.0))
    return float(np.mean(vals))


def bipartition_spectrum(state: PlainState, cut: Iterable[int]) -> np.ndarray:
    """Normalized Schmidt coefficients across the cut (descending)."""
    cut = sorted(set(int(k) for k in cut))
    nsites = state.nsites
    if not cut or len(cut) >= nsites:
        raise ValueError("cut must be a nonempty proper subset of sites")
    rest = [ax for ax in range(nsites) if ax not in cut]
    psi = state.normalized().amps.reshape(state.dims)
    da = int(np.prod([state.dims[k] for k in cut]))
    matrix = np.transpose(psi, cut + rest).reshape(da, -1)
    s = np.linalg.svd(matrix, compute_uv=False)
    nrm = np.linalg.norm(s)
    return s / nrm


def schmidt_rank(spectrum: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    return int(np.sum(np.asarray(spectrum) > tol))


@dataclass
class EntanglementReport:
    """Per-site spectra, bipartition Schmidt data and the aggregate purity."""

    purity: float
    purity_kind: str
    rdm_spectra: list[list[float]]
    bipartition_schmidt: dict[tuple[int, ...], list[float]]
    max_entangled: bool


def _all_cuts(nsites: int) -> list[tuple[int, ...]]:
    cuts = []
    for r in range(1, nsites):
        cuts.extend(itertools.combinations(range(nsites), r))
    return cuts


def entanglement_report(state: PlainState, tol: float = DEFAULT_TOL) -> EntanglementReport:
    spectra = [
        [float(x) for x in reduced_density(state, [i]).spectrum()]
        for i in range(state.nsites)
    ]
    max_ent = all(
        all(abs(lam - 1.0 / d) <= tol for lam in spec)
        for spec, d in zip(spectra, state.dims)
    )
    if all(d == 2 for d in state.dims):
        purity, kind = purity_viola(state), "qubit-average"
    else:
        purity, kind = purity_linear(state), "linear-entropy"
    schmidt = {
        cut: [float(x) for x in bipartition_spectrum(state, cut)]
        for cut in _all_cuts(state.nsites)
    }
    return EntanglementReport(purity, kind, spectra, schmidt, max_ent)


def is_maximally_entangled(
    state: PlainState, tol: float = DEFAULT_TOL
) -> tuple[bool, EntanglementReport]:
    """True iff every single-site reduced density matrix is maximally mixed."""
    report = entanglement_report(state, tol=tol)
    return report.max_entangled, report


# -- weight solver ------------------------------------------------------------


@dataclass
class WeightSolution:
    """Minimum-norm least-squares weight for an integral synthesis problem."""

    weight: AlgebraElement
    residual: float
    feasible: bool
    basis: tuple[Monomial, ...]
    rank: int
    coefficients: np.ndarray = field(repr=False, default=None)


def monomial_basis(
    ctx, variables: Sequence[Variable], max_exponent: int | None = None
) -> list[Monomial]:
    """All products of powers of the given variables, each exponent < n."""
    top = ctx.n - 1 if max_exponent is None else max_exponent
    variables = sorted(set(variables), key=lambda v: v.sort_key)
    basis = []
    for exps in itertools.product(range(top + 1), repeat=len(variables)):
        pairs = tuple((v, e) for v, e in zip(variables, exps) if e)
        basis.append(Monomial(pairs))
    return basis


def solve_weight(
    state: GradedState,
    differentials: Sequence[Variable],
    target: PlainState,
    basis: Sequence[Monomial],
    tol: float = DEFAULT_TOL,
) -> WeightSolution:
    """Solve min || integrate(w * state) - target || over weights on the basis.

    Rows cover every term the candidate weights can produce, including
    residual Grassmann terms (targeted to zero), so feasibility demands a
    clean Grassmann-free match.  The reported residual is recomputed by
    running the assembled weight back through the integration pipeline.
    """
    if not basis:
        raise ValueError("empty weight basis")
    ctx = state.ctx
    if target.dims != state.space.dims:
        raise ValueError("target dimensions do not match the state")
    differentials = tuple(differentials)

    columns = []
    row_keys: dict[tuple[Monomial, BasisKet], int] = {}
    for mono in basis:
        w = AlgebraElement(ctx, {mono: 1.0})
        result = integrate_graded(IntegralSpec(w, differentials), state)
        columns.append(result.terms)
        for key in result.terms:
            row_keys.setdefault(key, len(row_keys))
    for ket in target.terms(tol=0.0):
        row_keys.setdefault((MONOMIAL_ONE, ket), len(row_keys))

    mat = np.zeros((len(row_keys), len(basis)), dtype=complex)
    for j, col in enumerate(columns):
        for key, c in col.items():
            mat[row_keys[key], j] = c
    rhs = np.zeros(len(row_keys), dtype=complex)
    for key, idx in row_keys.items():
        mono, ket = key
        if mono == MONOMIAL_ONE:
            rhs[idx] = target.coefficient(ket)

    x, _, rank, _ = np.linalg.lstsq(mat, rhs, rcond=None)
    weight = AlgebraElement(ctx, {m: c for m, c in zip(basis, x)})

    # independent residual through the real pipeline
    result = integrate_graded(IntegralSpec(weight, differentials), state)
    keys = set(result.terms) | {(MONOMIAL_ONE, k) for k in target.terms(tol=0.0)}
    sq = 0.0
    for key in keys:
        mono, ket = key
        want = target.coefficient(ket) if mono == MONOMIAL_ONE else 0.0
        sq += abs(result.terms.get(key, 0.0) - want) ** 2
    residual = math.sqrt(sq)

    return WeightSolution(
        weight=weight,
        residual=residual,
        feasible=residual < tol,
        basis=tuple(basis),
        rank=int(rank),
        coefficients=x,
    )
