"""Catalog construction and comparison-policy tests."""

import math

import numpy as np
import pytest

from qgrass.catalog import (
    MATCH_EXACT,
    MATCH_GLOBAL_PHASE,
    MATCH_MISMATCH,
    MATCH_SIGNATURE,
    catalog_construct,
    catalog_ids,
    compare_states,
    match_at_least,
)
from qgrass.entangle import bipartition_spectrum, reduced_density, schmidt_rank
from qgrass.qstate import PlainState

AMP2 = 1.0 / math.sqrt(2.0)


def plain(dims, terms):
    return PlainState.from_terms(dims, terms)


# -- comparison policy ---------------------------------------------------------


def test_compare_exact():
    a = plain((2, 2), {(0, 0): AMP2, (1, 1): AMP2})
    assert compare_states(a, a) == MATCH_EXACT


def test_compare_global_phase():
    a = plain((2, 2), {(0, 0): AMP2, (1, 1): AMP2})
    b = plain((2, 2), {(0, 0): 1j * AMP2, (1, 1): 1j * AMP2})
    assert compare_states(b, a) == MATCH_GLOBAL_PHASE


def test_compare_signature():
    a = plain((2, 2), {(0, 0): AMP2, (1, 1): AMP2})
    b = plain((2, 2), {(0, 0): AMP2, (1, 1): -AMP2})
    assert compare_states(b, a) == MATCH_SIGNATURE


def test_compare_mismatch():
    a = plain((2, 2), {(0, 0): AMP2, (1, 1): AMP2})
    b = plain((2, 2), {(0, 1): AMP2, (1, 0): AMP2})
    assert compare_states(b, a) == MATCH_MISMATCH


def test_signature_requires_equal_spectra_not_just_magnitudes():
    # equal per-term magnitudes but different Schmidt spectra must not pass
    a = plain((2, 2), {(0, 0): 0.5, (0, 1): 0.5, (1, 0): 0.5, (1, 1): 0.5})
    b = plain((2, 2), {(0, 0): 0.5, (0, 1): 0.5, (1, 0): 0.5, (1, 1): -0.5})
    assert compare_states(a, b) == MATCH_MISMATCH


def test_match_ordering():
    assert match_at_least(MATCH_EXACT, MATCH_SIGNATURE)
    assert not match_at_least(MATCH_MISMATCH, MATCH_SIGNATURE)


# -- individual entries -----------------------------------------------------------


def test_catalog_lists_all_entries():
    ids = catalog_ids()
    assert len(ids) == 16
    assert "ghz_n" in ids and "qudit_mes_n" in ids


def test_unknown_entry_raises():
    with pytest.raises(KeyError):
        catalog_construct("nosuch")


def test_bell_psi_signature_and_purity():
    for sign in (1, -1):
        result = catalog_construct("bell_psi_pm", sign=sign)
        assert match_at_least(result.match, MATCH_SIGNATURE)
        assert abs(result.report.purity) < 1e-9
        assert result.report.max_entangled


def test_bell_phi_signature():
    for sign in (1, -1):
        result = catalog_construct("bell_phi_pm", sign=sign)
        assert match_at_least(result.match, MATCH_SIGNATURE)
        assert result.report.max_entangled


def test_w_entry_purity_values():
    for n in range(2, 7):
        result = catalog_construct("w_n", n=n)
        assert match_at_least(result.match, MATCH_SIGNATURE)
        assert abs(result.report.purity - ((n - 2) / n) ** 2) < 1e-9


def test_w2_magnitudes():
    result = catalog_construct("w_n", n=2)
    for ket in ((0, 1), (1, 0)):
        assert abs(abs(result.computed.coefficient(ket)) - AMP2) < 1e-9


def test_ghz_entries():
    for n in range(2, 7):
        result = catalog_construct("ghz_n", n=n)
        assert match_at_least(result.match, MATCH_SIGNATURE)
        assert abs(result.report.purity) < 1e-9
        assert result.report.max_entangled
    assert catalog_construct("ghz_n", n=3).match == MATCH_EXACT


def test_cluster_rdms_are_maximally_mixed():
    for sign in (1, -1):
        result = catalog_construct("cluster4_pm", sign=sign)
        assert match_at_least(result.match, MATCH_SIGNATURE)
        for site in range(4):
            rho = reduced_density(result.computed, [site])
            assert np.allclose(rho.entries, np.eye(2) / 2, atol=1e-9)


def test_qutrit_bell_entries_exact():
    for entry in ("qutrit_psi_pm", "qutrit_phi_pm"):
        for sign in (1, -1):
            result = catalog_construct(entry, sign=sign)
            assert result.match == MATCH_EXACT
            assert result.report.max_entangled


def test_qutrit_subspace_entries_exact():
    for entry in ("qutrit_sub_00_22", "qutrit_sub_00_11"):
        for sign in (1, -1):
            assert catalog_construct(entry, sign=sign).match == MATCH_EXACT


def test_qutrit_psi22_exact_for_all_roots():
    for k in (0, 1, 2):
        result = catalog_construct("qutrit_psi22", omega_power=k)
        assert result.match == MATCH_EXACT
        assert result.report.max_entangled


def test_biseparable_structure():
    for sign in (1, -1):
        result = catalog_construct("qutrit_biseparable", sign=sign)
        assert match_at_least(result.match, MATCH_SIGNATURE)
        assert schmidt_rank(bipartition_spectrum(result.computed, [0]), tol=1e-6) == 1
        for cut in ([1], [2]):
            spec = bipartition_spectrum(result.computed, cut)
            assert abs(spec[0] - spec[1]) < 1e-9
        # cataloged prefactor leaves the state unnormalized
        assert "PREFACTOR_NORM" in result.flags
        assert abs(result.norm_ratio - math.sqrt(2.0 / 3.0)) < 1e-9


def test_squeezed_pair_entry():
    result = catalog_construct("qutrit_squeezed_00_22")
    assert match_at_least(result.match, MATCH_SIGNATURE)
    assert abs(abs(result.computed.coefficient((0, 0))) - AMP2) < 1e-9
    assert abs(abs(result.computed.coefficient((2, 2))) - AMP2) < 1e-9
    assert result.grassmann_residual < 1e-12


def test_squeezed_exp_entry():
    result = catalog_construct("qutrit_squeezed_exp")
    assert match_at_least(result.match, MATCH_SIGNATURE)
    assert result.solver.feasible


def test_mixed_entry_mismatch_is_reported_not_hidden():
    result = catalog_construct("qutrit_mixed_02_20")
    assert result.match == MATCH_MISMATCH
    assert "MIXED_RECIPE" in result.flags
    assert "GRASSMANN_RESIDUE" in result.flags
    assert result.grassmann_residual > 1e-3
    assert not result.solver.feasible


def test_qudit_mes_exact_and_solver_diagonal():
    for n in range(2, 6):
        result = catalog_construct("qudit_mes_n", n=n)
        assert result.match == MATCH_EXACT
        assert result.report.max_entangled
        assert result.solver.feasible
        t1 = result.solver.weight.ctx.theta(1)
        t2 = result.solver.weight.ctx.theta(2)
        for mono, coeff in result.solver.weight.terms.items():
            assert mono.exponent(t1) == mono.exponent(t2) or abs(coeff) < 1e-9


def test_qudit_mes_n2_reduces_to_bell():
    result = catalog_construct("qudit_mes_n", n=2)
    target = result.target
    assert abs(target.coefficient((0, 0)) - AMP2) < 1e-12
    assert abs(target.coefficient((1, 1)) - AMP2) < 1e-12


def test_squeezed_qudit_entries():
    r3 = catalog_construct("qudit_squeezed_mes_n", n=3)
    assert match_at_least(r3.match, MATCH_SIGNATURE)
    assert abs(abs(r3.computed.normalized().coefficient((0, 0))) - AMP2) < 1e-9
    assert abs(abs(r3.computed.normalized().coefficient((2, 2))) - AMP2) < 1e-9
    assert "SQUEEZED_QUDIT_WEIGHT" in r3.flags
    assert r3.notes  # negative powers reported

    r5 = catalog_construct("qudit_squeezed_mes_n", n=5)
    assert r5.match == MATCH_MISMATCH
    assert not r5.solver.feasible
    # the stray off-diagonal kets produced by the one-variable weight
    assert abs(r5.computed.coefficient((0, 4))) > 1e-3
    assert abs(r5.computed.coefficient((4, 0))) > 1e-3


def test_every_mes_target_entry_is_maximally_entangled():
    runs = [
        ("bell_psi_pm", {"sign": 1}), ("bell_phi_pm", {"sign": -1}),
        ("ghz_n", {"n": 5}), ("cluster4_pm", {"sign": 1}),
        ("qutrit_psi_pm", {"sign": -1}), ("qutrit_phi_pm", {"sign": 1}),
        ("qutrit_psi22", {}), ("qudit_mes_n", {"n": 4}),
    ]
    for entry_id, params in runs:
        result = catalog_construct(entry_id, **params)
        assert result.report.max_entangled, entry_id
