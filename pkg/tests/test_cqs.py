import math

import numpy as np
import pytest

from conftest import random_density, random_unitary
from qswitch import linalg
from qswitch.channels import (DensityMatrix, KrausChannel, apply_channel,
                              basis_state, channel_from_noise, compose,
                              depolarizing, amplitude_damping, make_channel,
                              phase_damping, plus_state, unitary_family)
from qswitch.cqs import (STATIC, TIME_SPLIT, SwitchConfig, apply_cqs,
                         apply_cqs_channels, build_switch_kraus,
                         commutativity_defect, default_certificate_grid,
                         midpoint_triple, pad_kraus, sigma_interval_map,
                         sigma_two_stage)
from qswitch.linalg import ID2, PAULI_Y, PAULI_Z


def rotation_y(theta):
    return math.cos(theta) * ID2 - 1j * math.sin(theta) * PAULI_Y


def test_switch_kraus_static_with_gate():
    pdc = channel_from_noise(phase_damping(1.0), 0.5)
    gate = KrausChannel((rotation_y(0.3),))
    ws = build_switch_kraus(pdc, pdc, gate, gate)
    u = gate.kraus[0]
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    for k, w in zip(pdc.kraus, ws):
        assert np.max(np.abs(w - (np.kron(k @ u, p0) + np.kron(u @ k, p1)))) < 1e-12


def test_switch_kraus_identity_inputs():
    ident = KrausChannel((ID2,))
    ws = build_switch_kraus(ident, ident, ident, ident)
    assert len(ws) == 1
    assert np.allclose(ws[0], np.eye(4))


def test_switch_kraus_trace_preserving(rng):
    combos = [(depolarizing(1.0), amplitude_damping(0.5)),
              (phase_damping(0.3), depolarizing(2.0))]
    for fam1, fam2 in combos:
        for independent in (False, True):
            ws = build_switch_kraus(make_channel(fam1, 0.5, 1.2),
                                    make_channel(fam1, 0.0, 0.5),
                                    make_channel(fam2, 0.5, 1.2),
                                    make_channel(fam2, 0.0, 0.5),
                                    independent_indices=independent)
            total = sum(w.conj().T @ w for w in ws)
            assert np.max(np.abs(total - np.eye(4))) < 1e-10


def test_switch_kraus_rejects_slot_count_mismatch():
    pdc = make_channel(phase_damping(1.0), 0.0, 0.5)
    gate = KrausChannel((ID2,))
    with pytest.raises(ValueError, match="mismatched Kraus counts"):
        build_switch_kraus(pdc, gate, gate, gate)
    padded = pad_kraus(gate, 2)
    ws = build_switch_kraus(pdc, padded, gate, gate)
    assert len(ws) == 2


def test_dephasing_pair_has_equal_control_blocks():
    # every switch operator is block proportional when the slots commute
    ch1 = make_channel(phase_damping(1.0), 0.0, 0.5)
    ch2 = make_channel(phase_damping(5.0), 0.0, 0.5)
    for w in build_switch_kraus(ch1, ch1, ch2, ch2):
        blocks = w.reshape(2, 2, 2, 2)
        assert np.max(np.abs(blocks[:, 0, :, 0] - blocks[:, 1, :, 1])) < 1e-12


def test_apply_cqs_with_identity_second_channel(rng):
    fam1 = amplitude_damping(1.0)
    cfg = SwitchConfig(STATIC, t1=0.0, t2=0.8)
    direct = make_channel(fam1, 0.0, 0.8)
    for _ in range(5):
        rho = random_density(rng)
        out = apply_cqs(cfg, fam1, unitary_family(ID2), rho)
        assert abs(out.prob - 1.0) < 1e-12
        assert np.max(np.abs(out.state.mat - apply_channel(direct, rho).mat)) < 1e-12


def test_apply_cqs_dephasing_pair_at_midpoint(rng):
    # commuting slots: switch output is the plain composition, branch sure
    fam1, fam2 = phase_damping(1.0), phase_damping(5.0)
    cfg = SwitchConfig(TIME_SPLIT, t1=0.0, t2=1.4, split=0.7)
    late = make_channel(fam1, 0.7, 1.4)
    early = make_channel(fam2, 0.0, 0.7)
    for _ in range(5):
        rho = random_density(rng)
        out = apply_cqs(cfg, fam1, fam2, rho)
        assert abs(out.prob - 1.0) < 1e-12
        expected = apply_channel(compose(late, early), rho)
        assert np.max(np.abs(out.state.mat - expected.mat)) < 1e-10


def test_apply_cqs_dephasing_pair_off_midpoint_probability():
    # scalar slot coefficients no longer cancel away from the midpoint;
    # the branch probability is (1 + (a a' + b b')^2) / 2 analytically
    fam = phase_damping(1.0)
    cfg = SwitchConfig(TIME_SPLIT, t1=0.0, t2=2.0, split=0.5)
    a_late, b_late = math.exp(-1.5 / 2), math.sqrt(1 - math.exp(-1.5))
    a_early, b_early = math.exp(-0.5 / 2), math.sqrt(1 - math.exp(-0.5))
    expected = 0.5 * (1.0 + (a_late * a_early + b_late * b_early) ** 2)
    out = apply_cqs(cfg, fam, fam, plus_state())
    assert abs(out.prob - expected) < 1e-12
    assert out.prob < 1.0 - 1e-3


def test_apply_cqs_matches_hand_expansion_for_dephasing_and_rotation():
    # plus branch, |+> control: unnormalized output is
    # U rho U^dag / 2 + cos(theta)^2 Z rho Z / 2 with weight (1 + cos^2) / 2
    rho = plus_state()
    for theta in (0.2, 0.9, 1.7, 2.8):
        u = rotation_y(theta)
        pdc = channel_from_noise(phase_damping(1.0), 0.5)
        gate = KrausChannel((u,))
        cfg = SwitchConfig(STATIC, t1=0.0, t2=0.0)
        out = apply_cqs_channels(cfg, pdc, pdc, gate, gate, rho)
        n_expected = 0.5 + 0.5 * math.cos(theta) ** 2
        unnormalized = (0.5 * u @ rho.mat @ u.conj().T
                        + 0.5 * math.cos(theta) ** 2 * PAULI_Z @ rho.mat @ PAULI_Z)
        assert abs(out.prob - n_expected) < 1e-12
        assert np.max(np.abs(out.state.mat - unnormalized / n_expected)) < 1e-12


def test_apply_cqs_branch_probabilities_sum_to_one(rng):
    cfg_plus = SwitchConfig(TIME_SPLIT, t1=0.0, t2=1.0, split=0.5, branch="plus")
    cfg_minus = SwitchConfig(TIME_SPLIT, t1=0.0, t2=1.0, split=0.5, branch="minus")
    fam1, fam2 = depolarizing(1.0), amplitude_damping(1.0)
    for _ in range(5):
        rho = random_density(rng)
        p = apply_cqs(cfg_plus, fam1, fam2, rho).prob
        m = apply_cqs(cfg_minus, fam1, fam2, rho).prob
        assert abs(p + m - 1.0) < 1e-12


def test_apply_cqs_rejects_impossible_postselection():
    # minus branch of two identity channels has zero weight
    ident = unitary_family(ID2)
    cfg = SwitchConfig(STATIC, t1=0.0, t2=1.0, branch="minus")
    with pytest.raises(ValueError, match="post-selection impossible"):
        apply_cqs(cfg, ident, ident, plus_state())


def test_representation_mixing_invariance(rng):
    # re-representing one channel's Kraus family (same mixer in both slots)
    # leaves the switch output untouched
    fam1, fam2 = phase_damping(1.0), depolarizing(1.0)
    cfg = SwitchConfig(TIME_SPLIT, t1=0.0, t2=1.3, split=0.4)
    ch1_late = make_channel(fam1, 0.4, 1.3)
    ch1_early = make_channel(fam1, 0.0, 0.4)
    ch2_late = make_channel(fam2, 0.4, 1.3)
    ch2_early = make_channel(fam2, 0.0, 0.4)
    from qswitch.channels import mix_kraus
    v2 = random_unitary(rng, 2)
    v4 = random_unitary(rng, 4)
    for _ in range(5):
        rho = random_density(rng)
        base = apply_cqs_channels(cfg, ch1_late, ch1_early, ch2_late, ch2_early, rho)
        mixed1 = apply_cqs_channels(cfg, mix_kraus(ch1_late, v2),
                                    mix_kraus(ch1_early, v2), ch2_late, ch2_early, rho)
        mixed2 = apply_cqs_channels(cfg, ch1_late, ch1_early,
                                    mix_kraus(ch2_late, v4),
                                    mix_kraus(ch2_early, v4), rho)
        for other in (mixed1, mixed2):
            assert np.max(np.abs(base.state.mat - other.state.mat)) < 1e-10
            assert abs(base.prob - other.prob) < 1e-12


def test_independent_index_variant_differs_for_noncommuting(rng):
    fam1, fam2 = depolarizing(1.0), amplitude_damping(1.0)
    cfg = SwitchConfig(TIME_SPLIT, t1=0.0, t2=1.0, split=0.5)
    rho = plus_state()
    shared = apply_cqs(cfg, fam1, fam2, rho)
    indep = apply_cqs(cfg, fam1, fam2, rho, independent_indices=True)
    assert np.max(np.abs(shared.state.mat - indep.state.mat)) > 1e-3


def test_sigma_interval_map_dephasing_pair_keeps_trace():
    out = sigma_interval_map(phase_damping(1.0), phase_damping(5.0),
                             0.0, 0.5, 1.0, plus_state())
    assert abs(np.trace(out).real - 1.0) < 1e-12
    DensityMatrix(out)


def test_sigma_interval_map_amplitude_pair_loses_trace():
    out = sigma_interval_map(amplitude_damping(1.0), amplitude_damping(1.0),
                             0.0, 0.5, 1.0, plus_state())
    deficit = 1.0 - np.trace(out).real
    assert deficit > 1e-3
    assert abs(deficit - 4.813024541944211e-3) < 1e-9


def test_sigma_interval_map_identity_second_channel(rng):
    # with the identity in the other slot and a midpoint split, every term
    # reduces to the same half-duration map
    fam = amplitude_damping(1.0)
    half = make_channel(fam, 0.0, 0.5)
    for _ in range(3):
        rho = random_density(rng)
        out = sigma_interval_map(fam, unitary_family(ID2), 0.0, 0.5, 1.0, rho)
        assert np.max(np.abs(out - apply_channel(half, rho).mat)) < 1e-12


def test_sigma_interval_map_matches_switch_pipeline(rng):
    # the four-term expression is the unnormalized plus branch of the switch
    fam1, fam2 = depolarizing(1.0), amplitude_damping(2.0)
    cfg = SwitchConfig(TIME_SPLIT, t1=0.2, t2=1.4, split=0.8)
    for _ in range(5):
        rho = random_density(rng)
        raw = sigma_interval_map(fam1, fam2, 0.2, 0.8, 1.4, rho)
        out = apply_cqs(cfg, fam1, fam2, rho)
        assert abs(np.trace(raw).real - out.prob) < 1e-12
        assert np.max(np.abs(raw / np.trace(raw).real - out.state.mat)) < 1e-10


def test_sigma_two_stage_rejects_bad_ordering():
    with pytest.raises(ValueError, match="s1"):
        sigma_two_stage(phase_damping(1.0), phase_damping(1.0),
                        1.0, 0.5, 0.4, 0.2, plus_state())


def test_sigma_two_stage_identity_inputs(rng):
    ident = unitary_family(ID2)
    rho = random_density(rng)
    out = sigma_two_stage(ident, ident, 1.0, 0.5, 0.75, 0.25, rho)
    assert np.max(np.abs(out - rho.mat)) < 1e-12


@pytest.mark.parametrize("family", [phase_damping, amplitude_damping])
def test_sigma_two_stage_equals_nested_composition_at_midpoints(family, rng):
    # carrying the control through both stages agrees with composing the
    # single-stage maps when the stage splits are midpoints
    fam = family(1.0)
    for _ in range(3):
        rho = random_density(rng)
        two = sigma_two_stage(fam, fam, 1.0, 0.5, 0.75, 0.25, rho)
        nested = sigma_interval_map(fam, fam, 0.5, 0.75, 1.0,
                                    sigma_interval_map(fam, fam, 0.0, 0.25, 0.5, rho))
        assert np.max(np.abs(two - nested)) < 1e-12


def test_sigma_two_stage_differs_from_single_stage():
    # refining the stage structure changes the map: the dephasing family is
    # not a semigroup, and the amplitude pair has a nonzero commutation
    # residual, so neither telescopes to the single-stage expression
    expectations = {phase_damping: 5.127581372733432e-2,
                    amplitude_damping: 3.5864011518575156e-3}
    for family, expected in expectations.items():
        fam = family(1.0)
        two = sigma_two_stage(fam, fam, 1.0, 0.5, 0.75, 0.25, plus_state())
        one = sigma_interval_map(fam, fam, 0.0, 0.5, 1.0, plus_state())
        gap = linalg.trace_norm(two - one)
        assert gap > 1e-3
        assert abs(gap - expected) < 1e-7


def test_commutativity_defect_dephasing_pairs():
    grid = default_certificate_grid()
    assert len(grid) == 27
    for gammas in ((1.0, 1.0), (1.0, 5.0), (0.2, 1.0)):
        report = commutativity_defect(phase_damping(gammas[0]),
                                      phase_damping(gammas[1]), grid)
        assert report.max_defect <= 1e-12


def test_commutativity_defect_analytic_values():
    # single midpoint triple (0, 0.5, 1), unit rate; residuals reduce to
    # commutators with analytic coefficients
    p = 1.0 - math.exp(-0.5)
    adc = commutativity_defect(amplitude_damping(1.0), amplitude_damping(1.0),
                               [(0.0, 0.5, 1.0)])
    assert abs(adc.max_defect - math.sqrt(p) * (1.0 - math.exp(-0.25))) < 1e-12
    assert adc.max_defect > 0.1
    dcpdc = commutativity_defect(depolarizing(1.0), phase_damping(1.0),
                                 [(0.0, 0.5, 1.0)])
    assert abs(dcpdc.max_defect - 2.0 * p) < 1e-12
    assert dcpdc.max_defect > 0.1
    dcdc = commutativity_defect(depolarizing(1.0), depolarizing(1.0),
                                [(0.0, 0.5, 1.0)])
    assert abs(dcdc.max_defect - p) < 1e-12


def test_commutativity_defect_asymmetric_split_is_nonzero():
    # scalar slot coefficients spoil the residual away from midpoints even
    # for a single dephasing family
    report = commutativity_defect(phase_damping(1.0), phase_damping(1.0),
                                  [(0.0, 0.5, 3.0)])
    assert abs(report.max_defect - 1.132872552482311) < 1e-9


def test_defect_grid_refinement_is_monotone():
    fam1, fam2 = depolarizing(1.0), amplitude_damping(1.0)
    coarse = [midpoint_triple(0.0, 0.5)]
    fine = coarse + [midpoint_triple(0.2, 0.3), midpoint_triple(0.5, 0.8)]
    d_coarse = commutativity_defect(fam1, fam2, coarse).max_defect
    d_fine = commutativity_defect(fam1, fam2, fine).max_defect
    assert d_fine >= d_coarse
