import math

import numpy as np
import pytest

from sphereframe import constructions as C
from sphereframe import frames as F
from sphereframe import harmonics as H
from sphereframe.errors import NotAFrameError, ParameterError


def parseval_zonal(d=3, J=4):
    return C.zonal_spec(d, J, "kappa1")


def test_sigma_profile_zonal_is_one():
    spec = parseval_zonal(3, 5)
    sigma = F.sigma_profile(spec, 16)
    assert np.max(np.abs(sigma - 1.0)) < 1e-13


def test_sigma_profile_flags_gaps():
    spec = F.FrameSpec(3, [F.Scale(0, 0, {(0, (0,)): 1.0}),
                           F.Scale(1, 4, {(3, (0,)): 2.0})])
    sigma = F.sigma_profile(spec, 4)
    assert sigma[0] == 1.0 and sigma[3] > 0
    assert sigma[1] == 0.0 and sigma[2] == 0.0 and sigma[4] == 0.0


def test_frame_bounds_parseval_and_gap():
    bounds = F.frame_bounds(parseval_zonal(3, 5), 16)
    assert bounds.c1 == pytest.approx(1.0, abs=1e-13)
    assert bounds.c2 == pytest.approx(1.0, abs=1e-13)
    assert bounds.is_frame_on_range
    missing0 = F.FrameSpec(3, [F.Scale(0, 2, {(1, (0,)): 1.0})])
    bounds = F.frame_bounds(missing0, 2)
    assert bounds.c1 == 0.0 and not bounds.is_frame_on_range


def test_check_dual_parseval_self_and_scaled():
    spec = parseval_zonal(3, 4)
    assert F.check_dual(spec, spec, 8, tol=1e-12)
    doubled = F.FrameSpec(3, [F.Scale(s.j, s.bandwidth,
                                      {k: 2.0 * c for k, c in s.coeffs.items()})
                              for s in spec.scales])
    assert not F.check_dual(spec, doubled, 8, tol=1e-12)


def test_canonical_dual_identities():
    spec = C.wavelet_spec(4, 3, 4, "kappa2")
    dual = F.canonical_dual(spec)
    n_max = spec.max_bandwidth()
    assert np.max(F.dual_residuals(spec, dual, n_max)) < 1e-12
    # Parseval spec is self-dual (on the flat range of the profile)
    zon = parseval_zonal(3, 4)
    self_dual = F.canonical_dual(zon, n_max=8)
    for s, sd in zip(zon.scales, self_dual.scales):
        for key, c in s.coeffs.items():
            if key[0] <= 8:
                assert sd.coeffs[key] == pytest.approx(c, rel=1e-12)
    # uniform doubling of the profile halves the dual
    doubled = F.FrameSpec(4, [F.Scale(s.j, s.bandwidth,
                                      {k: math.sqrt(2.0) * c
                                       for k, c in s.coeffs.items()})
                              for s in spec.scales])
    dual2 = F.canonical_dual(doubled)
    for s1, s2 in zip(dual.scales, dual2.scales):
        for key, c in s1.coeffs.items():
            assert s2.coeffs[key] == pytest.approx(c / math.sqrt(2.0), rel=1e-12)


def test_canonical_dual_certification_error():
    spec = F.FrameSpec(3, [F.Scale(0, 0, {(0, (0,)): 1.0}),
                           F.Scale(1, 3, {(3, (0,)): 1.0})])
    with pytest.raises(NotAFrameError):
        F.canonical_dual(spec, n_max=3)
    # without certification the gap degrees simply stay empty
    dual = F.canonical_dual(spec)
    assert (3, (0,)) in dual.scales[1].coeffs


def test_sigma_J_phi_based_flatness():
    spec = parseval_zonal(3, 6)
    for J in (2, 4, 6):
        for n in range(0, 2 ** (J - 1) + 1):
            assert abs(F.sigma_J(spec, spec, J, n) - 1.0) < 1e-12
        # beyond the flat range the partial profile follows the outer window
        n = 2 ** J - 1
        expected = C.phi(n / 2.0 ** J) ** 2
        assert F.sigma_J(spec, spec, J, n) == pytest.approx(expected, rel=1e-10)


def test_apply_Lambda_J_truncates_high_degrees():
    spec = parseval_zonal(3, 4)
    f = F.Signal(3, 6, {(6, (2,)): 1.0})
    out = F.apply_Lambda_J(spec, spec, 2, f)  # N_2 = 4 < 6
    assert out.coeffs == {}


def test_lambda_J_is_degree_diagonal():
    spec = C.wavelet_spec(4, 2, 3, "kappa2")
    dual = F.canonical_dual(spec)
    J = 2
    for n in (0, 1, 3):
        for k in (H.index_set(4, n)[0], H.index_set(4, n)[-1]):
            f = F.Signal(4, n, {(n, k): 1.0})
            out = F.apply_Lambda_J(spec, dual, J, f)
            factor = F.sigma_J(spec, dual, J, n)
            assert out.coeffs[(n, k)] == pytest.approx(factor, rel=1e-12)
            assert all(key == (n, k) for key in out.coeffs)


def test_analysis_constant_scale_zero():
    spec = parseval_zonal(3, 2)
    system = F.build_system(spec)
    f = F.Signal(3, 0, {(0, (0,)): 1.0})
    c = F.analysis(system, f, 0)
    grid = system.grids[0]
    want = np.sqrt(grid.weights) * np.conj(spec.scales[0].coeffs[(0, (0,))])
    assert np.max(np.abs(c - want)) < 1e-14


def test_analysis_disjoint_spectra_gives_zero():
    spec = parseval_zonal(3, 2)  # scale 1 has bandwidth 2
    system = F.build_system(spec)
    f = F.Signal(3, 5, {(5, (1,)): 1.0})
    c = F.analysis(system, f, 1)
    assert np.max(np.abs(c)) < 1e-12


def test_single_scale_roundtrip_degree_diagonal():
    spec = C.wavelet_spec(4, 2, 3, "kappa2")
    system = F.build_system(spec)
    dual = F.canonical_dual(spec)
    sigma = F.sigma_profile(spec, 8)
    j, n = 2, 3
    scale_only = F.sigma_profile(
        F.FrameSpec(4, [spec.scales[j]]), 8)
    k = H.index_set(4, n)[1]
    f = F.Signal(4, n, {(n, k): 1.0})
    c = F.analysis(system, f, j)
    out = F.synthesis(system, dual, [np.zeros(len(g.weights)) if i != j else c
                                     for i, g in enumerate(system.grids)], n)
    got = out.coeffs.get((n, k), 0.0)
    assert got == pytest.approx(scale_only[n] / sigma[n], rel=1e-10)
    others = {key: v for key, v in out.coeffs.items()
              if key != (n, k) and abs(v) > 1e-10}
    assert not others


def test_parseval_check_cases():
    spec = parseval_zonal(3, 3)
    system = F.build_system(spec)
    # single harmonic: both sums equal sigma_n
    f = F.Signal(3, 2, {(2, (1,)): 1.0})
    gap = F.parseval_check(spec, f, system)
    assert gap.discrete_sum == pytest.approx(1.0, rel=1e-10)
    assert gap.spectral_sum == pytest.approx(1.0, rel=1e-12)
    # random signal against a Parseval spec: energy is preserved
    f = F.random_signal(3, 4, seed=0)
    gap = F.parseval_check(spec, f, system)
    assert gap.rel_gap < 1e-10
    assert gap.discrete_sum == pytest.approx(f.norm_sq(), rel=1e-10)
    # zero signal
    zero = F.Signal(3, 2, {})
    gap = F.parseval_check(spec, zero, system)
    assert gap == F.ParsevalGap(0.0, 0.0, 0.0)


def test_reconstruction_zonal_d3():
    spec = C.zonal_spec(3, 3, "kappa2")
    system = F.build_system(spec)
    assert system.variant == "zonal"
    f = F.random_signal(3, 8, seed=1)
    coeffs = [F.analysis(system, f, j) for j in range(len(spec.scales))]
    dual = F.canonical_dual(spec, n_max=8)
    rec = F.synthesis(system, dual, coeffs, 8)
    err = math.sqrt(sum(abs(rec.coeffs.get(key, 0.0) - c) ** 2
                        for key, c in f.coeffs.items()))
    assert err < 1e-11


def test_reconstruction_wavelet_d4():
    spec = C.wavelet_spec(4, 2, 2, "kappa2")
    system = F.build_system(spec)
    assert system.variant == "steerable_so_d2"
    f = F.random_signal(4, 4, seed=2)
    coeffs = [F.analysis(system, f, j) for j in range(len(spec.scales))]
    dual = F.canonical_dual(spec, n_max=4)
    rec = F.synthesis(system, dual, coeffs, 4)
    err = math.sqrt(sum(abs(rec.coeffs.get(key, 0.0) - c) ** 2
                        for key, c in f.coeffs.items()))
    assert err < 1e-11


def test_reconstruction_curvelet_uses_invariant_grid():
    spec = C.curvelet_spec(4, 2)
    system = F.build_system(spec)
    assert system.variant == "so_d2_invariant"
    f = F.random_signal(4, 3, seed=3)
    coeffs = [F.analysis(system, f, j) for j in range(len(spec.scales))]
    dual = F.canonical_dual(spec, n_max=3)
    rec = F.synthesis(system, dual, coeffs, 3)
    err = math.sqrt(sum(abs(rec.coeffs.get(key, 0.0) - c) ** 2
                        for key, c in f.coeffs.items()))
    assert err < 1e-11


def test_synthesis_of_zero_coefficients_is_zero():
    spec = parseval_zonal(3, 2)
    system = F.build_system(spec)
    zeros = [np.zeros(len(g.weights)) for g in system.grids]
    out = F.synthesis(system, F.canonical_dual(spec), zeros, 4)
    assert all(abs(v) == 0.0 for v in out.coeffs.values())


def test_analysis_deterministic_across_worker_counts():
    spec = C.wavelet_spec(4, 2, 2, "kappa2")
    system = F.build_system(spec)
    f = F.random_signal(4, 4, seed=8)
    from sphereframe import _config
    saved = _config.get_workers()
    try:
        _config.set_workers(1)
        c1 = F.analysis(system, f, 2)
        _config.set_workers(2)
        c2 = F.analysis(system, f, 2)
    finally:
        _config.set_workers(saved)
    assert np.array_equal(c1, c2)


def test_sigma_profile_ignores_base_rotation():
    spec = C.curvelet_spec(4, 3)
    bare = F.FrameSpec(spec.d, spec.scales)
    assert np.array_equal(F.sigma_profile(spec, 8), F.sigma_profile(bare, 8))


def test_build_system_validates_dimension_match():
    spec = parseval_zonal(3, 2)
    system = F.build_system(spec)
    with pytest.raises(ParameterError):
        F.analysis(system, F.Signal(4, 1, {(0, (0, 0)): 1.0}), 0)


def test_spec_validation_rejects_malformed():
    with pytest.raises(ParameterError):
        F.FrameSpec(3, [F.Scale(0, 2, {(3, (0,)): 1.0})]).validate()
    with pytest.raises(ParameterError):
        F.FrameSpec(3, [F.Scale(0, 4, {}), F.Scale(1, 2, {})]).validate()


def test_random_signal_unit_energy_and_determinism():
    f1 = F.random_signal(4, 5, seed=42)
    f2 = F.random_signal(4, 5, seed=42)
    assert f1.coeffs == f2.coeffs
    assert f1.norm_sq() == pytest.approx(1.0, rel=1e-12)
