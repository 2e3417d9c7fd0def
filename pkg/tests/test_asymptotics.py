import math

import numpy as np
import pytest

from coinwalk.asymptotics import (
    classify_spreading,
    drift_sign,
    moment_integrals,
    weak_limit_density,
    velocity_density_to_csv,
    asymptotic_moments_to_dict,
)
from coinwalk.coins import preset_coin
from coinwalk.momentum import eigensystem, quasi_energy
from coinwalk.walk import InitialCondition, distribution, evolve
from helpers import random_multirot_coin, random_coin_state, SIGMA_X_EXCLUSION

COIN0 = InitialCondition(np.array([1.0, 0.0]))
BALANCED = InitialCondition(np.array([1.0, 1.0j]) / math.sqrt(2))
HAD = preset_coin("hadamard_analog")


def test_drift_sign_calibrates_positive():
    assert drift_sign() == 1


def test_identity_coin_moments():
    am = moment_integrals(preset_coin("identity"), COIN0)
    assert am.mean_rate == pytest.approx(1.0, abs=1e-10)
    assert am.second_coeff == pytest.approx(1.0, abs=1e-10)
    assert am.variance_coeff == pytest.approx(0.0, abs=1e-10)
    assert classify_spreading(preset_coin("identity"), COIN0) == "ballistic"


def test_sigma_x_moments_vanish():
    am = moment_integrals(preset_coin("sigma_x"), COIN0)
    assert abs(am.mean_rate) <= 1e-14
    assert abs(am.second_coeff) <= 1e-14
    assert classify_spreading(preset_coin("sigma_x"), COIN0) == "non-spreading"
    am = moment_integrals(preset_coin("sigma_x"), BALANCED)
    assert abs(am.second_coeff) <= 1e-14


def test_hadamard_second_coefficient():
    am = moment_integrals(HAD, COIN0)
    assert am.second_coeff == pytest.approx(1 - 1 / math.sqrt(2), abs=5e-4)


def test_classify_pxy_ballistic():
    coin = preset_coin("paper_xy", theta=math.pi / 4, phi=math.pi / 4)
    assert classify_spreading(coin, COIN0) == "ballistic"


def test_moment_bounds_and_cauchy_schwarz():
    rng = np.random.default_rng(41)
    for _ in range(20):
        coin = random_multirot_coin(rng)
        init = InitialCondition(random_coin_state(rng))
        am = moment_integrals(coin, init, 2048)
        assert 0.0 <= am.second_coeff <= 1.0
        assert am.mean_rate**2 <= am.second_coeff + 1e-10


def test_grid_convergence():
    rng = np.random.default_rng(42)
    for _ in range(5):
        coin = random_multirot_coin(rng, exclude_sigma_x=SIGMA_X_EXCLUSION)
        init = InitialCondition(random_coin_state(rng))
        lo = moment_integrals(coin, init, 4096)
        hi = moment_integrals(coin, init, 8192)
        assert abs(lo.mean_rate - hi.mean_rate) < 1e-8
        assert abs(lo.second_coeff - hi.second_coeff) < 1e-8


def test_eigenbasis_completeness():
    rng = np.random.default_rng(43)
    for _ in range(200):
        coin = random_multirot_coin(rng)
        k = rng.uniform(-math.pi, math.pi)
        if math.sin(quasi_energy(coin, k)) <= 1e-8:
            continue
        init = random_coin_state(rng)
        es = eigensystem(coin, k)
        total = abs(np.vdot(es.eigvec_plus, init)) ** 2 + abs(np.vdot(es.eigvec_minus, init)) ** 2
        assert total == pytest.approx(1.0, abs=1e-12)


def test_moment_integrals_input_validation():
    with pytest.raises(ValueError):
        moment_integrals(HAD, COIN0, grid_size=32)
    with pytest.raises(ValueError):
        InitialCondition(np.array([1.0, 1.0]))


def test_weak_limit_normalisation_and_support():
    rng = np.random.default_rng(44)
    for _ in range(5):
        coin = random_multirot_coin(rng)
        init = InitialCondition(random_coin_state(rng))
        vd = weak_limit_density(coin, init, grid_size=4096, bins=64)
        width = vd.v_grid[1] - vd.v_grid[0]
        assert float(np.sum(vd.density * width)) == pytest.approx(1.0, abs=1e-3)
        assert np.all(vd.density >= 0.0)
        assert np.all(np.abs(vd.v_grid) <= 1.0)


def test_weak_limit_supported_inside_max_velocity():
    from coinwalk.momentum import dispersion_band

    rng = np.random.default_rng(45)
    for coin in (HAD, random_multirot_coin(rng), random_multirot_coin(rng)):
        vd = weak_limit_density(coin, COIN0, grid_size=4096, bins=64)
        band = dispersion_band(coin, 4096)
        v_max = float(np.nanmax(np.abs(band.group_velocity)))
        width = vd.v_grid[1] - vd.v_grid[0]
        outside = np.abs(vd.v_grid) > v_max + width
        assert float(np.sum(vd.density[outside])) == 0.0


def test_weak_limit_identity_mass_at_plus_one():
    vd = weak_limit_density(preset_coin("identity"), COIN0, bins=32)
    width = vd.v_grid[1] - vd.v_grid[0]
    top = int(np.argmax(vd.density))
    assert vd.v_grid[top] == pytest.approx(1.0, abs=width)
    assert vd.density[top] * width == pytest.approx(1.0, abs=1e-9)


def test_weak_limit_symmetric_initial_coin_is_even():
    vd = weak_limit_density(HAD, BALANCED, bins=40)
    assert np.max(np.abs(vd.density - vd.density[::-1])) < 1e-10


def test_weak_limit_sigma_x_degenerate_flag():
    vd = weak_limit_density(preset_coin("sigma_x"), COIN0)
    assert vd.degenerate
    width = vd.v_grid[1] - vd.v_grid[0]
    # velocities are zero up to ~1e-16 noise, so the mass may straddle the
    # two bins around v = 0 but nothing lands further out
    near_zero = np.abs(vd.v_grid) <= width
    assert float(np.sum(vd.density[near_zero]) * width) == pytest.approx(1.0, abs=1e-12)
    assert float(np.sum(vd.density[~near_zero])) == 0.0
    assert not weak_limit_density(HAD, COIN0).degenerate


def test_weak_limit_matches_rescaled_simulation():
    bins = 32
    t = 600
    vd = weak_limit_density(HAD, COIN0, grid_size=4096, bins=bins)
    d = distribution(evolve(COIN0, HAD, t))
    width = 2.0 / bins
    emp = np.zeros(bins)
    for x, p in d.items():
        emp[min(bins - 1, int((x / t + 1.0) / width))] += p
    l1 = float(np.abs(vd.density * width - emp).sum())
    assert l1 <= 0.05


def test_weak_limit_bins_validation():
    with pytest.raises(ValueError):
        weak_limit_density(HAD, COIN0, bins=16)


def test_velocity_density_csv(tmp_path):
    vd = weak_limit_density(HAD, COIN0, bins=32)
    path = tmp_path / "v.csv"
    velocity_density_to_csv(vd, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "v,density"
    assert len(lines) == 33


def test_asymptotic_moments_record():
    record = asymptotic_moments_to_dict(moment_integrals(HAD, COIN0, 1024))
    assert record["grid_size"] == 1024
    assert record["sign_calibration"]["drift_sign"] == 1
    assert record["second_coeff"] == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-3)
