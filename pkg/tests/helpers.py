"""Shared test utilities: random coin draws and hand-derived closed forms.

The closed forms here are written out term by term, independent of the
package's matrix algebra, so they can serve as oracles for it.
"""

import numpy as np

from coinwalk.coins import CoinSpec, compose, random_coin_spec, sigma_x_distance

SIGMA_X_EXCLUSION = 1e-3  # max-norm distance below which a coin counts as sigma_x-like


def random_multirot_coin(rng, min_rot=2, max_rot=4, exclude_sigma_x=None) -> CoinSpec:
    """Random coin with a random number of rotations, optionally rejecting
    coins within ``exclude_sigma_x`` of the sigma_x family."""
    while True:
        spec = random_coin_spec(rng, int(rng.integers(min_rot, max_rot + 1)))
        if exclude_sigma_x is None or sigma_x_distance(compose(spec)) > exclude_sigma_x:
            return spec


def random_coin_state(rng) -> np.ndarray:
    vec = rng.normal(size=2) + 1j * rng.normal(size=2)
    return vec / np.linalg.norm(vec)


def xy_product_entries(theta: float, phi: float) -> np.ndarray:
    """Hand-expanded entries of ``R_x(phi) @ R_y(theta)``."""
    cth, sth = np.cos(theta), np.sin(theta)
    cph, sph = np.cos(phi), np.sin(phi)
    return np.array(
        [
            [cph * cth - 1j * sph * sth, cph * sth + 1j * sph * cth],
            [-cph * sth + 1j * sph * cth, cph * cth + 1j * sph * sth],
        ],
        dtype=np.complex128,
    )


def band_axis_two_rotation(first_axis, first_angle, second_axis, second_angle, k, sin_w):
    """Closed-form band-axis components for a two-rotation coin, written out
    literally (no matrix products).  Defined up to a global sign, which the
    package fixes the opposite way round; see the comparison tests."""
    bx, by, bz = first_axis
    ax, ay, az = second_axis
    th, ph = first_angle, second_angle
    cth, sth = np.cos(th), np.sin(th)
    cph, sph = np.cos(ph), np.sin(ph)
    ck, sk = np.cos(k), np.sin(k)

    nx = (
        -sk * (by * cph * sth + sph * (ay * cth - az * bx * sth + ax * bz * sth))
        + ck * (bx * cph * sth + sph * (ax * cth + az * by * sth - ay * bz * sth))
    ) / sin_w
    ny = (
        (by * ck + bx * sk) * cph * sth
        + ck * sph * (ay * cth + (-az * bx + ax * bz) * sth)
        + sk * sph * (ax * cth + (az * by - ay * bz) * sth)
    ) / sin_w
    nz = (
        (-sk * cph + az * ck * sph) * cth
        + sk * sph * sth * (ax * bx + ay * by + az * bz)
        + ck * (bz * cph + ay * bx * sph - ax * by * sph) * sth
    ) / sin_w
    return np.array([nx, ny, nz])
