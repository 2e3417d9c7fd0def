"""Momentum-space analysis of the single-step walk operator.

For a coin matrix ``C`` the step operator at momentum ``k`` is

    U_k = diag(e^{-ik}, e^{+ik}) @ C,

an SU(2) matrix whose eigenvalues are ``e^{-i w}`` and ``e^{+i w}`` with the
quasi-energy ``w = w(k)`` taken on the principal branch ``[0, pi]``
(``cos w = Re tr(U_k) / 2``).  The Bloch axis ``n(k)`` is fixed by

    U_k = cos(w) I - i sin(w) (n . sigma),

so ``U_k = exp(-i H_k)`` with the effective Hamiltonian ``H_k = w n . sigma``.
``eigvec_plus`` denotes the eigenvector for ``e^{-i w}`` (the +1 eigenvector
of ``n . sigma``); ``eigvec_minus`` the one for ``e^{+i w}``.  With these
conventions the group velocity ``dw/dk`` equals ``n_z(k)``, and for the coin
``|0>`` the walker drifts toward positive sites.

Writing ``C = c I + i (s . sigma)`` (c real, s a real 3-vector) gives the
closed dispersion ``cos w(k) = c cos k + s_z sin k``: a pure sinusoid in k
for every composite coin, which the gap scanner exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .coins import PAULI_X, PAULI_Y, PAULI_Z, CoinSpec, compose
from .export import fmt17

__all__ = [
    "DEGENERACY_THRESHOLD",
    "DegeneratePointError",
    "NumericalDomainError",
    "MomentumPoint",
    "DispersionBand",
    "Eigensystem",
    "build_uk",
    "quasi_energy",
    "bloch_vector",
    "group_velocity",
    "effective_hamiltonian",
    "eigensystem",
    "momentum_point",
    "dispersion_band",
    "dispersion_to_csv",
    "cos_omega_two_rotation",
    "uk_entries_two_rotation",
]

# below sin(w) ~ 1e-8 the 1/sin(w) normalisation of the Bloch axis loses all
# precision, so such k count as band-touching points
DEGENERACY_THRESHOLD = 1e-8

_ACOS_CLAMP = 1e-12


class DegeneratePointError(ValueError):
    """The quasi-energy gap is closed at this momentum; n(k) and dw/dk are undefined."""


class NumericalDomainError(ArithmeticError):
    """An arccos argument fell outside [-1, 1] by more than the clamping window."""


@dataclass(frozen=True)
class MomentumPoint:
    """Everything the toolkit knows about one momentum sample."""

    k: float
    u_k: NDArray[np.complex128]
    omega: float
    eigvec_plus: NDArray[np.complex128]
    eigvec_minus: NDArray[np.complex128]
    bloch: NDArray[np.float64] | None
    group_velocity: float | None
    degenerate: bool


@dataclass(frozen=True)
class Eigensystem:
    eigvec_plus: NDArray[np.complex128]
    eigvec_minus: NDArray[np.complex128]
    omega: float
    degenerate: bool


@dataclass(frozen=True)
class DispersionBand:
    """Quasi-energy band sampled on a uniform momentum grid over [-pi, pi).

    ``bloch`` rows and ``group_velocity`` entries are NaN at band-touching
    momenta.
    """

    k_grid: NDArray[np.float64]
    omega_values: NDArray[np.float64]
    bloch: NDArray[np.float64]
    group_velocity: NDArray[np.float64]
    coin: CoinSpec


def _su2_parts(mat: NDArray[np.complex128]) -> tuple[float, np.ndarray]:
    """Split ``mat = c I + i (s . sigma)`` into ``(c, s)``."""
    c = 0.5 * (mat[0, 0] + mat[1, 1]).real
    sx = 0.5 * (mat[0, 1] + mat[1, 0]).imag
    sy = 0.5 * (mat[0, 1] - mat[1, 0]).real
    sz = 0.5 * (mat[0, 0] - mat[1, 1]).imag
    return float(c), np.array([sx, sy, sz])


def _omega_from_cos(arg):
    """Principal-branch arccos with a 1e-12 clamping window at the band edges."""
    arg = np.asarray(arg, dtype=np.float64)
    over = np.abs(arg) - 1.0
    if np.any(over > _ACOS_CLAMP):
        worst = float(np.max(over))
        raise NumericalDomainError(f"|cos w| exceeds 1 by {worst:.3e} (> {_ACOS_CLAMP})")
    return np.arccos(np.clip(arg, -1.0, 1.0))


def _band_arrays(c: float, s: np.ndarray, k):
    """Vectorised dispersion data for coin parts ``(c, s)`` on momenta ``k``.

    Returns ``(omega, n, v, degenerate)`` where ``n`` has shape ``k.shape + (3,)``;
    rows of ``n`` and entries of ``v`` are NaN where the gap closes.
    """
    k = np.asarray(k, dtype=np.float64)
    ck, sk = np.cos(k), np.sin(k)
    omega = _omega_from_cos(c * ck + s[2] * sk)
    sin_w = np.sin(omega)
    degenerate = sin_w <= DEGENERACY_THRESHOLD

    # U_k = cos(w) I + i (m . sigma) with |m| = sin(w); n = -m / sin(w)
    safe = np.where(degenerate, 1.0, sin_w)
    mx = ck * s[0] - sk * s[1]
    my = ck * s[1] + sk * s[0]
    mz = ck * s[2] - c * sk
    n = np.stack([-mx / safe, -my / safe, -mz / safe], axis=-1)
    v = (c * sk - s[2] * ck) / safe  # dw/dk, equals n_z
    n = np.where(degenerate[..., None], np.nan, n)
    v = np.where(degenerate, np.nan, v)
    return omega, n, v, degenerate


def _eigvecs_from_bloch(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal +1/-1 eigenvectors of ``n . sigma`` for unit vectors ``n``.

    Vectorised over leading axes; two charts keep the construction stable on
    the whole sphere.  Output shape is ``n.shape[:-1] + (2,)``.
    """
    nx, ny, nz = n[..., 0], n[..., 1], n[..., 2]
    north = nz >= 0.0

    wn = np.sqrt((1.0 + np.where(north, nz, 0.0)) / 2.0)
    ws = np.sqrt((1.0 - np.where(north, 0.0, nz)) / 2.0)
    # avoid 0/0 in the unused chart
    wn_safe = np.where(north, wn, 1.0)
    ws_safe = np.where(north, 1.0, ws)

    plus0 = np.where(north, wn, (nx - 1j * ny) / (2.0 * ws_safe))
    plus1 = np.where(north, (nx + 1j * ny) / (2.0 * wn_safe), ws)
    minus0 = np.where(north, -(nx - 1j * ny) / (2.0 * wn_safe), ws)
    minus1 = np.where(north, wn, -(nx + 1j * ny) / (2.0 * ws_safe))

    v_plus = np.stack([plus0, plus1], axis=-1)
    v_minus = np.stack([minus0, minus1], axis=-1)
    return v_plus, v_minus


def build_uk(coin: CoinSpec, k: float) -> NDArray[np.complex128]:
    """Step operator ``diag(e^{-ik}, e^{ik}) @ C`` at momentum ``k``."""
    shift = np.array([[np.exp(-1j * k), 0.0], [0.0, np.exp(1j * k)]], dtype=np.complex128)
    return shift @ compose(coin)


def quasi_energy(coin: CoinSpec, k: float) -> float:
    """Quasi-energy ``w(k)`` on the principal branch [0, pi]."""
    c, s = _su2_parts(compose(coin))
    return float(_omega_from_cos(c * math.cos(k) + s[2] * math.sin(k)))


def bloch_vector(coin: CoinSpec, k: float) -> NDArray[np.float64]:
    """Unit Bloch axis ``n(k)`` of ``U_k``.

    Raises :class:`DegeneratePointError` where the gap is closed.
    """
    c, s = _su2_parts(compose(coin))
    _, n, _, degenerate = _band_arrays(c, s, float(k))
    if degenerate:
        raise DegeneratePointError(f"gap closed at k={k!r}: Bloch axis undefined")
    return n


def group_velocity(coin: CoinSpec, k: float) -> float:
    """``dw/dk`` from analytic differentiation of the dispersion argument."""
    c, s = _su2_parts(compose(coin))
    omega = _omega_from_cos(c * math.cos(k) + s[2] * math.sin(k))
    sin_w = math.sin(float(omega))
    if sin_w <= DEGENERACY_THRESHOLD:
        raise DegeneratePointError(f"gap closed at k={k!r}: group velocity undefined")
    return float((c * math.sin(k) - s[2] * math.cos(k)) / sin_w)


def effective_hamiltonian(coin: CoinSpec, k: float) -> NDArray[np.complex128]:
    """Hermitian ``H_k = w(k) (n(k) . sigma)`` with ``exp(-i H_k) = U_k``."""
    n = bloch_vector(coin, k)
    omega = quasi_energy(coin, k)
    return omega * (n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z)


def eigensystem(coin: CoinSpec, k: float) -> Eigensystem:
    """Orthonormal eigenvectors of ``U_k`` paired with ``e^{-i w}`` / ``e^{+i w}``.

    At a band-touching momentum any orthonormal basis is an eigenbasis; the
    canonical basis is returned with ``degenerate=True``.
    """
    c, s = _su2_parts(compose(coin))
    omega, n, _, degenerate = _band_arrays(c, s, float(k))
    if degenerate:
        return Eigensystem(
            np.array([1.0, 0.0], dtype=np.complex128),
            np.array([0.0, 1.0], dtype=np.complex128),
            float(omega),
            True,
        )
    v_plus, v_minus = _eigvecs_from_bloch(n)
    return Eigensystem(v_plus.astype(np.complex128), v_minus.astype(np.complex128), float(omega), False)


def momentum_point(coin: CoinSpec, k: float) -> MomentumPoint:
    """Bundle ``U_k``, quasi-energy, eigenvectors, Bloch axis and velocity at one ``k``."""
    c, s = _su2_parts(compose(coin))
    omega, n, v, degenerate = _band_arrays(c, s, float(k))
    eig = eigensystem(coin, k)
    return MomentumPoint(
        k=float(k),
        u_k=build_uk(coin, k),
        omega=float(omega),
        eigvec_plus=eig.eigvec_plus,
        eigvec_minus=eig.eigvec_minus,
        bloch=None if degenerate else np.asarray(n, dtype=np.float64),
        group_velocity=None if degenerate else float(v),
        degenerate=bool(degenerate),
    )


def dispersion_band(coin: CoinSpec, n_k: int = 512) -> DispersionBand:
    """Sample the band on ``n_k`` uniform momenta over [-pi, pi)."""
    if n_k < 2:
        raise ValueError("n_k must be >= 2")
    k = np.linspace(-math.pi, math.pi, n_k, endpoint=False)
    c, s = _su2_parts(compose(coin))
    omega, n, v, _ = _band_arrays(c, s, k)
    return DispersionBand(k_grid=k, omega_values=omega, bloch=n, group_velocity=v, coin=coin)


def dispersion_to_csv(band: DispersionBand, path) -> None:
    """Write ``k,omega,nx,ny,nz,v_group`` rows; degenerate momenta get empty n/v fields."""
    lines = ["k,omega,nx,ny,nz,v_group"]
    for i in range(band.k_grid.size):
        fields = [fmt17(band.k_grid[i]), fmt17(band.omega_values[i])]
        if math.isnan(band.group_velocity[i]):
            fields += ["", "", "", ""]
        else:
            fields += [fmt17(x) for x in band.bloch[i]] + [fmt17(band.group_velocity[i])]
        lines.append(",".join(fields))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cos_omega_two_rotation(
    first_axis, first_angle: float, second_axis, second_angle: float, k: float
):
    """Closed-form dispersion argument ``cos w(k)`` for a two-rotation coin.

    ``first_*`` is the rotation applied first to the coin state, ``second_*``
    the one applied after it.  Kept as an explicit trigonometric expression,
    independent of any matrix product, so the generic path can be checked
    against it.
    """
    bx, by, bz = first_axis
    ax, ay, az = second_axis
    th = first_angle
    ph = second_angle
    dot = ax * bx + ay * by + az * bz
    return np.cos(k) * (
        np.cos(ph) * np.cos(th) - dot * np.sin(ph) * np.sin(th)
    ) + np.sin(k) * (
        bz * np.cos(ph) * np.sin(th)
        + np.sin(ph) * (az * np.cos(th) + ay * bx * np.sin(th) - ax * by * np.sin(th))
    )


def uk_entries_two_rotation(
    first_axis, first_angle: float, second_axis, second_angle: float, k: float
) -> NDArray[np.complex128]:
    """Closed-form entries of ``U_k`` for a two-rotation coin.

    Same argument convention as :func:`cos_omega_two_rotation`.  Spelled out
    entry by entry (no matrix products) as an independent cross-check of
    :func:`build_uk`.
    """
    bx, by, bz = first_axis  # applied first
    ax, ay, az = second_axis  # applied second
    th = first_angle
    ph = second_angle
    cth, sth = np.cos(th), np.sin(th)
    cph, sph = np.cos(ph), np.sin(ph)
    em, ep = np.exp(-1j * k), np.exp(1j * k)

    a11 = em * (
        -(ax - 1j * ay) * (bx + 1j * by) * sph * sth
        + (cph + 1j * az * sph) * (cth + 1j * bz * sth)
    )
    a12 = em * (
        (1j * ax + ay) * sph * (cth - 1j * bz * sth)
        + (1j * bx + by) * (cph + 1j * az * sph) * sth
    )
    a21 = ep * (
        (1j * ax - ay) * sph * (cth + 1j * bz * sth)
        + (bx + 1j * by) * (1j * cph + az * sph) * sth
    )
    a22 = ep * (
        -(ax + 1j * ay) * (bx - 1j * by) * sph * sth
        + (cph - 1j * az * sph) * (cth - 1j * bz * sth)
    )
    return np.array([[a11, a12], [a21, a22]], dtype=np.complex128)
