"""
色散求解 - Coupled-Amplitude Dispersion Solver.

在一阶耦合近似下，波矢 k 与 q = G − k 两个分量的振幅 A、B 满足 2×2 线性方程组：

    M11 = x(1/ℓ_s² + k²) − k²
    M22 = x(1/ℓ_s² + q²) − q²
    M12 = (η/2)[x(1/ℓ_s² − kq) + β·kq]

x = ω²/ω_p²。det M = 0 是关于 x 的二次方程，每个 k 给出两支解。
"""

from __future__ import annotations

import math

import numpy as np

from twpa_field.errors import InvalidParameterError
from twpa_field.physics.array_model import DEFAULT_GAP_MODEL, gap_prefactor
from twpa_field.schemas import BandStructure, DeviceModel, FieldPoint, GapModelKind


def _stable_quadratic_roots(a: np.ndarray, b: np.ndarray, c: np.ndarray):
    """a x² + b x + c = 0 的两个实根，避免相消误差 (判别式 < 0 时为 NaN)."""
    disc = b * b - 4.0 * a * c
    disc = np.where(disc < 0.0, np.where(disc > -1e-14 * b * b, 0.0, np.nan), disc)
    sign = np.where(b >= 0.0, 1.0, -1.0)
    q = -0.5 * (b + sign * np.sqrt(disc))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(q != 0.0, q / a, 0.0)
        r2 = np.where(q != 0.0, c / q, 0.0)
    return np.minimum(r1, r2), np.maximum(r1, r2)


def band_roots(
    k: np.ndarray,
    g: float,
    inv_ls_sq: float,
    eta: float,
    beta: float = 1.0,
):
    """
    各 k 处 det M = 0 的两个根 x_lower ≤ x_upper.

    Args:
        k: 波矢 (每单元弧度)
        g: 调制波矢 G
        inv_ls_sq: 1/ℓ_s²
        eta: 调制幅度
        beta: L_J 调制的有效系数 (∥2 方向场依赖)
    """
    k = np.asarray(k, dtype=float)
    q = g - k
    e = eta / 2.0
    p1 = inv_ls_sq + k * k
    p2 = inv_ls_sq + q * q
    r = inv_ls_sq - k * q
    kq = k * q

    a = p1 * p2 - (e * r) ** 2
    b = -(p1 * q * q + p2 * k * k) - 2.0 * e * e * r * beta * kq
    c = (k * q) ** 2 * (1.0 - (e * beta) ** 2)
    return _stable_quadratic_roots(a, b, c)


def dispersion_bands(
    device: DeviceModel,
    field: FieldPoint,
    k_points: int = 201,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> BandStructure:
    """
    k ∈ [0, G/2] 上的色散能带.

    Returns:
        BandStructure，branches = [下支, 上支] (GHz)；不在 [0, f_p) 内的解记为 NaN
    """
    if k_points < 2:
        raise InvalidParameterError(f"k_points must be >= 2, got {k_points}")

    geo = device.geometry
    prefactor, beta = gap_prefactor(device, field, gap_model)
    inv_ls_sq = device.circuit.cg_ff / device.circuit.cj_ff
    k = np.linspace(0.0, geo.g / 2.0, k_points)

    branches = []
    for x in band_roots(k, geo.g, inv_ls_sq, geo.eta, beta):
        propagating = (x >= 0.0) & (x < 1.0)
        branches.append(np.where(propagating, prefactor * np.sqrt(np.where(propagating, x, 0.0)), math.nan))
    return BandStructure(k=k, branches=branches)
