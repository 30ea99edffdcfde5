"""
Nelder-Mead 单纯形优化器.

scipy 实现，固定系数 (反射 1、扩张 2、收缩 0.5、收缩全体 0.5)，
显式初始单纯形，仅按函数值差 fatol 收敛；
收敛后从最优点以新的初始单纯形确定性重启，直到改进小于 fatol。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.optimize import minimize

from twpa_field.errors import InvalidParameterError
from twpa_field.schemas import FitResult

Objective = Callable[[np.ndarray], float]


@dataclass
class NelderMeadOptions:
    """优化器选项."""
    max_iter: int = 2000
    fatol: float = 1e-10  # 单纯形顶点函数值的最大差
    initial_step: float = 0.05  # 初始单纯形的相对扰动
    zero_step: float = 1e-4  # 坐标为 0 时的绝对扰动
    max_restarts: int = 3  # 从最优点重启的最多次数


def initial_simplex(x0: np.ndarray, options: NelderMeadOptions) -> np.ndarray:
    """x0 加上逐坐标扰动得到的 n+1 个顶点."""
    n = x0.size
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        step = options.initial_step * x0[i] if x0[i] != 0.0 else options.zero_step
        simplex[i + 1, i] += step
    return simplex


def nelder_mead(
    objective: Objective,
    x0: Sequence[float],
    options: Optional[NelderMeadOptions] = None,
    names: Optional[Sequence[str]] = None,
) -> FitResult:
    """
    最小化标量目标函数.

    搜索中目标值非有限的顶点按 +∞ 处理；最优值仍为 +∞ 时报告未收敛。

    Args:
        objective: 参数向量 -> 标量
        x0: 初始点，目标值必须有限
        options: NelderMeadOptions
        names: 参数名，默认 x0, x1, ...

    Returns:
        FitResult，params 按 names 命名
    """
    options = options or NelderMeadOptions()
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim != 1 or x0.size == 0:
        raise InvalidParameterError("x0 must be a non-empty 1-D vector")
    names = list(names) if names is not None else [f"x{i}" for i in range(x0.size)]
    if len(names) != x0.size:
        raise InvalidParameterError(f"got {len(names)} names for {x0.size} parameters")

    start_value = float(objective(x0))
    if not math.isfinite(start_value):
        raise InvalidParameterError(f"objective is not finite at x0 = {x0.tolist()}")

    non_finite = 0

    def guarded(x: np.ndarray) -> float:
        nonlocal non_finite
        value = float(objective(x))
        if not math.isfinite(value):
            non_finite += 1
            return math.inf
        return value

    history: List[float] = []

    def record(intermediate_result) -> None:
        history.append(float(intermediate_result.fun))

    x = x0
    best = start_value
    iterations = 0
    restarts = 0
    while True:
        budget = options.max_iter - iterations
        result = minimize(
            guarded,
            x,
            method="Nelder-Mead",
            callback=record,
            options={
                "initial_simplex": initial_simplex(x, options),
                "maxiter": budget,
                "maxfev": 10 * budget * (x0.size + 1),
                "fatol": options.fatol,
                # 只按函数值收敛，单纯形尺寸不作为停止条件
                "xatol": math.inf,
                "adaptive": False,
            },
        )
        iterations += int(result.nit)
        improvement = best - float(result.fun)
        if float(result.fun) <= best:
            x, best = np.asarray(result.x, dtype=float), float(result.fun)
        if not result.success or improvement < options.fatol:
            break
        if restarts >= options.max_restarts or iterations >= options.max_iter:
            break
        restarts += 1
        logger.debug(f"nelder_mead: restart {restarts} from f={best:.6g}")

    converged = bool(result.success) and math.isfinite(best)
    if non_finite:
        logger.warning(f"nelder_mead: {non_finite} non-finite objective evaluation(s) treated as +inf")
    logger.debug(f"nelder_mead: {iterations} iterations, {restarts} restart(s), f={best:.6g}, converged={converged}")

    return FitResult(
        params={name: float(v) for name, v in zip(names, x)},
        residual_norm=best,
        iterations=iterations,
        converged=converged,
        message=str(result.message),
        history=history,
    )
