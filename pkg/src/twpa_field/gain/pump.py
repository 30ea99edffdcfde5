"""
泵浦优化 - Pump Setting Optimization.

包含:
- GainSurface: 网格化测量的增益曲面，最近邻查找 (GainEvaluator 实现)
- optimize_pump: Nelder-Mead 在 (f_pump, P_pump) 上最大化最大平滑增益
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from twpa_field.errors import InvalidParameterError, PumpEvaluationError
from twpa_field.fitting.optimizer import NelderMeadOptions, nelder_mead
from twpa_field.gain.pipeline import DEFAULT_WINDOW_GHZ, smooth_and_metrics
from twpa_field.protocols.registry import GainEvaluator
from twpa_field.schemas import GainMetrics, PumpSetting, Spectrum

# 以 f_g 估计为中心的泵浦频率搜索半宽
PUMP_SEARCH_HALFWIDTH_GHZ = 1.0


@dataclass
class PumpOptimization:
    """泵浦优化结果."""
    best: PumpSetting
    metrics: GainMetrics
    start: PumpSetting
    start_metrics: GainMetrics
    iterations: int
    converged: bool

    @property
    def improved(self) -> bool:
        return self.metrics.max_smooth_gain_db > self.start_metrics.max_smooth_gain_db

    def to_dict(self) -> Dict[str, object]:
        return {
            "best": self.best.to_dict(),
            "metrics": self.metrics.to_dict(),
            "start": self.start.to_dict(),
            "start_metrics": self.start_metrics.to_dict(),
            "improved": self.improved,
            "iterations": self.iterations,
            "converged": self.converged,
        }


@dataclass
class GainSurface:
    """
    网格化增益曲面.

    每个 (f_pump, P_pump) 对应一条增益频谱；evaluate 取归一化网格距离下的
    最近邻设置，指标按设置缓存。
    """
    settings: List[PumpSetting]
    gains: List[Spectrum]
    window_ghz: float = DEFAULT_WINDOW_GHZ
    _cache: Dict[PumpSetting, GainMetrics] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self.settings or len(self.settings) != len(self.gains):
            raise InvalidParameterError("gain surface needs one gain spectrum per pump setting")
        f = np.array([s.f_pump_ghz for s in self.settings])
        p = np.array([s.p_pump_dbm for s in self.settings])
        self._points = np.column_stack([f, p])
        self._scale = np.array([_grid_step(f), _grid_step(p)])

    @classmethod
    def from_arrays(
        cls,
        f_pump_ghz: np.ndarray,
        p_pump_dbm: np.ndarray,
        freqs_ghz: np.ndarray,
        gain_db: np.ndarray,
        window_ghz: float = DEFAULT_WINDOW_GHZ,
    ) -> "GainSurface":
        """由长表 (每行一个 f_pump, P_pump, freq, gain) 构建."""
        groups: Dict[Tuple[float, float], List[Tuple[float, float]]] = {}
        for fp, pp, f, g in zip(f_pump_ghz, p_pump_dbm, freqs_ghz, gain_db):
            groups.setdefault((float(fp), float(pp)), []).append((float(f), float(g)))

        settings, gains = [], []
        for (fp, pp), rows in sorted(groups.items()):
            rows.sort()
            freqs, values = zip(*rows)
            settings.append(PumpSetting(fp, pp))
            gains.append(Spectrum(np.array(freqs), np.array(values), quantity="gain"))
        logger.debug(f"GainSurface: {len(settings)} pump settings")
        return cls(settings=settings, gains=gains, window_ghz=window_ghz)

    @classmethod
    def from_csv(cls, path: Path, window_ghz: float = DEFAULT_WINDOW_GHZ) -> "GainSurface":
        """读取 `f_pump_GHz,p_pump_dBm,freq_GHz,gain_dB` 文件."""
        from twpa_field.io.csv_io import read_gain_surface_rows

        return cls.from_arrays(*read_gain_surface_rows(path), window_ghz=window_ghz)

    def nearest(self, setting: PumpSetting) -> int:
        target = np.array([setting.f_pump_ghz, setting.p_pump_dbm])
        distance = np.sum(((self._points - target) / self._scale) ** 2, axis=1)
        return int(np.argmin(distance))

    def evaluate(self, setting: PumpSetting) -> GainMetrics:
        key = self.settings[self.nearest(setting)]
        if key not in self._cache:
            self._cache[key] = smooth_and_metrics(self.gains[self.settings.index(key)], self.window_ghz)
        return self._cache[key]


def _grid_step(values: np.ndarray) -> float:
    steps = np.diff(np.unique(values))
    return float(steps.min()) if steps.size else 1.0


def _evaluate(evaluator: GainEvaluator, setting: PumpSetting) -> GainMetrics:
    try:
        return evaluator.evaluate(setting)
    except PumpEvaluationError:
        raise
    except Exception as exc:
        raise PumpEvaluationError(f"gain evaluation failed at {setting}: {exc}", setting=setting) from exc


def optimize_pump(
    evaluator: GainEvaluator,
    start: PumpSetting,
    fg_estimate_ghz: Optional[float] = None,
    halfwidth_ghz: float = PUMP_SEARCH_HALFWIDTH_GHZ,
    options: Optional[NelderMeadOptions] = None,
) -> PumpOptimization:
    """
    最大化最大平滑增益.

    给出 f_g 估计时 f_pump 限制在 f_g ± halfwidth 内 (罚值)。
    结果不差于起点：优化结果不如起点时返回起点。

    Raises:
        PumpEvaluationError: 评估器失败，携带失败的设置
    """
    start_metrics = _evaluate(evaluator, start)

    def objective(x: np.ndarray) -> float:
        f_pump, p_pump = float(x[0]), float(x[1])
        if fg_estimate_ghz is not None and abs(f_pump - fg_estimate_ghz) > halfwidth_ghz:
            return math.inf
        return -_evaluate(evaluator, PumpSetting(f_pump, p_pump)).max_smooth_gain_db

    result = nelder_mead(
        objective,
        (start.f_pump_ghz, start.p_pump_dbm),
        options,
        names=("f_pump_ghz", "p_pump_dbm"),
    )
    best = PumpSetting(result.params["f_pump_ghz"], result.params["p_pump_dbm"])
    metrics = _evaluate(evaluator, best)
    if metrics.max_smooth_gain_db < start_metrics.max_smooth_gain_db:
        best, metrics = start, start_metrics

    outcome = PumpOptimization(
        best=best,
        metrics=metrics,
        start=start,
        start_metrics=start_metrics,
        iterations=result.iterations,
        converged=result.converged,
    )
    logger.info(
        f"Pump optimum {best.f_pump_ghz:.4f} GHz / {best.p_pump_dbm:.3f} dBm: "
        f"{metrics.max_smooth_gain_db:.2f} dB (improved={outcome.improved})"
    )
    return outcome


def optimum_power_trend(fg_ghz: Sequence[float], p_opt_dbm: Sequence[float]) -> Tuple[float, float]:
    """最优 P_pump 对 f_g 的线性拟合 (斜率 dBm/GHz, 截距 dBm)."""
    fg = np.asarray(fg_ghz, dtype=float)
    if fg.size < 2 or np.ptp(fg) == 0:
        raise InvalidParameterError("need at least two distinct f_g values for a trend")
    slope, intercept = np.polyfit(fg, np.asarray(p_opt_dbm, dtype=float), 1)
    return float(slope), float(intercept)
