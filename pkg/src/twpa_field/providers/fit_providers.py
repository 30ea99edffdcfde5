"""
Fit Recipe Providers - 按名称调用的拟合流程 (FitRecipe 实现).

提供:
- Par1BandgapRecipe: par1
- PerpHysteresisRecipe: perp
- TemperatureRecipe: temperature
- GlVsAgRecipe: gl-vs-ag

每个流程读取数据文件、调用 fitting.recipes 并返回 RecipeResult；
数据本身的问题 (不适定、格式错误) 以 fail 结果返回。
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from loguru import logger

from twpa_field.errors import IllPosedFitError, InvalidParameterError, UsageError
from twpa_field.fitting.recipes import (
    fit_bandgap_par1,
    fit_perp_hysteresis,
    fit_temperature,
    model_comparison_gl_vs_ag,
)
from twpa_field.io.csv_io import read_fg_datasets, read_temperature_data
from twpa_field.protocols.registry import RecipeResult
from twpa_field.schemas import DeviceModel, FgDataset, FieldAxis, GapModelKind


def _single_path(data: Sequence[Path], recipe: str) -> Path:
    if len(data) != 1:
        raise UsageError(f"recipe '{recipe}' takes exactly one data file, got {len(data)}")
    return Path(data[0])


def _single_dataset(path: Path, axis: FieldAxis) -> FgDataset:
    datasets = read_fg_datasets(path, axis)
    if len(datasets) != 1:
        raise InvalidParameterError(f"{path}: expected a single sweep, got {sorted(map(str, datasets))}")
    return next(iter(datasets.values()))


class Par1BandgapRecipe:
    """∥1 带隙拟合 {f_p(0), χ, B_Φ,1}."""

    @property
    def name(self) -> str:
        return "par1"

    def run(
        self,
        data: Sequence[Path],
        device: DeviceModel,
        gap_model: GapModelKind = GapModelKind.AG_INTERP,
        bc_mt: Optional[float] = None,
        **kwargs: Any,
    ) -> RecipeResult:
        path = _single_path(data, self.name)
        try:
            dataset = _single_dataset(path, FieldAxis.PAR1)
            result = fit_bandgap_par1(dataset, device, gap_model, bc_mt)
        except (IllPosedFitError, InvalidParameterError) as exc:
            logger.error(f"par1 fit failed: {exc}")
            return RecipeResult.fail(str(exc), data=str(path))
        return RecipeResult.ok(result.to_dict(), rows=len(dataset), gap_model=gap_model.value)


class PerpHysteresisRecipe:
    """⊥ 上/下扫联合拟合.

    数据可以是一个带 sweep 列的文件，或 up、down 两个文件 (按此顺序)。
    """

    @property
    def name(self) -> str:
        return "perp"

    def _load(self, data: Sequence[Path]) -> Dict[str, FgDataset]:
        if len(data) == 2:
            up = _single_dataset(Path(data[0]), FieldAxis.PERP)
            down = _single_dataset(Path(data[1]), FieldAxis.PERP)
            return {"up": up, "down": down}
        path = _single_path(data, self.name)
        datasets = read_fg_datasets(path, FieldAxis.PERP)
        if set(datasets) != {"up", "down"}:
            raise InvalidParameterError(f"{path}: sweep column must contain both 'up' and 'down'")
        return datasets  # type: ignore[return-value]

    def run(self, data: Sequence[Path], **kwargs: Any) -> RecipeResult:
        try:
            sweeps = self._load(data)
            result = fit_perp_hysteresis(sweeps["up"], sweeps["down"])
        except (IllPosedFitError, InvalidParameterError) as exc:
            logger.error(f"perp fit failed: {exc}")
            return RecipeResult.fail(str(exc))
        return RecipeResult.ok(result.to_dict(), rows=len(sweeps["up"]) + len(sweeps["down"]))


class TemperatureRecipe:
    """f_g(T) 拟合."""

    @property
    def name(self) -> str:
        return "temperature"

    def run(
        self,
        data: Sequence[Path],
        device: Optional[DeviceModel] = None,
        tc_k: Optional[float] = None,
        fit_tc: bool = False,
        **kwargs: Any,
    ) -> RecipeResult:
        path = _single_path(data, self.name)
        tc = tc_k if tc_k is not None else (device.tc_k if device is not None else 1.27)
        try:
            temps, fg = read_temperature_data(path)
            result = fit_temperature(temps, fg, tc_k=tc, fit_tc=fit_tc)
        except (IllPosedFitError, InvalidParameterError) as exc:
            logger.error(f"temperature fit failed: {exc}")
            return RecipeResult.fail(str(exc), data=str(path))
        return RecipeResult.ok(result.to_dict(), rows=int(temps.size))


class GlVsAgRecipe:
    """同一 ∥1 数据的 GL / AG 能隙模型对比."""

    @property
    def name(self) -> str:
        return "gl-vs-ag"

    def run(
        self,
        data: Sequence[Path],
        device: DeviceModel,
        bc_mt: Optional[float] = None,
        **kwargs: Any,
    ) -> RecipeResult:
        path = _single_path(data, self.name)
        try:
            dataset = _single_dataset(path, FieldAxis.PAR1)
            comparison = model_comparison_gl_vs_ag(dataset, device, bc_mt)
        except (IllPosedFitError, InvalidParameterError) as exc:
            logger.error(f"gl-vs-ag comparison failed: {exc}")
            return RecipeResult.fail(str(exc), data=str(path))
        return RecipeResult.ok(comparison.to_dict(), rows=len(dataset))
