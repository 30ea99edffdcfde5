"""
器件配置 - Device Configuration Loading.

JSON 对象经 pydantic 校验后转换为 DeviceModel。预设 (twpa_a / twpa_b)
优先于文件路径解析。
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import List, Optional, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from twpa_field.errors import InvalidParameterError, UsageError
from twpa_field.schemas import CircuitParams, CurrentProfile, DeviceModel, JunctionGeometry

PRESET_PACKAGE = "twpa_field.io.presets"


class DeviceConfig(BaseModel):
    """器件配置文件 (未知键报错)."""

    model_config = ConfigDict(extra="forbid")

    name: str = Field("device", description="器件名称")
    w_um: float = Field(..., gt=0, description="结宽 µm")
    h_um: float = Field(..., gt=0, description="平均结高 µm")
    eta: float = Field(..., ge=0, lt=1, description="面积调制幅度")
    n_p: int = Field(..., ge=2, description="调制周期 (结数)")
    n_j: int = Field(..., ge=2, description="结总数")
    l_nm: float = Field(..., gt=0, description="磁通穿透厚度 nm")
    lj_ph: float = Field(..., gt=0, description="平均约瑟夫森电感 pH")
    cj_ff: float = Field(..., gt=0, description="平均结电容 fF")
    cg_ff: float = Field(..., gt=0, description="平均对地电容 fF")
    bc_par_mt: float = Field(..., gt=0, description="面内临界场 mT")
    bc_perp_mt: float = Field(..., gt=0, description="垂直临界场 mT")
    tc_k: float = Field(..., gt=0, description="临界温度 K")
    chi: float = Field(0.0, ge=0, description="电流分布参数 χ")
    fp0_ghz: Optional[float] = Field(None, gt=0, description="拟合的零场等离子体频率")
    b_phi1_mt: Optional[float] = Field(None, gt=0, description="拟合的 B_Φ,1")
    b_phi2_mt: Optional[float] = Field(None, gt=0, description="拟合的 B̄_Φ,2")
    chi_par2: Optional[float] = Field(None, ge=0, description="∥2 方向的 χ")

    def to_device(self) -> DeviceModel:
        return DeviceModel(
            geometry=JunctionGeometry(
                w_um=self.w_um, h_um=self.h_um, eta=self.eta, n_p=self.n_p, n_j=self.n_j, l_nm=self.l_nm
            ),
            circuit=CircuitParams(lj_ph=self.lj_ph, cj_ff=self.cj_ff, cg_ff=self.cg_ff),
            chi=CurrentProfile(self.chi),
            bc_par_mt=self.bc_par_mt,
            bc_perp_mt=self.bc_perp_mt,
            tc_k=self.tc_k,
            name=self.name,
            fp0_ghz=self.fp0_ghz,
            b_phi1_mt=self.b_phi1_mt,
            b_phi2_mt=self.b_phi2_mt,
            chi_par2=self.chi_par2,
        )


def list_presets() -> List[str]:
    return sorted(
        entry.name[: -len(".json")]
        for entry in resources.files(PRESET_PACKAGE).iterdir()
        if entry.name.endswith(".json")
    )


def parse_device(payload: Union[str, bytes, dict], source: str = "<config>") -> DeviceModel:
    """校验 JSON 文本或字典并构建 DeviceModel."""
    try:
        if isinstance(payload, dict):
            config = DeviceConfig.model_validate(payload)
        else:
            config = DeviceConfig.model_validate_json(payload)
    except ValidationError as exc:
        raise InvalidParameterError(f"invalid device config {source}: {exc}") from exc
    return config.to_device()


def load_device(ref: Union[str, Path]) -> DeviceModel:
    """
    按预设名或文件路径加载器件.

    Raises:
        UsageError: 既不是预设也不是存在的文件
        InvalidParameterError: 配置校验失败
    """
    name = str(ref)
    if name in list_presets():
        text = resources.files(PRESET_PACKAGE).joinpath(f"{name}.json").read_text(encoding="utf-8")
        logger.debug(f"Loaded device preset '{name}'")
        return parse_device(text, source=f"preset {name}")

    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"'{name}' is neither a device preset ({', '.join(list_presets())}) nor a file")
    logger.debug(f"Loading device config {path}")
    return parse_device(path.read_text(encoding="utf-8"), source=str(path))


def dump_device(device: DeviceModel) -> str:
    """DeviceModel -> 配置 JSON (与 load_device 互逆)."""
    geo, circuit = device.geometry, device.circuit
    config = DeviceConfig(
        name=device.name,
        w_um=geo.w_um,
        h_um=geo.h_um,
        eta=geo.eta,
        n_p=geo.n_p,
        n_j=geo.n_j,
        l_nm=geo.l_nm,
        lj_ph=circuit.lj_ph,
        cj_ff=circuit.cj_ff,
        cg_ff=circuit.cg_ff,
        bc_par_mt=device.bc_par_mt,
        bc_perp_mt=device.bc_perp_mt,
        tc_k=device.tc_k,
        chi=device.chi.chi,
        fp0_ghz=device.fp0_ghz,
        b_phi1_mt=device.b_phi1_mt,
        b_phi2_mt=device.b_phi2_mt,
        chi_par2=device.chi_par2,
    )
    return json.dumps(config.model_dump(exclude_none=True), indent=2)
