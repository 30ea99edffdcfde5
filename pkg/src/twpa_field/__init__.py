"""
TWPA Field Model - 光子晶体约瑟夫森行波参量放大器的磁场/温度模型.

该模块提供:
- physics: 能隙抑制、Fraunhofer 调制、阵列模型 (f_p、带隙、阻抗)
- simulation: 色散能带、ABCD 级联 S 参数、频谱特征提取
- fitting: Nelder-Mead 与各拟合流程
- gain: 增益指标流程与泵浦优化

使用示例:
    from twpa_field.io import load_device
    from twpa_field.physics import bandgap_center
    from twpa_field.schemas import FieldAxis, FieldPoint

    device = load_device("twpa_a")
    print(bandgap_center(device, FieldPoint(FieldAxis.PAR1, 0.0)))
"""

__version__ = "1.0.0"

from twpa_field.errors import TwpaModelError
from twpa_field.schemas import DeviceModel, FieldAxis, FieldPoint, GapModelKind, Spectrum

__all__ = [
    "__version__",
    "TwpaModelError",
    "DeviceModel",
    "FieldAxis",
    "FieldPoint",
    "GapModelKind",
    "Spectrum",
]
