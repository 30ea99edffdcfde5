"""物理常数与单位换算 (SI 内部计算，接口处换算一次)."""

from scipy import constants as sc

# 磁通量子 (Wb)，固定数值保证黄金测试稳定
PHI0 = 2.067833848e-15

E_CHARGE = sc.e
HBAR = sc.hbar
MU_B = sc.physical_constants["Bohr magneton"][0]

MT = 1e-3  # mT -> T
NM = 1e-9  # nm -> m
UM = 1e-6  # µm -> m
PH = 1e-12  # pH -> H
FF = 1e-15  # fF -> F
GHZ = 1e9  # GHz -> Hz
UEV = 1e-6 * sc.e  # µeV -> J
