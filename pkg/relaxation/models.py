# relaxation/models.py
"""
布居弛豫数据模型
"""

from dataclasses import dataclass

import numpy as np

from excitons.models import UNITS


@dataclass(frozen=True, eq=False)
class RateMatrix:
    """
    本征态之间的弛豫速率

    字段说明：
    - gamma: gamma[m][n] = Γ_mn，从 n 到 m 的速率（fs⁻¹），对角为 0
    - generator: 布居方程生成元，g[m][n] = Γ_mn，g[m][m] = −Σ_n Γ_nm
    - energies: 本征能量（cm⁻¹），用于平衡分布
    - temperature: 温度（K）
    """
    gamma: np.ndarray
    generator: np.ndarray
    energies: np.ndarray
    temperature: float

    def __str__(self):
        return f'RateMatrix({self.gamma.shape[0]} 个能级, {self.temperature} K)'

    def equilibrium(self):
        """玻尔兹曼分布 π_m ∝ e^{−βε_m}，是生成元的零空间向量"""
        shifted = UNITS.dimensionless_thermal(self.energies - self.energies.min(), self.temperature)
        weights = np.exp(-shifted)
        return weights / weights.sum()


@dataclass(frozen=True, eq=False)
class SecularRates:
    """
    相干衰减速率 κ[m][n] = (Γ_mn + Γ_nm)/2（fs⁻¹），对称，对角为 0
    """
    kappa: np.ndarray

    def __str__(self):
        return f'SecularRates({self.kappa.shape[0]} 个能级)'
