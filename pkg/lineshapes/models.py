# lineshapes/models.py
"""
退相干线形数据模型
PhiBase 只依赖热浴与时间网格，DephasingTable 再乘上各本征态对的耦合系数
"""

from dataclasses import dataclass

import numpy as np

from excitons.exceptions import DomainError

# 判断时间是否落在网格上的容差（fs）
GRID_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class PhiBase:
    """
    退相干函数的公共基函数

    字段说明：
    - times: 时间网格（fs）
    - re0: 实部基函数，乘以耦合系数 Σ C_ij Δ_i Δ_j 得到 Re φ
    - im0: 虚部基函数，乘以 Σ C_ij (d_n,i d_n,j − d_n',i d_n',j) 得到 Im φ
    - method: 'drude-analytic' 或 'quadrature'
    """
    times: np.ndarray
    re0: np.ndarray
    im0: np.ndarray
    method: str

    def __str__(self):
        return f'PhiBase({self.method}, {self.times.shape[0]} 个时间点)'


@dataclass(frozen=True, eq=False)
class DephasingTable:
    """
    全部本征态对的退相干函数

    字段说明：
    - times: 时间网格（fs）
    - phi: phi[n][n'][t]，复数
    - omega: omega[n][n'] = (ε_n − ε_n')/ħ，rad/fs
    - re_coupling, im_coupling: 两个耦合系数矩阵
    """
    times: np.ndarray
    phi: np.ndarray
    omega: np.ndarray
    re_coupling: np.ndarray
    im_coupling: np.ndarray

    def __str__(self):
        return f'DephasingTable({self.phi.shape[0]} 个本征态)'

    def factors(self):
        """全部 e^{−iω_nn't}·e^{−φ_nn'(t)}，形状 (N, N, T)"""
        phase = self.omega[:, :, None] * self.times[None, None, :]
        return np.exp(-1j * phase - self.phi)

    def time_index(self, t):
        """
        时间 t 在网格中的下标
        :raises DomainError: t 不在网格上
        """
        index = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[index] - t) > GRID_TOLERANCE:
            raise DomainError(f'时间 {t} fs 不在网格上')
        return index
