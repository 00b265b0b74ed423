# dynamics/models.py
"""
约化密度矩阵轨迹
"""

from dataclasses import dataclass

import numpy as np

from excitons.exceptions import DomainError


@dataclass(frozen=True, eq=False)
class DensityTrajectory:
    """
    位点基约化密度矩阵随时间的演化

    字段说明：
    - times: 时间网格（fs）
    - rho: rho[t][b][c]，复数，厄米且迹为 1
    - mode: 计算模式
    - labels: 位点名称
    - eigen_rho: 本征基密度矩阵（仅在调试时保存，否则为 None）
    """
    times: np.ndarray
    rho: np.ndarray
    mode: str
    labels: tuple
    eigen_rho: np.ndarray = None

    def __str__(self):
        return f'DensityTrajectory({self.mode}, {len(self.labels)} 位点, {self.times.shape[0]} 个时间点)'

    @property
    def n_sites(self):
        return self.rho.shape[1]

    def populations(self):
        """位点布居 ρ_bb(t)，形状 (T, N)"""
        return np.real(np.diagonal(self.rho, axis1=1, axis2=2)).copy()

    def coherence(self, b, c):
        """
        ρ_bc(t)

        :param b, c: 位点编号（从 1 开始）
        :raises DomainError: 编号越界
        """
        n = self.n_sites
        if not (1 <= b <= n and 1 <= c <= n):
            raise DomainError(f'位点编号必须在 1 到 {n} 之间，收到 ({b}, {c})')
        return self.rho[:, b - 1, c - 1].copy()
