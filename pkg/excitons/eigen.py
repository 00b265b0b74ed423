# excitons/eigen.py
"""
哈密顿量对角化与绝热基耦合量
- diagonalize: 循环 Jacobi 旋转求全部本征值和本征矢
- overlap_products: 重叠乘积 k[n][m][j] = ⟨n|j⟩⟨j|m⟩ 与能级梯度 d[m][j]
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalError
from .models import UNITS

logger = logging.getLogger(__name__)

# 收敛判据：非对角 Frobenius 范数 < JACOBI_TOLERANCE·‖H‖
JACOBI_TOLERANCE = 1e-13
MAX_SWEEPS = 100


def _frozen(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Eigensystem:
    """
    绝热能级与本征矢

    字段说明：
    - energies: ε_m⁰（cm⁻¹），升序
    - u: u[j][m] = ⟨j|m⟩，每列是一个本征矢，列内绝对值最大的元素为正
    """
    energies: np.ndarray
    u: np.ndarray

    def __str__(self):
        return f'Eigensystem({self.n} 个能级)'

    @property
    def n(self):
        return self.energies.shape[0]

    def transition_frequencies(self):
        """ω_mn = (ε_m − ε_n)/ħ，单位 rad/fs，反对称矩阵"""
        return UNITS.angular(self.energies[:, None] - self.energies[None, :])

    def site_weights(self):
        """u[j][m]²：本征态 m 在位点 j 上的权重"""
        return self.u ** 2

    def boltzmann_weights(self, temperature):
        """本征态的玻尔兹曼分布 e^{−βε_m}/Z"""
        shifted = UNITS.dimensionless_thermal(self.energies - self.energies[0], temperature)
        weights = np.exp(-shifted)
        return weights / weights.sum()


@dataclass(frozen=True, eq=False)
class OverlapTensor:
    """
    字段说明：
    - k: k[n][m][j] = u[j][n]·u[j][m]
    - d: d[m][j] = k[m][m][j] = ∂ε_m/∂Q_j，每行和为 1
    """
    k: np.ndarray
    d: np.ndarray


def _off_norm(a):
    return math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))


def _rotate(a, v, p, q):
    """消去 a[p][q] 的一次 Jacobi 旋转，原地更新 a 与 v"""
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    sign = 1.0 if theta >= 0 else -1.0
    t = sign / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0

    vec_p = v[:, p].copy()
    vec_q = v[:, q].copy()
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q


def diagonalize(hamiltonian, tolerance=JACOBI_TOLERANCE, max_sweeps=MAX_SWEEPS):
    """
    循环 Jacobi 对角化

    :param hamiltonian: ExcitonHamiltonian
    :param tolerance: 相对收敛容差
    :param max_sweeps: 最多扫描次数
    :return: Eigensystem（升序，符号约定已应用）
    :raises NumericalError: 超过最大扫描次数仍未收敛
    """
    a = np.array(hamiltonian.h, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    threshold = tolerance * float(np.linalg.norm(a))

    sweeps = 0
    off = _off_norm(a)
    while off > threshold:
        if sweeps == max_sweeps:
            raise NumericalError(
                f'Jacobi 对角化 {max_sweeps} 次扫描后仍未收敛',
                achieved_tolerance=off / float(np.linalg.norm(a)),
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
        sweeps += 1
        off = _off_norm(a)
    logger.debug('Jacobi 对角化完成：%d 次扫描，非对角范数 %.3e', sweeps, off)

    energies = np.diag(a).copy()
    order = np.argsort(energies, kind='stable')
    energies = energies[order]
    v = v[:, order]

    # 每列绝对值最大的元素取正
    largest = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[largest, np.arange(n)] < 0, -1.0, 1.0)
    v = v * signs[None, :]
    return Eigensystem(energies=_frozen(energies), u=_frozen(np.ascontiguousarray(v)))


def overlap_products(eigensystem):
    """
    计算重叠乘积张量

    :param eigensystem: Eigensystem
    :return: OverlapTensor，k[n][m][j] = u[j][n]·u[j][m]，d[m][j] = u[j][m]²
    """
    u = eigensystem.u
    k = np.einsum('jn,jm->nmj', u, u)
    d = np.ascontiguousarray((u ** 2).T)
    return OverlapTensor(k=_frozen(k), d=_frozen(d))
