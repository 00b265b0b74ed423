# dynamics/algorithms.py
"""
时间演化与密度矩阵组装

布居块与相干块在本征基中解耦：
- 布居 w(t) = e^{g·t}·w(0)
- 相干 σ_nn'(t) = ⟨n|a⟩⟨a|n'⟩·e^{−iω_nn't}·e^{−φ_nn'(t)}·e^{−κ_nn't}
再变换回位点基得到 ρ_bc(t)
"""

import logging

import numpy as np
from scipy.linalg import expm

from excitons.exceptions import ConfigurationError, DomainError, NumericalError
from excitons.models import (
    MODE_CLOSED, MODE_DECOHERENCE_ONLY, MODE_RELAXATION_ONLY, UNITS,
)

from .models import DensityTrajectory

logger = logging.getLogger(__name__)

# 初始概率分布的归一化容差
PROBABILITY_TOLERANCE = 1e-12
# 均匀网格判据：相邻间隔的相对偏差
UNIFORM_TOLERANCE = 1e-9


def _is_uniform(times):
    if times.shape[0] < 3:
        return True
    steps = np.diff(times)
    return bool(np.all(np.abs(steps - steps[0]) <= UNIFORM_TOLERANCE * abs(steps[0])))


def propagate_populations(generator, w0, times):
    """
    w(t) = e^{g·t}·w0

    均匀网格上先算 e^{g·t₀}·w0，之后逐步乘以 e^{g·Δt}；
    非均匀网格逐点计算矩阵指数

    :param generator: N×N 生成元（每列和为 0）
    :param w0: 初始概率向量
    :param times: 时间网格（fs）
    :return: 形状 (T, N) 的布居
    :raises NumericalError: 生成元含非有限数值
    :raises DomainError: w0 不是概率分布
    """
    g = np.asarray(generator, dtype=float)
    w0 = np.asarray(w0, dtype=float)
    times = np.asarray(times, dtype=float)
    if not np.all(np.isfinite(g)):
        raise NumericalError('布居生成元含有非有限数值')
    if np.any(w0 < 0) or abs(w0.sum() - 1.0) > PROBABILITY_TOLERANCE:
        raise DomainError('初始布居必须非负且和为 1')

    result = np.empty((times.shape[0], w0.shape[0]))
    if times.shape[0] == 0:
        return result
    if not np.any(g):
        result[:] = w0
        return result

    if _is_uniform(times):
        w = expm(g * times[0]) @ w0
        result[0] = w
        if times.shape[0] > 1:
            step = expm(g * (times[1] - times[0]))
            for index in range(1, times.shape[0]):
                w = step @ w
                result[index] = w
    else:
        for index, t in enumerate(times):
            result[index] = expm(g * t) @ w0
    return result


def assemble_density(config, eigensystem, table, rates, secular, include_eigenbasis=False):
    """
    组装位点基密度矩阵轨迹

    ρ_bc(t) = Σ_m u[b][m]·u[c][m]·w_m(t)
            + Σ_{n≠n'} u[b][n]·u[a][n]·u[a][n']·u[c][n']·e^{−iω_nn't − φ_nn'(t) − κ_nn't}

    模式开关：
    - closed: φ = 0，κ = 0，g = 0
    - decoherence_only: κ = 0，g = 0
    - relaxation_only: φ = 0
    - full: 全部保留

    :param config: SimulationConfig
    :param eigensystem: Eigensystem
    :param table: DephasingTable（时间网格须与 config 一致）
    :param rates: RateMatrix
    :param secular: SecularRates
    :param include_eigenbasis: 是否同时保存本征基密度矩阵
    :return: DensityTrajectory
    """
    times = config.times()
    if table.times.shape != times.shape or not np.allclose(table.times, times, rtol=0, atol=1e-9):
        raise ConfigurationError('退相干表的时间网格与配置不一致')
    n = eigensystem.n
    if n != config.hamiltonian.n_sites:
        raise ConfigurationError('本征系统维数与哈密顿量不一致')

    mode = config.mode
    u = eigensystem.u
    amplitudes = u[config.initial_site - 1]
    w0 = amplitudes ** 2
    w0 = w0 / w0.sum()

    keep_relaxation = mode not in (MODE_CLOSED, MODE_DECOHERENCE_ONLY)
    keep_dephasing = mode not in (MODE_CLOSED, MODE_RELAXATION_ONLY)

    generator = rates.generator if keep_relaxation else np.zeros((n, n))
    populations = propagate_populations(generator, w0, times)

    exponent = 1j * table.omega[:, :, None] * times[None, None, :]
    if keep_dephasing:
        exponent = exponent + table.phi
    if keep_relaxation:
        exponent = exponent + secular.kappa[:, :, None] * times[None, None, :]
    factors = np.exp(-exponent).transpose(2, 0, 1)

    weights = np.outer(amplitudes, amplitudes)
    np.fill_diagonal(weights, 0.0)
    coherences = weights[None, :, :] * factors

    rho = (np.einsum('bm,tm,cm->tbc', u, populations, u)
           + np.einsum('bn,tnk,ck->tbc', u, coherences, u))

    eigen_rho = None
    if include_eigenbasis:
        eigen_rho = coherences.copy()
        index = np.arange(n)
        eigen_rho[:, index, index] = populations

    logger.debug('密度矩阵组装完成：%s 模式，%d 个时间点', mode, times.shape[0])
    return DensityTrajectory(
        times=times, rho=rho, mode=mode,
        labels=config.hamiltonian.labels, eigen_rho=eigen_rho,
    )


def equilibrium_site_populations(eigensystem, temperature):
    """
    长时间极限的位点布居 Σ_m u[b][m]²·e^{−βε_m}/Z

    :param eigensystem: Eigensystem
    :param temperature: T（K）
    """
    if not temperature > 0:
        raise ConfigurationError(f'温度必须为正数，收到 {temperature}')
    return eigensystem.site_weights() @ eigensystem.boltzmann_weights(temperature)


def unitary_reference(hamiltonian, initial_site, times):
    """
    无环境时的位点布居 |⟨b|e^{−iHt/ħ}|a⟩|²
    使用 numpy.linalg.eigh 的谱分解，与 Jacobi 路径相互独立

    :param hamiltonian: ExcitonHamiltonian
    :param initial_site: 初始位点（从 1 开始）
    :param times: 时间网格（fs）
    :return: 形状 (T, N) 的布居
    """
    n = hamiltonian.n_sites
    if not 1 <= initial_site <= n:
        raise ConfigurationError(f'初始位点必须在 1 到 {n} 之间，收到 {initial_site}')
    energies, vectors = np.linalg.eigh(hamiltonian.h)
    times = np.asarray(times, dtype=float)
    phases = np.exp(-1j * UNITS.angular(np.outer(times, energies)))
    amplitudes = (vectors[None, :, :] * (vectors[initial_site - 1] * phases)[:, None, :]).sum(axis=2)
    return np.abs(amplitudes) ** 2
