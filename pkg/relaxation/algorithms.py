# relaxation/algorithms.py
"""
布居弛豫速率与主方程生成元

速率公式（ε_m > ε_n）：
    Γ_mn = (2π/ħ)·J(ω_mn)/(e^{βħω_mn} − 1)·Σ_ij C_ij k_i k_j    （上行）
    Γ_nm = e^{βħω_mn}·Γ_mn                                     （下行）
其中 k_j = k[n][m][j]；能量用波数时 J/ħ 换算为 2πc·J（rad/fs）
"""

import logging
import math

import numpy as np

from excitons.exceptions import ConfigurationError, DomainError
from excitons.models import UNITS

from .models import RateMatrix, SecularRates

logger = logging.getLogger(__name__)

# 简并判据（rad/fs）：低于该能隙时使用 ω → 0 的解析极限
DEGENERACY_THRESHOLD = 1e-9

UPHILL = 'uphill'
DOWNHILL = 'downhill'


def _frozen(array):
    array.setflags(write=False)
    return array


def _bose_factors(x):
    """(1/(e^x − 1), 1/(1 − e^{−x}))，x 很大时上行因子为 0"""
    with np.errstate(over='ignore'):
        up = 1.0 / np.expm1(x)
    down = 1.0 / (-np.expm1(-x))
    return float(up), float(down)


def occupation_factor(j_value, omega, temperature, sign):
    """
    主方程中的 X 系数

    :param j_value: J(ω)（cm⁻¹）
    :param omega: 跃迁角频率 ω（rad/fs），必须为正
    :param temperature: T（K）
    :param sign: 'uphill' 为 (π/ħ)·J·ω²/(e^{βħω} − 1)；'downhill' 为 (π/ħ)·J·ω²/(1 − e^{−βħω})
    :return: X（fs⁻³）
    :raises DomainError: ω ≤ 0（简并情形应走 gamma_rates 的极限分支）
    """
    if not omega > 0:
        raise DomainError(f'occupation_factor 要求 ω > 0，收到 {omega}')
    if sign not in (UPHILL, DOWNHILL):
        raise ConfigurationError(f'未知的方向 {sign!r}，可选 uphill / downhill')
    x = omega / UNITS.thermal_frequency(temperature)
    up, down = _bose_factors(x)
    prefactor = math.pi * UNITS.two_pi_c * j_value * omega * omega
    return prefactor * (up if sign == UPHILL else down)


def _generator(gamma):
    return gamma - np.diag(gamma.sum(axis=0))


def gamma_rates(eigensystem, overlaps, sd, temperature, correlation,
                degeneracy=DEGENERACY_THRESHOLD):
    """
    全部本征态对的弛豫速率

    :param eigensystem: Eigensystem（升序能量）
    :param overlaps: OverlapTensor
    :param sd: SpectralDensity
    :param temperature: T（K）
    :param correlation: CorrelationMatrix
    :param degeneracy: 简并判据（rad/fs）
    :return: RateMatrix
    """
    if not temperature > 0:
        raise ConfigurationError(f'温度必须为正数，收到 {temperature}')
    n = eigensystem.n
    energies = eigensystem.energies
    omega = eigensystem.transition_frequencies()
    prefactor = 2.0 * math.pi * UNITS.two_pi_c
    gamma = np.zeros((n, n))

    for lo in range(n):
        for hi in range(lo + 1, n):
            coupling = max(float(correlation.bilinear(overlaps.k[lo, hi], overlaps.k[lo, hi])), 0.0)
            if coupling == 0.0:
                continue
            if abs(omega[hi, lo]) < degeneracy:
                # J(ν)/(e^{c2ν/T} − 1) → J'(0)·T/c2
                rate = prefactor * sd.slope_at_zero() * temperature / UNITS.c2 * coupling
                gamma[hi, lo] = gamma[lo, hi] = rate
                continue
            gap = energies[hi] - energies[lo]
            up, down = _bose_factors(UNITS.dimensionless_thermal(gap, temperature))
            strength = prefactor * sd.evaluate(gap) * coupling
            gamma[hi, lo] = strength * up
            gamma[lo, hi] = strength * down

    logger.debug('弛豫速率：T=%s K，最大 Γ = %.3e fs⁻¹', temperature, gamma.max())
    return RateMatrix(
        gamma=_frozen(gamma),
        generator=_frozen(_generator(gamma)),
        energies=energies,
        temperature=temperature,
    )


def population_generator(rates):
    """
    布居方程 dw/dt = g·w 的生成元

    :param rates: RateMatrix
    :return: g，g[m][n] = Γ_mn（m ≠ n），g[m][m] = −Σ_n Γ_nm，每列和为 0
    """
    return _generator(np.asarray(rates.gamma))


def coherence_decay_rates(rates):
    """κ[m][n] = (Γ_mn + Γ_nm)/2"""
    kappa = 0.5 * (rates.gamma + rates.gamma.T)
    np.fill_diagonal(kappa, 0.0)
    return SecularRates(kappa=_frozen(kappa))


def redfield_generator(eigensystem, overlaps, sd, temperature, literal=False):
    """
    绝热基主方程的完整超算符（仅供检查，不参与动力学）

    A^j_rr' = −i·k[r][r'][j]/ω_rr'
    B[r,r',s] = Σ_j A^j_rr'·A^j_r's
    B'[r,r',s',s] = Σ_j A^j_rr'·A^j_s's

    dρ_ab/dt = −Σ_r' B[a,r',c]·X[r',c]·δ_bd − δ_ac·Σ_r' B[d,r',b]·X[r',d]
               + B'[a,c,d,b]·(X[a,c] + X[b,d])

    X[r][r'] 为 r' → r 跃迁的系数（ω_rr' > 0 时取上行公式）。
    literal=True 时增益项改用 (X[a,c] + X[d,b])，该形式不保持厄米性。

    :return: N²×N² 复矩阵 L，vec(dρ/dt) = L·vec(ρ)（行优先展开）
    :raises ConfigurationError: 存在简并能级对
    """
    n = eigensystem.n
    omega = eigensystem.transition_frequencies()
    off_diagonal = ~np.eye(n, dtype=bool)
    if np.any(np.abs(omega[off_diagonal]) < DEGENERACY_THRESHOLD):
        raise ConfigurationError('存在简并能级对，无法构造主方程超算符')

    safe_omega = np.where(off_diagonal, omega, 1.0)
    a = np.where(off_diagonal[:, :, None], -1j * overlaps.k / safe_omega[:, :, None], 0.0)
    b = np.einsum('rpj,psj->rps', a, a)
    b_prime = np.einsum('rpj,qsj->rpqs', a, a)

    x = np.zeros((n, n))
    for r in range(n):
        for rp in range(n):
            if omega[r, rp] > 0:
                gap = eigensystem.energies[r] - eigensystem.energies[rp]
                x[r, rp] = occupation_factor(sd.evaluate(gap), omega[r, rp], temperature, UPHILL)
            elif omega[rp, r] > 0:
                gap = eigensystem.energies[rp] - eigensystem.energies[r]
                x[r, rp] = occupation_factor(sd.evaluate(gap), omega[rp, r], temperature, DOWNHILL)

    eye = np.eye(n)
    loss_left = np.einsum('apc,pc->ac', b, x)
    loss_right = np.einsum('dpb,pd->db', b, x)
    if literal:
        gain = x[:, None, :, None] + x.T[None, :, None, :]
    else:
        gain = x[:, None, :, None] + x[None, :, None, :]
    # gain[a,b,c,d] = X[a,c] + X[b,d]（literal: X[a,c] + X[d,b]）
    tensor = (-np.einsum('ac,bd->abcd', loss_left, eye)
              - np.einsum('ac,db->abcd', eye, loss_right)
              + np.einsum('acdb->abcd', b_prime) * gain)
    return tensor.reshape(n * n, n * n)
