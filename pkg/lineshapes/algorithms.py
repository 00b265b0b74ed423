# lineshapes/algorithms.py
"""
退相干函数计算
- Drude 谱密度：Matsubara 求和的解析形式
- 其他谱密度：复合 Gauss-Legendre 积分，对整个时间网格向量化
- 由基函数和耦合系数组装全部本征态对的退相干表
"""

import logging
import math

import numpy as np
from scipy.special import digamma, zeta

from excitons.exceptions import ConfigurationError, DomainError, NumericalError
from excitons.models import UNITS, DrudeDensity
from excitons.quadrature import adaptive_quad

from .models import PhiBase, DephasingTable

logger = logging.getLogger(__name__)

# Matsubara 尾部截断：尾部上界 < MATSUBARA_TOLERANCE·|部分和|
MATSUBARA_TOLERANCE = 1e-12
MATSUBARA_MAX_TERMS = 1_000_000
MATSUBARA_BLOCK = 256
MATSUBARA_MAX_BLOCK = 4096
# |βħω_c − 2πn| 不得小于该值
POLE_GUARD = 1e-6
# 复合 Gauss-Legendre：每个面板的节点数
PANEL_ORDER = 16
# 面板宽度不超过最短振荡周期的该比例
PANEL_PERIOD_FRACTION = 0.25
# [0, ν_tail] 上均匀面板的最少个数
MIN_PANELS = 128
# 向零点与尖锐结构几何加密的层数
GRADING_LEVELS = 24
# 尾部振荡段覆盖的周期数 K，之后改用渐近式
TAIL_PERIODS = 16
# 渐近式中 g'(X) 的中心差分步长（相对 X）
ASYMPTOTIC_STEP = 1e-3
# 单次向量化计算的 时间点×节点 上限
CHUNK_ELEMENTS = 2_000_000
# |x| 小于该值时 sin x − x 用级数
SERIES_THRESHOLD = 1e-3
# x = βħω_c/2π 小于该值时闭式求和改用 ζ 级数
SMALL_RATIO = 1e-4


def _check_times(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise DomainError('时间网格必须是一维数组')
    if np.any(times < 0) or not np.all(np.isfinite(times)):
        raise DomainError('时间网格必须是有限的非负数')
    return times


def _frozen(array):
    array.setflags(write=False)
    return array


# ---------------------------
# Drude 解析形式
# ---------------------------
def _closed_form_sums(x, nu1):
    """
    Σ_n 1/(ν_n²−ω_c²) 与 Σ_n 1/(ν_n(ν_n²−ω_c²)) 的闭式，x = ω_c/ν₁
    """
    if x < SMALL_RATIO:
        linear = (zeta(2) + zeta(4) * x ** 2) / nu1 ** 2
        constant = (zeta(3) + zeta(5) * x ** 2) / nu1 ** 3
        return linear, constant
    pi_x = math.pi * x
    linear = (1.0 - pi_x / math.tan(pi_x)) / (2.0 * x ** 2) / nu1 ** 2
    constant = -(digamma(1.0 - x) + digamma(1.0 + x) + 2.0 * np.euler_gamma) / (2.0 * x ** 2) / nu1 ** 3
    return linear, constant


def matsubara_sum(times, wc, nu1, tail_tolerance=MATSUBARA_TOLERANCE, max_terms=MATSUBARA_MAX_TERMS):
    """
    S(t) = Σ_{n≥1} (e^{−ν_n t} + ν_n t − 1)/(ν_n(ν_n² − ω_c²))，ν_n = n·ν₁

    线性项与常数项用闭式求和，只有 Σ e^{−ν_n t}/(ν_n(ν_n²−ω_c²)) 逐项累加；
    分块累加直到尾部上界低于 tail_tolerance·|S(t)|

    :param times: 时间网格（fs）
    :param wc: ω_c（rad/fs）
    :param nu1: 第一个 Matsubara 频率（rad/fs）
    :return: (S(t) 数组, 实际使用的项数)
    :raises NumericalError: 达到 max_terms 仍未满足容差
    """
    x = wc / nu1
    linear, constant = _closed_form_sums(x, nu1)
    result = np.zeros_like(times)
    positive = times > 0
    t = times[positive]
    partial = t * linear - constant

    active = np.ones(t.shape, dtype=bool)
    used = 0
    block = MATSUBARA_BLOCK
    while active.any():
        if used >= max_terms:
            idx = np.flatnonzero(active)
            nu_next = (used + 1) * nu1
            bound = (np.exp(-nu_next * t[idx]) / (-np.expm1(-nu1 * t[idx]))
                     / (nu_next * (nu_next ** 2 - wc ** 2)))
            raise NumericalError(
                f'Matsubara 求和达到 {max_terms} 项仍未收敛',
                achieved_tolerance=float(np.max(bound / np.abs(partial[idx]))),
            )
        n = np.arange(used + 1, min(used + block, max_terms) + 1, dtype=float)
        nu = n * nu1
        weights = 1.0 / (nu * (nu ** 2 - wc ** 2))
        idx = np.flatnonzero(active)
        partial[idx] += np.exp(-np.outer(t[idx], nu)) @ weights
        used = int(n[-1])
        block = min(2 * block, MATSUBARA_MAX_BLOCK)

        nu_next = (used + 1) * nu1
        if nu_next <= wc:
            continue
        bound = (np.exp(-nu_next * t[idx]) / (-np.expm1(-nu1 * t[idx]))
                 / (nu_next * (nu_next ** 2 - wc ** 2)))
        active[idx[bound <= tail_tolerance * np.abs(partial[idx])]] = False

    result[positive] = partial
    return result, used


def phi_base_drude(reorganization, cutoff, temperature, times, tail_tolerance=MATSUBARA_TOLERANCE):
    """
    Drude 谱密度的解析退相干基函数

    :param reorganization: λ（cm⁻¹）
    :param cutoff: ω_c（cm⁻¹）
    :param temperature: T（K）
    :param times: 时间网格（fs）
    :param tail_tolerance: Matsubara 尾部相对容差
    :return: PhiBase
    :raises ConfigurationError: βħω_c 距离某个 2πn 不足 1e-6
    """
    if not (reorganization > 0 and cutoff > 0 and temperature > 0):
        raise ConfigurationError('λ、ω_c 与温度都必须为正数')
    times = _check_times(times)

    beta_wc = UNITS.dimensionless_thermal(cutoff, temperature)
    pole = round(beta_wc / (2.0 * math.pi))
    if pole >= 1 and abs(beta_wc - 2.0 * math.pi * pole) <= POLE_GUARD:
        raise ConfigurationError(
            f'βħω_c = {beta_wc:.9g} 与第 {pole} 个 Matsubara 频率重合，cot(βħω_c/2) 发散')

    lam = UNITS.angular(reorganization)
    wc = UNITS.angular(cutoff)
    kt = UNITS.thermal_frequency(temperature)
    nu1 = 2.0 * math.pi * kt

    shape = np.expm1(-wc * times) + wc * times
    series, terms = matsubara_sum(times, wc, nu1, tail_tolerance=tail_tolerance)
    re0 = (lam / wc) / math.tan(beta_wc / 2.0) * shape + 4.0 * lam * wc * kt * series
    im0 = -(lam / wc) * shape
    logger.debug('Drude 退相干基函数：T=%s K，βħω_c=%.6g，Matsubara 项数 %d',
                 temperature, beta_wc, terms)
    return PhiBase(times=_frozen(times.copy()), re0=_frozen(re0),
                   im0=_frozen(im0), method='drude-analytic')


# ---------------------------
# 通用数值积分
# ---------------------------
def _panel_rule(edges, order):
    """复合 Gauss-Legendre：edges 为面板端点，返回全部节点与权重"""
    x, w = np.polynomial.legendre.leggauss(order)
    left, right = edges[:-1, None], edges[1:, None]
    half = 0.5 * (right - left)
    nodes = 0.5 * (left + right) + half * x[None, :]
    return nodes.ravel(), (half * w[None, :]).ravel()


def _graded_edges(start, stop, width, centres):
    """[start, stop] 上宽度不超过 width 的面板端点，在 centres 两侧按 1/2 几何加密"""
    count = max(int(math.ceil((stop - start) / width)), 1)
    pieces = [np.linspace(start, stop, count + 1)]
    offsets = width * 0.5 ** np.arange(1, GRADING_LEVELS + 1)
    for centre in centres:
        pieces.append(centre + offsets)
        pieces.append(centre - offsets)
    edges = np.concatenate(pieces)
    return np.unique(edges[(edges >= start) & (edges <= stop)])


def _time_chunks(count, nodes):
    """按 CHUNK_ELEMENTS 切分时间下标"""
    step = max(CHUNK_ELEMENTS // max(nodes, 1), 1)
    for begin in range(0, count, step):
        yield slice(begin, min(begin + step, count))


def _sin_minus_x(x):
    """sin x − x，小 |x| 用级数"""
    x3 = x * x * x
    series = -x3 / 6.0 + x3 * x * x / 120.0
    return np.where(np.abs(x) < SERIES_THRESHOLD, series, np.sin(x) - x)


def phi_base_numeric(sd, temperature, times, epsrel=1e-10, order=PANEL_ORDER):
    """
    任意谱密度的退相干基函数（数值积分，对整个时间网格向量化）

    以波数 ν 为积分变量，a = 2πc·t：
    re0(t) = ∫₀^∞ J(ν)·(1 − cos aν)/ν²·coth(c2·ν/2T) dν
    im0(t) = ∫₀^∞ J(ν)·(sin aν − aν)/ν² dν

    - [0, ν_tail]：复合 Gauss-Legendre，面板宽度不超过最高频振荡的 1/4 周期，
      在零点与谱密度尖锐结构处几何加密；全部时间共用一套节点
    - [ν_tail, ∞) 的非振荡部分：自适应积分，每个热浴只算一次
    - [ν_tail, X]，X = ν_tail + 2πK/a：换元 s = a(ν − ν_tail) 后所有时间共用 s 节点
    - [X, ∞)：分部积分渐近式的前两项

    :param sd: SpectralDensity
    :param temperature: T（K）
    :param times: 时间网格（fs）
    :param epsrel: 非振荡尾部积分的相对容差
    :param order: 每个面板的 Gauss-Legendre 节点数
    :return: PhiBase
    :raises NumericalError: 尾部积分不收敛或结果非有限
    """
    if not temperature > 0:
        raise ConfigurationError(f'温度必须为正数，收到 {temperature}')
    times = _check_times(times)
    half_beta = UNITS.c2 / (2.0 * temperature)
    cut = sd.tail_start()
    evaluate = sd._evaluate

    def thermal(nu):
        return evaluate(nu) / (nu * nu * np.tanh(half_beta * nu))

    def coupling(nu):
        return evaluate(nu) / (nu * nu)

    # 非振荡尾部
    thermal_tail, _ = adaptive_quad(thermal, cut, np.inf, epsrel=epsrel)
    linear_tail, _ = adaptive_quad(lambda nu: evaluate(nu) / nu, cut, np.inf, epsrel=epsrel)

    re0 = np.zeros_like(times)
    im0 = np.zeros_like(times)
    positive = np.flatnonzero(times > 0)
    if positive.size == 0:
        return PhiBase(times=_frozen(times.copy()), re0=_frozen(re0),
                       im0=_frozen(im0), method='quadrature')
    a = UNITS.angular(times[positive])

    # 有限段 [0, ν_tail]
    width = min(cut / MIN_PANELS, PANEL_PERIOD_FRACTION * 2.0 * math.pi / float(a.max()))
    centres = [0.0] + [p for p in sd.breakpoints() if 0 < p < cut]
    nu, w = _panel_rule(_graded_edges(0.0, cut, width, centres), order)
    head_thermal = w * thermal(nu)
    head_coupling = w * coupling(nu)

    # 尾部振荡段的 s 节点
    span = 2.0 * math.pi * TAIL_PERIODS
    s, ws = _panel_rule(_graded_edges(0.0, span, 0.5 * math.pi, [0.0]), order)

    for chunk in _time_chunks(a.size, max(nu.size, s.size)):
        ac = a[chunk, None]
        x = ac * nu[None, :]
        head_re = (2.0 * np.sin(0.5 * x) ** 2) @ head_thermal
        head_im = _sin_minus_x(x) @ head_coupling

        phase = ac * cut + s[None, :]
        nodes = cut + s[None, :] / ac
        middle_cos = (ws * thermal(nodes) * np.cos(phase)).sum(axis=1) / ac[:, 0]
        middle_sin = (ws * coupling(nodes) * np.sin(phase)).sum(axis=1) / ac[:, 0]

        # [X, ∞)：∫ g·e^{iaν} ≈ e^{iaX}·(i·g(X)/a − g'(X)/a²)，e^{iaX} = e^{ia·ν_tail}
        ar = ac[:, 0]
        end = cut + span / ar
        step = ASYMPTOTIC_STEP * end
        carrier = np.exp(1j * ar * cut)
        far_cos = (carrier * _asymptotic(thermal, end, step, ar)).real
        far_sin = (carrier * _asymptotic(coupling, end, step, ar)).imag

        index = positive[chunk]
        re0[index] = head_re + thermal_tail - middle_cos - far_cos
        im0[index] = head_im + middle_sin + far_sin - ar * linear_tail

    if not (np.all(np.isfinite(re0)) and np.all(np.isfinite(im0))):
        raise NumericalError(f'{sd} 的退相干积分出现非有限值', achieved_tolerance=float('inf'))
    logger.debug('数值退相干基函数：%s，T=%s K，%d 个时间点，有限段 %d 个节点',
                 sd, temperature, times.shape[0], nu.size)
    return PhiBase(times=_frozen(times.copy()), re0=_frozen(re0),
                   im0=_frozen(im0), method='quadrature')


def _asymptotic(g, end, step, a):
    """i·g(X)/a − g'(X)/a²，g' 用中心差分"""
    value = g(end)
    slope = (g(end + step) - g(end - step)) / (2.0 * step)
    return 1j * value / a - slope / (a * a)



def phi_base(sd, temperature, times):
    """Drude 走解析路径，其余谱密度走数值积分"""
    if isinstance(sd, DrudeDensity):
        return phi_base_drude(sd.reorganization, sd.cutoff, temperature, times)
    return phi_base_numeric(sd, temperature, times)


def phi_base_zero(times):
    """φ ≡ 0 的基函数（closed 与 relaxation_only 模式不需要退相干积分）"""
    times = _check_times(times)
    zeros = np.zeros_like(times)
    return PhiBase(times=_frozen(times.copy()), re0=_frozen(zeros),
                   im0=_frozen(zeros.copy()), method='none')


# ---------------------------
# 退相干表
# ---------------------------
def dephasing_table(base, overlaps, correlation, eigensystem):
    """
    组装全部本征态对的 φ_nn'(t)

    Re φ_nn' = re0·Σ_ij C_ij (d_n − d_n')_i (d_n − d_n')_j
    Im φ_nn' = im0·Σ_ij C_ij (d_n,i d_n,j − d_n',i d_n',j)

    :param base: PhiBase
    :param overlaps: OverlapTensor（使用其中的梯度 d）
    :param correlation: CorrelationMatrix
    :param eigensystem: Eigensystem
    :return: DephasingTable
    """
    d = overlaps.d
    if d.shape[0] != eigensystem.n or correlation.n != d.shape[1]:
        raise ConfigurationError('本征系统、梯度与关联矩阵的维数不一致')
    delta = d[:, None, :] - d[None, :, :]
    # 半正定关联下耦合系数非负，截掉舍入误差
    re_coupling = np.maximum(correlation.bilinear(delta, delta), 0.0)
    self_coupling = correlation.bilinear(d, d)
    im_coupling = self_coupling[:, None] - self_coupling[None, :]

    phi = (re_coupling[:, :, None] * base.re0[None, None, :]
           + 1j * im_coupling[:, :, None] * base.im0[None, None, :])
    return DephasingTable(
        times=base.times,
        phi=_frozen(phi),
        omega=_frozen(eigensystem.transition_frequencies()),
        re_coupling=_frozen(re_coupling),
        im_coupling=_frozen(im_coupling),
    )


def decoherence_factor(table, n, n_prime, t):
    """
    e^{−iω_nn't}·e^{−φ_nn'(t)}

    :param n, n_prime: 本征态下标（从 0 开始）
    :param t: 网格上的时间（fs）
    :raises DomainError: t 不在网格上
    """
    index = table.time_index(t)
    if n == n_prime:
        return 1.0 + 0.0j
    time = table.times[index]
    return complex(np.exp(-1j * table.omega[n, n_prime] * time - table.phi[n, n_prime, index]))
