# excitons/models.py
"""
激子体系数据模型定义文件
本文件定义模拟用到的全部领域类型：单位约定、位点哈密顿量、谱密度、
浴关联矩阵、热浴参数和一次模拟的完整配置。

与数据库模型不同，这里的类型都是不可变的数值对象：
- 构造时完成全部校验，非法输入抛出 ConfigurationError
- numpy 数组构造后设为只读
- 所有运算都是纯函数，可以在多个线程中同时使用

单位约定：能量一律用波数 cm⁻¹，时间用 fs，温度用 K。
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, DomainError
from .quadrature import DEFAULT_EPSREL, adaptive_quad

logger = logging.getLogger(__name__)


# ---------------------------
# 单位约定
# ---------------------------
@dataclass(frozen=True)
class UnitSystem:
    """
    物理单位常数（CODATA 固定值，不可配置）

    字段说明：
    - c2: 第二辐射常数 hc/k_B，单位 cm·K
    - two_pi_c: 2πc，把波数 cm⁻¹ 换算为角频率 rad/fs
    """
    c2: float = field(default=1.4387769, init=False)
    two_pi_c: float = field(default=1.8836516e-4, init=False)

    def dimensionless_thermal(self, wavenumber, temperature):
        """βħω：波数 ν̃（cm⁻¹）在温度 T（K）下的无量纲热因子 c2·ν̃/T"""
        return self.c2 * wavenumber / temperature

    def angular(self, wavenumber):
        """cm⁻¹ → rad/fs"""
        return self.two_pi_c * wavenumber

    def wavenumber(self, angular):
        """rad/fs → cm⁻¹"""
        return angular / self.two_pi_c

    def thermal_frequency(self, temperature):
        """k_B·T/ħ，单位 rad/fs"""
        return self.two_pi_c * temperature / self.c2


UNITS = UnitSystem()


# ---------------------------
# 位点哈密顿量
# ---------------------------
# 对称性容差：输入矩阵与其转置的最大偏差（cm⁻¹）
SYMMETRY_TOLERANCE = 1e-9

# FMO 单体哈密顿量的上三角（含对角线），单位 cm⁻¹
# 对角元相对于 12210 cm⁻¹，该偏移不影响动力学，不保存
FMO_UPPER_TRIANGLE = (
    (240.0, -87.7, 5.5, -5.9, 6.7, -13.7, -9.9),
    (315.0, 30.8, 8.2, 0.7, 11.8, 4.3),
    (0.0, -53.5, -2.2, -9.6, 6.0),
    (130.0, -70.7, -17.0, -63.3),
    (285.0, 81.1, -1.3),
    (435.0, 39.7),
    (245.0,),
)


@dataclass(frozen=True, eq=False)
class ExcitonHamiltonian:
    """
    N 位点单激发电子哈密顿量（位点基）

    字段说明：
    - h: N×N 实对称矩阵，对角元为位点能量 ε_j，非对角元为耦合 V_ij（cm⁻¹）
    - labels: 位点名称，默认 site1 ... siteN
    """
    h: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        """校验形状、有限性与对称性，然后按 (h+hᵀ)/2 对称化"""
        h = np.array(self.h, dtype=float)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ConfigurationError(f'哈密顿量必须是方阵，实际形状 {h.shape}')
        n = h.shape[0]
        if n < 2:
            raise ConfigurationError('哈密顿量至少需要 2 个位点')
        if not np.all(np.isfinite(h)):
            raise ConfigurationError('哈密顿量含有非有限数值')
        asymmetry = float(np.max(np.abs(h - h.T)))
        if asymmetry > SYMMETRY_TOLERANCE:
            raise ConfigurationError(f'哈密顿量不对称：最大偏差 {asymmetry:.3e} cm⁻¹')
        h = 0.5 * (h + h.T)
        h.setflags(write=False)

        labels = tuple(self.labels) or tuple(f'site{j + 1}' for j in range(n))
        if len(labels) != n:
            raise ConfigurationError(f'位点名称数量 {len(labels)} 与矩阵维数 {n} 不符')
        object.__setattr__(self, 'h', h)
        object.__setattr__(self, 'labels', labels)

    def __str__(self):
        return f'ExcitonHamiltonian({self.n_sites} 位点)'

    @property
    def n_sites(self):
        """位点数 N"""
        return self.h.shape[0]

    @classmethod
    def from_upper_triangle(cls, rows, labels=()):
        """
        由上三角（含对角线）构造，下三角由镜像补全

        :param rows: 第 i 行给出 h[i][i:]
        :return: ExcitonHamiltonian
        """
        n = len(rows)
        h = np.zeros((n, n))
        for i, row in enumerate(rows):
            if len(row) != n - i:
                raise ConfigurationError(f'上三角第 {i + 1} 行应有 {n - i} 个元素')
            h[i, i:] = row
            h[i:, i] = row
        return cls(h=h, labels=labels)


def fmo_preset():
    """
    FMO 复合体 7 位点哈密顿量
    :return: ExcitonHamiltonian，site3 能量最低（靠近反应中心）
    """
    return ExcitonHamiltonian.from_upper_triangle(FMO_UPPER_TRIANGLE)


# ---------------------------
# 谱密度
# ---------------------------
class SpectralDensity:
    """
    谱密度 J(ω) 的公共接口
    频率与返回值都以 cm⁻¹ 为单位；J(0) = 0，且 ω ≥ 0 时 J(ω) ≥ 0

    子类需实现：
    - _evaluate(omega): 对非负数组求值
    - slope_at_zero(): dJ/dω 在 ω=0 处的值（简并极限与积分端点用）
    - tail_start(): 积分拆分点，超过它后只剩单调衰减的尾部
    - to_document(): 转换为配置文件中的字典
    """
    kind = None

    def evaluate(self, omega):
        """
        计算 J(ω)

        :param omega: 标量或数组，单位 cm⁻¹，必须非负
        :return: 与输入形状相同的 J 值（cm⁻¹）
        :raises DomainError: 存在负频率
        """
        values = np.asarray(omega, dtype=float)
        if np.any(values < 0):
            raise DomainError(f'谱密度只在 ω ≥ 0 上定义，收到 {np.min(values)}')
        result = self._evaluate(values)
        if result.ndim == 0:
            return float(result)
        return result

    def _evaluate(self, omega):
        raise NotImplementedError

    def slope_at_zero(self):
        raise NotImplementedError

    def breakpoints(self):
        """被积函数的尖锐结构位置（默认没有）"""
        return ()

    def tail_start(self):
        raise NotImplementedError

    def to_document(self):
        raise NotImplementedError

    def reorganization_energy(self, epsrel=DEFAULT_EPSREL):
        """
        重组能 λ = ∫₀^∞ J(ω)/ω dω，默认做自适应数值积分

        :param epsrel: 相对容差
        :return: λ（cm⁻¹）
        """
        slope = self.slope_at_zero()

        def integrand(omega):
            if omega == 0.0:
                return slope
            return self._evaluate(np.float64(omega)) / omega

        tail = self.tail_start()
        head, head_err = adaptive_quad(integrand, 0.0, tail,
                                       points=self.breakpoints(), epsrel=epsrel)
        rest, rest_err = adaptive_quad(integrand, tail, np.inf, epsrel=epsrel)
        logger.debug('%s 重组能 %.12g cm⁻¹，误差估计 %.2e', self.kind,
                     head + rest, head_err + rest_err)
        return head + rest


@dataclass(frozen=True)
class DrudeDensity(SpectralDensity):
    """
    Drude 谱密度 J_D(ω) = (2λ/π)·ω·ω_c/(ω²+ω_c²)

    字段说明：
    - reorganization: 重组能 λ（cm⁻¹）
    - cutoff: 截止频率 ω_c（cm⁻¹）
    """
    reorganization: float
    cutoff: float
    kind = 'drude'

    def __post_init__(self):
        if not (self.reorganization > 0 and math.isfinite(self.reorganization)):
            raise ConfigurationError(f'Drude 重组能必须为正数，收到 {self.reorganization}')
        if not (self.cutoff > 0 and math.isfinite(self.cutoff)):
            raise ConfigurationError(f'Drude 截止频率必须为正数，收到 {self.cutoff}')

    def __str__(self):
        return f'Drude(λ={self.reorganization} cm⁻¹, ω_c={self.cutoff:.6g} cm⁻¹)'

    @classmethod
    def from_cutoff_time(cls, reorganization, cutoff_time):
        """
        用截止时间 ω_c⁻¹（fs）指定截止频率

        :param cutoff_time: ω_c⁻¹，单位 fs（例如 50 fs）
        """
        if not cutoff_time > 0:
            raise ConfigurationError(f'截止时间必须为正数，收到 {cutoff_time}')
        return cls(reorganization=reorganization,
                   cutoff=1.0 / (UNITS.two_pi_c * cutoff_time))

    def _evaluate(self, omega):
        wc = self.cutoff
        return (2.0 * self.reorganization / np.pi) * omega * wc / (omega ** 2 + wc ** 2)

    def slope_at_zero(self):
        return 2.0 * self.reorganization / (np.pi * self.cutoff)

    def tail_start(self):
        return 20.0 * self.cutoff

    def reorganization_energy(self, epsrel=DEFAULT_EPSREL):
        # 解析结果：积分恰好等于参数 λ
        return float(self.reorganization)

    def to_document(self):
        return {'type': self.kind, 'lambda_cm': self.reorganization,
                'cutoff_cm': self.cutoff}


# 离散模展宽形式
MODIFIED_LORENTZ = 'modified'
PLAIN_LORENTZ = 'lorentzian'
DISCRETE_MODE_FORMS = (MODIFIED_LORENTZ, PLAIN_LORENTZ)

# 连续部分 g₀(ω) 两个分量的归一化系数
AR_WEIGHT_1 = 6.105e-5
AR_WEIGHT_2 = 3.8156e-5


@dataclass(frozen=True)
class AdolphsRengerDensity(SpectralDensity):
    """
    Adolphs-Renger 谱密度 J(ω) = ω²·S₀·g₀(ω) + J_dm(ω)

    g₀(ω) = 6.105e-5·ω³/ω₁⁴·exp(−√(ω/ω₁)) + 3.8156e-5·ω³/ω₂⁴·exp(−√(ω/ω₂))

    离散模 J_dm 的两种展宽：
    - modified:   ω·ω_H·S_H/π · γ_p/((ω−ω_H)²+γ_p²)
    - lorentzian: ω_H²·S_H/π · [L(ω−ω_H) − L(ω+ω_H)]，L(x) = γ_p/(x²+γ_p²)
      （奇延拓，保证 J(0)=0；峰附近与单个洛伦兹峰的相对差约 4e-6）
    """
    s0: float = 0.5
    s_h: float = 0.22
    omega_h: float = 180.0
    gamma_p: float = 1.0
    omega_1: float = 0.575
    omega_2: float = 2.0
    discrete_mode_form: str = MODIFIED_LORENTZ
    kind = 'adolphs_renger'

    def __post_init__(self):
        if self.s0 < 0 or self.s_h < 0:
            raise ConfigurationError('Huang-Rhys 因子 S₀、S_H 不能为负')
        if not self.gamma_p > 0:
            raise ConfigurationError(f'离散模展宽 γ_p 必须为正数，收到 {self.gamma_p}')
        for name in ('omega_h', 'omega_1', 'omega_2'):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ConfigurationError(f'{name} 必须为正数，收到 {value}')
        if self.discrete_mode_form not in DISCRETE_MODE_FORMS:
            raise ConfigurationError(
                f'未知的离散模展宽 {self.discrete_mode_form!r}，可选 {DISCRETE_MODE_FORMS}')

    def __str__(self):
        return (f'AdolphsRenger(S₀={self.s0}, S_H={self.s_h}, ω_H={self.omega_h}, '
                f'γ_p={self.gamma_p}, {self.discrete_mode_form})')

    def continuum(self, omega):
        """连续部分 ω²·S₀·g₀(ω)"""
        w1, w2 = self.omega_1, self.omega_2
        g0 = (AR_WEIGHT_1 * omega ** 3 / w1 ** 4 * np.exp(-np.sqrt(omega / w1))
              + AR_WEIGHT_2 * omega ** 3 / w2 ** 4 * np.exp(-np.sqrt(omega / w2)))
        return omega ** 2 * self.s0 * g0

    def discrete_mode(self, omega):
        """展宽后的离散模 J_dm(ω)"""
        wh, gamma = self.omega_h, self.gamma_p
        peak = gamma / ((omega - wh) ** 2 + gamma ** 2)
        if self.discrete_mode_form == MODIFIED_LORENTZ:
            return omega * wh * self.s_h / np.pi * peak
        mirror = gamma / ((omega + wh) ** 2 + gamma ** 2)
        return wh ** 2 * self.s_h / np.pi * (peak - mirror)

    def _evaluate(self, omega):
        return self.continuum(omega) + self.discrete_mode(omega)

    def slope_at_zero(self):
        # 连续部分 ~ω⁵，斜率只来自离散模
        wh, gamma = self.omega_h, self.gamma_p
        if self.discrete_mode_form == MODIFIED_LORENTZ:
            return wh * self.s_h * gamma / (np.pi * (wh ** 2 + gamma ** 2))
        return wh ** 2 * self.s_h / np.pi * 4.0 * gamma * wh / (wh ** 2 + gamma ** 2) ** 2

    def breakpoints(self):
        wh, gamma = self.omega_h, self.gamma_p
        return tuple(p for p in (wh - 10.0 * gamma, wh, wh + 10.0 * gamma) if p > 0)

    def tail_start(self):
        # exp(−√(ω/ω_i)) 在 ω = 1024·ω_i 处降到 e⁻³²
        return max(self.omega_h + 50.0 * self.gamma_p,
                   1024.0 * max(self.omega_1, self.omega_2))

    def to_document(self):
        return {
            'type': self.kind,
            's0': self.s0,
            's_h': self.s_h,
            'omega_h_cm': self.omega_h,
            'gamma_p_cm': self.gamma_p,
            'omega1_cm': self.omega_1,
            'omega2_cm': self.omega_2,
            'discrete_mode_form': self.discrete_mode_form,
        }


def evaluate_spectral_density(sd, omega):
    """J(ω)，ω 单位 cm⁻¹；负频率抛出 DomainError"""
    return sd.evaluate(omega)


def reorganization_energy(sd, epsrel=DEFAULT_EPSREL):
    """λ = ∫₀^∞ J(ω)/ω dω：Drude 为解析值，其余为自适应积分"""
    return sd.reorganization_energy(epsrel=epsrel)


# ---------------------------
# 浴关联矩阵与热浴
# ---------------------------
# 半正定判据：最小本征值不低于该值
PSD_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """
    位点间浴涨落关联矩阵 C，⟨Q_i(t)Q_j(0)⟩ = C_ij⟨Q_i(t)Q_i(0)⟩

    约束：对称、对角元为 1、半正定
    """
    c: np.ndarray
    is_identity: bool = field(default=False, init=False)

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ConfigurationError(f'关联矩阵必须是方阵，实际形状 {c.shape}')
        if not np.all(np.isfinite(c)):
            raise ConfigurationError('关联矩阵含有非有限数值')
        if np.max(np.abs(c - c.T)) > SYMMETRY_TOLERANCE:
            raise ConfigurationError('关联矩阵必须对称')
        if np.max(np.abs(np.diag(c) - 1.0)) > SYMMETRY_TOLERANCE:
            raise ConfigurationError('关联矩阵对角元必须为 1')
        c = 0.5 * (c + c.T)
        np.fill_diagonal(c, 1.0)
        smallest = float(np.min(np.linalg.eigvalsh(c)))
        if smallest < -PSD_TOLERANCE:
            raise ConfigurationError(f'关联矩阵不是半正定的：最小本征值 {smallest:.3e}')
        c.setflags(write=False)
        object.__setattr__(self, 'c', c)
        object.__setattr__(self, 'is_identity', bool(np.array_equal(c, np.eye(c.shape[0]))))

    def __str__(self):
        kind = '无关联' if self.is_identity else '有关联'
        return f'CorrelationMatrix({self.n}×{self.n}, {kind})'

    @property
    def n(self):
        return self.c.shape[0]

    @classmethod
    def identity(cls, n):
        """无关联浴：C = I"""
        return cls(c=np.eye(n))

    @classmethod
    def from_pairs(cls, n, pairs):
        """
        由成对关联构造，pairs 形如 {(1, 2): 0.9}，位点编号从 1 开始
        """
        c = np.eye(n)
        for (i, j), value in pairs.items():
            c[i - 1, j - 1] = value
            c[j - 1, i - 1] = value
        return cls(c=c)

    def bilinear(self, x, y):
        """
        Σ_ij C_ij·x_i·y_j，对最后一个轴求和
        C = I 时直接计算 Σ_j x_j·y_j，与无关联公式逐位一致
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.is_identity:
            return np.sum(x * y, axis=-1)
        return np.einsum('...i,ij,...j->...', x, self.c, y)


@dataclass(frozen=True, eq=False)
class BathSpec:
    """
    热浴参数

    字段说明：
    - temperature: 温度 T（K）
    - spectral_density: 所有位点共用的谱密度
    - correlation: 位点间关联矩阵
    """
    temperature: float
    spectral_density: SpectralDensity
    correlation: CorrelationMatrix

    def __post_init__(self):
        if not (self.temperature > 0 and math.isfinite(self.temperature)):
            raise ConfigurationError(f'温度必须为正数，收到 {self.temperature}')

    def __str__(self):
        return f'Bath({self.temperature} K, {self.spectral_density}, {self.correlation})'


# ---------------------------
# 模拟配置
# ---------------------------
MODE_CLOSED = 'closed'
MODE_DECOHERENCE_ONLY = 'decoherence_only'
MODE_RELAXATION_ONLY = 'relaxation_only'
MODE_FULL = 'full'
MODES = (MODE_CLOSED, MODE_DECOHERENCE_ONLY, MODE_RELAXATION_ONLY, MODE_FULL)


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    """
    一次模拟的完整配置

    字段说明：
    - hamiltonian: 位点哈密顿量
    - bath: 热浴参数
    - initial_site: 初始激发位点 a（从 1 开始）
    - t_start, t_end: 时间窗口（fs）
    - n_steps: 均匀时间网格的点数（含两端）
    - mode: closed | decoherence_only | relaxation_only | full
    """
    hamiltonian: ExcitonHamiltonian
    bath: BathSpec
    initial_site: int
    t_start: float = 0.0
    t_end: float = 1000.0
    n_steps: int = 1001
    mode: str = MODE_FULL

    def __post_init__(self):
        n = self.hamiltonian.n_sites
        if not 1 <= self.initial_site <= n:
            raise ConfigurationError(f'初始位点必须在 1 到 {n} 之间，收到 {self.initial_site}')
        if not self.t_start >= 0:
            raise ConfigurationError(f'起始时间不能为负，收到 {self.t_start}')
        if not self.t_end > self.t_start:
            raise ConfigurationError('结束时间必须大于起始时间')
        if self.n_steps < 2:
            raise ConfigurationError(f'时间网格至少需要 2 个点，收到 {self.n_steps}')
        if self.mode not in MODES:
            raise ConfigurationError(f'未知模式 {self.mode!r}，可选 {MODES}')
        if self.bath.correlation.n != n:
            raise ConfigurationError(
                f'关联矩阵维数 {self.bath.correlation.n} 与位点数 {n} 不符')

    def __str__(self):
        return (f'SimulationConfig({self.hamiltonian}, {self.bath}, '
                f'a={self.initial_site}, mode={self.mode})')

    def times(self):
        """均匀时间网格（fs）"""
        return np.linspace(self.t_start, self.t_end, self.n_steps)

    def with_mode(self, mode):
        """返回只改变模式的新配置"""
        return SimulationConfig(
            hamiltonian=self.hamiltonian, bath=self.bath,
            initial_site=self.initial_site, t_start=self.t_start,
            t_end=self.t_end, n_steps=self.n_steps, mode=mode,
        )
