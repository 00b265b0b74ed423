# scenarios/presets.py
"""
预设场景注册表
每个场景对应一组固定参数：FMO 哈密顿量，Drude（λ = 35 cm⁻¹，ω_c⁻¹ = 50 fs）
或 Adolphs-Renger 谱密度，0–1000 fs，1001 个时间点
"""

from dataclasses import dataclass

from excitons.exceptions import ConfigurationError
from excitons.models import (
    MODE_CLOSED, MODE_DECOHERENCE_ONLY, MODE_FULL,
    AdolphsRengerDensity, BathSpec, CorrelationMatrix, DrudeDensity,
    SimulationConfig, fmo_preset,
)

DRUDE_REORGANIZATION = 35.0
DRUDE_CUTOFF_TIME = 50.0

# 关联浴：C12 = C56 = 0.9
CORRELATED_PAIRS = {(1, 2): 0.9, (5, 6): 0.9}


@dataclass(frozen=True)
class DampingBand:
    """
    期望的阻尼时间范围（fs），low 或 high 为 None 表示该侧不限
    """
    site: int
    low: float = None
    high: float = None

    def check(self, damping_time):
        """阻尼时间为 None 视为无穷大"""
        value = float('inf') if damping_time is None else damping_time
        if self.low is not None and value < self.low:
            return False
        if self.high is not None and value > self.high:
            return False
        return True

    def to_document(self, damping_time):
        return {
            'site': self.site,
            'low_fs': self.low,
            'high_fs': self.high,
            'observed_fs': damping_time,
            'satisfied': self.check(damping_time),
        }


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    字段说明：
    - name: 注册表中唯一的名称
    - description: 一句话说明
    - config: SimulationConfig
    - expected_features: DampingBand 列表（可为空）
    """
    name: str
    description: str
    config: SimulationConfig
    expected_features: tuple = ()

    def __str__(self):
        return self.name


def drude_density():
    return DrudeDensity.from_cutoff_time(DRUDE_REORGANIZATION, DRUDE_CUTOFF_TIME)


def _config(temperature, initial_site, mode, sd=None, correlation=None):
    hamiltonian = fmo_preset()
    if correlation is None:
        correlation = CorrelationMatrix.identity(hamiltonian.n_sites)
    return SimulationConfig(
        hamiltonian=hamiltonian,
        bath=BathSpec(
            temperature=temperature,
            spectral_density=sd or drude_density(),
            correlation=correlation,
        ),
        initial_site=initial_site,
        mode=mode,
    )


def _build():
    correlated = CorrelationMatrix.from_pairs(7, CORRELATED_PAIRS)
    return (
        Scenario('closed1', '无环境，初始激发在 site 1', _config(77.0, 1, MODE_CLOSED)),
        Scenario('closed6', '无环境，初始激发在 site 6', _config(77.0, 6, MODE_CLOSED)),
        Scenario('fig1', 'Drude，77 K，site 1，退相干 + 弛豫', _config(77.0, 1, MODE_FULL)),
        Scenario('fig2', 'Drude，77 K，site 1，只有退相干',
                 _config(77.0, 1, MODE_DECOHERENCE_ONLY)),
        Scenario('fig3', 'Drude，77 K，site 1，退相干 + 弛豫', _config(77.0, 1, MODE_FULL),
                 (DampingBand(site=1, low=600.0, high=900.0),)),
        Scenario('fig4', 'Drude，300 K，site 1，只有退相干',
                 _config(300.0, 1, MODE_DECOHERENCE_ONLY)),
        Scenario('fig5', 'Drude，300 K，site 1，退相干 + 弛豫', _config(300.0, 1, MODE_FULL),
                 (DampingBand(site=1, low=250.0, high=450.0),)),
        Scenario('fig6', 'Drude，77 K，site 6，只有退相干',
                 _config(77.0, 6, MODE_DECOHERENCE_ONLY),
                 (DampingBand(site=6, low=400.0),)),
        Scenario('fig7', 'Drude，300 K，site 6，只有退相干',
                 _config(300.0, 6, MODE_DECOHERENCE_ONLY),
                 (DampingBand(site=6, high=300.0),)),
        Scenario('fig8', 'Drude，77 K，site 6，退相干 + 弛豫', _config(77.0, 6, MODE_FULL)),
        Scenario('fig9', 'Drude，300 K，site 6，退相干 + 弛豫', _config(300.0, 6, MODE_FULL)),
        Scenario('fig10', 'Adolphs-Renger（γ_p = 1 cm⁻¹），77 K，site 1，退相干 + 弛豫',
                 _config(77.0, 1, MODE_FULL, sd=AdolphsRengerDensity(gamma_p=1.0))),
        Scenario('fig11', '关联浴 C12 = C56 = 0.9，77 K，site 6（关注 site 6）',
                 _config(77.0, 6, MODE_FULL, correlation=correlated)),
        Scenario('fig12', '关联浴 C12 = C56 = 0.9，77 K，site 6（关注 site 3）',
                 _config(77.0, 6, MODE_FULL, correlation=correlated)),
    )


SCENARIOS = {scenario.name: scenario for scenario in _build()}


def list_scenarios():
    """按注册顺序返回全部场景"""
    return list(SCENARIOS.values())


def get_scenario(name):
    """
    按名称查找场景
    :raises ConfigurationError: 名称未注册，消息中列出全部可用场景
    """
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ConfigurationError(
            f'未知的预设场景 {name!r}，可用场景：{", ".join(SCENARIOS)}')
