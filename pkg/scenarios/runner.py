# scenarios/runner.py
"""
模拟流水线
配置 → 对角化 → 退相干表 → 弛豫速率 → 密度矩阵轨迹 → CSV 与运行清单
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings

from dynamics.algorithms import assemble_density
from excitons.eigen import diagonalize, overlap_products
from excitons.models import MODE_CLOSED, MODE_RELAXATION_ONLY, SimulationConfig, reorganization_energy
from lineshapes.algorithms import dephasing_table, phi_base, phi_base_zero
from relaxation.algorithms import coherence_decay_rates, gamma_rates

from .exports import write_manifest, write_trajectory_csv
from .features import extract_features
from .forms import config_to_document
from .presets import Scenario, get_scenario

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """一次模拟的全部中间结果"""
    config: SimulationConfig
    eigensystem: object
    overlaps: object
    table: object
    rates: object
    secular: object
    trajectory: object


@dataclass(frozen=True, eq=False)
class RunOutput:
    """run_scenario 的返回值"""
    name: str
    csv_path: Path
    manifest_path: Path
    result: SimulationResult
    features: object
    manifest: dict


def simulate(config, include_eigenbasis=False):
    """
    运行完整流水线，不写文件

    :param config: SimulationConfig
    :param include_eigenbasis: 是否保存本征基密度矩阵
    :return: SimulationResult
    """
    bath = config.bath
    eigensystem = diagonalize(config.hamiltonian)
    overlaps = overlap_products(eigensystem)
    times = config.times()
    if config.mode in (MODE_CLOSED, MODE_RELAXATION_ONLY):
        base = phi_base_zero(times)
    else:
        base = phi_base(bath.spectral_density, bath.temperature, times)
    table = dephasing_table(base, overlaps, bath.correlation, eigensystem)
    rates = gamma_rates(eigensystem, overlaps, bath.spectral_density, bath.temperature, bath.correlation)
    secular = coherence_decay_rates(rates)
    trajectory = assemble_density(config, eigensystem, table, rates, secular,
                                  include_eigenbasis=include_eigenbasis)
    return SimulationResult(
        config=config, eigensystem=eigensystem, overlaps=overlaps,
        table=table, rates=rates, secular=secular, trajectory=trajectory,
    )


def resolve_scenario(source, mode=None, name=None):
    """
    预设名称、Scenario 或 SimulationConfig → Scenario

    :param mode: 不为 None 时覆盖配置中的模式
    :param name: 自定义配置的名称（用于默认输出文件名）
    """
    if isinstance(source, str):
        scenario = get_scenario(source)
    elif isinstance(source, Scenario):
        scenario = source
    else:
        scenario = Scenario(name=name or 'custom', description='配置文件', config=source)
    if mode is not None and mode != scenario.config.mode:
        scenario = Scenario(
            name=scenario.name,
            description=scenario.description,
            config=scenario.config.with_mode(mode),
            expected_features=(),
        )
    return scenario


def build_manifest(scenario, result, features, csv_path):
    """运行清单：配置、本征能量、重组能、Γ 与 κ 矩阵、轨迹特征"""
    bath = scenario.config.bath
    return {
        'name': scenario.name,
        'description': scenario.description,
        'config': config_to_document(scenario.config),
        'csv': Path(csv_path).name,
        'eigenvalues_cm': result.eigensystem.energies.tolist(),
        'reorganization_energy_cm': reorganization_energy(bath.spectral_density),
        'gamma_fs': result.rates.gamma.tolist(),
        'kappa_fs': result.secular.kappa.tolist(),
        'equilibrium_eigen_populations': result.rates.equilibrium().tolist(),
        'features': features.to_document(),
        'expected_features': [
            band.to_document(features.damping_time(band.site))
            for band in scenario.expected_features
        ],
    }


def run_scenario(source, mode=None, output=None, coherences=(), name=None):
    """
    运行场景并写出 CSV 与 JSON 清单

    :param source: 预设名称、Scenario 或 SimulationConfig
    :param mode: 覆盖模式
    :param output: CSV 路径；清单写在同目录、后缀为 .json。
                   未指定时写到 SIMULATION['OUTPUT_DIR']/<名称>.csv
    :param coherences: 额外输出的相干列 [(b, c), ...]
    :param name: 自定义配置的名称
    :return: RunOutput
    """
    scenario = resolve_scenario(source, mode=mode, name=name)
    logger.info('开始运行场景 %s：%s', scenario.name, scenario.config)
    result = simulate(scenario.config)
    features = extract_features(result.trajectory)

    if output is None:
        csv_path = Path(settings.SIMULATION['OUTPUT_DIR']) / f'{scenario.name}.csv'
    else:
        csv_path = Path(output)
    manifest_path = csv_path.with_suffix('.json')

    write_trajectory_csv(csv_path, result.trajectory, coherences=coherences)
    manifest = build_manifest(scenario, result, features, csv_path)
    write_manifest(manifest_path, manifest)
    logger.info('场景 %s 完成', scenario.name)
    return RunOutput(
        name=scenario.name, csv_path=csv_path, manifest_path=manifest_path,
        result=result, features=features, manifest=manifest,
    )
