# scenarios/exports.py
"""
输出文件读写
- CSV 轨迹：表头 t_fs,site1,...,siteN，可选 re_rho_b_c,im_rho_b_c 列
- JSON 运行清单
- 两个 CSV 轨迹的差异统计
"""

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from django.conf import settings

from excitons.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

TIME_COLUMN = 't_fs'


def _digits():
    return settings.SIMULATION['CSV_DIGITS']


def trajectory_header(n_sites, coherences=()):
    """CSV 表头"""
    header = [TIME_COLUMN] + [f'site{j + 1}' for j in range(n_sites)]
    for b, c in coherences:
        header += [f're_rho_{b}_{c}', f'im_rho_{b}_{c}']
    return header


def write_trajectory_csv(path, trajectory, coherences=(), digits=None):
    """
    写出轨迹 CSV

    :param path: 输出路径，父目录不存在时自动创建
    :param trajectory: DensityTrajectory
    :param coherences: [(b, c), ...]，位点编号从 1 开始
    :param digits: 有效数字位数，默认取 SIMULATION['CSV_DIGITS']
    """
    digits = digits or _digits()
    spec = f'.{digits}g'
    columns = [trajectory.times]
    populations = trajectory.populations()
    columns += [populations[:, j] for j in range(populations.shape[1])]
    for b, c in coherences:
        values = trajectory.coherence(b, c)
        columns += [values.real, values.imag]
    table = np.column_stack(columns)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(trajectory_header(populations.shape[1], coherences))
        for row in table:
            writer.writerow([format(float(value), spec) for value in row])
    logger.info('轨迹已写入 %s（%d 行）', path, table.shape[0])
    return path


@dataclass(frozen=True, eq=False)
class TrajectoryTable:
    """从 CSV 读回的轨迹：header 不含时间列"""
    header: tuple
    times: np.ndarray
    values: np.ndarray

    def column(self, name):
        try:
            return self.values[:, self.header.index(name)]
        except ValueError:
            raise ConfigurationError(f'CSV 中没有列 {name}')


def read_trajectory_csv(path):
    """
    读取轨迹 CSV

    :raises ConfigurationError: 文件不存在或格式不对
    """
    path = Path(path)
    try:
        with path.open(newline='', encoding='utf-8') as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise ConfigurationError(f'无法读取轨迹文件 {path}：{exc}')
    if not rows or not rows[0] or rows[0][0] != TIME_COLUMN:
        raise ConfigurationError(f'{path} 不是轨迹文件：第一列必须是 {TIME_COLUMN}')
    header = rows[0]
    try:
        data = np.array([[float(value) for value in row] for row in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ConfigurationError(f'{path} 含有非数值数据：{exc}')
    if data.ndim != 2 or data.shape[0] == 0 or data.shape[1] != len(header):
        raise ConfigurationError(f'{path} 的数据行与表头列数不一致')
    return TrajectoryTable(header=tuple(header[1:]), times=data[:, 0], values=data[:, 1:])


def write_manifest(path, document):
    """写出 JSON 运行清单（键顺序固定，不含时间戳）"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, ensure_ascii=False) + '\n', encoding='utf-8')
    logger.info('运行清单已写入 %s', path)
    return path


@dataclass(frozen=True)
class ColumnDifference:
    rms: float
    max_abs: float


@dataclass(frozen=True)
class ComparisonResult:
    """
    字段说明：
    - columns: 列名 → ColumnDifference
    - overall_rms: 全部列合并后的均方根差
    - n_points, t_start, t_end: 参与比较的时间点
    """
    columns: dict
    overall_rms: float
    n_points: int
    t_start: float
    t_end: float

    def to_document(self):
        return {
            'n_points': self.n_points,
            't_start_fs': self.t_start,
            't_end_fs': self.t_end,
            'overall_rms': self.overall_rms,
            'columns': {
                name: {'rms': diff.rms, 'max_abs': diff.max_abs}
                for name, diff in self.columns.items()
            },
        }


def _mean_step(times):
    if times.shape[0] < 2:
        return 0.0
    return float((times[-1] - times[0]) / (times.shape[0] - 1))


def compare_trajectories(file_a, file_b):
    """
    比较两个轨迹 CSV

    在重叠时间范围内，把较细网格线性插值到较粗网格的时间点上，
    逐列计算均方根差与最大绝对差

    :raises ConfigurationError: 列不一致或时间范围不重叠
    """
    a = read_trajectory_csv(file_a)
    b = read_trajectory_csv(file_b)
    if a.header != b.header:
        raise ConfigurationError(f'两个文件的列不一致：{a.header} 与 {b.header}')

    start = max(a.times[0], b.times[0])
    end = min(a.times[-1], b.times[-1])
    if start > end:
        raise ConfigurationError('两个轨迹的时间范围不重叠')

    coarse, fine = (a, b) if _mean_step(a.times) >= _mean_step(b.times) else (b, a)
    inside = (coarse.times >= start) & (coarse.times <= end)
    times = coarse.times[inside]
    if times.shape[0] == 0:
        raise ConfigurationError('两个轨迹的重叠范围内没有公共时间点')

    differences = np.empty((times.shape[0], len(a.header)))
    for index in range(len(a.header)):
        interpolated = np.interp(times, fine.times, fine.values[:, index])
        coarse_values = coarse.values[inside, index]
        # 统一为 a − b
        differences[:, index] = (coarse_values - interpolated) if coarse is a else (interpolated - coarse_values)

    columns = {
        name: ColumnDifference(
            rms=float(np.sqrt(np.mean(differences[:, index] ** 2))),
            max_abs=float(np.max(np.abs(differences[:, index]))),
        )
        for index, name in enumerate(a.header)
    }
    return ComparisonResult(
        columns=columns,
        overall_rms=float(np.sqrt(np.mean(differences ** 2))),
        n_points=int(times.shape[0]),
        t_start=float(times[0]),
        t_end=float(times[-1]),
    )
