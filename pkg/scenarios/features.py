# scenarios/features.py
"""
轨迹特征提取
把布居曲线量化成几个数字：极值时刻、振荡阻尼时间、site3 追上 site1 的时刻
"""

from dataclasses import dataclass

import numpy as np
from django.conf import settings

from excitons.exceptions import DomainError


@dataclass(frozen=True)
class SiteFeatures:
    """
    单个位点的特征

    字段说明：
    - site: 位点编号（从 1 开始）
    - extrema_times: 极值时刻（fs）
    - damping_time: 峰谷包络首次不超过阈值的时刻；None 表示窗口内未阻尼
    """
    site: int
    extrema_times: tuple
    damping_time: float = None

    def to_document(self):
        return {
            'site': self.site,
            'extrema_fs': list(self.extrema_times),
            'damping_time_fs': self.damping_time,
        }


@dataclass(frozen=True)
class TrajectoryFeatures:
    """
    整条轨迹的特征

    - crossing_time: site3 布居首次达到 site1 的时刻（线性插值）；None 表示不存在
    """
    sites: tuple
    crossing_time: float
    threshold: float

    def damping_time(self, site):
        return self.sites[site - 1].damping_time

    def to_document(self):
        return {
            'threshold': self.threshold,
            'crossing_time_fs': self.crossing_time,
            'sites': [site.to_document() for site in self.sites],
        }


def _default_threshold():
    return settings.SIMULATION['DAMPING_THRESHOLD']


def extrema_indices(values):
    """
    离散导数变号处的下标，零差分跳过
    """
    differences = np.diff(values)
    nonzero = np.flatnonzero(differences)
    signs = np.sign(differences[nonzero])
    changes = np.flatnonzero(signs[:-1] != signs[1:])
    return nonzero[changes + 1]


def damping_time(times, values, threshold=None):
    """
    峰谷包络首次不超过阈值的时刻

    相邻极值的峰谷差放在后一个极值的时刻，包络为这些点的线性插值

    :return: (极值时刻数组, 阻尼时间)；没有峰谷差时阻尼时间为 0，
             始终高于阈值时为 None
    """
    if threshold is None:
        threshold = _default_threshold()
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape[0] < 3:
        raise DomainError('特征提取至少需要 3 个时间点')

    extrema = extrema_indices(values)
    if extrema.shape[0] < 2:
        return times[extrema], 0.0

    swing_times = times[extrema[1:]]
    swings = np.abs(np.diff(values[extrema]))
    below = np.flatnonzero(swings <= threshold)
    if below.shape[0] == 0:
        return times[extrema], None
    first = below[0]
    if first == 0:
        return times[extrema], float(swing_times[0])
    s0, s1 = swings[first - 1], swings[first]
    t0, t1 = swing_times[first - 1], swing_times[first]
    return times[extrema], float(t0 + (s0 - threshold) / (s0 - s1) * (t1 - t0))


def crossing_time(times, populations, low_site=3, high_site=1):
    """site low_site 的布居首次达到 site high_site 的时刻"""
    if populations.shape[1] < max(low_site, high_site):
        return None
    gap = populations[:, low_site - 1] - populations[:, high_site - 1]
    reached = np.flatnonzero(gap >= 0)
    if reached.shape[0] == 0:
        return None
    k = reached[0]
    if k == 0:
        return float(times[0])
    g0, g1 = gap[k - 1], gap[k]
    return float(times[k - 1] + (-g0) / (g1 - g0) * (times[k] - times[k - 1]))


def extract_features(trajectory, threshold=None):
    """
    :param trajectory: DensityTrajectory
    :param threshold: 峰谷差阈值，默认取 SIMULATION['DAMPING_THRESHOLD']
    :return: TrajectoryFeatures
    """
    if threshold is None:
        threshold = _default_threshold()
    times = trajectory.times
    populations = trajectory.populations()
    sites = []
    for index in range(populations.shape[1]):
        extrema, damping = damping_time(times, populations[:, index], threshold)
        sites.append(SiteFeatures(
            site=index + 1,
            extrema_times=tuple(float(t) for t in extrema),
            damping_time=damping,
        ))
    return TrajectoryFeatures(
        sites=tuple(sites),
        crossing_time=crossing_time(times, populations),
        threshold=threshold,
    )
