# excitons/quadrature.py
"""
自适应积分工具
对 scipy.integrate.quad（QUADPACK 自适应 Gauss-Kronrod）做一层包装：
- 统一容差参数
- 未收敛时抛出 NumericalError 并报告实际误差
- QUADPACK 报告警告但误差估计仍可接受时记录 WARNING 日志
"""
import logging

import numpy as np
from scipy.integrate import quad

from .exceptions import NumericalError

logger = logging.getLogger(__name__)

# 默认相对容差
DEFAULT_EPSREL = 1e-10
# 默认绝对容差（被积函数值为 O(1) 量级时足够小）
DEFAULT_EPSABS = 1e-14
# QUADPACK 报告未达标时，误差估计不超过该相对值仍然接受
ACCEPT_RELATIVE = 1e-7


def adaptive_quad(func, lower, upper, points=None, epsrel=DEFAULT_EPSREL,
                  epsabs=DEFAULT_EPSABS, limit=2000, weight=None, wvar=None):
    """
    计算 ∫_lower^upper func(x) dx

    :param func: 标量被积函数
    :param lower: 积分下限（有限）
    :param upper: 积分上限，可以是 np.inf
    :param points: 有限区间内的断点（如谱密度离散模的峰位）
    :param weight: None、'cos' 或 'sin'；配合 upper=np.inf 时使用 QAWF 傅里叶积分
    :param wvar: 振荡权重的角频率
    :return: (积分值, 误差估计)
    :raises NumericalError: 误差估计超过可接受范围
    """
    kwargs = {'epsabs': epsabs, 'full_output': 1}
    if weight is None:
        kwargs['epsrel'] = epsrel
        kwargs['limit'] = limit
        if points is not None and np.isfinite(upper):
            inner = [p for p in points if lower < p < upper]
            if inner:
                kwargs['points'] = sorted(inner)
    else:
        # QAWF 只使用绝对容差
        kwargs['weight'] = weight
        kwargs['wvar'] = wvar
        if np.isfinite(upper):
            kwargs['epsrel'] = epsrel
            kwargs['limit'] = limit

    result = quad(func, lower, upper, **kwargs)
    value, abserr = result[0], result[1]
    if len(result) > 3:
        # QUADPACK 给出了警告信息（ier > 0）
        allowed = max(ACCEPT_RELATIVE * abs(value), 10 * epsabs)
        if not np.isfinite(value) or abserr > allowed:
            raise NumericalError(
                f'积分 [{lower}, {upper}] 未收敛：{result[3]}',
                achieved_tolerance=abserr / abs(value) if value else abserr,
            )
        logger.warning('积分 [%s, %s] 以放宽的精度接受：误差估计 %.2e，值 %.6e',
                     lower, upper, abserr, value)
    return value, abserr
