# excitons/exceptions.py
"""
模拟过程中的异常类型

- ConfigurationError：输入不合法（哈密顿量不对称、关联矩阵不半正定、极点保护等）
- DomainError：参数超出数学定义域（负频率、不在时间网格上的时刻等）
- NumericalError：数值方法未收敛，附带实际达到的精度
"""


class SimulationError(Exception):
    """所有模拟异常的基类"""


class ConfigurationError(SimulationError, ValueError):
    """配置或输入参数错误"""


class DomainError(SimulationError, ValueError):
    """参数超出定义域"""


class NumericalError(SimulationError, ArithmeticError):
    """数值计算未收敛"""

    def __init__(self, message, achieved_tolerance=None):
        """
        :param message: 错误描述
        :param achieved_tolerance: 实际达到的（相对或绝对）误差，未知时为None
        """
        if achieved_tolerance is not None:
            message = f'{message}（实际精度 {achieved_tolerance:.3e}）'
        super().__init__(message)
        self.achieved_tolerance = achieved_tolerance
