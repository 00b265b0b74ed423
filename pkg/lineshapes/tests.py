# tests.py
# 退相干函数测试：Drude 解析形式、数值积分路径、退相干表
import math

# 导入数值计算库
import numpy as np
# 导入数组断言工具
from numpy.testing import assert_allclose, assert_array_equal
# 导入Django测试框架（不需要数据库）
from django.test import SimpleTestCase

# 导入本征分解
from excitons.eigen import Eigensystem, diagonalize, overlap_products
# 导入异常类型
from excitons.exceptions import ConfigurationError, DomainError, NumericalError
# 导入领域模型
from excitons.models import UNITS, AdolphsRengerDensity, CorrelationMatrix, DrudeDensity, fmo_preset
# 导入自适应积分（作为独立的参照）
from excitons.quadrature import adaptive_quad

# 导入当前应用的算法
from .algorithms import (
    decoherence_factor, dephasing_table, matsubara_sum, phi_base,
    phi_base_drude, phi_base_numeric, phi_base_zero,
)


class DrudeAnalyticTests(SimpleTestCase):
    """Drude 解析退相干基函数测试类"""

    def setUp(self):
        """λ = 35 cm⁻¹，ω_c⁻¹ = 50 fs"""
        self.sd = DrudeDensity.from_cutoff_time(35.0, 50.0)

    def _base(self, temperature, times, **kwargs):
        return phi_base_drude(self.sd.reorganization, self.sd.cutoff, temperature, times, **kwargs)

    def test_zero_at_origin(self):
        """测试 φ(0) = 0"""
        base = self._base(77.0, [0.0, 1.0])
        self.assertEqual(base.re0[0], 0.0)
        self.assertEqual(base.im0[0], 0.0)
        self.assertEqual(base.method, 'drude-analytic')

    def test_nonnegative_and_nondecreasing(self):
        """测试 Re 基函数非负且随时间单调不减"""
        times = np.linspace(0.0, 2000.0, 1001)
        for temperature in (77.0, 300.0):
            re0 = self._base(temperature, times).re0
            self.assertTrue(np.all(re0 >= 0.0))
            self.assertTrue(np.all(np.diff(re0) >= 0.0))

    def test_imaginary_part_closed_form(self):
        """测试 Im 基函数 = −(λ/ω_c)(e^{−ω_c t} + ω_c t − 1)"""
        times = np.array([0.0, 25.0, 400.0])
        base = self._base(77.0, times)
        lam = UNITS.angular(35.0)
        wc = UNITS.angular(self.sd.cutoff)
        expected = -(lam / wc) * (np.exp(-wc * times) + wc * times - 1.0)
        assert_allclose(base.im0, expected, rtol=1e-12, atol=1e-15)

    def test_long_time_slope(self):
        """测试长时间 Re 基函数线性增长，斜率为 2λk_BT/(ħω_c)"""
        lam = UNITS.angular(35.0)
        wc = UNITS.angular(self.sd.cutoff)
        for temperature in (77.0, 300.0):
            base = self._base(temperature, [4999.0, 5000.0, 5001.0, 9999.0, 10000.0, 10001.0])
            slope_5ps = (base.re0[2] - base.re0[0]) / 2.0
            slope_10ps = (base.re0[5] - base.re0[3]) / 2.0
            expected = 2.0 * lam * UNITS.thermal_frequency(temperature) / wc
            self.assertAlmostEqual(slope_5ps, slope_10ps, delta=1e-6 * expected)
            self.assertAlmostEqual(slope_10ps, expected, delta=1e-6 * expected)

    def test_tail_tolerance_doubling(self):
        """测试 Matsubara 截断容差加倍后结果变化小于 1e-10（相对）"""
        times = np.array([0.5, 5.0, 50.0, 500.0])
        for temperature in (77.0, 300.0):
            fine = self._base(temperature, times, tail_tolerance=1e-12)
            coarse = self._base(temperature, times, tail_tolerance=2e-12)
            assert_allclose(coarse.re0, fine.re0, rtol=1e-10, atol=0)

    def test_pole_guard(self):
        """测试 βħω_c = 2π 时报告第 1 个极点"""
        temperature = UNITS.c2 * 100.0 / (2.0 * math.pi)
        with self.assertRaises(ConfigurationError) as ctx:
            phi_base_drude(35.0, 100.0, temperature, [0.0, 10.0])
        self.assertIn('第 1 个', str(ctx.exception))

    def test_matsubara_term_limit(self):
        """测试项数上限用尽时抛出 NumericalError"""
        kt = UNITS.thermal_frequency(77.0)
        with self.assertRaises(NumericalError):
            matsubara_sum(np.array([0.01]), UNITS.angular(self.sd.cutoff), 2.0 * math.pi * kt, max_terms=1)

    def test_negative_time_rejected(self):
        """测试负时间抛出 DomainError"""
        with self.assertRaises(DomainError):
            self._base(77.0, [-1.0, 0.0])

    def test_dispatch(self):
        """测试 phi_base 对 Drude 走解析路径"""
        self.assertEqual(phi_base(self.sd, 77.0, [0.0, 1.0]).method, 'drude-analytic')
        self.assertEqual(phi_base_zero([0.0, 1.0]).method, 'none')


class NumericPhiTests(SimpleTestCase):
    """数值积分退相干基函数测试类"""

    def test_matches_drude_analytic(self):
        """测试数值积分与 Drude 解析形式相对误差小于 1e-6"""
        sd = DrudeDensity.from_cutoff_time(35.0, 50.0)
        times = np.array([0.0, 10.0, 100.0, 1000.0])
        for temperature in (77.0, 300.0):
            with self.subTest(temperature=temperature):
                numeric = phi_base_numeric(sd, temperature, times)
                analytic = phi_base_drude(sd.reorganization, sd.cutoff, temperature, times)
                self.assertEqual(numeric.method, 'quadrature')
                self.assertEqual(numeric.re0[0], 0.0)
                assert_allclose(numeric.re0[1:], analytic.re0[1:], rtol=1e-6)
                assert_allclose(numeric.im0[1:], analytic.im0[1:], rtol=1e-6)

    def test_adolphs_renger_two_tolerances(self):
        """测试 Adolphs-Renger 谱密度在两种精度设置下结果一致"""
        sd = AdolphsRengerDensity()
        times = np.array([0.0, 200.0])
        # 较粗：12 点面板、尾部容差 1e-8；较细：20 点面板、尾部容差 1e-10
        coarse = phi_base_numeric(sd, 77.0, times, epsrel=1e-8, order=12)
        fine = phi_base_numeric(sd, 77.0, times, epsrel=1e-10, order=20)
        self.assertGreater(fine.re0[1], 0.0)
        self.assertLess(fine.im0[1], 0.0)
        assert_allclose(coarse.re0, fine.re0, rtol=1e-6)
        assert_allclose(coarse.im0, fine.im0, rtol=1e-6)

    def test_adolphs_renger_matches_adaptive_quadrature(self):
        """测试与逐时刻 QUADPACK 积分（有限段加断点，尾部用傅里叶积分）一致"""
        sd = AdolphsRengerDensity()
        temperature = 77.0
        half_beta = UNITS.c2 / (2.0 * temperature)
        cut = sd.tail_start()
        points = sd.breakpoints()

        def thermal(nu):
            return sd._evaluate(nu) / (nu * nu * math.tanh(half_beta * nu))

        def coupling(nu):
            return sd._evaluate(nu) / (nu * nu)

        thermal_tail, _ = adaptive_quad(thermal, cut, np.inf)
        linear_tail, _ = adaptive_quad(lambda nu: sd._evaluate(nu) / nu, cut, np.inf)
        base = phi_base_numeric(sd, temperature, [0.0, 200.0, 1000.0])
        for index, t in ((1, 200.0), (2, 1000.0)):
            a = UNITS.angular(t)
            # 有限段按振荡周期加断点
            period = 2.0 * math.pi / a
            marks = sorted(set(points) | set(np.arange(1, int(cut / period) + 1) * period))
            re_head, _ = adaptive_quad(
                lambda nu: thermal(nu) * 2.0 * math.sin(0.5 * a * nu) ** 2 if nu > 0 else 0.0,
                0.0, cut, points=marks)
            im_head, _ = adaptive_quad(
                lambda nu: coupling(nu) * (math.sin(a * nu) - a * nu) if nu > 0 else 0.0,
                0.0, cut, points=marks)
            re_wave, _ = adaptive_quad(thermal, cut, np.inf, weight='cos', wvar=a, epsabs=1e-12)
            im_wave, _ = adaptive_quad(coupling, cut, np.inf, weight='sin', wvar=a, epsabs=1e-12)
            self.assertAlmostEqual(base.re0[index], re_head + thermal_tail - re_wave,
                                   delta=1e-6 * abs(base.re0[index]))
            self.assertAlmostEqual(base.im0[index], im_head + im_wave - a * linear_tail,
                                   delta=1e-6 * abs(base.im0[index]))

    def test_grid_independence(self):
        """测试同一时刻的值与网格其余时间点无关（1001 点网格与单点网格一致）"""
        sd = AdolphsRengerDensity()
        times = np.linspace(0.0, 1000.0, 1001)
        full = phi_base_numeric(sd, 77.0, times)
        # 逐个时间点单独计算，面板宽度不同
        for t in (1.0, 333.0, 1000.0):
            single = phi_base_numeric(sd, 77.0, [t])
            index = int(round(t))
            self.assertAlmostEqual(full.re0[index], single.re0[0], delta=1e-9 * abs(single.re0[0]))
            self.assertAlmostEqual(full.im0[index], single.im0[0], delta=1e-9 * abs(single.im0[0]))
        self.assertTrue(np.all(full.re0[1:] > 0.0))


class DephasingTableTests(SimpleTestCase):
    """退相干表测试类"""

    def setUp(self):
        """FMO，77 K Drude 浴，0–1000 fs"""
        self.eig = diagonalize(fmo_preset())
        self.overlaps = overlap_products(self.eig)
        sd = DrudeDensity.from_cutoff_time(35.0, 50.0)
        self.times = np.linspace(0.0, 1000.0, 101)
        self.base = phi_base(sd, 77.0, self.times)
        self.table = dephasing_table(self.base, self.overlaps, CorrelationMatrix.identity(7), self.eig)

    def test_symmetry(self):
        """测试对角为零、实部对称、虚部反对称"""
        phi = self.table.phi
        for n in range(7):
            self.assertTrue(np.all(phi[n, n] == 0.0))
        assert_array_equal(phi.real, phi.real.transpose(1, 0, 2))
        assert_array_equal(phi.imag, -phi.imag.transpose(1, 0, 2))
        self.assertTrue(np.all(self.table.re_coupling >= 0.0))

    def test_decoherence_factor(self):
        """测试 t = 0 时因子为 1，其余时刻模长不超过 1"""
        self.assertEqual(decoherence_factor(self.table, 0, 3, 0.0), 1.0 + 0.0j)
        self.assertEqual(decoherence_factor(self.table, 2, 2, 500.0), 1.0 + 0.0j)
        for t in (10.0, 250.0, 1000.0):
            self.assertLessEqual(abs(decoherence_factor(self.table, 0, 1, t)), 1.0)
        factors = self.table.factors()
        self.assertTrue(np.all(np.abs(factors) <= 1.0 + 1e-15))

    def test_off_grid_time_rejected(self):
        """测试不在网格上的时间抛出 DomainError"""
        with self.assertRaises(DomainError):
            decoherence_factor(self.table, 0, 1, 12.5)

    def test_correlation_reduces_dephasing(self):
        """测试关联浴下 Re φ 的耦合系数仍非负"""
        correlated = CorrelationMatrix.from_pairs(7, {(1, 2): 0.9, (5, 6): 0.9})
        table = dephasing_table(self.base, self.overlaps, correlated, self.eig)
        self.assertTrue(np.all(table.re_coupling >= 0.0))
        assert_array_equal(table.re_coupling, table.re_coupling.T)

    def test_identical_gradients(self):
        """测试梯度相同的两个本征态 φ ≡ 0，因子只剩相位"""
        s = 1.0 / math.sqrt(2.0)
        eig = Eigensystem(energies=np.array([-50.0, 50.0]), u=np.array([[s, s], [-s, s]]))
        base = phi_base_drude(35.0, 106.0, 77.0, self.times)
        table = dephasing_table(base, overlap_products(eig), CorrelationMatrix.identity(2), eig)
        self.assertTrue(np.all(table.phi == 0.0))
        self.assertAlmostEqual(abs(decoherence_factor(table, 0, 1, 300.0)), 1.0, places=14)
