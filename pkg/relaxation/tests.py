# tests.py
# 弛豫速率与主方程生成元测试
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
from excitons.exceptions import ConfigurationError, DomainError
# 导入领域模型
from excitons.models import UNITS, AdolphsRengerDensity, CorrelationMatrix, DrudeDensity, fmo_preset

# 导入当前应用的算法
from .algorithms import (
    DOWNHILL, UPHILL, coherence_decay_rates, gamma_rates, occupation_factor,
    population_generator, redfield_generator,
)
# 导入当前应用的模型
from .models import RateMatrix


class OccupationFactorTests(SimpleTestCase):
    """X 系数测试类"""

    def test_detailed_balance_ratio(self):
        """测试下行/上行 = e^{βħω}"""
        omega = UNITS.angular(120.0)
        for temperature in (77.0, 300.0):
            up = occupation_factor(10.0, omega, temperature, UPHILL)
            down = occupation_factor(10.0, omega, temperature, DOWNHILL)
            ratio = math.exp(UNITS.dimensionless_thermal(120.0, temperature))
            self.assertAlmostEqual(down / up, ratio, delta=1e-12 * ratio)

    def test_uphill_vanishes_at_low_temperature(self):
        """测试 βħω 极大时上行系数为 0 且不产生溢出"""
        omega = UNITS.angular(2000.0)
        self.assertEqual(occupation_factor(5.0, omega, 1.0, UPHILL), 0.0)
        self.assertGreater(occupation_factor(5.0, omega, 1.0, DOWNHILL), 0.0)

    def test_non_positive_frequency_rejected(self):
        """测试 ω ≤ 0 抛出 DomainError"""
        with self.assertRaises(DomainError):
            occupation_factor(1.0, 0.0, 77.0, UPHILL)
        with self.assertRaises(DomainError):
            occupation_factor(1.0, -0.01, 77.0, DOWNHILL)


class GammaRatesTests(SimpleTestCase):
    """弛豫速率测试类"""

    def setUp(self):
        """FMO 本征系统与 Drude 谱密度"""
        self.eig = diagonalize(fmo_preset())
        self.overlaps = overlap_products(self.eig)
        self.sd = DrudeDensity.from_cutoff_time(35.0, 50.0)
        self.identity = CorrelationMatrix.identity(7)

    def test_detailed_balance(self):
        """测试全部 21 对能级满足 Γ_下行/Γ_上行 = e^{βħω}"""
        for temperature in (77.0, 300.0):
            # 计算该温度下的全部速率
            rates = gamma_rates(self.eig, self.overlaps, self.sd, temperature, self.identity)
            gamma = rates.gamma
            # 速率非负，对角为零
            self.assertTrue(np.all(gamma >= 0.0))
            assert_array_equal(np.diag(gamma), np.zeros(7))
            # 逐对检查下行与上行速率之比
            for lo in range(7):
                for hi in range(lo + 1, 7):
                    gap = self.eig.energies[hi] - self.eig.energies[lo]
                    ratio = math.exp(UNITS.dimensionless_thermal(gap, temperature))
                    self.assertAlmostEqual(gamma[lo, hi] / gamma[hi, lo], ratio, delta=1e-12 * ratio)

    def test_generator_properties(self):
        """测试生成元每列和为 0，玻尔兹曼分布在其零空间中"""
        for temperature in (77.0, 300.0):
            rates = gamma_rates(self.eig, self.overlaps, self.sd, temperature, self.identity)
            # 生成元与 RateMatrix 中保存的一致
            g = population_generator(rates)
            assert_array_equal(g, rates.generator)
            assert_allclose(g.sum(axis=0), np.zeros(7), atol=1e-15)
            # 玻尔兹曼分布归一且被生成元零化
            equilibrium = rates.equilibrium()
            self.assertAlmostEqual(float(equilibrium.sum()), 1.0, places=14)
            assert_allclose(g @ equilibrium, np.zeros(7), atol=1e-15)

    def test_secular_rates(self):
        """测试 κ 对称、非负、对角为 0"""
        rates = gamma_rates(self.eig, self.overlaps, self.sd, 77.0, self.identity)
        kappa = coherence_decay_rates(rates).kappa
        # κ_nm = (Γ_nm + Γ_mn)/2
        assert_array_equal(kappa, kappa.T)
        self.assertTrue(np.all(kappa >= 0.0))
        assert_array_equal(np.diag(kappa), np.zeros(7))
        self.assertEqual(kappa[0, 1], 0.5 * (rates.gamma[0, 1] + rates.gamma[1, 0]))

    def test_two_level_generator(self):
        """测试二能级生成元的形式"""
        rates = RateMatrix(gamma=np.array([[0.0, 0.3], [0.1, 0.0]]), generator=None,
                           energies=np.array([0.0, 10.0]), temperature=77.0)
        assert_array_equal(population_generator(rates), [[-0.1, 0.3], [0.1, -0.3]])

    def test_zero_overlap_gives_zero_rates(self):
        """测试本征矢为单位阵时没有弛豫"""
        eig = Eigensystem(energies=np.array([0.0, 100.0, 250.0]), u=np.eye(3))
        rates = gamma_rates(eig, overlap_products(eig), self.sd, 300.0, CorrelationMatrix.identity(3))
        assert_array_equal(rates.gamma, np.zeros((3, 3)))
        assert_array_equal(coherence_decay_rates(rates).kappa, np.zeros((3, 3)))

    def test_degenerate_limit(self):
        """测试简并能级对使用 ω → 0 极限，且与近简并结果连续"""
        s = 1.0 / math.sqrt(2.0)
        u = np.array([[s, s], [s, -s]])
        identity = CorrelationMatrix.identity(2)
        temperature = 77.0

        degenerate = Eigensystem(energies=np.array([0.0, 0.0]), u=u)
        rates = gamma_rates(degenerate, overlap_products(degenerate), self.sd, temperature, identity)
        expected = (2.0 * math.pi * UNITS.two_pi_c * self.sd.slope_at_zero()
                    * temperature / UNITS.c2 * 0.5)
        self.assertEqual(rates.gamma[0, 1], rates.gamma[1, 0])
        self.assertAlmostEqual(rates.gamma[0, 1], expected, delta=1e-12 * expected)

        near = Eigensystem(energies=np.array([0.0, 1e-3]), u=u)
        near_rates = gamma_rates(near, overlap_products(near), self.sd, temperature, identity)
        self.assertAlmostEqual(near_rates.gamma[1, 0], expected, delta=1e-4 * expected)
        self.assertAlmostEqual(near_rates.gamma[0, 1], expected, delta=1e-4 * expected)

    def test_identity_correlation_matches_uncorrelated_formula(self):
        """测试 C = I 时耦合系数与 Σ_j k_j² 逐位一致"""
        k = self.overlaps.k
        for lo in range(7):
            for hi in range(lo + 1, 7):
                self.assertEqual(float(self.identity.bilinear(k[lo, hi], k[lo, hi])),
                                 float(np.sum(k[lo, hi] ** 2)))

    def test_correlation_slows_site_pair(self):
        """测试 C56 = 0.9 降低 5/6 位点混合能级对之间的速率"""
        correlated = CorrelationMatrix.from_pairs(7, {(5, 6): 0.9})
        plain = gamma_rates(self.eig, self.overlaps, self.sd, 77.0, self.identity)
        slowed = gamma_rates(self.eig, self.overlaps, self.sd, 77.0, correlated)
        # 在位点 5、6 上权重最大的两个本征态
        weights = self.eig.site_weights()
        pair = sorted(int(np.argmax(weights[j])) for j in (4, 5))
        lo, hi = pair
        self.assertNotEqual(lo, hi)
        self.assertLess(slowed.gamma[lo, hi], plain.gamma[lo, hi])

    def test_adolphs_renger_rates(self):
        """测试 Adolphs-Renger 谱密度同样满足细致平衡"""
        rates = gamma_rates(self.eig, self.overlaps, AdolphsRengerDensity(), 77.0, self.identity)
        self.assertTrue(np.all(rates.gamma >= 0.0))
        assert_allclose(rates.generator @ rates.equilibrium(), np.zeros(7), atol=1e-15)


class RedfieldGeneratorTests(SimpleTestCase):
    """完整主方程超算符测试类"""

    def setUp(self):
        """FMO，77 K"""
        self.eig = diagonalize(fmo_preset())
        self.overlaps = overlap_products(self.eig)
        self.sd = DrudeDensity.from_cutoff_time(35.0, 50.0)
        self.generator = redfield_generator(self.eig, self.overlaps, self.sd, 77.0)
        self.rates = gamma_rates(self.eig, self.overlaps, self.sd, 77.0, CorrelationMatrix.identity(7))

    def test_population_block_reduces_to_rates(self):
        """测试布居块与 Γ 一致：增益为 Γ_mn，损失为 −Σ_n Γ_nm"""
        n = 7
        gamma = self.rates.gamma
        for m in range(n):
            for k in range(n):
                value = self.generator[m * n + m, k * n + k]
                expected = self.rates.generator[m, k]
                self.assertAlmostEqual(value.real, expected, delta=1e-10 * np.max(gamma))
                self.assertAlmostEqual(value.imag, 0.0, delta=1e-12 * np.max(gamma))

    def test_preserves_hermiticity(self):
        """测试作用在厄米矩阵上的结果仍为厄米矩阵"""
        rng = np.random.default_rng(11)
        a = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
        rho = a + a.conj().T
        drho = (self.generator @ rho.reshape(-1)).reshape(7, 7)
        scale = float(np.max(np.abs(drho)))
        self.assertLess(float(np.max(np.abs(drho - drho.conj().T))), 1e-12 * scale)

    def test_literal_gain_differs(self):
        """测试 literal 形式的增益项与默认形式不同"""
        literal = redfield_generator(self.eig, self.overlaps, self.sd, 77.0, literal=True)
        self.assertEqual(literal.shape, (49, 49))
        self.assertGreater(float(np.max(np.abs(literal - self.generator))), 0.0)

    def test_zero_couplings(self):
        """测试本征矢为单位阵时超算符为零"""
        eig = Eigensystem(energies=np.array([0.0, 100.0, 250.0]), u=np.eye(3))
        generator = redfield_generator(eig, overlap_products(eig), self.sd, 77.0)
        assert_array_equal(generator, np.zeros((9, 9)))

    def test_degenerate_rejected(self):
        """测试简并能级抛出 ConfigurationError"""
        s = 1.0 / math.sqrt(2.0)
        eig = Eigensystem(energies=np.array([0.0, 0.0]), u=np.array([[s, s], [s, -s]]))
        with self.assertRaises(ConfigurationError):
            redfield_generator(eig, overlap_products(eig), self.sd, 77.0)
