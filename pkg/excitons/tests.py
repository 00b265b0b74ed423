# tests.py
# 单元测试文件，包含单位、哈密顿量、谱密度、关联矩阵、配置与本征分解的测试用例
import math
# 导入替身工具，用于模拟 QUADPACK 的返回值
from unittest.mock import patch

# 导入数值计算库
import numpy as np
# 导入数组断言工具
from numpy.testing import assert_allclose, assert_array_equal
# 导入Django测试框架（不需要数据库）
from django.test import SimpleTestCase

# 导入当前应用的本征分解
from .eigen import Eigensystem, diagonalize, overlap_products
# 导入当前应用的异常类型
from .exceptions import ConfigurationError, DomainError, NumericalError
# 导入当前应用的模型
from .models import (
    FMO_UPPER_TRIANGLE, MODE_CLOSED, UNITS,
    AdolphsRengerDensity, BathSpec, CorrelationMatrix, DrudeDensity,
    ExcitonHamiltonian, SimulationConfig, evaluate_spectral_density,
    fmo_preset, reorganization_energy,
)
# 导入自适应积分
from .quadrature import adaptive_quad


class UnitSystemTests(SimpleTestCase):
    """单位换算测试类"""

    def test_dimensionless_thermal(self):
        """测试 βħω = c2·ν̃/T"""
        self.assertAlmostEqual(UNITS.dimensionless_thermal(100.0, 300.0),
                               1.4387769 * 100.0 / 300.0, places=15)

    def test_thermal_frequency_matches_thermal_factor(self):
        """测试 k_BT/ħ 与 βħω 的一致性：ω/(k_BT/ħ) = βħω"""
        omega = UNITS.angular(150.0)
        self.assertAlmostEqual(omega / UNITS.thermal_frequency(77.0),
                               UNITS.dimensionless_thermal(150.0, 77.0), places=12)

    def test_angular_round_trip(self):
        """测试波数与角频率互换"""
        self.assertAlmostEqual(UNITS.wavenumber(UNITS.angular(123.0)), 123.0, places=12)


class HamiltonianTests(SimpleTestCase):
    """位点哈密顿量测试类"""

    def setUp(self):
        """每个测试前构造 FMO 哈密顿量"""
        self.fmo = fmo_preset()

    def test_fmo_printed_entries(self):
        """测试 FMO 矩阵元与给定数值一致"""
        self.assertEqual(self.fmo.h[0][0], 240.0)
        self.assertEqual(self.fmo.h[0][1], -87.7)
        self.assertEqual(self.fmo.h[1][0], -87.7)
        self.assertEqual(self.fmo.h[2][2], 0.0)
        self.assertEqual(self.fmo.h[5][5], 435.0)

    def test_fmo_all_upper_entries_and_symmetry(self):
        """测试 28 个上三角元全部一致且矩阵严格对称"""
        for i, row in enumerate(FMO_UPPER_TRIANGLE):
            for offset, value in enumerate(row):
                self.assertEqual(self.fmo.h[i][i + offset], value)
        assert_array_equal(self.fmo.h, self.fmo.h.T)
        self.assertAlmostEqual(float(np.trace(self.fmo.h)), 1650.0, places=9)

    def test_default_labels(self):
        """测试默认位点名称"""
        self.assertEqual(self.fmo.labels[0], 'site1')
        self.assertEqual(self.fmo.n_sites, 7)
        self.assertEqual(str(self.fmo), 'ExcitonHamiltonian(7 位点)')

    def test_asymmetric_matrix_rejected(self):
        """测试明显不对称的矩阵被拒绝"""
        with self.assertRaises(ConfigurationError):
            ExcitonHamiltonian(h=[[0.0, 1.0], [2.0, 0.0]])

    def test_tiny_asymmetry_symmetrized(self):
        """测试容差内的不对称被 (h+hᵀ)/2 抹平"""
        h = ExcitonHamiltonian(h=[[0.0, 1.0], [1.0 + 1e-10, 0.0]])
        self.assertEqual(h.h[0][1], h.h[1][0])

    def test_non_finite_and_single_site_rejected(self):
        """测试非有限数值与单位点矩阵被拒绝"""
        with self.assertRaises(ConfigurationError):
            ExcitonHamiltonian(h=[[0.0, np.nan], [np.nan, 0.0]])
        with self.assertRaises(ConfigurationError):
            ExcitonHamiltonian(h=[[1.0]])

    def test_upper_triangle_row_length_checked(self):
        """测试上三角行长度错误时报错"""
        with self.assertRaises(ConfigurationError):
            ExcitonHamiltonian.from_upper_triangle([(1.0, 2.0), (3.0, 4.0)])


class SpectralDensityTests(SimpleTestCase):
    """谱密度测试类"""

    def setUp(self):
        """Drude（λ = 35 cm⁻¹，ω_c⁻¹ = 50 fs）与默认 Adolphs-Renger"""
        self.drude = DrudeDensity.from_cutoff_time(35.0, 50.0)
        self.ar = AdolphsRengerDensity()
        self.ar_lorentz = AdolphsRengerDensity(discrete_mode_form='lorentzian')

    def test_drude_cutoff_from_time(self):
        """测试 ω_c⁻¹ = 50 fs 对应约 106.18 cm⁻¹"""
        self.assertAlmostEqual(self.drude.cutoff, 1.0 / (UNITS.two_pi_c * 50.0), places=12)
        self.assertAlmostEqual(self.drude.cutoff, 106.18, delta=0.01)

    def test_drude_value_at_cutoff(self):
        """测试 J(ω_c) = λ/π"""
        value = evaluate_spectral_density(self.drude, self.drude.cutoff)
        self.assertAlmostEqual(value, 35.0 / math.pi, places=12)

    def test_zero_at_origin(self):
        """测试所有谱密度 J(0) = 0"""
        for sd in (self.drude, self.ar, self.ar_lorentz):
            self.assertEqual(evaluate_spectral_density(sd, 0.0), 0.0)

    def test_nonnegative_on_grid(self):
        """测试 ω ≥ 0 时 J(ω) ≥ 0"""
        omega = np.linspace(0.0, 3000.0, 30001)
        for sd in (self.drude, self.ar, self.ar_lorentz):
            self.assertTrue(np.all(sd.evaluate(omega) >= 0.0))

    def test_negative_frequency_rejected(self):
        """测试负频率抛出 DomainError"""
        with self.assertRaises(DomainError):
            evaluate_spectral_density(self.drude, -1.0)
        with self.assertRaises(DomainError):
            self.ar.evaluate(np.array([1.0, -0.5]))

    def test_adolphs_renger_value_at_mode(self):
        """测试 ω = 180 cm⁻¹ 处两种展宽的取值"""
        w = 180.0
        g0 = (6.105e-5 * w ** 3 / 0.575 ** 4 * math.exp(-math.sqrt(w / 0.575))
              + 3.8156e-5 * w ** 3 / 2.0 ** 4 * math.exp(-math.sqrt(w / 2.0)))
        continuum = w ** 2 * 0.5 * g0
        modified = continuum + w * 180.0 * 0.22 / math.pi * 1.0
        lorentzian = continuum + 180.0 ** 2 * 0.22 / math.pi * (1.0 - 1.0 / (360.0 ** 2 + 1.0))
        self.assertAlmostEqual(self.ar.evaluate(w), modified, delta=1e-9 * modified)
        self.assertAlmostEqual(self.ar_lorentz.evaluate(w), lorentzian, delta=1e-9 * lorentzian)

    def test_slope_at_zero(self):
        """测试 slope_at_zero 与 J(h)/h 一致"""
        h = 1e-6
        for sd in (self.drude, self.ar, self.ar_lorentz):
            self.assertAlmostEqual(sd.evaluate(h) / h, sd.slope_at_zero(),
                                   delta=1e-6 * sd.slope_at_zero())

    def test_drude_reorganization_energy(self):
        """测试 Drude 重组能等于参数 λ"""
        self.assertEqual(reorganization_energy(self.drude), 35.0)
        self.assertEqual(reorganization_energy(DrudeDensity(reorganization=1.0, cutoff=53.0)), 1.0)

    def test_drude_reorganization_by_quadrature(self):
        """测试通用积分路径对 Drude 同样得到 λ"""
        value = super(DrudeDensity, self.drude).reorganization_energy()
        self.assertAlmostEqual(value, 35.0, delta=1e-8 * 35.0)

    def test_adolphs_renger_reorganization_two_tolerances(self):
        """测试 Adolphs-Renger 重组能在两种容差下一致"""
        coarse = reorganization_energy(self.ar, epsrel=1e-8)
        fine = reorganization_energy(self.ar, epsrel=1e-10)
        self.assertGreater(fine, 0.22 * 180.0)
        self.assertAlmostEqual(coarse, fine, delta=1e-6 * fine)

    def test_invalid_parameters_rejected(self):
        """测试非法参数"""
        with self.assertRaises(ConfigurationError):
            DrudeDensity(reorganization=-1.0, cutoff=100.0)
        with self.assertRaises(ConfigurationError):
            AdolphsRengerDensity(gamma_p=0.0)
        with self.assertRaises(ConfigurationError):
            AdolphsRengerDensity(discrete_mode_form='gaussian')


class CorrelationMatrixTests(SimpleTestCase):
    """浴关联矩阵测试类"""

    def test_identity(self):
        """测试单位阵被识别为无关联"""
        c = CorrelationMatrix.identity(7)
        self.assertTrue(c.is_identity)
        self.assertTrue(CorrelationMatrix.from_pairs(7, {}).is_identity)

    def test_from_pairs(self):
        """测试成对关联构造"""
        c = CorrelationMatrix.from_pairs(7, {(1, 2): 0.9, (5, 6): 0.9})
        self.assertFalse(c.is_identity)
        self.assertEqual(c.c[0][1], 0.9)
        self.assertEqual(c.c[5][4], 0.9)

    def test_indefinite_matrix_rejected(self):
        """测试 C45 = C47 = 0.4 加上 C56 = 0.9 不是半正定的"""
        with self.assertRaises(ConfigurationError):
            CorrelationMatrix.from_pairs(7, {(1, 2): 0.9, (5, 6): 0.9, (4, 5): 0.4, (4, 7): 0.4})

    def test_diagonal_and_symmetry_checked(self):
        """测试对角元不为 1 或不对称时报错"""
        with self.assertRaises(ConfigurationError):
            CorrelationMatrix(c=[[1.0, 0.0], [0.0, 0.5]])
        with self.assertRaises(ConfigurationError):
            CorrelationMatrix(c=[[1.0, 0.1], [0.2, 1.0]])

    def test_bilinear_identity_bit_for_bit(self):
        """测试 C = I 时双线性型与 Σ x_j y_j 逐位一致"""
        rng = np.random.default_rng(7)
        x = rng.normal(size=(5, 7))
        c = CorrelationMatrix.identity(7)
        assert_array_equal(c.bilinear(x, x), np.sum(x * x, axis=-1))

    def test_bilinear_general(self):
        """测试一般关联矩阵的双线性型"""
        c = CorrelationMatrix.from_pairs(2, {(1, 2): 0.5})
        self.assertAlmostEqual(float(c.bilinear([1.0, 2.0], [3.0, 4.0])),
                               3.0 + 8.0 + 0.5 * (1.0 * 4.0 + 2.0 * 3.0), places=12)


class SimulationConfigTests(SimpleTestCase):
    """模拟配置测试类"""

    def setUp(self):
        """构造热浴"""
        self.hamiltonian = fmo_preset()
        self.bath = BathSpec(
            temperature=77.0,
            spectral_density=DrudeDensity.from_cutoff_time(35.0, 50.0),
            correlation=CorrelationMatrix.identity(7),
        )

    def test_time_grid(self):
        """测试 n_steps 为网格点数"""
        config = SimulationConfig(hamiltonian=self.hamiltonian, bath=self.bath, initial_site=1)
        times = config.times()
        self.assertEqual(times.shape[0], 1001)
        self.assertEqual(times[0], 0.0)
        self.assertEqual(times[-1], 1000.0)
        self.assertEqual(config.with_mode(MODE_CLOSED).mode, MODE_CLOSED)

    def test_invalid_values_rejected(self):
        """测试非法初始位点、时间窗口、步数和模式"""
        cases = [
            {'initial_site': 0},
            {'initial_site': 8},
            {'initial_site': 1, 't_start': 10.0, 't_end': 10.0},
            {'initial_site': 1, 't_start': -1.0},
            {'initial_site': 1, 'n_steps': 1},
            {'initial_site': 1, 'mode': 'decoherence-only'},
        ]
        for kwargs in cases:
            with self.subTest(**kwargs):
                with self.assertRaises(ConfigurationError):
                    SimulationConfig(hamiltonian=self.hamiltonian, bath=self.bath, **kwargs)

    def test_correlation_dimension_checked(self):
        """测试关联矩阵维数与位点数不符时报错"""
        bath = BathSpec(temperature=77.0, spectral_density=self.bath.spectral_density,
                        correlation=CorrelationMatrix.identity(3))
        with self.assertRaises(ConfigurationError):
            SimulationConfig(hamiltonian=self.hamiltonian, bath=bath, initial_site=1)

    def test_temperature_must_be_positive(self):
        """测试温度必须为正"""
        with self.assertRaises(ConfigurationError):
            BathSpec(temperature=0.0, spectral_density=self.bath.spectral_density,
                     correlation=self.bath.correlation)


class QuadratureTests(SimpleTestCase):
    """自适应积分测试类"""

    def test_polynomial(self):
        """测试 ∫₀¹ x² dx = 1/3"""
        value, _ = adaptive_quad(lambda x: x * x, 0.0, 1.0)
        self.assertAlmostEqual(value, 1.0 / 3.0, places=13)

    def test_fourier_tail(self):
        """测试 QAWF：∫₀^∞ e^{−x} cos x dx = 1/2"""
        value, _ = adaptive_quad(lambda x: math.exp(-x), 0.0, np.inf, weight='cos', wvar=1.0)
        self.assertAlmostEqual(value, 0.5, places=10)

    def test_non_convergence_reported(self):
        """测试子区间不足时抛出 NumericalError 并报告精度"""
        with self.assertRaises(NumericalError) as ctx:
            adaptive_quad(lambda x: math.sin(x) ** 2, 0.0, 100.0, limit=1)
        self.assertIsNotNone(ctx.exception.achieved_tolerance)

    def test_relaxed_acceptance_logged_as_warning(self):
        """测试 QUADPACK 报警但误差估计可接受时记录 WARNING 日志"""
        # QUADPACK 的 ier > 0 时返回四元组，最后一项是提示信息
        flagged = (2.0, 1e-9, {}, 'The maximum number of subdivisions (50) has been achieved.')
        with patch('excitons.quadrature.quad', return_value=flagged):
            with self.assertLogs('excitons.quadrature', level='WARNING') as logs:
                value, error = adaptive_quad(math.exp, 0.0, 1.0)
        self.assertEqual((value, error), (2.0, 1e-9))
        self.assertIn('放宽的精度', logs.output[0])

        # 误差估计超出可接受范围时仍然报错
        with patch('excitons.quadrature.quad', return_value=(2.0, 1e-3, {}, 'roundoff')):
            with self.assertRaises(NumericalError) as ctx:
                adaptive_quad(math.exp, 0.0, 1.0)
        self.assertAlmostEqual(ctx.exception.achieved_tolerance, 5e-4)


class EigenTests(SimpleTestCase):
    """本征分解测试类"""

    def setUp(self):
        """对角化 FMO 哈密顿量"""
        self.fmo = fmo_preset()
        self.eig = diagonalize(self.fmo)

    def test_dimer(self):
        """测试对称二聚体：本征值 ±v，本征矢 (1, ∓1)/√2"""
        eig = diagonalize(ExcitonHamiltonian(h=[[0.0, 50.0], [50.0, 0.0]]))
        assert_allclose(eig.energies, [-50.0, 50.0], atol=1e-12)
        s = 1.0 / math.sqrt(2.0)
        assert_allclose(eig.u, [[s, s], [-s, s]], atol=1e-12)

    def test_diagonal_matrix(self):
        """测试对角矩阵：本征矢为置换后的单位阵"""
        eig = diagonalize(ExcitonHamiltonian(h=np.diag([3.0, 1.0, 2.0])))
        assert_array_equal(eig.energies, [1.0, 2.0, 3.0])
        assert_array_equal(eig.u, [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def test_fmo_against_reference(self):
        """测试 FMO 本征值与 LAPACK 结果一致、迹为 1650 cm⁻¹"""
        assert_allclose(self.eig.energies, np.linalg.eigvalsh(self.fmo.h), rtol=0, atol=1e-9)
        self.assertAlmostEqual(float(self.eig.energies.sum()), 1650.0, delta=1e-9)
        self.assertTrue(np.all(np.diff(self.eig.energies) > 0))

    def test_orthonormal_and_residual(self):
        """测试正交归一与本征方程残差"""
        u = self.eig.u
        assert_allclose(u.T @ u, np.eye(7), atol=1e-12)
        scale = np.linalg.norm(self.fmo.h)
        residual = self.fmo.h @ u - u * self.eig.energies[None, :]
        self.assertLess(float(np.max(np.abs(residual))), 1e-9 * scale)

    def test_sign_convention(self):
        """测试每列绝对值最大的元素为正"""
        u = self.eig.u
        largest = np.argmax(np.abs(u), axis=0)
        self.assertTrue(np.all(u[largest, np.arange(7)] > 0))

    def test_deterministic(self):
        """测试相同输入得到逐位相同的输出"""
        again = diagonalize(self.fmo)
        assert_array_equal(again.energies, self.eig.energies)
        assert_array_equal(again.u, self.eig.u)

    def test_sweep_limit(self):
        """测试扫描次数用尽时抛出 NumericalError"""
        with self.assertRaises(NumericalError):
            diagonalize(self.fmo, max_sweeps=0)

    def test_transition_frequencies_antisymmetric(self):
        """测试 ω_mn = −ω_nm"""
        omega = self.eig.transition_frequencies()
        assert_array_equal(omega, -omega.T)
        self.assertAlmostEqual(omega[1, 0],
                               UNITS.angular(self.eig.energies[1] - self.eig.energies[0]), places=15)


class OverlapTests(SimpleTestCase):
    """重叠乘积测试类"""

    def test_dimer_products(self):
        """测试二聚体 k[1][2][1] = 1/2，k[1][2][2] = −1/2"""
        s = 1.0 / math.sqrt(2.0)
        eig = Eigensystem(energies=np.array([-1.0, 1.0]), u=np.array([[s, s], [-s, s]]))
        k = overlap_products(eig).k
        self.assertAlmostEqual(k[0][1][0], 0.5, places=15)
        self.assertAlmostEqual(k[0][1][1], -0.5, places=15)
        # 对角块：k[m][m][j] = u[j][m]²
        self.assertAlmostEqual(k[1][1][0], 0.5, places=15)

    def test_fmo_completeness_and_gradients(self):
        """测试完备性 Σ_j k[n][m][j] = δ_nm 与梯度性质"""
        eig = diagonalize(fmo_preset())
        overlaps = overlap_products(eig)
        assert_allclose(overlaps.k.sum(axis=2), np.eye(7), atol=1e-12)
        assert_allclose(overlaps.d.sum(axis=1), np.ones(7), atol=1e-12)
        self.assertTrue(np.all(overlaps.d >= 0.0))
        self.assertTrue(np.all(overlaps.d <= 1.0))
        assert_array_equal(overlaps.d, eig.u.T ** 2)
        assert_array_equal(overlaps.d, eig.site_weights().T)
