# tests.py
# 布居传播、密度矩阵组装与无环境参考解的测试
import math

# 导入数值计算库
import numpy as np
# 导入数组断言工具
from numpy.testing import assert_allclose, assert_array_equal
# 导入Django测试框架（不需要数据库）
from django.test import SimpleTestCase

# 导入本征分解
from excitons.eigen import diagonalize, overlap_products
# 导入异常类型
from excitons.exceptions import ConfigurationError, DomainError, NumericalError
# 导入领域模型
from excitons.models import (
    MODE_CLOSED, MODE_DECOHERENCE_ONLY, MODE_FULL, MODE_RELAXATION_ONLY, MODES, UNITS,
    BathSpec, CorrelationMatrix, DrudeDensity, ExcitonHamiltonian, SimulationConfig, fmo_preset,
)
# 导入退相干函数
from lineshapes.algorithms import dephasing_table, phi_base, phi_base_zero
# 导入退相干表模型
from lineshapes.models import DephasingTable
# 导入弛豫速率
from relaxation.algorithms import coherence_decay_rates, gamma_rates

# 导入当前应用的算法
from .algorithms import (
    assemble_density, equilibrium_site_populations, propagate_populations, unitary_reference,
)


def build_config(temperature=77.0, initial_site=1, mode=MODE_FULL, t_end=1000.0, n_steps=1001):
    """FMO + Drude（λ = 35 cm⁻¹，ω_c⁻¹ = 50 fs）"""
    return SimulationConfig(
        hamiltonian=fmo_preset(),
        bath=BathSpec(
            temperature=temperature,
            spectral_density=DrudeDensity.from_cutoff_time(35.0, 50.0),
            correlation=CorrelationMatrix.identity(7),
        ),
        initial_site=initial_site,
        t_end=t_end,
        n_steps=n_steps,
        mode=mode,
    )


def run_pipeline(config, include_eigenbasis=False):
    """对角化 → 退相干表 → 速率 → 密度矩阵"""
    bath = config.bath
    eig = diagonalize(config.hamiltonian)
    overlaps = overlap_products(eig)
    times = config.times()
    if config.mode in (MODE_CLOSED, MODE_RELAXATION_ONLY):
        base = phi_base_zero(times)
    else:
        base = phi_base(bath.spectral_density, bath.temperature, times)
    table = dephasing_table(base, overlaps, bath.correlation, eig)
    rates = gamma_rates(eig, overlaps, bath.spectral_density, bath.temperature, bath.correlation)
    secular = coherence_decay_rates(rates)
    trajectory = assemble_density(config, eig, table, rates, secular,
                                  include_eigenbasis=include_eigenbasis)
    return eig, rates, trajectory


class PropagatePopulationsTests(SimpleTestCase):
    """布居传播测试类"""

    def setUp(self):
        """二能级：0 → 1 速率 0.004 fs⁻¹，1 → 0 速率 0.01 fs⁻¹"""
        self.up = 0.004
        self.down = 0.01
        self.generator = np.array([[-self.up, self.down], [self.up, -self.down]])
        self.times = np.linspace(0.0, 500.0, 501)

    def test_two_level_analytic(self):
        """测试二能级解析解"""
        # 从下能级出发
        result = propagate_populations(self.generator, [1.0, 0.0], self.times)
        total = self.up + self.down
        # 上能级布居 = up/(up + down)·(1 − e^{−(up+down)t})
        upper = self.up / total * (1.0 - np.exp(-total * self.times))
        assert_allclose(result[:, 1], upper, rtol=0, atol=1e-10)
        assert_allclose(result.sum(axis=1), np.ones(501), atol=1e-12)

    def test_zero_generator(self):
        """测试 g = 0 时布居不变"""
        w0 = np.array([0.25, 0.75])
        result = propagate_populations(np.zeros((2, 2)), w0, self.times)
        assert_array_equal(result, np.tile(w0, (501, 1)))

    def test_non_uniform_grid(self):
        """测试非均匀网格与均匀网格在公共时间点一致"""
        uniform = propagate_populations(self.generator, [1.0, 0.0], self.times)
        irregular = propagate_populations(self.generator, [1.0, 0.0], [0.0, 1.0, 5.0, 50.0, 400.0])
        assert_allclose(irregular, uniform[[0, 1, 5, 50, 400]], rtol=0, atol=1e-12)

    def test_invalid_input(self):
        """测试非有限生成元与非法初始分布"""
        with self.assertRaises(NumericalError):
            propagate_populations([[np.nan, 0.0], [0.0, 0.0]], [1.0, 0.0], self.times)
        with self.assertRaises(DomainError):
            propagate_populations(self.generator, [0.5, 0.6], self.times)
        with self.assertRaises(DomainError):
            propagate_populations(self.generator, [1.5, -0.5], self.times)


class AssembleDensityTests(SimpleTestCase):
    """密度矩阵组装测试类"""

    def test_initial_condition(self):
        """测试 t = 0 时 ρ = |a⟩⟨a|"""
        for mode in MODES:
            for site in (1, 6):
                _, _, trajectory = run_pipeline(build_config(initial_site=site, mode=mode, n_steps=11))
                expected = np.zeros((7, 7))
                expected[site - 1, site - 1] = 1.0
                assert_allclose(trajectory.rho[0], expected, rtol=0, atol=1e-12)

    def test_closed_matches_unitary_reference(self):
        """测试 closed 模式与 e^{−iHt} 的结果在 1e-9 内一致"""
        for site in (1, 6):
            config = build_config(initial_site=site, mode=MODE_CLOSED)
            _, _, trajectory = run_pipeline(config)
            # 独立的 numpy eigh 参考解
            reference = unitary_reference(config.hamiltonian, site, config.times())
            assert_allclose(trajectory.populations(), reference, rtol=0, atol=1e-9)

    def test_trace_and_hermiticity(self):
        """测试所有模式下迹为 1，组装结果不做对称化也是厄米的"""
        for temperature in (77.0, 300.0):
            for mode in MODES:
                _, _, trajectory = run_pipeline(build_config(temperature=temperature, mode=mode))
                rho = trajectory.rho
                trace = np.trace(rho, axis1=1, axis2=2)
                self.assertLess(float(np.max(np.abs(trace - 1.0))), 1e-12)
                # 厄米性来自 φ、κ 表的对称性，这里直接检查原始结果
                skew = np.abs(rho - np.conj(rho.transpose(0, 2, 1)))
                self.assertLess(float(np.max(skew)), 1e-12)

    def test_broken_table_symmetry_is_visible(self):
        """测试 Im φ 失去反对称性时密度矩阵不再厄米"""
        config = build_config(mode=MODE_DECOHERENCE_ONLY, n_steps=101)
        eig = diagonalize(config.hamiltonian)
        overlaps = overlap_products(eig)
        base = phi_base(config.bath.spectral_density, 77.0, config.times())
        table = dephasing_table(base, overlaps, config.bath.correlation, eig)
        # 把 Im φ 改成对称的，其余保持不变
        broken = DephasingTable(
            times=table.times,
            phi=table.phi.real + 1j * np.abs(table.phi.imag),
            omega=table.omega,
            re_coupling=table.re_coupling,
            im_coupling=np.abs(table.im_coupling),
        )
        rates = gamma_rates(eig, overlaps, config.bath.spectral_density, 77.0, config.bath.correlation)
        rho = assemble_density(config, eig, broken, rates, coherence_decay_rates(rates)).rho
        skew = np.abs(rho - np.conj(rho.transpose(0, 2, 1)))
        self.assertGreater(float(np.max(skew)), 1e-3)

    def test_decoherence_only_keeps_eigen_populations(self):
        """测试只有退相干时本征态布居守恒"""
        eig, _, trajectory = run_pipeline(
            build_config(mode=MODE_DECOHERENCE_ONLY, n_steps=101), include_eigenbasis=True)
        w0 = eig.u[0] ** 2
        diagonal = np.real(np.diagonal(trajectory.eigen_rho, axis1=1, axis2=2))
        assert_allclose(diagonal, np.tile(w0 / w0.sum(), (101, 1)), rtol=0, atol=1e-15)

    def test_full_mode_coherence_envelope(self):
        """测试 full 模式下本征基相干的模长单调不增"""
        _, _, trajectory = run_pipeline(build_config(mode=MODE_FULL, n_steps=201), include_eigenbasis=True)
        envelope = np.abs(trajectory.eigen_rho)
        # 对角元是布居，不在检查范围内
        off_diagonal = ~np.eye(7, dtype=bool)
        growth = np.diff(envelope, axis=0)[:, off_diagonal]
        self.assertTrue(np.all(growth <= 1e-15))

    def test_thermalization_at_20ps(self):
        """测试 300 K full 模式下 20 ps 时位点布居等于玻尔兹曼分布（每个位点 1e-6）"""
        eig = diagonalize(fmo_preset())
        expected = equilibrium_site_populations(eig, 300.0)
        for site in (1, 6):
            _, _, trajectory = run_pipeline(
                build_config(temperature=300.0, initial_site=site, t_end=20000.0, n_steps=2001))
            self.assertEqual(trajectory.times[-1], 20000.0)
            assert_allclose(trajectory.populations()[-1], expected, rtol=0, atol=1e-6)

    def test_thermalization_at_77k(self):
        """测试 77 K 时足够长时间后同样趋于玻尔兹曼分布"""
        for site in (1, 6):
            short_config = build_config(temperature=77.0, initial_site=site, n_steps=2)
            eig, rates, _ = run_pipeline(short_config)
            # 取最慢弛豫模式衰减时间的 40 倍，且不短于 1 ns
            spectrum = np.sort(np.abs(np.linalg.eigvals(rates.generator).real))
            t_end = max(1e6, 40.0 / spectrum[1])
            _, _, trajectory = run_pipeline(
                build_config(temperature=77.0, initial_site=site, t_end=t_end, n_steps=3))
            assert_allclose(trajectory.populations()[-1],
                            equilibrium_site_populations(eig, 77.0), rtol=0, atol=1e-6)

    def test_relaxation_populations_reach_equilibrium(self):
        """测试本征基布居收敛到生成元的零空间向量"""
        _, rates, _ = run_pipeline(build_config(temperature=300.0, n_steps=2))
        spectrum = np.sort(np.abs(np.linalg.eigvals(rates.generator).real))
        t_end = 60.0 / spectrum[1]
        w0 = np.zeros(7)
        w0[6] = 1.0
        result = propagate_populations(rates.generator, w0, [0.0, t_end])
        assert_allclose(result[-1], rates.equilibrium(), rtol=0, atol=1e-10)

    def test_grid_mismatch_rejected(self):
        """测试退相干表网格与配置不一致时报错"""
        config = build_config(n_steps=11)
        eig = diagonalize(config.hamiltonian)
        overlaps = overlap_products(eig)
        table = dephasing_table(phi_base_zero(np.linspace(0.0, 1000.0, 21)), overlaps,
                                CorrelationMatrix.identity(7), eig)
        rates = gamma_rates(eig, overlaps, config.bath.spectral_density, 77.0, CorrelationMatrix.identity(7))
        with self.assertRaises(ConfigurationError):
            assemble_density(config, eig, table, rates, coherence_decay_rates(rates))

    def test_coherence_accessor(self):
        """测试 coherence(b, c) 的编号从 1 开始并检查越界"""
        _, _, trajectory = run_pipeline(build_config(mode=MODE_CLOSED, n_steps=11))
        assert_array_equal(trajectory.coherence(1, 2), trajectory.rho[:, 0, 1])
        assert_array_equal(trajectory.coherence(2, 1), np.conj(trajectory.coherence(1, 2)))
        with self.assertRaises(DomainError):
            trajectory.coherence(0, 1)
        with self.assertRaises(DomainError):
            trajectory.coherence(1, 8)


class EquilibriumTests(SimpleTestCase):
    """平衡位点布居测试类"""

    def setUp(self):
        self.eig = diagonalize(fmo_preset())

    def test_sums_to_one(self):
        """测试平衡布居和为 1，77 K 时 site 3 占主导"""
        for temperature in (77.0, 300.0):
            populations = equilibrium_site_populations(self.eig, temperature)
            self.assertAlmostEqual(float(populations.sum()), 1.0, places=12)
        self.assertEqual(int(np.argmax(equilibrium_site_populations(self.eig, 77.0))), 2)

    def test_infinite_temperature_limit(self):
        """测试 T → ∞ 时趋于 Σ_m u[b][m]²/N"""
        populations = equilibrium_site_populations(self.eig, 1e12)
        expected = self.eig.site_weights().sum(axis=1) / 7.0
        assert_allclose(populations, expected, rtol=1e-9)

    def test_non_positive_temperature_rejected(self):
        """测试温度必须为正"""
        with self.assertRaises(ConfigurationError):
            equilibrium_site_populations(self.eig, 0.0)


class UnitaryReferenceTests(SimpleTestCase):
    """无环境参考解测试类"""

    def test_dimer_rabi_oscillation(self):
        """测试二聚体 P₂(t) = (V²/Ω²)·sin²(Ωt)，Ω = √(V² + (Δ/2)²)"""
        coupling, gap = 50.0, 100.0
        hamiltonian = ExcitonHamiltonian(h=[[0.0, coupling], [coupling, gap]])
        times = np.linspace(0.0, 500.0, 251)
        populations = unitary_reference(hamiltonian, 1, times)
        omega = math.sqrt(coupling ** 2 + (gap / 2.0) ** 2)
        expected = coupling ** 2 / omega ** 2 * np.sin(UNITS.angular(omega) * times) ** 2
        assert_allclose(populations[:, 1], expected, rtol=0, atol=1e-12)
        assert_allclose(populations.sum(axis=1), np.ones(251), atol=1e-12)

    def test_fmo_site1_oscillates_with_site2(self):
        """测试 FMO 从 site 1 出发时主要与 site 2 交换布居"""
        config = build_config(initial_site=1, mode=MODE_CLOSED)
        populations = unitary_reference(config.hamiltonian, 1, config.times())
        peaks = populations.max(axis=0)
        for site in range(2, 7):
            self.assertGreater(peaks[1], peaks[site])

    def test_invalid_site(self):
        """测试初始位点越界"""
        with self.assertRaises(ConfigurationError):
            unitary_reference(fmo_preset(), 8, [0.0, 1.0])
