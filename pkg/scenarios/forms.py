# scenarios/forms.py
# 配置文件表单定义
# 用 Django 表单逐字段校验 JSON 配置，并转换成 SimulationConfig
import json
from pathlib import Path

import numpy as np
from django import forms

from excitons.exceptions import ConfigurationError
from excitons.models import (
    DISCRETE_MODE_FORMS, MODE_FULL, MODES,
    AdolphsRengerDensity, BathSpec, CorrelationMatrix, DrudeDensity,
    ExcitonHamiltonian, SimulationConfig, fmo_preset,
)

# 顶层字段中以 JSON 形式传入表单的部分
JSON_FIELDS = ('hamiltonian', 'spectral_density', 'correlation', 'time', 'labels')

DEFAULT_TIME = {'t_start_fs': 0.0, 't_end_fs': 1000.0, 'n_steps': 1001}

DRUDE_KEYS = {'type', 'lambda_cm', 'cutoff_cm', 'cutoff_time_fs'}
AR_KEYS = {'type', 's0', 's_h', 'omega_h_cm', 'gamma_p_cm', 'omega1_cm', 'omega2_cm',
           'discrete_mode_form'}
# 配置键 → AdolphsRengerDensity 字段
AR_FIELDS = {
    's0': 's0',
    's_h': 's_h',
    'omega_h_cm': 'omega_h',
    'gamma_p_cm': 'gamma_p',
    'omega1_cm': 'omega_1',
    'omega2_cm': 'omega_2',
}


def _number(document, key, default=None):
    """读取数值字段，布尔值和字符串都不接受"""
    if key not in document:
        if default is None:
            raise forms.ValidationError(f'缺少字段 {key}')
        return default
    value = document[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise forms.ValidationError(f'字段 {key} 必须是数字，收到 {value!r}')
    return float(value)


def _matrix(value, name):
    """N×N 数值数组"""
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise forms.ValidationError(f'{name} 必须是二维数组')
    try:
        matrix = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise forms.ValidationError(f'{name} 含有非数值元素')
    if matrix.ndim != 2:
        raise forms.ValidationError(f'{name} 的各行长度不一致')
    return matrix


def build_spectral_density(document):
    """
    由配置字典构造谱密度

    :param document: {"type": "drude", ...} 或 {"type": "adolphs_renger", ...}
    :raises forms.ValidationError: 字段缺失、多余或取值非法
    """
    if not isinstance(document, dict):
        raise forms.ValidationError('spectral_density 必须是对象')
    kind = document.get('type')
    try:
        if kind == DrudeDensity.kind:
            unknown = set(document) - DRUDE_KEYS
            if unknown:
                raise forms.ValidationError(f'Drude 谱密度不认识的字段：{sorted(unknown)}')
            reorganization = _number(document, 'lambda_cm')
            has_cutoff = 'cutoff_cm' in document
            has_time = 'cutoff_time_fs' in document
            if has_cutoff == has_time:
                raise forms.ValidationError('cutoff_cm 与 cutoff_time_fs 必须且只能给出一个')
            if has_time:
                return DrudeDensity.from_cutoff_time(reorganization, _number(document, 'cutoff_time_fs'))
            return DrudeDensity(reorganization=reorganization, cutoff=_number(document, 'cutoff_cm'))

        if kind == AdolphsRengerDensity.kind:
            unknown = set(document) - AR_KEYS
            if unknown:
                raise forms.ValidationError(f'Adolphs-Renger 谱密度不认识的字段：{sorted(unknown)}')
            defaults = AdolphsRengerDensity()
            params = {
                attr: _number(document, key, getattr(defaults, attr))
                for key, attr in AR_FIELDS.items()
            }
            form = document.get('discrete_mode_form', defaults.discrete_mode_form)
            if form not in DISCRETE_MODE_FORMS:
                raise forms.ValidationError(f'discrete_mode_form 只能是 {DISCRETE_MODE_FORMS}')
            return AdolphsRengerDensity(discrete_mode_form=form, **params)
    except ConfigurationError as exc:
        raise forms.ValidationError(str(exc))
    raise forms.ValidationError(f'未知的谱密度类型 {kind!r}，可选 drude / adolphs_renger')


class SimulationConfigForm(forms.Form):
    """模拟配置表单
    JSON 配置的每个顶层键对应一个字段，嵌套部分以 JSON 字符串传入"""
    hamiltonian = forms.JSONField(
        label='哈密顿量',
        error_messages={'required': '必须提供哈密顿量："fmo" 或 N×N 数组'},
    )
    temperature_K = forms.FloatField(
        label='温度',
        error_messages={'required': '必须提供温度 temperature_K'},
    )
    spectral_density = forms.JSONField(
        label='谱密度',
        error_messages={'required': '必须提供谱密度 spectral_density'},
    )
    correlation = forms.JSONField(label='关联矩阵', required=False)
    initial_site = forms.IntegerField(
        label='初始位点',
        min_value=1,
        error_messages={'required': '必须提供初始位点 initial_site'},
    )
    time = forms.JSONField(label='时间网格', required=False)
    mode = forms.ChoiceField(
        label='模式',
        choices=[(mode, mode) for mode in MODES],
        required=False,
    )
    labels = forms.JSONField(label='位点名称', required=False)

    def clean_hamiltonian(self):
        """"fmo" 或对称数组"""
        value = self.cleaned_data.get('hamiltonian')
        if value == 'fmo':
            return fmo_preset()
        matrix = _matrix(value, 'hamiltonian')
        try:
            return ExcitonHamiltonian(h=matrix)
        except ConfigurationError as exc:
            raise forms.ValidationError(str(exc))

    def clean_temperature_K(self):
        temperature = self.cleaned_data.get('temperature_K')
        if temperature is None or not temperature > 0:
            raise forms.ValidationError('温度必须为正数（K）')
        return temperature

    def clean_spectral_density(self):
        return build_spectral_density(self.cleaned_data.get('spectral_density'))

    def clean_time(self):
        """{"t_start_fs", "t_end_fs", "n_steps"}，缺省为 0–1000 fs、1001 点"""
        value = self.cleaned_data.get('time')
        if value in (None, ''):
            value = {}
        if not isinstance(value, dict):
            raise forms.ValidationError('time 必须是对象')
        unknown = set(value) - set(DEFAULT_TIME)
        if unknown:
            raise forms.ValidationError(f'time 不认识的字段：{sorted(unknown)}')
        steps = value.get('n_steps', DEFAULT_TIME['n_steps'])
        if isinstance(steps, bool) or not isinstance(steps, int):
            raise forms.ValidationError('n_steps 必须是整数')
        return {
            't_start': _number(value, 't_start_fs', DEFAULT_TIME['t_start_fs']),
            't_end': _number(value, 't_end_fs', DEFAULT_TIME['t_end_fs']),
            'n_steps': steps,
        }

    def clean_mode(self):
        return self.cleaned_data.get('mode') or MODE_FULL

    def clean(self):
        """组装完整配置，跨字段的约束在这里检查"""
        cleaned_data = super().clean()
        hamiltonian = cleaned_data.get('hamiltonian')
        sd = cleaned_data.get('spectral_density')
        temperature = cleaned_data.get('temperature_K')
        time = cleaned_data.get('time')
        if None in (hamiltonian, sd, temperature, time, cleaned_data.get('initial_site')):
            return cleaned_data

        labels = cleaned_data.get('labels')
        if labels not in (None, ''):
            if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
                self.add_error('labels', 'labels 必须是字符串数组')
                return cleaned_data
            try:
                hamiltonian = ExcitonHamiltonian(h=hamiltonian.h, labels=tuple(labels))
            except ConfigurationError as exc:
                self.add_error('labels', str(exc))
                return cleaned_data

        n = hamiltonian.n_sites
        initial_site = cleaned_data.get('initial_site')
        if initial_site > n:
            self.add_error('initial_site', f'初始位点必须在 1 到 {n} 之间，收到 {initial_site}')
            return cleaned_data

        correlation = cleaned_data.get('correlation')
        try:
            if correlation in (None, ''):
                correlation = CorrelationMatrix.identity(n)
            else:
                correlation = CorrelationMatrix(c=_matrix(correlation, 'correlation'))
        except (ConfigurationError, forms.ValidationError) as exc:
            self.add_error('correlation', exc.messages if hasattr(exc, 'messages') else str(exc))
            return cleaned_data
        if correlation.n != n:
            self.add_error('correlation', f'关联矩阵维数 {correlation.n} 与位点数 {n} 不符')
            return cleaned_data

        try:
            cleaned_data['config'] = SimulationConfig(
                hamiltonian=hamiltonian,
                bath=BathSpec(temperature=temperature, spectral_density=sd, correlation=correlation),
                initial_site=initial_site,
                t_start=time['t_start'],
                t_end=time['t_end'],
                n_steps=time['n_steps'],
                mode=cleaned_data.get('mode'),
            )
        except ConfigurationError as exc:
            raise forms.ValidationError(str(exc))
        return cleaned_data


def _form_data(document):
    """配置字典 → 表单数据，嵌套部分序列化为 JSON 字符串"""
    data = {}
    for key, value in document.items():
        if key in JSON_FIELDS:
            data[key] = json.dumps(value)
        else:
            data[key] = value
    return data


def load_config(document):
    """
    校验配置字典并构造 SimulationConfig

    :param document: 解析后的 JSON 配置
    :return: SimulationConfig
    :raises ConfigurationError: 字段错误，消息中列出每个出错的字段
    """
    if not isinstance(document, dict):
        raise ConfigurationError('配置文件的顶层必须是对象')
    unknown = set(document) - set(SimulationConfigForm.base_fields)
    if unknown:
        raise ConfigurationError(f'配置中不认识的字段：{", ".join(sorted(unknown))}')
    form = SimulationConfigForm(data=_form_data(document))
    if not form.is_valid():
        messages = []
        for field, errors in form.errors.items():
            name = '配置' if field == '__all__' else field
            messages.append(f'{name}: {" ".join(errors)}')
        raise ConfigurationError('配置无效 - ' + '; '.join(messages))
    return form.cleaned_data['config']


def load_config_file(path):
    """读取并校验 JSON 配置文件"""
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
    except OSError as exc:
        raise ConfigurationError(f'无法读取配置文件 {path}：{exc}')
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f'配置文件 {path} 不是合法的 JSON：{exc}')
    return load_config(document)


def config_to_document(config):
    """SimulationConfig → 配置字典（哈密顿量展开为完整矩阵）"""
    document = {
        'hamiltonian': config.hamiltonian.h.tolist(),
        'labels': list(config.hamiltonian.labels),
        'temperature_K': config.bath.temperature,
        'spectral_density': config.bath.spectral_density.to_document(),
        'initial_site': config.initial_site,
        'time': {
            't_start_fs': config.t_start,
            't_end_fs': config.t_end,
            'n_steps': config.n_steps,
        },
        'mode': config.mode,
    }
    if not config.bath.correlation.is_identity:
        document['correlation'] = config.bath.correlation.c.tolist()
    return document
