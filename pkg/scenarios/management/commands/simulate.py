# scenarios/management/commands/simulate.py
# 模拟命令：python manage.py simulate --preset fig1
import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from excitons.exceptions import ConfigurationError, DomainError, NumericalError
from excitons.models import MODES
from scenarios.exports import compare_trajectories
from scenarios.forms import load_config_file
from scenarios.presets import list_scenarios
from scenarios.runner import run_scenario

# 退出码
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def parse_coherences(text):
    """"1,2;3,4" 或 "1,2" → [(1, 2), (3, 4)]"""
    pairs = []
    for chunk in text.split(';'):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(',')
        if len(parts) != 2:
            raise ConfigurationError(f'--coherences 的格式应为 b,c，收到 {chunk!r}')
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ConfigurationError(f'--coherences 必须是位点编号，收到 {chunk!r}')
    return pairs


class Command(BaseCommand):
    help = '运行激子转移模拟，输出位点布居 CSV 与 JSON 运行清单'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group()
        source.add_argument('--config', help='JSON 配置文件路径')
        source.add_argument('--preset', help='预设场景名称，例如 fig1')
        source.add_argument('--compare', nargs=2, metavar=('A', 'B'), help='比较两个轨迹 CSV')
        source.add_argument('--list-presets', action='store_true', help='列出全部预设场景')
        parser.add_argument('--mode', choices=MODES, help='覆盖配置中的模式')
        parser.add_argument('--output', help='CSV 输出路径，清单写在同目录的 .json')
        parser.add_argument('--features', action='store_true', help='打印轨迹特征')
        parser.add_argument('--coherences', default='', help='额外输出的相干列，例如 1,2;5,6')

    def handle(self, *args, **options):
        try:
            if options['list_presets']:
                self._list_presets()
            elif options['compare']:
                self._compare(*options['compare'])
            elif options['config'] or options['preset']:
                self._run(options)
            else:
                raise ConfigurationError('必须指定 --config、--preset、--compare 或 --list-presets 之一')
        except (ConfigurationError, DomainError) as exc:
            raise CommandError(str(exc), returncode=EXIT_CONFIG)
        except NumericalError as exc:
            raise CommandError(f'数值计算失败：{exc}', returncode=EXIT_NUMERICAL)

    def _list_presets(self):
        for scenario in list_scenarios():
            self.stdout.write(f'{scenario.name:<8} {scenario.description}')

    def _compare(self, file_a, file_b):
        result = compare_trajectories(file_a, file_b)
        self.stdout.write(json.dumps(result.to_document(), indent=2, ensure_ascii=False))

    def _run(self, options):
        coherences = parse_coherences(options['coherences'])
        if options['config']:
            path = Path(options['config'])
            source = load_config_file(path)
            name = path.stem
        else:
            source = options['preset']
            name = None
        run = run_scenario(
            source,
            mode=options['mode'],
            output=options['output'],
            coherences=coherences,
            name=name,
        )
        self.stdout.write(self.style.SUCCESS(f'{run.name}: {run.csv_path}'))
        self.stdout.write(f'运行清单: {run.manifest_path}')
        if options['features']:
            self.stdout.write(json.dumps(run.features.to_document(), indent=2, ensure_ascii=False))
