"""
fmosim 项目配置文件

本项目没有网页和数据库，Django 只负责：
- 管理命令（python manage.py simulate）
- 表单校验（配置文件的逐字段检查）
- 日志配置
- 测试运行器（python manage.py test）
"""

from pathlib import Path

# 项目根目录，例如 BASE_DIR / 'runs'
BASE_DIR = Path(__file__).resolve().parent.parent

# 管理命令不需要会话与签名，这里只是满足 Django 的启动检查
SECRET_KEY = 'fmosim-local-only-not-used-for-signing'

DEBUG = False

ALLOWED_HOSTS = []


# 应用列表：每个应用对应一个模块
INSTALLED_APPS = [
    'excitons',     # 单位、哈密顿量、谱密度、本征分解
    'lineshapes',   # 退相干函数 φ(t)
    'relaxation',   # 布居弛豫速率 Γ
    'dynamics',     # 密度矩阵时间演化
    'scenarios',    # 预设场景、配置文件、命令行
]

# 没有数据库：Django 自动使用 dummy 后端，SimpleTestCase 不需要建库
DATABASES = {}


# 国际化（表单错误信息使用中文）
LANGUAGE_CODE = 'zh-hans'

TIME_ZONE = 'Asia/Shanghai'

USE_I18N = True

USE_TZ = True


# ---------------------------
# 模拟运行配置
# ---------------------------
SIMULATION = {
    # 未指定 --output 时，CSV 和 JSON 清单写到这个目录
    'OUTPUT_DIR': BASE_DIR / 'runs',
    # 振荡衰减判据：峰谷差低于该值即视为阻尼完成
    'DAMPING_THRESHOLD': 0.02,
    # CSV 数值的有效数字位数（17 位保证读回后完全一致）
    'CSV_DIGITS': 17,
    'LOG_LEVEL': 'INFO',
}


# ---------------------------
# 日志配置
# ---------------------------
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': SIMULATION['LOG_LEVEL'],
            'propagate': False,
        }
        for app in INSTALLED_APPS
    },
}
