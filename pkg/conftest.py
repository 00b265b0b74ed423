# conftest.py
# pytest 入口：配置 Django 设置模块并初始化应用，使各应用的 tests.py 可被直接收集
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fmosim.settings')
django.setup()
