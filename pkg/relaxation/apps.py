# apps.py
# Django应用配置文件，定义布居弛豫应用的配置信息
# 导入Django应用配置基类
from django.apps import AppConfig


class RelaxationConfig(AppConfig):
    """布居弛豫应用的配置类，继承自AppConfig"""
    # 指定应用在Python路径中的名称，与文件夹名称一致
    name = 'relaxation'
    # 设置应用的中文显示名称
    verbose_name = '布居弛豫'
