"""
Правила наблюдения за файлами спецификаций
"""

from config.settings import SPEC_SUFFIX
from core.utils import create_suffix_condition

# Какие файлы отслеживать и какую команду перезапускать при их изменении
WATCH_CONFIGS = [
    {
        "description": "Файлы спецификаций .sem",
        "command": "check",
        "recursive": True,
        "conditions": [
            create_suffix_condition([SPEC_SUFFIX]),
        ]
    },
]


def get_conditions_for_command(command):
    """
    Возвращает условия отбора файлов для указанной команды.

    Args:
        command (str): Имя команды CLI

    Returns:
        list: Список функций-условий или None если команда не отслеживается
    """
    for config in WATCH_CONFIGS:
        if config['command'] == command:
            return config['conditions']
    return None


def get_description_for_command(command):
    for config in WATCH_CONFIGS:
        if config['command'] == command:
            return config['description']
    return None
