"""
Утилиты: параметры выполнения, перебор кортежей с пределом, имена портов
"""

import itertools
import logging
import math
from pathlib import Path

from config.settings import EPSILON, ENUMERATION_CAP
from .errors import CapExceededError

logger = logging.getLogger(__name__)

# Текущие допуск и предел перебора (CLI переопределяет переменные окружения)
RUNTIME = {
    "epsilon": EPSILON,
    "cap": ENUMERATION_CAP,
}


def configure_runtime(epsilon=None, cap=None):
    """
    Устанавливает допуск сравнения и предел перебора для текущего процесса.

    Args:
        epsilon (float): Допуск сравнения значений на [0,1]
        cap (int): Максимальное число перебираемых кортежей
    """
    if epsilon is not None:
        RUNTIME["epsilon"] = float(epsilon)
    if cap is not None:
        RUNTIME["cap"] = int(cap)
    logger.debug(f"Параметры выполнения: epsilon={RUNTIME['epsilon']}, cap={RUNTIME['cap']}")


def current_epsilon():
    return RUNTIME["epsilon"]


def current_cap():
    return RUNTIME["cap"]


def check_cap(required, cap=None):
    """
    Проверяет, что число кортежей не превышает предел.

    Raises:
        CapExceededError: если предел превышен
    """
    limit = current_cap() if cap is None else cap
    if required > limit:
        logger.warning(f"⚠️ Превышен предел перебора: {required} > {limit}")
        raise CapExceededError(required, limit)


def enumerate_product(supports, cap=None):
    """
    Перебирает декартово произведение носителей в лексикографическом порядке.

    Args:
        supports (list): Список упорядоченных носителей
        cap (int): Предел перебора (по умолчанию текущий)

    Returns:
        iterator: Кортежи элементов
    """
    required = math.prod(len(s) for s in supports)
    check_cap(required, cap)
    return itertools.product(*supports)


def dedupe_names(names):
    """
    Делает имена уникальными, добавляя суффиксы _2, _3, ...

    Args:
        names (list): Исходные имена

    Returns:
        list: Уникальные имена в том же порядке
    """
    seen = {}
    result = []
    taken = set(names)
    for name in names:
        if name not in seen:
            seen[name] = 1
            result.append(name)
            continue
        k = seen[name]
        while True:
            k += 1
            candidate = f"{name}_{k}"
            if candidate not in taken:
                break
        seen[name] = k
        taken.add(candidate)
        result.append(candidate)
    return result


def create_suffix_condition(suffixes):
    """
    Создает условие отбора файлов по расширению (без учета регистра).

    Args:
        suffixes (list): Список допустимых расширений

    Returns:
        function: Функция-условие для проверки имени файла
    """
    lowered = tuple(s.lower() for s in suffixes)

    def condition(filename):
        result = filename.lower().endswith(lowered)
        if result:
            logger.debug(f"Файл '{filename}' соответствует расширениям {suffixes}")
        return result

    return condition


def validate_paths(paths_to_check):
    """
    Проверяет существование путей.

    Args:
        paths_to_check (list): Список путей или словарей {'path', 'description'}

    Returns:
        bool: True если все пути существуют
    """
    all_paths_valid = True
    for path_info in paths_to_check:
        if isinstance(path_info, dict):
            path = Path(path_info.get('path', ''))
            description = path_info.get('description', 'Неизвестный путь')
        else:
            path = Path(path_info)
            description = f"Путь: {path_info}"

        if not path.exists():
            logger.warning(f"❌ {description} не существует: {path}")
            all_paths_valid = False
        else:
            logger.info(f"✓ {description} найден: {path}")

    return all_paths_valid
