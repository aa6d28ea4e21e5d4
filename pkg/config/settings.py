"""
Основные настройки движка нечеткой категорной семиотики
"""

import os
import sys
from pathlib import Path

# Определяем базовую директорию проекта
if getattr(sys, 'frozen', False):
    # Если запущен как exe (скомпилированный)
    BASE_DIR = Path(sys.executable).parent
else:
    # Если запущен как .py скрипт
    BASE_DIR = Path(__file__).parent.parent

# Директория для логов (создается рядом с main.py)
LOG_DIR = BASE_DIR / "logs"
LOG_FILE_NAME = "semio.log"

# Настройки логирования
LOG_MAX_BYTES = 10 * 1024 * 1024  # 10 MB
LOG_BACKUP_COUNT = 5


def _env_float(name, default):
    try:
        return float(os.environ.get(name, default))
    except ValueError:
        return float(default)


def _env_int(name, default):
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        return int(default)


# Допуск сравнения для алгебр на [0,1] (переопределяется флагом --epsilon)
EPSILON = _env_float("SEMIO_EPSILON", "1e-9")

# Предел перебора кортежей при вычислении пределов (флаг --cap)
ENUMERATION_CAP = _env_int("SEMIO_CAP", str(10 ** 7))

# Число точек детерминированной сетки на [0,1] для проверки законов
GRID_STEPS = 21

# Значащие цифры при выводе значений в CSV
CSV_SIGNIFICANT_DIGITS = 9

# Зарезервированное имя знака истинностных значений
OMEGA_SIGN = "Omega"

# Суффикс выходной полярности знака
OUTPUT_MARK = "+"

# Расширение файлов спецификаций
SPEC_SUFFIX = ".sem"

# Задержка между повторными проверками одного файла в режиме watch (сек)
WATCH_DEBOUNCE = 1.0

# Коды завершения CLI
EXIT_OK = 0
EXIT_PROPERTY_FAILS = 1
EXIT_INVALID = 2
EXIT_CAP_EXCEEDED = 3
