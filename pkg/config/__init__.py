#Модуль конфигурации движка семиотики

from .settings import *

__all__ = [
    'BASE_DIR', 'LOG_DIR', 'LOG_FILE_NAME', 'LOG_MAX_BYTES', 'LOG_BACKUP_COUNT',
    'EPSILON', 'ENUMERATION_CAP', 'GRID_STEPS', 'CSV_SIGNIFICANT_DIGITS',
    'OMEGA_SIGN', 'OUTPUT_MARK', 'SPEC_SUFFIX', 'WATCH_DEBOUNCE',
    'EXIT_OK', 'EXIT_PROPERTY_FAILS', 'EXIT_INVALID', 'EXIT_CAP_EXCEEDED',
]
