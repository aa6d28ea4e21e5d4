"""
Главный модуль CLI semio
Проверка и вычисления над спецификациями нечеткой категорной семиотики (.sem)
"""

import sys
import logging

if hasattr(sys.stdout, "reconfigure"):
    sys.stdout.reconfigure(encoding="utf-8")
    sys.stderr.reconfigure(encoding="utf-8")

# Импорты модулей проекта
try:
    from config.settings import LOG_DIR, LOG_FILE_NAME, LOG_MAX_BYTES, LOG_BACKUP_COUNT, EXIT_INVALID
    from core.commands import build_parser, run_command
    from core.errors import SemioError, SpecError
except ImportError as e:
    print(f"❌ Ошибка импорта модулей: {e}", file=sys.stderr)
    print("Установите зависимости: pip install -r requirements.txt", file=sys.stderr)
    sys.exit(2)

from logging.handlers import RotatingFileHandler

logger = logging.getLogger(__name__)


def setup_logging(verbose=False):
    """
    Настройка логирования: файл с ротацией и предупреждения в stderr.

    Returns:
        logging.Logger: Настроенный логгер
    """
    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.DEBUG if verbose else logging.WARNING)
    console.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    try:
        LOG_DIR.mkdir(exist_ok=True)
        log_handler = RotatingFileHandler(
            LOG_DIR / LOG_FILE_NAME,
            maxBytes=LOG_MAX_BYTES,
            backupCount=LOG_BACKUP_COUNT,
            encoding='utf-8'
        )
        log_handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        ))
        logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                            handlers=[log_handler, console])
    except Exception as e:
        print(f"⚠️ Файл журнала недоступен: {e}", file=sys.stderr)
        logging.basicConfig(level=logging.INFO, handlers=[console])
    return logging.getLogger(__name__)


def main(argv=None):
    """
    Основная функция приложения.

    Returns:
        int: Код завершения (0 - успех, 1 - свойство не выполнено,
             2 - некорректный ввод, 3 - превышен предел перебора)
    """
    parser = build_parser()
    parser.add_argument("-v", "--verbose", action="store_true", help="Подробный журнал в stderr")
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    try:
        return run_command(args)
    except SpecError as e:
        for diagnostic in e.diagnostics:
            print(f"❌ {diagnostic}", file=sys.stderr)
        return e.exit_code
    except SemioError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INVALID
    except KeyboardInterrupt:
        logger.info("Получен сигнал завершения от пользователя")
        return 0
    except Exception as e:
        logger.exception(f"❌ Критическая ошибка: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
