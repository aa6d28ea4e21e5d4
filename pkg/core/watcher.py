"""
Модуль для наблюдения за файлами спецификаций
"""

import logging
import threading
import time
from pathlib import Path

from watchdog.events import FileSystemEventHandler
from watchdog.observers import Observer

from config.settings import EXIT_INVALID, EXIT_OK, WATCH_DEBOUNCE
from config.watch_rules import get_conditions_for_command, get_description_for_command
from .utils import validate_paths

logger = logging.getLogger(__name__)


class SpecChangeHandler(FileSystemEventHandler):
    """
    Обработчик событий файловой системы для файлов .sem.
    При создании или изменении подходящего файла вызывает проверку,
    повторные события в пределах debounce секунд пропускаются.
    """

    def __init__(self, conditions, callback, debounce=WATCH_DEBOUNCE, clock=time.monotonic):
        """
        Инициализация обработчика.

        Args:
            conditions (list): Список функций-условий для отбора файлов
            callback (callable): Проверка файла, возвращает код завершения
            debounce (float): Интервал подавления повторных событий (сек)
            clock (callable): Источник времени
        """
        super().__init__()
        self.conditions = conditions
        self.callback = callback
        self.debounce = debounce
        self.clock = clock
        self.last_run = {}
        self.results = {}
        self.lock = threading.Lock()

        logger.debug(f"Создан обработчик с {len(conditions)} условиями отбора")

    def should_process_file(self, file_path: Path):
        return any(cond(file_path.name) for cond in self.conditions)

    def process_file(self, file_path: Path, event_type="unknown"):
        """
        Перепроверяет файл, если он подходит и не проверялся только что.

        Returns:
            int: Код завершения проверки или None если файл пропущен
        """
        if not self.should_process_file(file_path):
            return None
        key = str(file_path)
        now = self.clock()
        with self.lock:
            last = self.last_run.get(key)
            if last is not None and now - last < self.debounce:
                logger.debug(f"Повторное событие для {file_path.name} пропущено")
                return None
            self.last_run[key] = now

        logger.info(f"Изменен файл спецификации: {file_path.name} (событие: {event_type})")
        try:
            code = self.callback(file_path)
        except Exception as e:
            logger.error(f"❌ Ошибка при проверке {file_path.name}: {e}")
            code = None
        with self.lock:
            self.results[key] = code
        if code == EXIT_OK:
            logger.info(f"✅ {file_path.name}: проверка пройдена")
        else:
            logger.warning(f"⚠️ {file_path.name}: проверка завершилась с кодом {code}")
        return code

    def on_created(self, event):
        if not event.is_directory:
            self.process_file(Path(event.src_path), "created")

    def on_modified(self, event):
        if not event.is_directory:
            self.process_file(Path(event.src_path), "modified")

    def get_stats(self):
        """
        Возвращает статистику работы обработчика.

        Returns:
            dict: Словарь со статистикой
        """
        with self.lock:
            return {
                'checked_files_count': len(self.results),
                'failed_files_count': sum(1 for c in self.results.values() if c != EXIT_OK),
                'conditions_count': len(self.conditions)
            }


def run_watch(directory, callback, debounce=WATCH_DEBOUNCE, stop_event=None, command="check"):
    """
    Наблюдает за директорией до прерывания.

    Args:
        directory (str): Директория со спецификациями
        callback (callable): Проверка файла
        stop_event (threading.Event): Событие остановки (по умолчанию - Ctrl+C)

    Returns:
        int: Код завершения
    """
    path = Path(directory)
    if not validate_paths([{"path": path, "description": "Директория спецификаций"}]) or not path.is_dir():
        return EXIT_INVALID
    handler = SpecChangeHandler(get_conditions_for_command(command), callback, debounce)
    observer = Observer()
    observer.schedule(handler, str(path), recursive=True)
    observer.start()
    logger.info(f"🚀 Запущено наблюдение: {get_description_for_command(command)} в {path}")
    try:
        while stop_event is None or not stop_event.is_set():
            time.sleep(0.2)
    except KeyboardInterrupt:
        logger.info("Получен Ctrl+C")
    finally:
        observer.stop()
        observer.join(timeout=10)
        logger.info(f"📊 Наблюдение остановлено: {handler.get_stats()}")
    return EXIT_OK
