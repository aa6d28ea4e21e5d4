"""
Тесты режима наблюдения: отбор файлов, подавление повторов, статистика
"""

import threading
from pathlib import Path

from watchdog.events import DirModifiedEvent, FileModifiedEvent

from config.settings import EXIT_INVALID, EXIT_OK
from config.watch_rules import get_conditions_for_command, get_description_for_command
from core.commands import check_file
from core.utils import create_suffix_condition
from core.watcher import SpecChangeHandler, run_watch


class FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now


def make_handler(callback, clock=None):
    return SpecChangeHandler(get_conditions_for_command("check"), callback, debounce=1.0,
                             clock=clock or FakeClock())


def test_suffix_condition_ignores_case():
    condition = create_suffix_condition([".sem"])
    assert condition("linear.sem")
    assert condition("LINEAR.SEM")
    assert not condition("linear.sem.bak")
    assert not condition("dataset.csv")


def test_watch_rules():
    assert get_conditions_for_command("check")
    assert get_conditions_for_command("limit") is None
    assert get_description_for_command("check")
    assert get_description_for_command("limit") is None


def test_repeated_event_is_debounced():
    calls = []
    clock = FakeClock()
    handler = make_handler(lambda path: calls.append(path) or EXIT_OK, clock)
    assert handler.process_file(Path("a.sem"), "modified") == EXIT_OK
    clock.now = 0.5
    assert handler.process_file(Path("a.sem"), "modified") is None
    assert handler.process_file(Path("b.sem"), "modified") == EXIT_OK
    clock.now = 1.6
    assert handler.process_file(Path("a.sem"), "modified") == EXIT_OK
    assert calls == [Path("a.sem"), Path("b.sem"), Path("a.sem")]


def test_other_files_are_skipped():
    calls = []
    handler = make_handler(calls.append)
    assert handler.process_file(Path("dataset.csv")) is None
    handler.on_modified(DirModifiedEvent("specs"))
    assert calls == []


def test_events_dispatch_to_callback():
    calls = []
    handler = make_handler(lambda path: calls.append(path.name) or EXIT_OK)
    handler.on_modified(FileModifiedEvent("specs/pool.sem"))
    assert calls == ["pool.sem"]


def test_stats_count_failures():
    def callback(path):
        if path.name == "boom.sem":
            raise RuntimeError("boom")
        return EXIT_OK if path.name == "ok.sem" else EXIT_INVALID

    handler = make_handler(callback)
    assert handler.process_file(Path("ok.sem")) == EXIT_OK
    assert handler.process_file(Path("bad.sem")) == EXIT_INVALID
    assert handler.process_file(Path("boom.sem")) is None
    stats = handler.get_stats()
    assert stats["checked_files_count"] == 3
    assert stats["failed_files_count"] == 2
    assert stats["conditions_count"] == 1


def test_check_file_returns_exit_codes(specs_dir, tmp_path):
    assert check_file(specs_dir / "linear.sem") == EXIT_OK
    bad = tmp_path / "bad.sem"
    bad.write_text("sign A\n", encoding="utf-8")
    assert check_file(bad) == EXIT_INVALID


def test_watch_missing_directory(tmp_path):
    assert run_watch(tmp_path / "missing", lambda path: EXIT_OK) == EXIT_INVALID


def test_watch_stops_on_event(tmp_path):
    stop = threading.Event()
    stop.set()
    assert run_watch(tmp_path, lambda path: EXIT_OK, stop_event=stop) == EXIT_OK
