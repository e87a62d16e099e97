import logbook
from logbook import DEBUG

from eigenid.__main__ import main
from eigenid.modules.logger import Log, stderr_handler


def test_library_records_reach_host_handlers():
    import eigenid  # noqa: F401

    with logbook.TestHandler() as captured:
        Log("eigenid.test").info("hello")
    assert captured.has_info("hello")


def test_cli_handler_is_bound_only_while_main_runs(tmp_path):
    with logbook.TestHandler() as captured:
        assert main(["gen", "--spectrum", "1:2", "--out", str(tmp_path / "A.json")]) == 0
        Log("eigenid.test").warning("after main")
    assert captured.has_warning("after main")
    assert not any("Generating" in message for message in captured.formatted_records)


def test_stderr_handler_level():
    handler = stderr_handler(DEBUG)
    assert handler.level == DEBUG
    assert handler.bubble is False
