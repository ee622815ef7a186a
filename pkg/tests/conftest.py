import sys

sys.stdout.reconfigure(line_buffering=True)


def pytest_addoption(parser):
    parser.addoption(
        "--skip-acceptance", action="store_true", default=False,
        help="skip the long-running acceptance criteria")


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--skip-acceptance"):
        return
    import pytest
    skip = pytest.mark.skip(reason="--skip-acceptance given")
    for item in items:
        if "acceptance" in item.nodeid:
            item.add_marker(skip)
