import os

import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

ACCEPTANCE = {}


@pytest.fixture
def verdict(request):
    """Record one acceptance line; the summary hook prints them in order."""

    def _record(number, title, ok, detail=""):
        ACCEPTANCE[number] = (title, bool(ok), detail)
        print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())
