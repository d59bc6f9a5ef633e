import time

import pytest


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in config.acceptance_lines:
            terminalreporter.write_line(line)


class Criterion:
    """Collects the sub-checks of one acceptance criterion and its runtime."""

    def __init__(self, config, number, title, limit):
        self.config = config
        self.number, self.title, self.limit = number, title, limit
        self.checks = []
        self.finished = False
        self.start = time.perf_counter()

    def check(self, label, ok, detail=""):
        self.checks.append((label, bool(ok), detail))
        return ok

    def lines(self):
        elapsed = time.perf_counter() - self.start
        in_time = self.limit is None or elapsed < self.limit
        ok = in_time and all(c[1] for c in self.checks)
        limit = "" if self.limit is None else f" (limit {self.limit:g}s)"
        out = [f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {self.title} [{elapsed:.2f}s{limit}]"]
        for label, passed, detail in self.checks:
            out.append(f"    {'PASS' if passed else 'FAIL'} {label}" + (f": {detail}" if detail else ""))
        if not in_time:
            out.append(f"    FAIL runtime {elapsed:.2f}s over {self.limit:g}s")
        return ok, out

    def finish(self):
        """Record the result lines and fail the test unless everything passed."""
        self.finished = True
        ok, lines = self.lines()
        self.config.acceptance_lines.extend(lines)
        print("\n".join(lines))
        assert ok, "\n".join(lines)


@pytest.fixture
def criterion(request):
    made = []

    def make(number, title, limit=None):
        made.append(Criterion(request.config, number, title, limit))
        return made[-1]

    yield make
    for c in made:
        if not c.finished:
            c.check("completed", False, "raised before finishing")
            request.config.acceptance_lines.extend(c.lines()[1])
