import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

# RELTRACE_SEED pins the randomized inputs; hypothesis is derandomized with it.
settings.register_profile(
    "reltrace", max_examples=60, deadline=None, derandomize="RELTRACE_SEED" in os.environ,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("reltrace")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
