import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion -> list of (label, ok, detail), filled by test_acceptance.py
ACCEPTANCE: dict[int, list] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        rows = ACCEPTANCE[c]
        ok = all(r[1] for r in rows)
        bad = [f"{label}: {detail}" if detail else label for label, good, detail in rows if not good]
        tail = f" ({len(rows)} checks)" if ok else " -- " + "; ".join(bad)
        terminalreporter.write_line(f"criterion {c}: {'PASS' if ok else 'FAIL'}{tail}")
