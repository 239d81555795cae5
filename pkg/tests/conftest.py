import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# Discriminants chosen so that (D/3) and (D/5) take both signs.
PANEL = (5, -7, 13, 17, 21, -11)

# criterion number -> (title, "PASS" | "FAIL", detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, status, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"{status} {num:>2}. {title}: {detail}")
