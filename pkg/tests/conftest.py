from hypothesis import settings

# reproducible runs; several properties factor 64-bit integers
settings.register_profile("repo", deadline=None, derandomize=True)
settings.load_profile("repo")

ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{status}] {num:>2}. {title}: {detail}")
    if any(v[0] == "PASS*" for v in ACCEPTANCE.values()):
        terminalreporter.write_line("PASS* = every hard check passed; an informational deviation is noted in the line")
