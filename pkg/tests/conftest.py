_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    number = int(props["criterion"])
    failed = report.failed
    if report.when == "call" or failed:
        outcome = "FAIL" if failed else "PASS"
        previous = _CRITERIA.get(number)
        if previous is None or previous[0] == "PASS":
            _CRITERIA[number] = (outcome, str(props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        outcome, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {outcome}  {detail}")
