"""Pass/fail lines collected by the acceptance suite, printed at the end of the run."""

LINES: list[str] = []


def record(criterion: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {criterion} {'PASS' if ok else 'FAIL'} {title}: {detail}"
    LINES.append(line)
    print(line)
