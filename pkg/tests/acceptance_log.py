"""PASS/FAIL lines recorded by the acceptance suite, repeated in the pytest summary."""

LINES: list[str] = []
