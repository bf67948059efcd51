"""Per-criterion result lines collected by the acceptance suite."""

ACCEPTANCE_LINES: dict[int, str] = {}
