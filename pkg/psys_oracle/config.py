import os

from psys_oracle.exceptions import ConfigurationError

# NODE BUDGET (choice-tree nodes for the table decider, configurations for the
# reference engine)
DEFAULT_BUDGET = 10_000_000

# LOGGING
LOG_LEVEL = os.getenv("PSYS_LOG_LEVEL", "WARNING").upper()

# FIXTURES FOLDER
FIXTURES_FOLDER = os.getenv("PSYS_FIXTURES", "./fixtures")

# RESERVED RESULT OBJECTS
YES = "yes"
NO = "no"
RESULT_OBJECTS = frozenset({YES, NO})


def get_budget() -> int:
    """Return the node budget, honouring PSYS_BUDGET when it is set."""
    raw = os.getenv("PSYS_BUDGET")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    try:
        value = int(raw.replace("_", ""))
    except ValueError:
        raise ConfigurationError(f"PSYS_BUDGET must be an integer, got {raw!r}")
    if value <= 0:
        raise ConfigurationError(f"PSYS_BUDGET must be positive, got {value}")
    return value
