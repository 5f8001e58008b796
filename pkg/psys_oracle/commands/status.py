from enum import IntEnum

from psys_oracle.engine.exhaustive import Verdict


class ExitStatus(IntEnum):
    ACCEPT = 0
    REJECT = 1
    INVALID = 2
    BOUND = 3
    USAGE = 4


VERDICT_STATUS = {
    Verdict.ACCEPT: ExitStatus.ACCEPT,
    Verdict.REJECT: ExitStatus.REJECT,
    Verdict.INVALID_RECOGNIZER: ExitStatus.INVALID,
    Verdict.BOUND_EXCEEDED: ExitStatus.BOUND,
}
