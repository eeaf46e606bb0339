"""Process-wide switches.

``DEBUG`` turns on double computation of operators that have two equivalent
definitions (for example closure as a double polar and as box-after-diamond)
and asserts that both agree.  It is read from ``POLARFRAMES_DEBUG`` at import
and may be flipped at runtime.
"""

import os

DEBUG = os.environ.get("POLARFRAMES_DEBUG", "") not in ("", "0")

# largest carrier for which stable sets are enumerated on request
STABLE_SET_BOUND = 12


class DebugCheckError(AssertionError):
    """Two definitions of the same operator disagreed."""


def debug_check(ok, message):
    if not ok:
        raise DebugCheckError(message)
