"""Tunable limits and sampling constants."""

import os

# Brute-force matching enumeration is refused above this many types.
ENUMERATION_MAX_TYPES = 8
# Ryser permanent is refused above this many types.
PERMANENT_MAX_TYPES = 20
# Cap on |A|**r state-choice combinations for state-matching enumeration.
STATE_CHOICE_CAP = 10**7

# Randomised identity testing once the state-choice cap is exceeded.
PIT_SAMPLES = 30
PIT_PRIME_FLOOR = 10_000

# Generic typicality checks for the two-state nullspace verdict.
NULLSPACE_SAMPLES = 10
NULLSPACE_ESCALATION = 3
NULLSPACE_MAX_SAMPLES = 90

# Rational grid used for "generic" parameter draws.
GRID_DENOMINATOR = 10**6
KRUSKAL_SAMPLES = 30


def worker_count() -> int:
    """Worker processes for sample-parallel routines (``CHOICEID_THREADS``)."""
    try:
        return max(1, int(os.environ.get("CHOICEID_THREADS", "1")))
    except ValueError:
        return 1
