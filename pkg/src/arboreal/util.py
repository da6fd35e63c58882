"""Small shared helpers: time budgets and deterministic randomness."""

import random
import time

from .errors import TimeBudgetExceeded


class TimeBudget:
    """Wall-clock budget. ``None`` seconds means unlimited."""

    def __init__(self, seconds=None):
        self.seconds = seconds
        self.start = time.monotonic()

    def expired(self):
        return self.seconds is not None and (time.monotonic() - self.start) > self.seconds

    def check(self, partial=None, what="operation"):
        if self.expired():
            raise TimeBudgetExceeded(f"time budget ({self.seconds}s) exceeded in {what}",
                                     partial=partial)


def det_rng(*parts):
    """random.Random seeded deterministically from the given parts."""
    return random.Random("|".join(str(p) for p in parts))
