"""Retry-at-doubled-precision driver.

Certified decisions fail rather than guess; the caller rebuilds its inputs at
twice the precision and tries again, up to a ceiling configured by the
ISOCRYS_PRECISION_CEILING environment variable (default 512 digits).
"""

from __future__ import annotations

import os

from .errors import PrecisionError

DEFAULT_CEILING = 512


def precision_ceiling() -> int:
    try:
        return int(os.environ.get("ISOCRYS_PRECISION_CEILING", DEFAULT_CEILING))
    except ValueError:
        return DEFAULT_CEILING


def with_escalation(run, start_prec: int, ceiling: int | None = None):
    """Call run(prec) with prec doubling on PrecisionError up to the ceiling.

    ``run`` must rebuild every input from exact data at the given precision;
    scalars from a lower cap are never reused.
    """
    if ceiling is None:
        ceiling = precision_ceiling()
    prec = start_prec
    last = None
    while prec <= ceiling:
        try:
            return run(prec)
        except PrecisionError as exc:
            last = exc
            prec *= 2
    raise PrecisionError(
        f"precision ceiling {ceiling} reached: {last}") from last
