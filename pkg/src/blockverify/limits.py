"""Process-wide resource bounds. The CLI overrides them from flags and environment."""

from dataclasses import dataclass


@dataclass
class Limits:
    max_group_order: int = 10**6
    max_classes: int = 120
    max_p_group_order: int = 2**10
    max_psubgroups: int = 20000


LIMITS = Limits()


def configure(**kwargs):
    for key, value in kwargs.items():
        if value is None:
            continue
        if not hasattr(LIMITS, key):
            raise AttributeError(key)
        if int(value) <= 0:
            raise ValueError(f"bound {key} must be positive")
        setattr(LIMITS, key, int(value))
