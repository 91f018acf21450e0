"""
Validation utilities for command requests.
"""
from fractions import Fraction
from typing import Optional

from src.algebra.braiding import BUILTIN_NAMES
from src.utils.settings import get_settings


def validate_rank(n: int, force: bool = False) -> int:
    """Validate the rank N of sl_{N+1}."""
    if n < 1:
        raise ValueError("N must be at least 1")
    limit = get_settings().max_rank
    if n > limit and not force:
        raise ValueError(f"N = {n} exceeds max_rank {limit}; pass --force to override")
    return n


def validate_builtin(name: str) -> str:
    """Validate a builtin braiding name."""
    name = name.strip().lower()
    if name not in BUILTIN_NAMES:
        raise ValueError(f"Braiding must be one of: {', '.join(BUILTIN_NAMES)}")
    return name


def validate_suite(name: str) -> str:
    """Validate a suite name against the registered suites."""
    # imported here: the agent module imports the algebra stack
    from src.agents.verification_agent import SUITE_NAMES

    name = name.strip().lower()
    if name not in SUITE_NAMES:
        raise ValueError(f"Suite must be one of: {', '.join(SUITE_NAMES)}")
    return name


def validate_max_p(max_p: int, force: bool = False) -> int:
    """Validate the largest grade a suite may enumerate."""
    if max_p < 1:
        raise ValueError("max_p must be at least 1")
    bound = get_settings().enumeration_bound
    if max_p > bound and not force:
        raise ValueError(f"max_p = {max_p} exceeds the enumeration bound {bound}")
    return max_p


def validate_q0(q0: Optional[str]) -> Optional[str]:
    """Validate an exact rational specialization point."""
    if q0 is None:
        return None
    try:
        value = Fraction(q0.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"q0 must be an exact rational such as 2 or 3/2, got '{q0}'")
    if value == 0:
        raise ValueError("q0 must be nonzero")
    return str(value)


def validate_output_format(fmt: str) -> str:
    fmt = fmt.strip().lower()
    if fmt not in ("json", "text"):
        raise ValueError("Format must be json or text")
    return fmt
