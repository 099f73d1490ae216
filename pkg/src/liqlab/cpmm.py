"""Exact constant-product pool mechanics plus the linearized price impact.

Swaps are fee-free and preserve the product of the reserves; liquidity
changes must match the current reserve ratio.  ``PoolState`` is an
immutable value, every operation returns a new state.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, RatioMismatchError

RATIO_TOL = 1e-9


@dataclass(frozen=True)
class PoolState:
    reserve_x: float
    reserve_y: float

    def __post_init__(self) -> None:
        if not self.reserve_x > 0.0 or not self.reserve_y > 0.0:
            raise DomainError(
                f"reserves must be positive, got ({self.reserve_x}, {self.reserve_y})")

    @property
    def invariant_k(self) -> float:
        return self.reserve_x * self.reserve_y


def spot_price(pool: PoolState) -> float:
    """Marginal exchange rate Y/X."""
    return pool.reserve_y / pool.reserve_x


def swap_x_for_y(pool: PoolState, dx: float) -> tuple[PoolState, float]:
    """Deposit ``dx`` of X, withdraw Y keeping the product constant."""
    if not dx > 0.0:
        raise DomainError(f"dx must be positive, got {dx}")
    if dx >= pool.reserve_x:
        raise DomainError(
            f"single swap of {dx} would exceed the X reserve {pool.reserve_x}")
    new_x = pool.reserve_x + dx
    new_y = pool.invariant_k / new_x
    dy = pool.reserve_y - new_y
    return PoolState(new_x, new_y), dy


def swap_y_for_x(pool: PoolState, dy: float) -> tuple[PoolState, float]:
    """Deposit ``dy`` of Y, withdraw X keeping the product constant."""
    if not dy > 0.0:
        raise DomainError(f"dy must be positive, got {dy}")
    if dy >= pool.reserve_y:
        raise DomainError(
            f"single swap of {dy} would exceed the Y reserve {pool.reserve_y}")
    new_y = pool.reserve_y + dy
    new_x = pool.invariant_k / new_y
    dx = pool.reserve_x - new_x
    return PoolState(new_x, new_y), dx


def _check_ratio(a: float, b: float, ref_a: float, ref_b: float) -> None:
    # compare a/b against ref_a/ref_b without dividing
    if abs(a * ref_b - b * ref_a) > RATIO_TOL * abs(b * ref_a):
        raise RatioMismatchError(
            f"amount ratio {a / b} does not match pool ratio {ref_a / ref_b}")


def add_liquidity(pool: PoolState, m: float, n: float) -> PoolState:
    """Add ``m`` of X and ``n`` of Y at the pool ratio."""
    if not m > 0.0 or not n > 0.0:
        raise DomainError("added amounts must be positive")
    _check_ratio(m, n, pool.reserve_x, pool.reserve_y)
    return PoolState(pool.reserve_x + m, pool.reserve_y + n)


def remove_liquidity(pool: PoolState, g: float, h: float) -> PoolState:
    """Remove ``g`` of X and ``h`` of Y at the pool ratio."""
    if not g > 0.0 or not h > 0.0:
        raise DomainError("removed amounts must be positive")
    if g >= pool.reserve_x or h >= pool.reserve_y:
        raise DomainError(
            f"removal ({g}, {h}) would drain reserves "
            f"({pool.reserve_x}, {pool.reserve_y})")
    _check_ratio(g, h, pool.reserve_x, pool.reserve_y)
    return PoolState(pool.reserve_x - g, pool.reserve_y - h)


def exact_relative_impact(pool: PoolState, dx: float) -> float:
    """Exact relative price move of a swap: (X/(X+dx))^2 - 1."""
    if dx <= -pool.reserve_x:
        raise DomainError(f"dx must exceed -X = {-pool.reserve_x}")
    ratio = pool.reserve_x / (pool.reserve_x + dx)
    return ratio * ratio - 1.0


def linearized_relative_impact(pool: PoolState, dx: float) -> float:
    """First-order Taylor term of the exact impact: -2 * dx / X."""
    return -2.0 * dx / pool.reserve_x
