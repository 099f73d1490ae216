"""Four-stage pool trading cycle as a double-entry token ledger.

The investor alternates between taking liquidity (stages 1 and 3) and
changing the pool size (stages 2 and 4).  Every stage moves tokens between
the pool and the investor's outside wallet, so

    pool + outside == starting pool reserves        (componentwise)

holds at every snapshot; the in-pool position tracks the amounts the
investor contributed in stage 2 minus what stage 4 removed, and is allowed
to go negative, as are the outside balances (temporary shorts).

Stage 3 ships with two price rules: ``EXACT_INVARIANT`` keeps the
constant-product invariant of the pool; ``ORIGINAL_X`` is an alternative
closed form whose denominator uses the pre-cycle X reserve plus the
stage-2 addition (ignoring the stage-1 switch), which does not preserve
the invariant.  Both are kept so the difference can be inspected side by
side.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .cpmm import PoolState
from .errors import DomainError, RatioMismatchError, StageOrderError

RATIO_TOL = 1e-9


class Stage(Enum):
    START = "Start"
    AFTER_STAGE1 = "AfterStage1"
    AFTER_STAGE2 = "AfterStage2"
    AFTER_STAGE3 = "AfterStage3"
    AFTER_STAGE4 = "AfterStage4"


class Stage3Formula(Enum):
    EXACT_INVARIANT = "exact"
    ORIGINAL_X = "original-x"


@dataclass(frozen=True)
class CycleLedger:
    """Snapshot of pool reserves and investor positions after a stage."""

    pool: PoolState
    inside_x: float = 0.0
    inside_y: float = 0.0
    outside_x: float = 0.0
    outside_y: float = 0.0
    stage: Stage = Stage.START
    start_x: float = 0.0
    start_y: float = 0.0
    alpha_stage1: float = 0.0

    def conservation_error(self) -> tuple[float, float]:
        """Componentwise residual of pool + outside - start."""
        return (self.pool.reserve_x + self.outside_x - self.start_x,
                self.pool.reserve_y + self.outside_y - self.start_y)


@dataclass(frozen=True)
class CycleConfig:
    """Inputs of a full cycle run.

    Stage 4 either closes the pool back to its starting reserves
    (``closure=True``) or removes the explicit amounts ``g_amt``/``h_amt``.
    """

    x0: float
    y0: float
    alpha: float
    m: float
    sigma_amt: float
    closure: bool = True
    g_amt: float | None = None
    h_amt: float | None = None

    def __post_init__(self) -> None:
        if not self.x0 > 0.0 or not self.y0 > 0.0:
            raise DomainError("starting reserves must be positive")
        if not 0.0 < self.alpha < self.x0:
            raise DomainError(f"alpha must be in (0, x0), got {self.alpha}")
        if self.m < 0.0 or self.sigma_amt < 0.0:
            raise DomainError("m and sigma_amt must be non-negative")
        if not self.closure and (self.g_amt is None or self.h_amt is None):
            raise DomainError("explicit g_amt and h_amt required when closure=False")


@dataclass(frozen=True)
class CycleReport:
    """Per-stage ledgers plus the investor's bottom line.

    ``work_analogue`` values the final outside position at the starting
    spot price y0/x0 (in units of token Y); the gross shorts are the
    largest negative outside balance reached per token over the cycle.
    """

    config: CycleConfig
    stage3_mode: Stage3Formula
    snapshots: list[CycleLedger]
    g_amt: float
    h_amt: float
    work_analogue: float
    gross_short_x: float
    gross_short_y: float

    @property
    def final(self) -> CycleLedger:
        return self.snapshots[-1]


def new_cycle(x0: float, y0: float) -> CycleLedger:
    """Ledger at the starting point: full pool, empty investor."""
    pool = PoolState(x0, y0)
    return CycleLedger(pool=pool, start_x=x0, start_y=y0)


def _require_stage(ledger: CycleLedger, expected: Stage) -> None:
    if ledger.stage is not expected:
        raise StageOrderError(
            f"expected ledger at stage {expected.value}, got {ledger.stage.value}")


def stage1_switch(ledger: CycleLedger, alpha: float) -> CycleLedger:
    """Take ``alpha`` of X out of the pool against beta = XY/(X-alpha) - Y."""
    _require_stage(ledger, Stage.START)
    x, y = ledger.pool.reserve_x, ledger.pool.reserve_y
    if not 0.0 < alpha < x:
        raise DomainError(f"alpha must be in (0, X), got {alpha}")
    new_y = x * y / (x - alpha)
    beta = new_y - y
    return replace(
        ledger,
        pool=PoolState(x - alpha, new_y),
        outside_x=ledger.outside_x + alpha,
        outside_y=ledger.outside_y - beta,
        stage=Stage.AFTER_STAGE1,
        alpha_stage1=alpha,
    )


def stage2_add(ledger: CycleLedger, m: float) -> CycleLedger:
    """Contribute ``m`` of X plus the ratio-matching amount of Y to the pool."""
    _require_stage(ledger, Stage.AFTER_STAGE1)
    if m < 0.0:
        raise DomainError(f"m must be non-negative, got {m}")
    x, y = ledger.pool.reserve_x, ledger.pool.reserve_y
    n = m * y / x
    return replace(
        ledger,
        pool=PoolState(x + m, y + n) if m > 0.0 else ledger.pool,
        inside_x=ledger.inside_x + m,
        inside_y=ledger.inside_y + n,
        outside_x=ledger.outside_x - m,
        outside_y=ledger.outside_y - n,
        stage=Stage.AFTER_STAGE2,
    )


def stage3_switch(ledger: CycleLedger, sigma_amt: float,
                  formula: Stage3Formula = Stage3Formula.EXACT_INVARIANT) -> CycleLedger:
    """Give ``sigma_amt`` of X back to the pool against delta of Y.

    ``EXACT_INVARIANT`` sets delta = Y * sigma / (X + sigma), the unique
    amount preserving the reserve product.  ``ORIGINAL_X`` sets
    delta = sigma * Y / (X0 + M), keying the payout off the pre-cycle X
    reserve (reconstructed as the current X reserve plus the stage-1
    alpha); it does not preserve the product.
    """
    _require_stage(ledger, Stage.AFTER_STAGE2)
    if sigma_amt < 0.0:
        raise DomainError(f"sigma_amt must be non-negative, got {sigma_amt}")
    x, y = ledger.pool.reserve_x, ledger.pool.reserve_y
    if formula is Stage3Formula.EXACT_INVARIANT:
        delta = y * sigma_amt / (x + sigma_amt)
    elif formula is Stage3Formula.ORIGINAL_X:
        delta = sigma_amt * y / (x + ledger.alpha_stage1)
    else:
        raise DomainError(f"unknown stage-3 formula {formula!r}")
    if delta >= y:
        raise DomainError(f"stage-3 payout {delta} would drain the Y reserve {y}")
    new_pool = PoolState(x + sigma_amt, y - delta) if sigma_amt > 0.0 else ledger.pool
    return replace(
        ledger,
        pool=new_pool,
        outside_x=ledger.outside_x - sigma_amt,
        outside_y=ledger.outside_y + delta,
        stage=Stage.AFTER_STAGE3,
    )


def stage4_remove(ledger: CycleLedger, g_amt: float, h_amt: float,
                  require_pool_ratio: bool = True) -> CycleLedger:
    """Withdraw ``g_amt`` of X and ``h_amt`` of Y from the pool.

    By default the withdrawal must match the pool ratio like any liquidity
    removal.  A pool-closing withdrawal generally cannot (its amounts are
    dictated by the closure conditions instead), so closure runs pass
    ``require_pool_ratio=False``.
    """
    _require_stage(ledger, Stage.AFTER_STAGE3)
    if g_amt < 0.0 or h_amt < 0.0:
        raise DomainError("removal amounts must be non-negative")
    x, y = ledger.pool.reserve_x, ledger.pool.reserve_y
    if g_amt >= x or h_amt >= y:
        raise DomainError(f"removal ({g_amt}, {h_amt}) would drain reserves ({x}, {y})")
    if require_pool_ratio and (g_amt > 0.0 or h_amt > 0.0):
        if abs(g_amt * y - h_amt * x) > RATIO_TOL * abs(h_amt * x):
            raise RatioMismatchError(
                f"removal ratio {g_amt}/{h_amt} does not match pool ratio {x}/{y}")
    new_pool = PoolState(x - g_amt, y - h_amt) if (g_amt or h_amt) else ledger.pool
    return replace(
        ledger,
        pool=new_pool,
        inside_x=ledger.inside_x - g_amt,
        inside_y=ledger.inside_y - h_amt,
        outside_x=ledger.outside_x + g_amt,
        outside_y=ledger.outside_y + h_amt,
        stage=Stage.AFTER_STAGE4,
    )


def closure_parameters(config: CycleConfig,
                       stage3_mode: Stage3Formula = Stage3Formula.EXACT_INVARIANT,
                       ) -> tuple[float, float]:
    """Stage-4 amounts (G, H) that restore the starting pool reserves.

    G = M - alpha + sigma balances the X side; H is whatever Y excess the
    first three stages left in the pool.  Only the pool is guaranteed to
    close; the investor's positions generally stay open.
    """
    after3 = _run_stages_123(config, stage3_mode)
    g_amt = config.m - config.alpha + config.sigma_amt
    h_amt = after3.pool.reserve_y - config.y0
    if g_amt < 0.0 or h_amt < 0.0:
        raise DomainError(
            f"infeasible closure: G = {g_amt}, H = {h_amt} (both must be >= 0)")
    return g_amt, h_amt


def _run_stages_123(config: CycleConfig, stage3_mode: Stage3Formula) -> CycleLedger:
    ledger = new_cycle(config.x0, config.y0)
    ledger = stage1_switch(ledger, config.alpha)
    ledger = stage2_add(ledger, config.m)
    return stage3_switch(ledger, config.sigma_amt, stage3_mode)


def run_cycle(config: CycleConfig,
              stage3_mode: Stage3Formula = Stage3Formula.EXACT_INVARIANT) -> CycleReport:
    """Execute stages 1 through 4 and summarize the investor's outcome."""
    snapshots = [new_cycle(config.x0, config.y0)]
    snapshots.append(stage1_switch(snapshots[-1], config.alpha))
    snapshots.append(stage2_add(snapshots[-1], config.m))
    snapshots.append(stage3_switch(snapshots[-1], config.sigma_amt, stage3_mode))
    if config.closure:
        g_amt, h_amt = closure_parameters(config, stage3_mode)
        snapshots.append(stage4_remove(snapshots[-1], g_amt, h_amt,
                                       require_pool_ratio=False))
    else:
        g_amt, h_amt = float(config.g_amt), float(config.h_amt)
        snapshots.append(stage4_remove(snapshots[-1], g_amt, h_amt))
    final = snapshots[-1]
    p0 = config.y0 / config.x0
    work = final.outside_x * p0 + final.outside_y
    short_x = max(max(0.0, -s.outside_x) for s in snapshots)
    short_y = max(max(0.0, -s.outside_y) for s in snapshots)
    return CycleReport(config=config, stage3_mode=stage3_mode, snapshots=snapshots,
                       g_amt=g_amt, h_amt=h_amt, work_analogue=work,
                       gross_short_x=short_x, gross_short_y=short_y)
