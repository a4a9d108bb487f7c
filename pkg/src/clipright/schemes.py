"""Compensation frameworks for AI-generated content.

Four schemes are modeled:

windfall
    AI developers donate a bracket-determined share of profits, divided
    equally among displaced workers. The bracket table maps a profit level
    (as a fraction of GDP) to the clause rate applied to the whole profit;
    only configured brackets apply, nothing is interpolated.

pay_to_train
    Rightsholders paid pro-rata to their share of the training dataset by
    volume: a flat per-image rate of (revenue x AI share x d_c) / dataset
    size. d_c is the fraction of AI-attributable revenue distributed to
    data contributors (0.55 mirrors the ad-revenue sharing convention).

pay_to_train_and_inspire
    A revenue-share pool split by traced influence: each holder's raw
    claim is the sum over outputs of output revenue times the influence
    mass of the holder's works on that output.

ai_royalties
    A partnership model. Revenue splits into a base-model pool paid to
    stock contributors pro-rata by volume, and a dedicated-models pool
    shared among named partners (fame_weight > 0). Partners earn through
    their dedicated model only; their catalog is not separately metered in
    the base pool, which is what makes swapping two partners' fame weights
    swap their payouts exactly. The dedicated budget for the modeled
    partners is a scenario parameter, and fame converts to revenue share
    through a sublinear power law (exponent 2/3 by default: a 1000x fame
    ratio yields a 100x revenue ratio, reflecting that audience size
    outgrows monetization).

All money is exact integer cents internally; fractions are
``fractions.Fraction``. Rounding to cents happens once per reported
amount (banker's rounding), and reports print whole dollars.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    HoldingsExceedDatasetError,
    InfluenceOutputMismatchError,
    ZeroDisplacedError,
    ZeroFameTotalError,
    ZeroTotalRawError,
)
from .influence import InfluenceMatrix

Cents = int


def as_fraction(x: int | float | str | Fraction) -> Fraction:
    """Exact Fraction from a decimal-looking value.

    Floats go through their shortest decimal repr, so as_fraction(0.005)
    is exactly 1/200 rather than the binary float's neighborhood.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def to_cents(amount: Fraction) -> Cents:
    """Round an exact dollar-cents Fraction to integer cents (banker's)."""
    return round(amount)


def cents_to_dollars_str(cents: Cents) -> str:
    sign = "-" if cents < 0 else ""
    cents = abs(cents)
    return f"{sign}${cents // 100}.{cents % 100:02d}"


def cents_to_whole_dollars(cents: Cents) -> int:
    """Whole-dollar presentation value (banker's rounding at 50 cents)."""
    return round(Fraction(cents, 100))


def apportion(pool_cents: Cents, shares: Sequence[Fraction]) -> list[Cents]:
    """Split pool_cents by exact shares so the parts sum to the pool.

    Largest-remainder method; ties broken by position. Shares must be
    non-negative and sum to 1.
    """
    total_share = sum(shares, Fraction(0))
    if total_share != 1:
        raise ValueError(f"shares must sum to 1, got {total_share}")
    exact = [pool_cents * s for s in shares]
    floors = [int(e) for e in exact]
    remainder = pool_cents - sum(floors)
    order = sorted(range(len(shares)), key=lambda i: (exact[i] - floors[i], -i), reverse=True)
    out = list(floors)
    for i in order[:remainder]:
        out[i] += 1
    return out


@dataclass(frozen=True)
class Rightsholder:
    """A compensated party: catalog volume plus an optional fame weight.

    ``holdings`` enumerates the holder's training work_ids when a scheme
    needs them (influence tracing); volume-only schemes use work_count.
    """

    holder_id: str
    work_count: int
    fame_weight: Fraction = Fraction(0)
    holdings: frozenset[str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "fame_weight", as_fraction(self.fame_weight))
        if self.work_count < 0:
            raise ValueError(f"{self.holder_id}: negative work_count")
        if self.fame_weight < 0:
            raise ValueError(f"{self.holder_id}: negative fame_weight")
        if self.holdings is not None and len(self.holdings) != self.work_count:
            raise ValueError(
                f"{self.holder_id}: work_count {self.work_count} != "
                f"|holdings| {len(self.holdings)}"
            )


@dataclass(frozen=True)
class OutputRecord:
    """One generated output and the revenue it earned."""

    output_id: str
    revenue_cents: Cents
    condition_tag: str = ""
    model_id: str = ""

    def __post_init__(self):
        if self.revenue_cents < 0:
            raise ValueError(f"{self.output_id}: negative revenue")


@dataclass(frozen=True)
class CompensationReport:
    scheme: str
    per_holder: dict[str, Cents]
    breakdown: dict[str, dict[str, Cents]]
    total_distributed_cents: Cents

    def __post_init__(self):
        if any(v < 0 for v in self.per_holder.values()):
            raise ValueError("negative payout")
        if abs(self.total_distributed_cents - sum(self.per_holder.values())) > 1:
            raise ValueError("total_distributed != sum of per-holder amounts")


def _report(scheme: str, breakdown: dict[str, dict[str, Cents]]) -> CompensationReport:
    per_holder = {h: sum(parts.values()) for h, parts in breakdown.items()}
    return CompensationReport(
        scheme=scheme,
        per_holder=per_holder,
        breakdown=breakdown,
        total_distributed_cents=sum(per_holder.values()),
    )


# -- windfall ---------------------------------------------------------------

#: (profit share of GDP, clause rate applied to the whole profit).
#: 1% kicks in at profits of 0.1% of GDP; 20% at 5%.
DEFAULT_CLAUSE_BRACKETS: tuple[tuple[Fraction, Fraction], ...] = (
    (Fraction(1, 1000), Fraction(1, 100)),
    (Fraction(1, 20), Fraction(1, 5)),
)


def clause_rate_for_profit(
    profit_share: Fraction,
    brackets: Sequence[tuple[Fraction, Fraction]] = DEFAULT_CLAUSE_BRACKETS,
) -> Fraction:
    """Clause rate for a profit level: the rate of the highest bracket whose
    threshold the profit share reaches; zero below the lowest bracket."""
    rate = Fraction(0)
    for threshold, bracket_rate in sorted(brackets):
        if profit_share >= threshold:
            rate = bracket_rate
    return rate


@dataclass(frozen=True)
class WindfallParams:
    gdp_cents: Cents
    ai_profit_fraction: Fraction
    clause_rate: Fraction
    workforce: int
    displacement_rate: Fraction
    #: when set, overrides workforce x displacement_rate (published figures
    #: round 165.4M x 30% = 49.62M up to 50M; both paths are supported)
    displaced_workers: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "ai_profit_fraction", as_fraction(self.ai_profit_fraction))
        object.__setattr__(self, "clause_rate", as_fraction(self.clause_rate))
        object.__setattr__(self, "displacement_rate", as_fraction(self.displacement_rate))
        if self.gdp_cents <= 0 or self.workforce <= 0:
            raise ValueError("gdp and workforce must be positive")
        for name in ("ai_profit_fraction", "clause_rate", "displacement_rate"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must be in [0, 1], got {value}")

    @property
    def displaced(self) -> Fraction:
        if self.displaced_workers is not None:
            return Fraction(self.displaced_workers)
        return self.workforce * self.displacement_rate


def windfall_per_worker(p: WindfallParams) -> Cents:
    """Annual payout per displaced worker, in cents.

    (gdp x ai_profit_fraction x clause_rate) / displaced workers, linear in
    both the clause rate and the profit fraction.
    """
    displaced = p.displaced
    if displaced == 0:
        raise ZeroDisplacedError("no displaced workers to divide among")
    return to_cents(p.gdp_cents * p.ai_profit_fraction * p.clause_rate / displaced)


def windfall(p: WindfallParams, holders: Sequence[Rightsholder]) -> CompensationReport:
    """Windfall as experienced by the modeled individuals: everyone displaced
    receives the same per-worker amount regardless of their catalog."""
    per_worker = windfall_per_worker(p)
    breakdown = {h.holder_id: {"windfall": per_worker} for h in holders}
    return _report("windfall", breakdown)


# -- pay to train -----------------------------------------------------------

@dataclass(frozen=True)
class PayToTrainParams:
    total_revenue_cents: Cents
    ai_revenue_fraction: Fraction
    d_c: Fraction  # contributor share of AI-attributable revenue
    dataset_size: int

    def __post_init__(self):
        object.__setattr__(self, "ai_revenue_fraction", as_fraction(self.ai_revenue_fraction))
        object.__setattr__(self, "d_c", as_fraction(self.d_c))
        if self.total_revenue_cents < 0:
            raise ValueError("negative revenue")
        if self.dataset_size <= 0:
            raise ValueError("dataset_size must be positive")
        for name in ("ai_revenue_fraction", "d_c"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must be in [0, 1], got {value}")

    @property
    def contributor_pool(self) -> Fraction:
        return self.total_revenue_cents * self.ai_revenue_fraction * self.d_c

    @property
    def per_image_rate(self) -> Fraction:
        return self.contributor_pool / self.dataset_size


def pay_to_train(p: PayToTrainParams, holders: Sequence[Rightsholder]) -> CompensationReport:
    """Flat per-image rate times each holder's volume.

    Holders may cover only part of the dataset; the remainder of the pool
    belongs to unmodeled contributors and is not redistributed.
    """
    modeled = sum(h.work_count for h in holders)
    for h in holders:
        if h.work_count > p.dataset_size:
            raise HoldingsExceedDatasetError(
                f"{h.holder_id}: {h.work_count} works > dataset size {p.dataset_size}"
            )
    if modeled > p.dataset_size:
        raise HoldingsExceedDatasetError(
            f"modeled holders claim {modeled} works > dataset size {p.dataset_size}"
        )
    rate = p.per_image_rate
    breakdown = {
        h.holder_id: {"training_pool": to_cents(rate * h.work_count)} for h in holders
    }
    return _report("pay_to_train", breakdown)


# -- pay to train & inspire ---------------------------------------------------

def pay_to_train_and_inspire(
    outputs: Sequence[OutputRecord],
    infl: InfluenceMatrix,
    holders: Sequence[Rightsholder],
    payout_pool_cents: Cents,
) -> CompensationReport:
    """Split a pool by revenue-weighted influence of each holder's works.

    raw claim of holder A = sum over outputs y of revenue(y) times the
    influence mass of A's works on y; the pool is divided pro-rata to the
    raw claims (so scaling all revenues leaves the split unchanged).
    """
    training_index = {work_id: i for i, work_id in enumerate(infl.training_ids)}
    for h in holders:
        if h.holdings is None:
            raise ValueError(f"{h.holder_id}: influence tracing requires explicit holdings")
        missing = h.holdings - set(training_index)
        if missing:
            raise InfluenceOutputMismatchError(
                f"{h.holder_id}: holdings not covered by influence matrix: "
                f"{', '.join(sorted(missing))}"
            )
    raws: list[Fraction] = []
    for h in holders:
        cols = [training_index[w] for w in sorted(h.holdings)]
        raw = Fraction(0)
        for out in outputs:
            row = infl.row_for(out.output_id)
            mass = sum((Fraction(float(row[c])) for c in cols), Fraction(0))
            raw += out.revenue_cents * mass
        raws.append(raw)
    total_raw = sum(raws, Fraction(0))
    if total_raw == 0:
        raise ZeroTotalRawError("no holder has any revenue-weighted influence")
    amounts = apportion(payout_pool_cents, [r / total_raw for r in raws])
    breakdown = {
        h.holder_id: {"influence_pool": amount} for h, amount in zip(holders, amounts)
    }
    return _report("pay_to_train_and_inspire", breakdown)


# -- AI royalties -------------------------------------------------------------

@dataclass(frozen=True)
class AIRoyaltyParams:
    ai_revenue_cents: Cents
    d_c: Fraction
    dataset_size: int
    #: revenue split between the base-model pool and dedicated models
    training_pool_fraction: Fraction = Fraction(1, 2)
    dedicated_pool_fraction: Fraction = Fraction(1, 2)
    #: dedicated-model budget attributable to the modeled partners (the
    #: dedicated pool spans the whole partner ecosystem; scenarios model a slice)
    dedicated_budget_cents: Cents = 0
    #: sublinear fame -> revenue exponent; 2/3 turns 1000x fame into 100x revenue
    fame_exponent: Fraction = Fraction(2, 3)

    def __post_init__(self):
        for name in ("d_c", "training_pool_fraction", "dedicated_pool_fraction", "fame_exponent"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.training_pool_fraction + self.dedicated_pool_fraction != 1:
            raise ValueError("training + dedicated pool fractions must sum to 1")
        if not 0 <= self.d_c <= 1:
            raise ValueError(f"d_c must be in [0, 1], got {self.d_c}")
        if self.dataset_size <= 0:
            raise ValueError("dataset_size must be positive")
        if self.ai_revenue_cents < 0 or self.dedicated_budget_cents < 0:
            raise ValueError("negative revenue or budget")
        if self.fame_exponent <= 0:
            raise ValueError("fame_exponent must be positive")


def _fame_shares(weights: Sequence[Fraction], exponent: Fraction) -> list[Fraction]:
    # float pow is fine here: shares are permutation-exact because equal
    # weights map to identical floats, and money is apportioned exactly below
    powered = [Fraction(float(w) ** float(exponent)) for w in weights]
    total = sum(powered, Fraction(0))
    return [p / total for p in powered]


def ai_royalties(
    p: AIRoyaltyParams,
    holders: Sequence[Rightsholder],
    dataset_size: int | None = None,
) -> CompensationReport:
    """Partnership scheme: stock contributors earn from the base-model pool
    by volume; named partners (fame_weight > 0) share the modeled dedicated
    budget by the fame power law and do not also meter the base pool."""
    size = dataset_size if dataset_size is not None else p.dataset_size
    if size <= 0:
        raise ValueError("dataset_size must be positive")
    partners = [h for h in holders if h.fame_weight > 0]
    if p.dedicated_budget_cents > 0 and not partners:
        raise ZeroFameTotalError("dedicated budget set but no holder has fame_weight > 0")
    rate = p.ai_revenue_cents * p.d_c * p.training_pool_fraction / size
    breakdown: dict[str, dict[str, Cents]] = {}
    for h in holders:
        if h.work_count > size:
            raise HoldingsExceedDatasetError(
                f"{h.holder_id}: {h.work_count} works > dataset size {size}"
            )
        if h.fame_weight > 0:
            breakdown[h.holder_id] = {"training_pool": 0, "dedicated_models": 0}
        else:
            breakdown[h.holder_id] = {
                "training_pool": to_cents(rate * h.work_count),
                "dedicated_models": 0,
            }
    if partners:
        shares = _fame_shares([h.fame_weight for h in partners], p.fame_exponent)
        for h, amount in zip(partners, apportion(p.dedicated_budget_cents, shares)):
            breakdown[h.holder_id]["dedicated_models"] = amount
    return _report("ai_royalties", breakdown)
