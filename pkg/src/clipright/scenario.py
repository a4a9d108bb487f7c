"""Declarative scenario files and the dispatcher that runs them.

A scenario file is an INI document with three sections:

    [scheme]   name = windfall | pay_to_train | pay_to_train_and_inspire |
                      ai_royalties | comparison
    [params]   scheme parameters; dollars as integer cents, fractions as
               decimals in [0, 1] (or ratios like 2/3)
    [holders]  one line per rightsholder, in presentation order:
               <holder_id> = works=<int> fame=<number> [holdings=id;id;...]

pay_to_train_and_inspire additionally takes an [outputs] section
(<output_id> = revenue_cents=<int> [condition=...] [model=...]) and an
``influence_csv`` param, resolved relative to the scenario file.

The ``comparison`` scheme runs windfall, pay_to_train and ai_royalties on
the same holder roster (params prefixed ``windfall.``, ``train.`` and
``royalties.``), plus a mirrored ai_royalties run with the fame weights of
the two holders named in ``swap_pair`` exchanged.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, MissingFileError, UnknownSchemeError
from .influence import read_influence_csv
from .schemes import (
    AIRoyaltyParams,
    CompensationReport,
    OutputRecord,
    PayToTrainParams,
    Rightsholder,
    WindfallParams,
    ai_royalties,
    as_fraction,
    pay_to_train,
    pay_to_train_and_inspire,
    windfall,
)

SCHEME_NAMES = (
    "windfall",
    "pay_to_train",
    "pay_to_train_and_inspire",
    "ai_royalties",
    "comparison",
)


@dataclass(frozen=True)
class ScenarioConfig:
    scheme: str
    params: dict[str, str]
    holders: list[Rightsholder]
    outputs: list[OutputRecord]
    base_dir: Path


@dataclass(frozen=True)
class ComparisonReport:
    """Rows of scheme payouts over a shared holder roster."""

    holder_order: list[str]
    rows: list[tuple[str, CompensationReport]]


def _parse_kv_line(holder_id: str, text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for token in text.split():
        if "=" not in token:
            raise ConfigError(f"{holder_id}: expected key=value tokens, got {token!r}")
        key, value = token.split("=", 1)
        out[key] = value
    return out


def _parse_holder(holder_id: str, text: str) -> Rightsholder:
    kv = _parse_kv_line(holder_id, text)
    try:
        works = int(kv.pop("works"))
    except KeyError:
        raise ConfigError(f"{holder_id}: missing works=") from None
    except ValueError:
        raise ConfigError(f"{holder_id}: works must be an integer") from None
    try:
        fame = as_fraction(kv.pop("fame", "0"))
    except ValueError:
        raise ConfigError(f"{holder_id}: bad fame value") from None
    holdings = None
    if "holdings" in kv:
        holdings = frozenset(x for x in kv.pop("holdings").split(";") if x)
    if kv:
        raise ConfigError(f"{holder_id}: unknown holder keys {sorted(kv)}")
    try:
        return Rightsholder(holder_id, works, fame, holdings)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _parse_output(output_id: str, text: str) -> OutputRecord:
    kv = _parse_kv_line(output_id, text)
    try:
        revenue = int(kv.pop("revenue_cents"))
    except KeyError:
        raise ConfigError(f"{output_id}: missing revenue_cents=") from None
    except ValueError:
        raise ConfigError(f"{output_id}: revenue_cents must be an integer") from None
    record = OutputRecord(
        output_id=output_id,
        revenue_cents=revenue,
        condition_tag=kv.pop("condition", ""),
        model_id=kv.pop("model", ""),
    )
    if kv:
        raise ConfigError(f"{output_id}: unknown output keys {sorted(kv)}")
    return record


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"scenario file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from None
    if not parser.has_section("scheme") or not parser.has_option("scheme", "name"):
        raise ConfigError(f"{path}: missing [scheme] name")
    scheme = parser.get("scheme", "name").strip()
    if scheme not in SCHEME_NAMES:
        raise UnknownSchemeError(
            f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEME_NAMES)}"
        )
    params = dict(parser.items("params")) if parser.has_section("params") else {}
    holders = (
        [_parse_holder(hid, text) for hid, text in parser.items("holders")]
        if parser.has_section("holders")
        else []
    )
    outputs = (
        [_parse_output(oid, text) for oid, text in parser.items("outputs")]
        if parser.has_section("outputs")
        else []
    )
    return ScenarioConfig(scheme, params, holders, outputs, path.parent)


class _Params:
    """Typed access to the [params] dict with one error shape."""

    def __init__(self, raw: dict[str, str], prefix: str = ""):
        self.raw = raw
        self.prefix = prefix

    def _fetch(self, key: str) -> str:
        full = self.prefix + key
        if full not in self.raw:
            raise ConfigError(f"missing param {full!r}")
        return self.raw[full]

    def has(self, key: str) -> bool:
        return self.prefix + key in self.raw

    def cents(self, key: str) -> int:
        text = self._fetch(key)
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"param {self.prefix + key!r} must be integer cents") from None

    def integer(self, key: str) -> int:
        return self.cents(key)

    def fraction(self, key: str, default: str | None = None) -> Fraction:
        if default is not None and not self.has(key):
            return as_fraction(default)
        text = self._fetch(key)
        try:
            return as_fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"param {self.prefix + key!r} must be a fraction") from None

    def text(self, key: str) -> str:
        return self._fetch(key)


def _windfall_params(p: _Params) -> WindfallParams:
    return WindfallParams(
        gdp_cents=p.cents("gdp_cents"),
        ai_profit_fraction=p.fraction("ai_profit_fraction"),
        clause_rate=p.fraction("clause_rate"),
        workforce=p.integer("workforce"),
        displacement_rate=p.fraction("displacement_rate"),
        displaced_workers=p.integer("displaced_workers") if p.has("displaced_workers") else None,
    )


def _train_params(p: _Params) -> PayToTrainParams:
    return PayToTrainParams(
        total_revenue_cents=p.cents("total_revenue_cents"),
        ai_revenue_fraction=p.fraction("ai_revenue_fraction"),
        d_c=p.fraction("d_c"),
        dataset_size=p.integer("dataset_size"),
    )


def _royalty_params(p: _Params) -> AIRoyaltyParams:
    return AIRoyaltyParams(
        ai_revenue_cents=p.cents("ai_revenue_cents"),
        d_c=p.fraction("d_c"),
        dataset_size=p.integer("dataset_size"),
        training_pool_fraction=p.fraction("training_pool_fraction", default="0.5"),
        dedicated_pool_fraction=p.fraction("dedicated_pool_fraction", default="0.5"),
        dedicated_budget_cents=p.cents("dedicated_budget_cents"),
        fame_exponent=p.fraction("fame_exponent", default="2/3"),
    )


def _holders_for_windfall(cfg: ScenarioConfig) -> list[Rightsholder]:
    if cfg.holders:
        return cfg.holders
    return [Rightsholder("displaced_worker", 0)]


def run_scenario(cfg: ScenarioConfig) -> CompensationReport:
    """Dispatch a single-scheme scenario. Raises UnknownSchemeError or
    ConfigError on a bad file; comparison scenarios use run_comparison."""
    p = _Params(cfg.params)
    if cfg.scheme == "windfall":
        return windfall(_windfall_params(p), _holders_for_windfall(cfg))
    if cfg.scheme == "pay_to_train":
        return pay_to_train(_train_params(p), cfg.holders)
    if cfg.scheme == "ai_royalties":
        return ai_royalties(_royalty_params(p), cfg.holders)
    if cfg.scheme == "pay_to_train_and_inspire":
        matrix = read_influence_csv(cfg.base_dir / p.text("influence_csv"))
        return pay_to_train_and_inspire(
            cfg.outputs, matrix, cfg.holders, p.cents("payout_pool_cents")
        )
    if cfg.scheme == "comparison":
        raise ConfigError("comparison scenarios must be run with run_comparison")
    raise UnknownSchemeError(f"unknown scheme {cfg.scheme!r}")


def _swap_fame(
    holders: list[Rightsholder], first_id: str, second_id: str
) -> list[Rightsholder]:
    by_id = {h.holder_id: h for h in holders}
    for hid in (first_id, second_id):
        if hid not in by_id:
            raise ConfigError(f"swap_pair names unknown holder {hid!r}")
    a, b = by_id[first_id], by_id[second_id]
    swapped = {first_id: replace(a, fame_weight=b.fame_weight),
               second_id: replace(b, fame_weight=a.fame_weight)}
    return [swapped.get(h.holder_id, h) for h in holders]


def run_comparison(cfg: ScenarioConfig) -> ComparisonReport:
    """Run the scheme-comparison scenario: one row per scheme, shared roster."""
    if cfg.scheme != "comparison":
        raise ConfigError(f"not a comparison scenario: {cfg.scheme!r}")
    if not cfg.holders:
        raise ConfigError("comparison scenario needs a [holders] section")
    raw = cfg.params
    rows: list[tuple[str, CompensationReport]] = [
        ("windfall", windfall(_windfall_params(_Params(raw, "windfall.")),
                              _holders_for_windfall(cfg))),
        ("compensate_to_train", pay_to_train(_train_params(_Params(raw, "train.")),
                                             cfg.holders)),
    ]
    royalty_params = _royalty_params(_Params(raw, "royalties."))
    rows.append(("ai_royalties_fame", ai_royalties(royalty_params, cfg.holders)))
    swap_value = raw.get("swap_pair", "")
    if swap_value:
        names = [x for x in swap_value.replace(",", " ").split() if x]
        if len(names) != 2:
            raise ConfigError(f"swap_pair must name exactly two holders, got {swap_value!r}")
        mirrored = _swap_fame(cfg.holders, names[0], names[1])
        rows.append(("ai_royalties_fame_swapped", ai_royalties(royalty_params, mirrored)))
    return ComparisonReport(holder_order=[h.holder_id for h in cfg.holders], rows=rows)
