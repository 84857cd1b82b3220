"""Exact integer-cent revenue-split settlement.

All arithmetic is on integer cents with Decimal for the single rounding
point: commission is rounded half-up on the period aggregate (never per
transaction), and the remainder goes to the developer, so
commission + payout == gross holds exactly for every statement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_UP
from typing import Dict, Iterable, List, Sequence, Tuple

from .model import CommissionPolicy, DomainError

KIND_SALE = "sale"
KIND_SUBSCRIPTION = "subscription"
KIND_AD = "ad"
KINDS = (KIND_SALE, KIND_SUBSCRIPTION, KIND_AD)


@dataclass(frozen=True)
class Transaction:
    app_id: str
    period: str
    kind: str
    amount_cents: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown transaction kind {self.kind!r}")
        if not isinstance(self.amount_cents, int):
            raise DomainError("amount_cents must be an integer")
        if self.amount_cents < 0:
            raise DomainError("amount_cents must be >= 0")


@dataclass(frozen=True)
class SettlementStatement:
    app_id: str
    period: str
    gross_cents: int
    commission_cents: int
    payout_cents: int
    effective_rate: float
    per_kind_cents: Dict[str, int] = field(default_factory=dict)
    free_count: int = 0

    def to_dict(self) -> dict:
        return {
            "app_id": self.app_id,
            "period": self.period,
            "gross_cents": self.gross_cents,
            "commission_cents": self.commission_cents,
            "payout_cents": self.payout_cents,
            "effective_rate": self.effective_rate,
            "per_kind_cents": dict(sorted(self.per_kind_cents.items())),
            "free_count": self.free_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(d: dict) -> "SettlementStatement":
        return SettlementStatement(
            app_id=d["app_id"], period=d["period"],
            gross_cents=int(d["gross_cents"]),
            commission_cents=int(d["commission_cents"]),
            payout_cents=int(d["payout_cents"]),
            effective_rate=float(d["effective_rate"]),
            per_kind_cents={k: int(v) for k, v in d["per_kind_cents"].items()},
            free_count=int(d.get("free_count", 0)),
        )

    @staticmethod
    def from_json(s: str) -> "SettlementStatement":
        return SettlementStatement.from_dict(json.loads(s))


def _rate_decimal(rate: float) -> Decimal:
    return Decimal(repr(rate))


def _round_half_up(x: Decimal) -> int:
    return int(x.quantize(Decimal("1"), rounding=ROUND_HALF_UP))


def _schedule_commission_cents(policy: CommissionPolicy, gross_cents: int) -> int:
    """Commission on app revenue, rounded half-up once on the period total."""
    if policy.is_flat:
        return _round_half_up(_rate_decimal(policy.rate) * gross_cents)
    total = Decimal(0)
    bps = policy.breakpoints
    for i, (threshold, rate) in enumerate(bps):
        t_cents = _round_half_up(Decimal(repr(threshold)) * 100)
        upper_cents = (_round_half_up(Decimal(repr(bps[i + 1][0])) * 100)
                       if i + 1 < len(bps) else None)
        top = gross_cents if upper_cents is None else min(gross_cents, upper_cents)
        band = top - t_cents
        if band <= 0:
            break
        total += _rate_decimal(rate) * band
    return _round_half_up(total)


def _check_same_app(transactions: Sequence[Transaction]) -> Tuple[str, str]:
    apps = {t.app_id for t in transactions}
    if len(apps) > 1:
        raise DomainError(f"mixed app ids in one settlement: {sorted(apps)}")
    periods = {t.period for t in transactions}
    if len(periods) > 1:
        raise DomainError(f"mixed periods in one settlement: {sorted(periods)}")
    app = apps.pop() if apps else ""
    period = periods.pop() if periods else ""
    return app, period


def _build_statement(transactions: Sequence[Transaction],
                     policy: CommissionPolicy,
                     commissionable: Sequence[Transaction],
                     free_count: int = 0) -> SettlementStatement:
    app, period = _check_same_app(transactions)
    gross = sum(t.amount_cents for t in transactions)
    per_kind: Dict[str, int] = {}
    for t in transactions:
        per_kind[t.kind] = per_kind.get(t.kind, 0) + t.amount_cents

    app_gross = sum(t.amount_cents for t in commissionable if t.kind != KIND_AD)
    ad_gross = sum(t.amount_cents for t in commissionable if t.kind == KIND_AD)

    if len(commissionable) < policy.activity_threshold:
        commission = 0
    else:
        commission = _schedule_commission_cents(policy, app_gross)
        if ad_gross:
            ad_rate = policy.ad_share if policy.ad_share is not None else 0.0
            commission += _round_half_up(_rate_decimal(ad_rate) * ad_gross)

    payout = gross - commission
    rate = commission / gross if gross else 0.0
    return SettlementStatement(app_id=app, period=period, gross_cents=gross,
                               commission_cents=commission, payout_cents=payout,
                               effective_rate=rate, per_kind_cents=per_kind,
                               free_count=free_count)


def settle(transactions: Sequence[Transaction],
           policy: CommissionPolicy) -> SettlementStatement:
    """Settle one app's period ledger under a commission policy."""
    return _build_statement(list(transactions), policy, list(transactions))


def settle_freemium(transactions: Sequence[Transaction],
                    policy: CommissionPolicy,
                    premium_flags: Sequence[bool]) -> SettlementStatement:
    """Settle with commission charged on premium-flagged transactions only;
    free-tier entries are served but counted at zero commission."""
    txs = list(transactions)
    if len(txs) != len(premium_flags):
        raise DomainError("premium_flags must align with transactions")
    premium = [t for t, flag in zip(txs, premium_flags) if flag]
    free_count = len(txs) - len(premium)
    return _build_statement(txs, policy, premium, free_count=free_count)


def format_cents(cents: int) -> str:
    sign = "-" if cents < 0 else ""
    cents = abs(cents)
    return f"{sign}${cents // 100:,}.{cents % 100:02d}"


# --- ledger I/O: delimited text with a header row ---

LEDGER_FIELDS = ("app_id", "period", "kind", "amount_cents")


def parse_ledger(lines: Iterable[str]) -> Tuple[List[Transaction], List[bool]]:
    """Parse a CSV ledger (app_id,period,kind,amount_cents[,premium]).
    Returns transactions plus per-row premium flags (default True)."""
    import csv
    reader = csv.DictReader(lines)
    missing = [f for f in LEDGER_FIELDS if f not in (reader.fieldnames or [])]
    if missing:
        raise DomainError(f"ledger missing columns: {missing}")
    txs, flags = [], []
    for i, row in enumerate(reader, start=2):
        try:
            amount = int(row["amount_cents"])
        except ValueError:
            raise DomainError(
                f"line {i}: amount_cents {row['amount_cents']!r} is not an integer")
        txs.append(Transaction(app_id=row["app_id"], period=row["period"],
                               kind=row["kind"], amount_cents=amount))
        flags.append(str(row.get("premium", "1")).strip().lower()
                     not in ("0", "false", "no"))
    return txs, flags


def read_ledger(path) -> Tuple[List[Transaction], List[bool]]:
    with open(path, newline="") as fh:
        return parse_ledger(fh)
