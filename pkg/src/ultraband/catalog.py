"""ATT&CK/D3FEND pairings and the voice-command survey data.

Two small CSV datasets ship with the package:

* ``attack_catalog.csv`` -- 20 offensive techniques relevant to inaudible
  voice command delivery, each paired with a defensive technique. IDs are
  kept verbatim from the source transcription even where they drift from
  current published MITRE numbering; this module validates shape, not
  upstream registry membership.
* ``command_survey.csv`` -- 50 voice commands tried both as normal audio
  and as near-ultrasound injections (the ``nuit`` arm), with per-command
  outcomes.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, List, Optional, Sequence

from .errors import EmptyInput, IoFailure, ParseError

ATTACK_ID_PATTERN = re.compile(r"^T\d{4}$")
DEFEND_ID_PATTERN = re.compile(r"^D3-T\d{4}$")

OUTCOMES = ("fail", "trigger", "success")

_CATALOG_FIELDS = [
    "attack_tactic",
    "attack_technique_id",
    "attack_technique_name",
    "defend_tactic",
    "defend_technique_id",
    "defend_technique_name",
    "ultrasonic_applicable",
]

_SURVEY_FIELDS = ["id", "command", "original_outcome", "nuit_outcome", "wrong_command"]

_TRUE_WORDS = {"yes", "true", "1"}
_FALSE_WORDS = {"no", "false", "0"}


@dataclass(frozen=True)
class CatalogEntry:
    """One attack technique and the defensive technique that counters it."""

    attack_tactic: str
    attack_technique_id: str
    attack_technique_name: str
    defend_tactic: str
    defend_technique_id: str
    defend_technique_name: str
    ultrasonic_applicable: bool


@dataclass(frozen=True)
class CommandRecord:
    """Outcome of one command under both delivery arms.

    ``wrong_command`` marks trigger-only cases where the assistant woke but
    heard a different command than the one sent.
    """

    id: int
    command: str
    original_outcome: str
    nuit_outcome: str
    wrong_command: bool


@dataclass(frozen=True)
class ArmTotals:
    """Outcome counts for one delivery arm, with display percentages."""

    fail_n: int
    trigger_n: int
    success_n: int

    @property
    def total(self) -> int:
        return self.fail_n + self.trigger_n + self.success_n

    # exact fractions, for arithmetic
    @property
    def fail_fraction(self) -> float:
        return self.fail_n / self.total

    @property
    def trigger_fraction(self) -> float:
        return self.trigger_n / self.total

    @property
    def success_fraction(self) -> float:
        return self.success_n / self.total

    # whole-percent values, for report display
    @property
    def fail_pct(self) -> int:
        return round(100.0 * self.fail_fraction)

    @property
    def trigger_pct(self) -> int:
        return round(100.0 * self.trigger_fraction)

    @property
    def success_pct(self) -> int:
        return round(100.0 * self.success_fraction)


@dataclass(frozen=True)
class SurveyTotals:
    original: ArmTotals
    nuit: ArmTotals


def _bundled(name: str):
    return resources.files("ultraband.data").joinpath(name)


def _open_rows(path, expected_fields: Sequence[str], what: str):
    try:
        if path is None:
            text = _bundled(what).read_text(encoding="utf-8")
        else:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path or what}: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text, newline=""))
    if reader.fieldnames is None:
        raise ParseError(f"{path or what}: empty file, expected a header row")
    if list(reader.fieldnames) != list(expected_fields):
        raise ParseError(
            f"{path or what}: header {reader.fieldnames} does not match {list(expected_fields)}"
        )
    return reader


def _parse_bool(raw: str, where: str) -> bool:
    word = raw.strip().lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise ParseError(f"{where}: expected yes/no, got {raw!r}")


def load_catalog(path=None) -> List[CatalogEntry]:
    """Load catalog entries from ``path`` (default: the bundled dataset).

    Every row is validated: nonempty fields, T####/D3-T#### ID shapes, and
    no duplicate (attack, defend) pairing. Errors carry row and column.
    """
    entries: List[CatalogEntry] = []
    seen = set()
    for row_no, row in enumerate(_open_rows(path, _CATALOG_FIELDS, "attack_catalog.csv"), start=2):
        for field in _CATALOG_FIELDS:
            value = row.get(field)
            if value is None or not value.strip():
                raise ParseError(f"row {row_no}, column '{field}': empty value")
        attack_id = row["attack_technique_id"].strip()
        defend_id = row["defend_technique_id"].strip()
        if not ATTACK_ID_PATTERN.match(attack_id):
            raise ParseError(
                f"row {row_no}, column 'attack_technique_id': {attack_id!r} is not T####"
            )
        if not DEFEND_ID_PATTERN.match(defend_id):
            raise ParseError(
                f"row {row_no}, column 'defend_technique_id': {defend_id!r} is not D3-T####"
            )
        pair = (attack_id, defend_id)
        if pair in seen:
            raise ParseError(f"row {row_no}: duplicate pairing {pair}")
        seen.add(pair)
        entries.append(
            CatalogEntry(
                attack_tactic=row["attack_tactic"].strip(),
                attack_technique_id=attack_id,
                attack_technique_name=row["attack_technique_name"].strip(),
                defend_tactic=row["defend_tactic"].strip(),
                defend_technique_id=defend_id,
                defend_technique_name=row["defend_technique_name"].strip(),
                ultrasonic_applicable=_parse_bool(
                    row["ultrasonic_applicable"], f"row {row_no}, column 'ultrasonic_applicable'"
                ),
            )
        )
    return entries


def save_catalog(entries: Iterable[CatalogEntry], path) -> None:
    """Write entries as CSV; load_catalog(save_catalog(e)) round-trips."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(_CATALOG_FIELDS)
            for e in entries:
                writer.writerow(
                    [
                        e.attack_tactic,
                        e.attack_technique_id,
                        e.attack_technique_name,
                        e.defend_tactic,
                        e.defend_technique_id,
                        e.defend_technique_name,
                        "yes" if e.ultrasonic_applicable else "no",
                    ]
                )
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def pair_defense(
    attack_technique_id: str, entries: Optional[Sequence[CatalogEntry]] = None
) -> List[CatalogEntry]:
    """All catalog rows for one attack technique ID; unknown IDs give []."""
    if entries is None:
        entries = load_catalog()
    return [e for e in entries if e.attack_technique_id == attack_technique_id]


def load_survey(path=None) -> List[CommandRecord]:
    """Load command survey rows from ``path`` (default: bundled dataset).

    Validates outcome values, unique nonnegative IDs, and the rule that
    ``wrong_command`` may only be set on rows whose nuit outcome is
    ``trigger`` (a wrong command implies the assistant did wake up).
    """
    records: List[CommandRecord] = []
    seen_ids = set()
    for row_no, row in enumerate(_open_rows(path, _SURVEY_FIELDS, "command_survey.csv"), start=2):
        raw_id = (row.get("id") or "").strip()
        try:
            cmd_id = int(raw_id)
        except ValueError:
            raise ParseError(f"row {row_no}, column 'id': {raw_id!r} is not an integer") from None
        if cmd_id < 0:
            raise ParseError(f"row {row_no}, column 'id': {cmd_id} is negative")
        if cmd_id in seen_ids:
            raise ParseError(f"row {row_no}, column 'id': duplicate id {cmd_id}")
        seen_ids.add(cmd_id)
        command = (row.get("command") or "").strip()
        if not command:
            raise ParseError(f"row {row_no}, column 'command': empty value")
        outcomes = {}
        for field in ("original_outcome", "nuit_outcome"):
            value = (row.get(field) or "").strip()
            if value not in OUTCOMES:
                raise ParseError(
                    f"row {row_no}, column '{field}': {value!r} not one of {OUTCOMES}"
                )
            outcomes[field] = value
        wrong = _parse_bool(row.get("wrong_command") or "", f"row {row_no}, column 'wrong_command'")
        if wrong and outcomes["nuit_outcome"] != "trigger":
            raise ParseError(
                f"row {row_no}, column 'wrong_command': set on a non-trigger outcome"
            )
        records.append(
            CommandRecord(
                id=cmd_id,
                command=command,
                original_outcome=outcomes["original_outcome"],
                nuit_outcome=outcomes["nuit_outcome"],
                wrong_command=wrong,
            )
        )
    return records


def save_survey(records: Iterable[CommandRecord], path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(_SURVEY_FIELDS)
            for r in records:
                writer.writerow(
                    [
                        r.id,
                        r.command,
                        r.original_outcome,
                        r.nuit_outcome,
                        "true" if r.wrong_command else "false",
                    ]
                )
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _tally(outcomes: Iterable[str]) -> ArmTotals:
    counts = {o: 0 for o in OUTCOMES}
    for o in outcomes:
        counts[o] += 1
    return ArmTotals(fail_n=counts["fail"], trigger_n=counts["trigger"], success_n=counts["success"])


def aggregate_survey(records: Sequence[CommandRecord]) -> SurveyTotals:
    """Count outcomes per arm. Raises EmptyInput on an empty record list."""
    if not records:
        raise EmptyInput("no survey records to aggregate")
    return SurveyTotals(
        original=_tally(r.original_outcome for r in records),
        nuit=_tally(r.nuit_outcome for r in records),
    )
