"""CNC machine dataset ingestion, target construction and stratified splits."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MACHINE_TYPES = ("L", "M", "H")

#: Canonical column keys in file order, with the header used when serializing.
COLUMNS = (
    ("udi", "UDI"),
    ("product_id", "Product ID"),
    ("machine_type", "Type"),
    ("air_temp", "Air temperature [K]"),
    ("process_temp", "Process temperature [K]"),
    ("rot_speed", "Rotational speed [rpm]"),
    ("torque", "Torque [Nm]"),
    ("tool_wear", "Tool wear [min]"),
    ("machine_failure", "Machine failure"),
    ("twf", "TWF"),
    ("hdf", "HDF"),
    ("pwf", "PWF"),
    ("osf", "OSF"),
    ("rnf", "RNF"),
)

# normalized header -> canonical key; covers the UCI headers and the
# abbreviated ones ("Air temp", "Rot. speed", ...)
_ALIASES = {
    "udi": "udi",
    "product id": "product_id",
    "productid": "product_id",
    "type": "machine_type",
    "air temperature": "air_temp",
    "air temp": "air_temp",
    "process temperature": "process_temp",
    "process temp": "process_temp",
    "rotational speed": "rot_speed",
    "rot speed": "rot_speed",
    "rot. speed": "rot_speed",
    "torque": "torque",
    "tool wear": "tool_wear",
    "machine failure": "machine_failure",
    "twf": "twf",
    "hdf": "hdf",
    "pwf": "pwf",
    "osf": "osf",
    "rnf": "rnf",
}

FEATURE_NAMES = ("air_temp", "process_temp", "rot_speed", "torque", "tool_wear",
                 "is_L", "is_M", "is_H")

#: Identifier of the generator used for split shuffling, echoed in reports.
SPLIT_RNG = "numpy.random.PCG64"


class DataError(ValueError):
    """Base class for dataset problems."""


class SchemaError(DataError):
    """Header is missing, duplicated or carries unexpected columns."""


class ParseError(DataError):
    """A cell could not be converted; ``row`` is the 1-based data row."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class DomainError(DataError):
    """A parsed value lies outside its allowed domain."""

    def __init__(self, message: str, row: int | None = None, value: object = None):
        super().__init__(message)
        self.row = row
        self.value = value


class SplitError(DataError):
    """Stratified split cannot be formed."""


@dataclass(frozen=True)
class MachineRecord:
    udi: int
    product_id: str
    machine_type: str
    air_temp: float
    process_temp: float
    rot_speed: float
    torque: float
    tool_wear: float
    machine_failure: bool = False
    twf: bool = False
    hdf: bool = False
    pwf: bool = False
    osf: bool = False
    rnf: bool = False


@dataclass(frozen=True)
class LabeledRecord:
    record: MachineRecord
    label: bool


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.20
    seed: int = 42

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError(f"test_fraction must be in (0, 1), got {self.test_fraction}")


@dataclass(frozen=True)
class DataSplit:
    train: tuple[LabeledRecord, ...]
    test: tuple[LabeledRecord, ...]


def normalize_header(name: str) -> str:
    """Lower-case, strip bracketed units and collapse whitespace."""
    name = re.sub(r"\[[^\]]*\]", "", name)
    name = re.sub(r"\s+", " ", name).strip().lower()
    return name


def _canonical(name: str) -> str | None:
    key = normalize_header(name)
    if key in _ALIASES:
        return _ALIASES[key]
    return _ALIASES.get(key.replace(".", "").replace("_", " "))


def _flag(text: str, column: str, row: int) -> bool:
    t = text.strip()
    if t in ("0", "1"):
        return t == "1"
    try:
        v = float(t)
    except ValueError:
        raise ParseError(f"row {row}: column {column!r} is not a 0/1 flag: {text!r}", row) from None
    if v not in (0.0, 1.0):
        raise DomainError(f"row {row}: column {column!r} must be 0 or 1, got {text!r}", row, text)
    return v == 1.0


def _number(text: str, column: str, row: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"row {row}: column {column!r} is not numeric: {text!r}", row) from None
    if not math.isfinite(v):
        raise ParseError(f"row {row}: column {column!r} is not finite: {text!r}", row)
    return v


def _check_domain(rec: MachineRecord, row: int) -> None:
    if rec.udi <= 0:
        raise DomainError(f"row {row}: UDI must be positive, got {rec.udi}", row, rec.udi)
    if rec.air_temp <= 0:
        raise DomainError(f"row {row}: air temperature must be > 0 K", row, rec.air_temp)
    if rec.process_temp <= 0:
        raise DomainError(f"row {row}: process temperature must be > 0 K", row, rec.process_temp)
    if rec.rot_speed <= 0:
        raise DomainError(f"row {row}: rotational speed must be > 0", row, rec.rot_speed)
    if rec.torque < 0:
        raise DomainError(f"row {row}: torque must be >= 0", row, rec.torque)
    if rec.tool_wear < 0:
        raise DomainError(f"row {row}: tool wear must be >= 0", row, rec.tool_wear)


def _header_map(header: Sequence[str]) -> list[str]:
    keys: list[str] = []
    for name in header:
        key = _canonical(name)
        if key is None:
            raise SchemaError(f"unexpected column {name.strip()!r}")
        if key in keys:
            raise SchemaError(f"duplicate column {name.strip()!r}")
        keys.append(key)
    missing = [label for key, label in COLUMNS if key not in keys]
    if missing:
        raise SchemaError(f"missing column {missing[0]!r}" if len(missing) == 1
                          else "missing columns " + ", ".join(repr(m) for m in missing))
    return keys


def _parse_row(keys: list[str], cells: list[str], row_no: int) -> MachineRecord:
    if len(cells) != len(keys):
        raise SchemaError(f"row {row_no}: expected {len(keys)} columns, found {len(cells)}")
    raw = dict(zip(keys, cells))
    mtype = raw["machine_type"].strip()
    if mtype not in MACHINE_TYPES:
        raise DomainError(f"row {row_no}: unknown machine type {mtype!r}", row_no, mtype)
    udi_f = _number(raw["udi"], "UDI", row_no)
    if udi_f != int(udi_f):
        raise ParseError(f"row {row_no}: UDI is not an integer: {raw['udi']!r}", row_no)
    rec = MachineRecord(
        udi=int(udi_f),
        product_id=raw["product_id"].strip(),
        machine_type=mtype,
        air_temp=_number(raw["air_temp"], "Air temperature", row_no),
        process_temp=_number(raw["process_temp"], "Process temperature", row_no),
        rot_speed=_number(raw["rot_speed"], "Rotational speed", row_no),
        torque=_number(raw["torque"], "Torque", row_no),
        tool_wear=_number(raw["tool_wear"], "Tool wear", row_no),
        machine_failure=_flag(raw["machine_failure"], "Machine failure", row_no),
        twf=_flag(raw["twf"], "TWF", row_no),
        hdf=_flag(raw["hdf"], "HDF", row_no),
        pwf=_flag(raw["pwf"], "PWF", row_no),
        osf=_flag(raw["osf"], "OSF", row_no),
        rnf=_flag(raw["rnf"], "RNF", row_no),
    )
    _check_domain(rec, row_no)
    return rec


def _rows(csv_text: str):
    if csv_text.startswith("\ufeff"):
        csv_text = csv_text[1:]
    reader = csv.reader(io.StringIO(csv_text))
    header = next(reader, None)
    if header is None or not any(h.strip() for h in header):
        raise SchemaError("input has no header row")
    keys = _header_map(header)
    rows = ((n, c) for n, c in enumerate(reader, start=1)
            if c and not (len(c) == 1 and not c[0].strip()))
    return keys, rows


def parse_dataset(csv_text: str) -> list[MachineRecord]:
    """Parse the 14-column CNC dataset CSV into records, in file order."""
    keys, rows = _rows(csv_text)
    return [_parse_row(keys, cells, n) for n, cells in rows]


def check_dataset(csv_text: str, max_errors: int = 50) -> tuple[list[MachineRecord], list[DataError]]:
    """Parse leniently, collecting up to ``max_errors`` row errors instead of stopping."""
    try:
        keys, rows = _rows(csv_text)
    except DataError as exc:
        return [], [exc]
    records, errors = [], []
    for n, cells in rows:
        try:
            records.append(_parse_row(keys, cells, n))
        except DataError as exc:
            errors.append(exc)
            if len(errors) >= max_errors:
                break
    return records, errors


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def serialize_dataset(records: Iterable[MachineRecord]) -> str:
    """Write records back out with the UCI column headers."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([label for _, label in COLUMNS])
    for r in records:
        writer.writerow([
            r.udi, r.product_id, r.machine_type,
            _fmt(r.air_temp), _fmt(r.process_temp), _fmt(r.rot_speed),
            _fmt(r.torque), _fmt(r.tool_wear),
            int(r.machine_failure), int(r.twf), int(r.hdf), int(r.pwf), int(r.osf), int(r.rnf),
        ])
    return buf.getvalue()


def load_dataset(path) -> list[MachineRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_dataset(fh.read())


def deterministic_failure(rec: MachineRecord) -> bool:
    return rec.twf or rec.hdf or rec.pwf or rec.osf


def build_labeled(records: Iterable[MachineRecord]) -> list[LabeledRecord]:
    """Drop random-failure rows and label the rest by the deterministic modes."""
    return [LabeledRecord(r, deterministic_failure(r)) for r in records if not r.rnf]


def _round_half_away(x: float) -> int:
    return int(math.floor(abs(x) + 0.5)) * (1 if x >= 0 else -1)


def stratified_split(records: Sequence[LabeledRecord], spec: SplitSpec) -> DataSplit:
    """Seeded per-class holdout split.

    The record order is shuffled with a PCG64 stream seeded by ``spec.seed``;
    within each class the first ``round(n_class * test_fraction)`` shuffled
    members form the test set.  Both outputs keep the input order.
    """
    labels = np.fromiter((r.label for r in records), dtype=bool, count=len(records))
    n_pos = int(labels.sum())
    n_neg = len(records) - n_pos
    if n_pos < 2 or n_neg < 2:
        raise SplitError(f"each class needs at least 2 records (positives={n_pos}, negatives={n_neg})")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    order = rng.permutation(len(records))
    in_test = np.zeros(len(records), dtype=bool)
    for cls in (True, False):
        members = order[labels[order] == cls]
        k = _round_half_away(members.size * spec.test_fraction)
        in_test[members[:k]] = True
    train = tuple(r for r, t in zip(records, in_test) if not t)
    test = tuple(r for r, t in zip(records, in_test) if t)
    return DataSplit(train=train, test=test)


def prevalence(records: Sequence[LabeledRecord]) -> float:
    if not records:
        return 0.0
    return int(sum(r.label for r in records)) / len(records)


def featurize(record: MachineRecord) -> np.ndarray:
    """Raw sensor readings followed by a full one-hot of machine type."""
    return np.array([
        record.air_temp, record.process_temp, record.rot_speed, record.torque,
        record.tool_wear,
        float(record.machine_type == "L"),
        float(record.machine_type == "M"),
        float(record.machine_type == "H"),
    ])


def feature_matrix(records: Sequence[MachineRecord | LabeledRecord]) -> np.ndarray:
    rows = [featurize(r.record if isinstance(r, LabeledRecord) else r) for r in records]
    if not rows:
        return np.empty((0, len(FEATURE_NAMES)))
    return np.vstack(rows)


def label_vector(records: Sequence[LabeledRecord]) -> np.ndarray:
    return np.fromiter((r.label for r in records), dtype=bool, count=len(records))


def failure_counts(records: Sequence[MachineRecord]) -> dict[str, int]:
    return {
        "machine_failure": int(sum(r.machine_failure for r in records)),
        "TWF": int(sum(r.twf for r in records)),
        "HDF": int(sum(r.hdf for r in records)),
        "PWF": int(sum(r.pwf for r in records)),
        "OSF": int(sum(r.osf for r in records)),
        "RNF": int(sum(r.rnf for r in records)),
    }
