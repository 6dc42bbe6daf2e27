"""Parsing and validation of the IBM Telco customer-churn CSV.

The loader is deliberately strict: columns are matched by header name (not
position), enum cells must contain one of the known category strings, and a
blank TotalCharges cell becomes an explicit ``None`` rather than a zero.
Imputation is a preprocessing decision, not a parsing side effect.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import (
    DatasetIoError,
    EmptyDatasetError,
    MissingColumnError,
    UnparseableValueError,
)

# Canonical column names of the public file, in canonical order. Files are
# accepted in any column order as long as all 21 names are present; unknown
# extra columns are ignored so hand re-exports of the dataset still load.
COLUMNS = (
    "customerID",
    "gender",
    "SeniorCitizen",
    "Partner",
    "Dependents",
    "tenure",
    "PhoneService",
    "MultipleLines",
    "InternetService",
    "OnlineSecurity",
    "OnlineBackup",
    "DeviceProtection",
    "TechSupport",
    "StreamingTV",
    "StreamingMovies",
    "Contract",
    "PaperlessBilling",
    "PaymentMethod",
    "MonthlyCharges",
    "TotalCharges",
    "Churn",
)

YES_NO = ("Yes", "No")

# Enum domains per categorical column. Anything outside these sets is a
# schema error: downstream encodings enumerate exact categories.
ENUM_DOMAINS = {
    "gender": ("Male", "Female"),
    "Partner": YES_NO,
    "Dependents": YES_NO,
    "PhoneService": YES_NO,
    "PaperlessBilling": YES_NO,
    "MultipleLines": ("Yes", "No", "No phone service"),
    "InternetService": ("DSL", "Fiber optic", "No"),
    "OnlineSecurity": ("Yes", "No", "No internet service"),
    "OnlineBackup": ("Yes", "No", "No internet service"),
    "DeviceProtection": ("Yes", "No", "No internet service"),
    "TechSupport": ("Yes", "No", "No internet service"),
    "StreamingTV": ("Yes", "No", "No internet service"),
    "StreamingMovies": ("Yes", "No", "No internet service"),
    "Contract": ("Month-to-month", "One year", "Two year"),
    "PaymentMethod": (
        "Electronic check",
        "Mailed check",
        "Bank transfer (automatic)",
        "Credit card (automatic)",
    ),
    "Churn": YES_NO,
}


@dataclass(frozen=True, slots=True)
class RawCustomerRecord:
    """One row of the 21-column file, values as read, missingness preserved."""

    customer_id: str
    gender: str
    senior_citizen: int
    partner: str
    dependents: str
    tenure: int
    phone_service: str
    multiple_lines: str
    internet_service: str
    online_security: str
    online_backup: str
    device_protection: str
    tech_support: str
    streaming_tv: str
    streaming_movies: str
    contract: str
    paperless_billing: str
    payment_method: str
    monthly_charges: float
    total_charges: float | None
    churn: str


# CSV column -> dataclass field, in canonical column order.
COLUMN_TO_FIELD = {
    "customerID": "customer_id",
    "gender": "gender",
    "SeniorCitizen": "senior_citizen",
    "Partner": "partner",
    "Dependents": "dependents",
    "tenure": "tenure",
    "PhoneService": "phone_service",
    "MultipleLines": "multiple_lines",
    "InternetService": "internet_service",
    "OnlineSecurity": "online_security",
    "OnlineBackup": "online_backup",
    "DeviceProtection": "device_protection",
    "TechSupport": "tech_support",
    "StreamingTV": "streaming_tv",
    "StreamingMovies": "streaming_movies",
    "Contract": "contract",
    "PaperlessBilling": "paperless_billing",
    "PaymentMethod": "payment_method",
    "MonthlyCharges": "monthly_charges",
    "TotalCharges": "total_charges",
    "Churn": "churn",
}

assert tuple(COLUMN_TO_FIELD) == COLUMNS
assert len([f.name for f in fields(RawCustomerRecord)]) == 21


@dataclass(frozen=True)
class RawDataset:
    """All records of one file, in file order."""

    records: tuple[RawCustomerRecord, ...]
    source_path: str

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class DatasetSummary:
    n_rows: int
    n_columns: int
    missing_by_column: dict[str, int]
    churn_fraction: float


def _parse_cell(row_index: int, column: str, raw: str):
    """Parse and validate one cell; raises UnparseableValueError."""
    value = raw.strip()
    if column == "customerID":
        if not value:
            raise UnparseableValueError(row_index, column, raw, "empty id")
        return value
    if column == "SeniorCitizen":
        if value not in ("0", "1"):
            raise UnparseableValueError(row_index, column, raw, "expected 0 or 1")
        return int(value)
    if column == "tenure":
        try:
            months = int(value)
        except ValueError:
            raise UnparseableValueError(row_index, column, raw, "expected integer") from None
        if months < 0:
            raise UnparseableValueError(row_index, column, raw, "negative tenure")
        return months
    if column == "MonthlyCharges":
        try:
            charge = float(value)
        except ValueError:
            raise UnparseableValueError(row_index, column, raw, "expected number") from None
        if charge < 0:
            raise UnparseableValueError(row_index, column, raw, "negative charge")
        return charge
    if column == "TotalCharges":
        if value == "":
            return None  # explicit missing marker, never zero
        try:
            charge = float(value)
        except ValueError:
            raise UnparseableValueError(row_index, column, raw, "expected number or blank") from None
        if charge < 0:
            raise UnparseableValueError(row_index, column, raw, "negative charge")
        return charge
    domain = ENUM_DOMAINS[column]
    if value not in domain:
        raise UnparseableValueError(
            row_index, column, raw, f"expected one of {', '.join(domain)}"
        )
    return value


def load_dataset(path) -> RawDataset:
    """Load and validate a Telco churn CSV.

    Args:
        path: CSV file with a header row naming all 21 canonical columns.

    Returns:
        RawDataset with one RawCustomerRecord per data row, in file order.

    Raises:
        DatasetIoError: unreadable file.
        MissingColumnError: a canonical column is absent from the header.
        UnparseableValueError: a cell violates the column schema. Row numbers
            are 1-based over data rows.
    """
    path = Path(path)
    try:
        # utf-8-sig: tolerate a BOM from spreadsheet re-exports.
        with open(path, newline="", encoding="utf-8-sig") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DatasetIoError(path, "file is empty") from None
            rows = list(reader)
    except OSError as exc:
        raise DatasetIoError(path, str(exc)) from exc

    header = [name.strip() for name in header]
    position = {}
    for i, name in enumerate(header):
        if name in COLUMN_TO_FIELD:
            if name in position:
                raise DatasetIoError(path, f"duplicate column {name!r}")
            position[name] = i
    for name in COLUMNS:
        if name not in position:
            raise MissingColumnError(name)

    records = []
    for row_index, cells in enumerate(rows, start=1):
        if not cells:
            continue  # blank line
        if len(cells) < len(header):
            raise UnparseableValueError(
                row_index, header[len(cells)], "", "row has too few cells"
            )
        kwargs = {
            COLUMN_TO_FIELD[name]: _parse_cell(row_index, name, cells[position[name]])
            for name in COLUMNS
        }
        records.append(RawCustomerRecord(**kwargs))
    return RawDataset(records=tuple(records), source_path=str(path))


def _format_cell(record: RawCustomerRecord, column: str) -> str:
    value = getattr(record, COLUMN_TO_FIELD[column])
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # shortest round-trip representation
    return str(value)


def save_dataset(ds: RawDataset, path) -> None:
    """Write a dataset back to CSV in canonical column order.

    Loading the written file yields field-equal records (round-trip safe);
    byte-level identity with the original file is not a goal.
    """
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for record in ds.records:
            writer.writerow([_format_cell(record, c) for c in COLUMNS])


def dataset_summary(ds: RawDataset) -> DatasetSummary:
    """Row/column counts, per-column missing counts and churn fraction.

    Raises EmptyDatasetError on an empty dataset: the churn fraction would
    be undefined.
    """
    if not ds.records:
        raise EmptyDatasetError("cannot summarise an empty dataset")
    missing = {name: 0 for name in COLUMNS}
    churned = 0
    for record in ds.records:
        if record.total_charges is None:
            missing["TotalCharges"] += 1
        if record.churn == "Yes":
            churned += 1
    return DatasetSummary(
        n_rows=len(ds.records),
        n_columns=len(COLUMNS),
        missing_by_column=missing,
        churn_fraction=churned / len(ds.records),
    )
