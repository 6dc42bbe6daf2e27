"""Deterministic transformation of raw records into the model-ready matrix.

Stage order is fixed: encode -> impute missing TotalCharges -> replace
outliers in the continuous features -> standardize all features. Every
statistic (quartile bounds, replacement means, scaling mean/std) is fitted
on the training partition only and applied unchanged elsewhere, so there is
no train/test leakage by construction.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import (
    DegenerateSplitError,
    InsufficientDataError,
    PersistenceError,
)
from .ingest import RawCustomerRecord, RawDataset
from .validation import as_float_matrix, check_is_fitted

PIPELINE_SCHEMA_VERSION = 1

# The 19 predictors, in the order they appear in every feature matrix.
FEATURE_NAMES = (
    "gender",
    "senior_citizen",
    "partner",
    "dependents",
    "tenure",
    "phone_service",
    "multiple_lines",
    "internet_service",
    "online_security",
    "online_backup",
    "device_protection",
    "tech_support",
    "streaming_tv",
    "streaming_movies",
    "contract",
    "paperless_billing",
    "payment_method",
    "monthly_charges",
    "total_charges",
)

# Only these are genuinely continuous; IQR outlier rules on 0/1 codes would
# be meaningless.
CONTINUOUS_FEATURES = ("tenure", "monthly_charges", "total_charges")

# Fixed encoding tables. Binary service fields use Yes=1/No=0; the
# three-valued add-on fields fold "No internet service"/"No phone service"
# into 0 (absence of the service is a semantic zero). Internet and contract
# carry ordered service tiers; contract is expressed in years with the
# literal 0.083 for month-to-month. Payment methods collapse to
# automatic=1 / manual=0.
GENDER_CODE = {"Female": 1.0, "Male": 0.0}
YES_NO_CODE = {"Yes": 1.0, "No": 0.0}
SERVICE_CODE = {"Yes": 1.0, "No": 0.0, "No internet service": 0.0, "No phone service": 0.0}
INTERNET_CODE = {"Fiber optic": 2.0, "DSL": 1.0, "No": 0.0}
CONTRACT_CODE = {"Two year": 2.0, "One year": 1.0, "Month-to-month": 0.083}
PAYMENT_CODE = {
    "Bank transfer (automatic)": 1.0,
    "Credit card (automatic)": 1.0,
    "Electronic check": 0.0,
    "Mailed check": 0.0,
}
CHURN_CODE = {"Yes": 1, "No": 0}

_TENURE = FEATURE_NAMES.index("tenure")
_CONTRACT = FEATURE_NAMES.index("contract")
_MONTHLY = FEATURE_NAMES.index("monthly_charges")
_TOTAL = FEATURE_NAMES.index("total_charges")


def encode_record(record: RawCustomerRecord) -> np.ndarray:
    """Encode one validated record into the 19-dimensional feature vector.

    A missing TotalCharges becomes NaN and must be filled by
    fill_missing_total_charges before modelling; every other entry is finite.
    """
    values = np.empty(len(FEATURE_NAMES), dtype=np.float64)
    values[0] = GENDER_CODE[record.gender]
    values[1] = float(record.senior_citizen)
    values[2] = YES_NO_CODE[record.partner]
    values[3] = YES_NO_CODE[record.dependents]
    values[4] = float(record.tenure)
    values[5] = YES_NO_CODE[record.phone_service]
    values[6] = SERVICE_CODE[record.multiple_lines]
    values[7] = INTERNET_CODE[record.internet_service]
    values[8] = SERVICE_CODE[record.online_security]
    values[9] = SERVICE_CODE[record.online_backup]
    values[10] = SERVICE_CODE[record.device_protection]
    values[11] = SERVICE_CODE[record.tech_support]
    values[12] = SERVICE_CODE[record.streaming_tv]
    values[13] = SERVICE_CODE[record.streaming_movies]
    values[14] = CONTRACT_CODE[record.contract]
    values[15] = YES_NO_CODE[record.paperless_billing]
    values[16] = PAYMENT_CODE[record.payment_method]
    values[17] = record.monthly_charges
    values[18] = np.nan if record.total_charges is None else record.total_charges
    return values


def label_of(record: RawCustomerRecord) -> int:
    return CHURN_CODE[record.churn]


def encode_records(records) -> tuple[np.ndarray, np.ndarray]:
    """Encode a sequence of records (or a RawDataset) into (X, y)."""
    if isinstance(records, RawDataset):
        records = records.records
    X = np.array([encode_record(r) for r in records], dtype=np.float64)
    X = X.reshape(len(records), len(FEATURE_NAMES))
    y = np.array([label_of(r) for r in records], dtype=np.int64)
    return X, y


def impute_total_charges(contract_code: float, tenure: float, monthly: float) -> float:
    """Reconstruct a missing TotalCharges as contract * tenure * monthly.

    The contract value is the encoded annual-unit code, which is what makes
    the product commensurate with tenure-based billing.
    """
    return contract_code * tenure * monthly


def fill_missing_total_charges(X: np.ndarray) -> np.ndarray:
    """Return a copy of X with NaN TotalCharges entries imputed."""
    X = X.copy()
    missing = np.isnan(X[:, _TOTAL])
    if missing.any():
        X[missing, _TOTAL] = (
            X[missing, _CONTRACT] * X[missing, _TENURE] * X[missing, _MONTHLY]
        )
    return X


@dataclass(frozen=True)
class OutlierBounds:
    """IQR fence plus the replacement mean for one feature."""

    q1: float
    q3: float
    iqr: float
    lower: float
    upper: float
    replacement_mean: float


def fit_outlier_bounds(values) -> OutlierBounds:
    """Fit the 1.5-IQR fence on a list of values.

    Quartiles use linear interpolation between closest order statistics
    (numpy's default convention). The replacement mean is taken over all
    values, outliers included.
    """
    values = np.asarray(values, dtype=np.float64)
    values = values[np.isfinite(values)]
    if values.size < 2:
        raise InsufficientDataError(
            f"need at least 2 finite values to fit quartiles, got {values.size}"
        )
    q1 = float(np.quantile(values, 0.25))
    q3 = float(np.quantile(values, 0.75))
    iqr = q3 - q1
    return OutlierBounds(
        q1=q1,
        q3=q3,
        iqr=iqr,
        lower=q1 - 1.5 * iqr,
        upper=q3 + 1.5 * iqr,
        replacement_mean=float(np.mean(values)),
    )


def treat_outliers(values, bounds: OutlierBounds) -> np.ndarray:
    """Replace values strictly outside [lower, upper] with the stored mean.

    In-bound values pass through bit-identical; values exactly on a bound
    are kept (the fence uses strict inequalities).
    """
    values = np.asarray(values, dtype=np.float64)
    outside = (values < bounds.lower) | (values > bounds.upper)
    return np.where(outside, bounds.replacement_mean, values)


def fit_standardizer(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column mean and population standard deviation (divide by N)."""
    X = as_float_matrix(X)
    return X.mean(axis=0), X.std(axis=0)


def apply_standardizer(X: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    """Scale columns to (x - mean) / std.

    Columns with zero std map to all zeros (0/0 := 0 here): a constant
    feature carries no information and must not poison training.
    """
    X = as_float_matrix(X, n_features=mean.shape[0])
    safe = np.where(std == 0.0, 1.0, std)
    out = (X - mean) / safe
    out[:, std == 0.0] = 0.0
    return out


def invert_standardizer(Z: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    """Inverse of apply_standardizer; zero-std columns recover the mean."""
    Z = as_float_matrix(Z, n_features=mean.shape[0])
    return Z * std + mean


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.2
    seed: int = 42
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise DegenerateSplitError(
                f"test_fraction must be in (0, 1), got {self.test_fraction}"
            )


def stratified_split_indices(y, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic (train, test) index split.

    Stratified mode rounds the test size per class, preserving the class mix
    to within one sample per class. Indices within each partition keep
    dataset order.
    """
    y = np.asarray(y)
    n = y.shape[0]
    rng = np.random.default_rng(spec.seed)
    if spec.stratified:
        test_parts = []
        for cls in np.unique(y):
            cls_idx = np.flatnonzero(y == cls)
            n_test = int(round(spec.test_fraction * cls_idx.size))
            if n_test == 0 or n_test == cls_idx.size:
                raise DegenerateSplitError(
                    f"class {cls} would be empty in one partition"
                )
            test_parts.append(rng.permutation(cls_idx)[:n_test])
        test_idx = np.sort(np.concatenate(test_parts))
    else:
        n_test = int(round(spec.test_fraction * n))
        if n_test == 0 or n_test == n:
            raise DegenerateSplitError("one partition would be empty")
        test_idx = np.sort(rng.permutation(n)[:n_test])
    mask = np.ones(n, dtype=bool)
    mask[test_idx] = False
    train_idx = np.flatnonzero(mask)
    if spec.stratified:
        for cls in np.unique(y):
            if not (y[train_idx] == cls).any() or not (y[test_idx] == cls).any():
                raise DegenerateSplitError(f"class {cls} empty in a partition")
    return train_idx, test_idx


def split_dataset(X, y, spec: SplitSpec):
    """Split an encoded dataset into ((X_train, y_train), (X_test, y_test))."""
    X = as_float_matrix(X)
    y = np.asarray(y)
    train_idx, test_idx = stratified_split_indices(y, spec)
    return (X[train_idx], y[train_idx]), (X[test_idx], y[test_idx])


@dataclass(frozen=True)
class PipelineParams:
    """Fitted preprocessing state, serializable to versioned JSON."""

    feature_names: tuple[str, ...]
    outlier_bounds: dict[str, OutlierBounds]
    mean: np.ndarray
    std: np.ndarray
    schema_version: int = field(default=PIPELINE_SCHEMA_VERSION)

    def to_json_doc(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "feature_names": list(self.feature_names),
            "outlier_bounds": {
                name: {
                    "q1": b.q1,
                    "q3": b.q3,
                    "iqr": b.iqr,
                    "lower": b.lower,
                    "upper": b.upper,
                    "replacement_mean": b.replacement_mean,
                }
                for name, b in self.outlier_bounds.items()
            },
            "standardization": {
                "mean": self.mean.tolist(),
                "std": self.std.tolist(),
            },
        }

    @classmethod
    def from_json_doc(cls, doc: dict) -> "PipelineParams":
        try:
            if doc["schema_version"] != PIPELINE_SCHEMA_VERSION:
                raise PersistenceError(
                    f"unsupported pipeline schema_version {doc['schema_version']}"
                )
            names = tuple(doc["feature_names"])
            bounds = {
                name: OutlierBounds(**fields)
                for name, fields in doc["outlier_bounds"].items()
            }
            mean = np.asarray(doc["standardization"]["mean"], dtype=np.float64)
            std = np.asarray(doc["standardization"]["std"], dtype=np.float64)
        except (KeyError, TypeError) as exc:
            raise PersistenceError(f"malformed pipeline document: {exc}") from exc
        if mean.shape != (len(names),) or std.shape != (len(names),):
            raise PersistenceError("standardization arrays do not match feature list")
        return cls(feature_names=names, outlier_bounds=bounds, mean=mean, std=std)

    def fingerprint(self) -> str:
        """Stable content hash used to tie models to their preprocessing."""
        blob = json.dumps(self.to_json_doc(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def fit_pipeline(train_records) -> PipelineParams:
    """Fit all preprocessing statistics on training records only."""
    X, _ = encode_records(train_records)
    X = fill_missing_total_charges(X)
    bounds = {}
    for name in CONTINUOUS_FEATURES:
        col = FEATURE_NAMES.index(name)
        bounds[name] = fit_outlier_bounds(X[:, col])
        X[:, col] = treat_outliers(X[:, col], bounds[name])
    mean, std = fit_standardizer(X)
    return PipelineParams(
        feature_names=FEATURE_NAMES,
        outlier_bounds=bounds,
        mean=mean,
        std=std,
    )


def apply_pipeline(records, params: PipelineParams) -> tuple[np.ndarray, np.ndarray]:
    """Transform records with frozen params; returns (X, y)."""
    X, y = encode_records(records)
    X = fill_missing_total_charges(X)
    for name, bounds in params.outlier_bounds.items():
        col = FEATURE_NAMES.index(name)
        X[:, col] = treat_outliers(X[:, col], bounds)
    return apply_standardizer(X, params.mean, params.std), y


class ChurnPreprocessor(BaseEstimator, TransformerMixin):
    """Sklearn-style wrapper around the fitted preprocessing pipeline.

    fit() learns outlier fences and scaling statistics from training
    records; transform() maps records (or a RawDataset) to the standardized
    19-column matrix. Labels are not part of the transform; use
    extract_labels or apply_pipeline when you need them.
    """

    def fit(self, records, y=None):
        if isinstance(records, RawDataset):
            records = records.records
        self.params_ = fit_pipeline(records)
        self.n_features_in_ = len(self.params_.feature_names)
        return self

    def transform(self, records):
        check_is_fitted(self, "params_")
        X, _ = apply_pipeline(records, self.params_)
        return X


def extract_labels(records) -> np.ndarray:
    """Binary churn labels (Yes -> 1) for a record sequence or RawDataset."""
    if isinstance(records, RawDataset):
        records = records.records
    return np.array([label_of(r) for r in records], dtype=np.int64)
