"""churnkit: telco customer-churn prediction toolkit.

Ingestion of the 21-column churn CSV, a deterministic preprocessing
pipeline, a from-scratch MLP trained with Adam, four baseline classifiers,
cost-sensitive evaluation and plot-ready exploratory statistics, behind
sklearn-style estimator APIs plus a CLI (`churnkit --help`).
"""

from .baselines import (
    DecisionTreeClassifier,
    LogisticRegressionClassifier,
    RandomForestClassifier,
    SGDLinearClassifier,
)
from .errors import ChurnKitError
from .ingest import RawCustomerRecord, RawDataset, dataset_summary, load_dataset, save_dataset
from .metrics import ConfusionMatrix, CostModel, MetricReport, compute_report, confusion, total_cost
from .nn import MlpClassifier, TrainConfig
from .pipeline import (
    FEATURE_NAMES,
    ChurnPreprocessor,
    PipelineParams,
    SplitSpec,
    apply_pipeline,
    extract_labels,
    fit_pipeline,
    split_dataset,
    stratified_split_indices,
)

__version__ = "0.1.0"

__all__ = [
    "ChurnKitError",
    "ChurnPreprocessor",
    "ConfusionMatrix",
    "CostModel",
    "DecisionTreeClassifier",
    "FEATURE_NAMES",
    "LogisticRegressionClassifier",
    "MetricReport",
    "MlpClassifier",
    "PipelineParams",
    "RandomForestClassifier",
    "RawCustomerRecord",
    "RawDataset",
    "SGDLinearClassifier",
    "SplitSpec",
    "TrainConfig",
    "apply_pipeline",
    "compute_report",
    "confusion",
    "dataset_summary",
    "extract_labels",
    "fit_pipeline",
    "load_dataset",
    "save_dataset",
    "split_dataset",
    "stratified_split_indices",
    "total_cost",
    "__version__",
]
