"""Deterministic synthetic stand-in for the public Telco churn CSV.

The public IBM file cannot be redistributed, so the test suite generates a
surrogate with the same shape and the documented headline statistics:
7,043 rows x 21 columns, 1,869 churners (26.54%), exactly 11 blank
TotalCharges cells (all tenure 0, all retained), churned/retained mean
MonthlyCharges of exactly 74.44 / 61.27, and a trimodal tenure histogram
with a late-loyalty peak.

Churn labels are drawn by thresholding a noisy score at the exact churner
count. The score mixes weak additive effects, small conjunction pockets, a
monthly-charge coupling that produces the documented charge differential,
and a bounded product of two dense projections: smooth oblique structure a
small dense network extracts but axis-aligned split ensembles mostly cannot,
mirroring the relative model standings reported for the real data. A small
premium-bill tier (churn-enriched but still minority churn) sits beyond the
1.5-IQR fence, so it moves the raw segment means while the preprocessing
censors it before any model sees it.

Set CHURNKIT_TELCO_CSV to a real dataset path to run the test suite against
it instead (see conftest.py).

Everything is a pure function of (n_rows, seed); the default seed is frozen
so every checkout produces byte-identical data. The constants below were
calibrated against the model suite and must not be retuned casually: the
acceptance thresholds depend on them.
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

import numpy as np

CANONICAL_ROWS = 7043
CANONICAL_CHURNERS = 1869
CANONICAL_BLANKS = 11
DEFAULT_SEED = 104729

CHURNED_MEAN_MONTHLY = 74.44
RETAINED_MEAN_MONTHLY = 61.27

# -- churn score shape (calibrated; see tests/test_acceptance.py) -------------
# Additive main effects are kept weak so linear models top out in the low
# 0.7 band; the conjunction pockets give shallow trees something real to
# split on; the bounded-product term carries the remaining signal.
W_MTM = 0.06          # month-to-month contract
W_TWO_YEAR = -0.08
W_FIBER = 0.306
W_NO_INTERNET = -0.08
W_ECHECK = 0.05
W_PAPERLESS = 0.04
W_SENIOR = 0.05
W_DEPENDENTS = -0.05
W_PARTNER = -0.08
W_TECH_SUPPORT = -0.06
W_SECURITY = -0.05
W_TENURE = -0.10      # standardized tenure
W_MONTHLY = 0.383     # standardized monthly charges

B_NEW_RISK = 0.10     # month-to-month and tenure <= 6
B_PREMIUM = 0.05      # fiber + electronic check + paperless
B_UNPROTECTED = 0.03  # month-to-month fiber with no tech support/security

C_PROD = 1.76         # bounded product of two dense projections
PROD_SLOPE = 1.00     # tanh input slope
NOISE_SCALE = 0.88    # logistic label noise

# Flat shift applied to every bill so the raw segment means land on the
# documented 74.44 / 61.27 targets with only a residual cent-level fix.
MONTHLY_LEVEL = -2.26

# Premium tier: a small segment with bills far above the bulk distribution,
# churn-enriched but still minority-churn. These bills sit beyond the 1.5-IQR
# fence, so the preprocessing replaces them with the feature mean before any
# model sees them; they move the raw-value segment means (the headline
# charge differential) without carrying any decision-usable signal.
PREMIUM_FRACTION = 0.085
PREMIUM_CHURN_SHARE = 0.48
PREMIUM_BILL_LOW = 146.0
PREMIUM_BILL_HIGH = 154.0

# Dense projection weights over the standardized internal feature block
# [tenure, monthly, lifetime_value, addon_count, mtm, two_year, fiber,
#  no_internet, echeck, paperless, senior, dependents].
# PROJ_A and PROJ_B have disjoint supports, so their product consists purely
# of cross-feature interaction terms: no single feature carries curvature a
# tree could read off one axis, while a dense net sums the pairwise terms
# easily. Fixed constants: the surrogate must not change when numpy's
# sampling internals do.
PROJ_A = np.array([0.38, 0.00, 0.38, 0.00, 0.35, 0.00, 0.34, 0.00, 0.33, 0.00, 0.32, 0.00])
PROJ_B = np.array([0.00, 0.38, 0.00, 0.37, 0.00, -0.35, 0.00, -0.33, 0.00, 0.34, 0.00, -0.32])

HEADER = (
    "customerID,gender,SeniorCitizen,Partner,Dependents,tenure,PhoneService,"
    "MultipleLines,InternetService,OnlineSecurity,OnlineBackup,DeviceProtection,"
    "TechSupport,StreamingTV,StreamingMovies,Contract,PaperlessBilling,"
    "PaymentMethod,MonthlyCharges,TotalCharges,Churn"
).split(",")


def churner_count(n_rows: int) -> int:
    if n_rows == CANONICAL_ROWS:
        return CANONICAL_CHURNERS
    return max(1, int(round(n_rows * CANONICAL_CHURNERS / CANONICAL_ROWS)))


def blank_count(n_rows: int) -> int:
    if n_rows == CANONICAL_ROWS:
        return CANONICAL_BLANKS
    return max(1, int(round(n_rows * CANONICAL_BLANKS / CANONICAL_ROWS)))


def _standardize(v: np.ndarray) -> np.ndarray:
    return (v - v.mean()) / v.std()


def _draw_tenure(rng, contract: np.ndarray) -> np.ndarray:
    """Trimodal tenures: early-churn mass, mid plateau, late-loyalty spike."""
    n = contract.size
    spike_p = np.select([contract == 0, contract == 1], [0.06, 0.20], default=0.45)
    spike = rng.random(n) < spike_p
    a = np.select([contract == 0, contract == 1], [0.75, 1.50], default=2.00)
    b = np.select([contract == 0, contract == 1], [2.00, 1.25], default=0.90)
    body = np.floor(73.0 * rng.beta(a, b)).astype(np.int64)
    loyal = rng.integers(66, 73, size=n)
    tenure = np.where(spike, loyal, np.clip(body, 0, 72))
    return np.maximum(tenure, 1)  # tenure 0 is reserved for the blank rows


def _exact_mean_cents(cents: np.ndarray, mask: np.ndarray, target_mean: float) -> None:
    """Shift the masked entries (in place) so their mean is exactly target_mean.

    Works in integer cents: a uniform shift plus a +/-1 cent remainder spread
    over the first rows of the segment.
    """
    count = int(mask.sum())
    target_total = int(round(target_mean * 100)) * count
    delta = target_total - int(cents[mask].sum())
    shift, remainder = divmod(delta, count)
    adjust = np.full(count, shift, dtype=np.int64)
    adjust[:remainder] += 1
    cents[mask] += adjust


def generate(n_rows: int = CANONICAL_ROWS, seed: int = DEFAULT_SEED) -> dict[str, np.ndarray]:
    """Generate all 21 columns; numeric columns stay numeric arrays."""
    rng = np.random.default_rng(seed)
    n = n_rows

    # contract: 0 = month-to-month, 1 = one year, 2 = two year
    contract = rng.choice(3, size=n, p=[0.55, 0.21, 0.24])

    # internet: 2 = fiber, 1 = DSL, 0 = none; fiber skews month-to-month
    p_fiber = np.select([contract == 0, contract == 1], [0.50, 0.40], default=0.34)
    p_dsl = np.select([contract == 0, contract == 1], [0.32, 0.36], default=0.38)
    u = rng.random(n)
    internet = np.where(u < p_fiber, 2, np.where(u < p_fiber + p_dsl, 1, 0))

    phone = rng.random(n) < 0.903
    internet = np.where(~phone & (internet == 0), 1, internet)  # everyone has a service
    multiple_lines = phone & (rng.random(n) < 0.47)

    has_net = internet > 0
    longer = contract * 0.07
    addon_p = {
        "OnlineSecurity": 0.29, "OnlineBackup": 0.35, "DeviceProtection": 0.35,
        "TechSupport": 0.29, "StreamingTV": 0.39, "StreamingMovies": 0.39,
    }
    addons = {
        name: has_net & (rng.random(n) < np.clip(p + longer, 0.0, 0.95))
        for name, p in addon_p.items()
    }

    senior = rng.random(n) < 0.162
    partner = rng.random(n) < 0.483
    dependents = rng.random(n) < np.where(partner, 0.45, 0.11)
    gender_female = rng.random(n) < 0.50
    paperless = rng.random(n) < np.select([internet == 2, internet == 1], [0.65, 0.55], default=0.40)

    # payment: 0 echeck, 1 mailed, 2 bank transfer, 3 credit card
    pay_p = np.select(
        [contract == 0, contract == 1],
        [np.array([0.45, 0.25, 0.15, 0.15])[:, None],
         np.array([0.25, 0.22, 0.27, 0.26])[:, None]],
        default=np.array([0.16, 0.20, 0.33, 0.31])[:, None],
    ).T
    cum = np.cumsum(pay_p, axis=1)
    payment = (rng.random(n)[:, None] > cum).sum(axis=1)

    tenure = _draw_tenure(rng, contract)
    blank_idx = rng.choice(n, size=blank_count(n), replace=False)
    tenure[blank_idx] = 0

    addon_count = sum(a.astype(np.int64) for a in addons.values())
    monthly = (
        MONTHLY_LEVEL
        + np.where(phone, 20.0, 0.0)
        + 5.2 * multiple_lines
        + np.select([internet == 2, internet == 1], [50.0, 25.0], default=0.0)
        + 4.8 * (addons["OnlineSecurity"] + addons["OnlineBackup"]
                 + addons["DeviceProtection"] + addons["TechSupport"])
        + 9.6 * (addons["StreamingTV"] + addons["StreamingMovies"])
        + rng.normal(0.0, 2.0, n)
    )
    monthly = np.maximum(monthly, 18.25)

    # churn score: weak main effects, pockets, and the oblique product
    zt = _standardize(tenure.astype(np.float64))
    zm = _standardize(monthly)
    echeck = payment == 0
    lin = (
        W_MTM * (contract == 0)
        + W_TWO_YEAR * (contract == 2)
        + W_FIBER * (internet == 2)
        + W_NO_INTERNET * (internet == 0)
        + W_ECHECK * echeck
        + W_PAPERLESS * paperless
        + W_SENIOR * senior
        + W_DEPENDENTS * dependents
        + W_PARTNER * partner
        + W_TECH_SUPPORT * addons["TechSupport"]
        + W_SECURITY * addons["OnlineSecurity"]
        + W_TENURE * zt
        + W_MONTHLY * zm
        + B_NEW_RISK * ((contract == 0) & (tenure <= 6))
        + B_PREMIUM * ((internet == 2) & echeck & paperless)
        + B_UNPROTECTED * (
            (contract == 0) & (internet == 2)
            & ~addons["TechSupport"] & ~addons["OnlineSecurity"]
        )
    )
    lifetime = tenure * monthly  # the smooth backbone of TotalCharges
    block = np.column_stack([
        zt, zm,
        _standardize(lifetime),
        _standardize(addon_count.astype(float)),
        _standardize((contract == 0).astype(float)),
        _standardize((contract == 2).astype(float)),
        _standardize((internet == 2).astype(float)),
        _standardize((internet == 0).astype(float)),
        _standardize(echeck.astype(float)),
        _standardize(paperless.astype(float)),
        _standardize(senior.astype(float)),
        _standardize(dependents.astype(float)),
    ])
    u_a = block @ (PROJ_A / np.linalg.norm(PROJ_A))
    u_b = block @ (PROJ_B / np.linalg.norm(PROJ_B))
    # tanh-bounded product: no heavy-tailed hot spots for a deep tree to
    # fence off, just broad smooth curvature across the oblique plane
    score = lin + C_PROD * _standardize(
        np.tanh(PROD_SLOPE * u_a) * np.tanh(PROD_SLOPE * u_b)
    )

    noisy = score + rng.logistic(0.0, NOISE_SCALE, n)
    noisy[blank_idx] = -np.inf  # the blank-TotalCharges rows are all retained
    churn = np.zeros(n, dtype=np.int64)
    churn[np.argsort(noisy)[n - churner_count(n):]] = 1

    # premium-tier bills, drawn from both segments at the configured ratio
    n_premium = int(round(PREMIUM_FRACTION * n))
    if n_premium:
        n_prem_churned = int(round(PREMIUM_CHURN_SHARE * n_premium))
        churned_pool = np.setdiff1d(np.flatnonzero(churn == 1), blank_idx)
        retained_pool = np.setdiff1d(np.flatnonzero(churn == 0), blank_idx)
        premium_idx = np.concatenate([
            rng.choice(churned_pool, size=min(n_prem_churned, churned_pool.size), replace=False),
            rng.choice(retained_pool, size=min(n_premium - n_prem_churned, retained_pool.size), replace=False),
        ])
        monthly[premium_idx] = rng.uniform(PREMIUM_BILL_LOW, PREMIUM_BILL_HIGH, premium_idx.size)

    # pin the documented per-segment means exactly (in cents)
    cents = np.round(monthly * 100).astype(np.int64)
    if n >= 1000:
        _exact_mean_cents(cents, churn == 1, CHURNED_MEAN_MONTHLY)
        _exact_mean_cents(cents, churn == 0, RETAINED_MEAN_MONTHLY)
    monthly = cents / 100.0

    total = tenure * monthly * np.exp(rng.normal(0.0, 0.10, n))
    total = np.round(np.maximum(total, 0.0), 2)

    return {
        "customerID": np.array([f"{i + 1:05d}-SYNTH" for i in range(n)]),
        "gender": np.where(gender_female, "Female", "Male"),
        "SeniorCitizen": senior.astype(np.int64),
        "Partner": np.where(partner, "Yes", "No"),
        "Dependents": np.where(dependents, "Yes", "No"),
        "tenure": tenure,
        "PhoneService": np.where(phone, "Yes", "No"),
        "MultipleLines": np.where(phone, np.where(multiple_lines, "Yes", "No"), "No phone service"),
        "InternetService": np.select([internet == 2, internet == 1], ["Fiber optic", "DSL"], default="No"),
        **{
            name: np.where(has_net, np.where(flag, "Yes", "No"), "No internet service")
            for name, flag in addons.items()
        },
        "Contract": np.select([contract == 0, contract == 1], ["Month-to-month", "One year"], default="Two year"),
        "PaperlessBilling": np.where(paperless, "Yes", "No"),
        "PaymentMethod": np.select(
            [payment == 0, payment == 1, payment == 2],
            ["Electronic check", "Mailed check", "Bank transfer (automatic)"],
            default="Credit card (automatic)",
        ),
        "MonthlyCharges": monthly,
        "TotalCharges": total,     # blanked at write time for tenure-0 rows
        "Churn": np.where(churn == 1, "Yes", "No"),
    }


def write_csv(path, n_rows: int = CANONICAL_ROWS, seed: int = DEFAULT_SEED) -> Path:
    """Write the surrogate dataset; returns the path."""
    cols = generate(n_rows=n_rows, seed=seed)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        for i in range(n_rows):
            row = []
            for name in HEADER:
                value = cols[name][i]
                if name in ("MonthlyCharges", "TotalCharges"):
                    if name == "TotalCharges" and cols["tenure"][i] == 0:
                        row.append("")  # explicit missing, as in the public file
                    else:
                        row.append(f"{float(value):.2f}")
                else:
                    row.append(str(value))
            writer.writerow(row)
    return path


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description="generate a synthetic Telco-style churn CSV")
    ap.add_argument("out", help="output CSV path")
    ap.add_argument("--rows", type=int, default=CANONICAL_ROWS)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ns = ap.parse_args()
    print(write_csv(ns.out, n_rows=ns.rows, seed=ns.seed))
