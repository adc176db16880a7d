"""Human-vs-machine detection over the two proxy features.

Three classifiers (logistic regression via IRLS, Gaussian naive Bayes,
and a from-scratch random forest) fit on (diversity, predictability)
pairs. The logistic model's positive class is human, matching the
log-odds orientation of the detection equation; ``predict_proba`` always
returns P(machine).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from . import _kernels
from .errors import ClassTooSmall, SingleClass, UnfittedModel
from .metrics import FeatureRow
from .stats import auc_roc, average_precision

MODEL_SCHEMA_VERSION = 1

# affine transform applied to each raw feature before logistic fitting:
# transformed = (raw + offset) * scale
LR_SCALING = {
    "diversity": {"offset": 0.0, "scale": 0.01},
    "predictability": {"offset": 0.0, "scale": 1.0},
}


def _features(rows: list[FeatureRow]) -> np.ndarray:
    return np.array([[r.diversity, r.predictability] for r in rows], dtype=np.float64)


def _machine_labels(rows: list[FeatureRow]) -> np.ndarray:
    return np.array([1 if r.label == "machine" else 0 for r in rows], dtype=np.uint8)


def _check_both_classes(rows: list[FeatureRow]):
    labels = {r.label for r in rows}
    if len(labels) < 2:
        raise SingleClass(f"need both classes, got {sorted(labels)}")


def stratified_split(
    rows: list[FeatureRow], test_frac: float, seed: int
) -> tuple[list[FeatureRow], list[FeatureRow]]:
    """Per-class seeded shuffle; test takes round(class_size * test_frac)
    rows of each class. Disjoint and exhaustive."""
    _check_both_classes(rows)
    if not (0.0 < test_frac < 1.0):
        raise ValueError("test_frac must be in (0, 1)")
    rng = np.random.default_rng(seed)
    train: list[FeatureRow] = []
    test: list[FeatureRow] = []
    by_label: dict[str, list[int]] = {}
    for i, r in enumerate(rows):
        by_label.setdefault(r.label, []).append(i)
    for label in sorted(by_label):
        idx = np.array(by_label[label])
        n_test = int(round(len(idx) * test_frac))
        if n_test == 0 or n_test == len(idx):
            raise ClassTooSmall(
                f"class {label!r} with {len(idx)} rows cannot be split at {test_frac}"
            )
        perm = rng.permutation(idx)
        test.extend(rows[i] for i in perm[:n_test])
        train.extend(rows[i] for i in perm[n_test:])
    return train, test


# --- logistic regression (IRLS) ---

@dataclass
class LRModel:
    w0: float
    w_div: float
    w_pred: float
    feature_scaling: dict
    converged: bool
    iterations: int


def fit_logistic(
    train: list[FeatureRow], tol: float = 1e-8, max_iter: int = 100
) -> LRModel:
    """Maximum-likelihood fit by iteratively reweighted least squares.

    Stops when the log-loss change drops below tol; on complete
    separation it runs to max_iter and returns converged=False with a
    warning."""
    _check_both_classes(train)
    raw = _features(train)
    X = np.column_stack(
        [
            np.ones(len(train)),
            (raw[:, 0] + LR_SCALING["diversity"]["offset"]) * LR_SCALING["diversity"]["scale"],
            (raw[:, 1] + LR_SCALING["predictability"]["offset"])
            * LR_SCALING["predictability"]["scale"],
        ]
    )
    y = 1.0 - _machine_labels(train)  # positive class = human
    w = np.zeros(3)
    prev_ll = -np.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        z = X @ w
        p = expit(z)
        weight = np.clip(p * (1.0 - p), 1e-10, None)
        grad = X.T @ (y - p)
        hess = (X * weight[:, None]).T @ X
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(hess, grad, rcond=None)[0]
        w = w + step
        z = X @ w
        ll = -(np.logaddexp(0.0, -z)[y == 1].sum() + np.logaddexp(0.0, z)[y == 0].sum())
        # a log-loss at machine zero means the classes are completely
        # separated and the MLE diverges; keep going to max_iter instead
        # of declaring convergence on a vanishing change
        separated = ll > -1e-6
        if abs(ll - prev_ll) < tol and not separated:
            converged = True
            break
        prev_ll = ll
    if not converged:
        warnings.warn("logistic fit did not converge; data may be completely separable")
    return LRModel(
        w0=float(w[0]),
        w_div=float(w[1]),
        w_pred=float(w[2]),
        feature_scaling=json.loads(json.dumps(LR_SCALING)),
        converged=converged,
        iterations=it,
    )


# --- Gaussian naive Bayes ---

@dataclass
class GNBModel:
    classes: tuple[str, str]
    means: dict  # class -> [mean_div, mean_pred]
    variances: dict  # class -> [var_div, var_pred], floored
    priors: dict  # class -> empirical frequency
    variance_floor: float


def fit_gnb(train: list[FeatureRow]) -> GNBModel:
    _check_both_classes(train)
    raw = _features(train)
    labels = np.array([r.label for r in train])
    pooled_var = raw.var(axis=0)
    floor = max(1e-9 * float(pooled_var.max()), 1e-12)
    means, variances, priors = {}, {}, {}
    for cls in ("human", "machine"):
        sub = raw[labels == cls]
        means[cls] = [float(m) for m in sub.mean(axis=0)]
        variances[cls] = [max(float(v), floor) for v in sub.var(axis=0)]
        priors[cls] = len(sub) / len(train)
    return GNBModel(
        classes=("human", "machine"),
        means=means,
        variances=variances,
        priors=priors,
        variance_floor=floor,
    )


# --- random forest ---

@dataclass
class Tree:
    # parallel arrays; feature == -1 marks a leaf
    feature: list[int]
    threshold: list[float]
    left: list[int]
    right: list[int]
    count0: list[int]  # human
    count1: list[int]  # machine


@dataclass
class RFModel:
    trees: list[Tree]
    n_trees: int
    seed: int
    bootstrap_indices: list[np.ndarray] = field(repr=False, default_factory=list)


def _build_tree(X: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> Tree:
    tree = Tree([], [], [], [], [], [])

    def new_node() -> int:
        tree.feature.append(-1)
        tree.threshold.append(0.0)
        tree.left.append(-1)
        tree.right.append(-1)
        tree.count0.append(0)
        tree.count1.append(0)
        return len(tree.feature) - 1

    root = new_node()
    stack = [(np.arange(X.shape[0]), root)]
    while stack:
        idx, slot = stack.pop()
        ys = y[idx]
        n1 = int(ys.sum())
        tree.count0[slot] = len(idx) - n1
        tree.count1[slot] = n1
        if n1 == 0 or n1 == len(idx):
            continue  # pure leaf
        feat = int(rng.integers(0, 2))  # 1 candidate feature per split
        found, thr, _ = _kernels.best_threshold(X[idx, feat], ys)
        if not found:
            feat = 1 - feat
            found, thr, _ = _kernels.best_threshold(X[idx, feat], ys)
        if not found:
            continue  # both features constant: impure leaf
        mask = X[idx, feat] <= thr
        tree.feature[slot] = feat
        tree.threshold[slot] = float(thr)
        left = new_node()
        right = new_node()
        tree.left[slot] = left
        tree.right[slot] = right
        stack.append((idx[mask], left))
        stack.append((idx[~mask], right))
    return tree


def _apply_tree(tree: Tree, X: np.ndarray) -> np.ndarray:
    """Leaf class-1 frequency for each row, by vectorized partitioning."""
    out = np.empty(X.shape[0])
    stack = [(np.arange(X.shape[0]), 0)]
    while stack:
        idx, node = stack.pop()
        if idx.size == 0:
            continue
        feat = tree.feature[node]
        if feat < 0:
            total = tree.count0[node] + tree.count1[node]
            out[idx] = tree.count1[node] / total
            continue
        mask = X[idx, feat] <= tree.threshold[node]
        stack.append((idx[mask], tree.left[node]))
        stack.append((idx[~mask], tree.right[node]))
    return out


def fit_forest(
    train: list[FeatureRow], n_trees: int = 500, seed: int = 0
) -> RFModel:
    """Bagged Gini trees grown until pure (min leaf 1, unlimited depth),
    one random candidate feature per split. Deterministic given seed."""
    _check_both_classes(train)
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    X = _features(train)
    y = _machine_labels(train)
    n = X.shape[0]
    trees = []
    bootstrap = []
    for child_seed in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(child_seed)
        idx = rng.integers(0, n, size=n)
        bootstrap.append(idx)
        trees.append(_build_tree(X[idx], y[idx], rng))
    return RFModel(trees=trees, n_trees=n_trees, seed=seed, bootstrap_indices=bootstrap)


# --- prediction and evaluation ---

def _score_batch(model, X: np.ndarray) -> np.ndarray:
    """P(machine) for each row of raw features [diversity, predictability]."""
    if isinstance(model, LRModel):
        sc = model.feature_scaling
        z = (
            model.w0
            + model.w_div * (X[:, 0] + sc["diversity"]["offset"]) * sc["diversity"]["scale"]
            + model.w_pred
            * (X[:, 1] + sc["predictability"]["offset"]) * sc["predictability"]["scale"]
        )
        return 1.0 - expit(z)  # z is the human log-odds
    if isinstance(model, GNBModel):
        log_post = np.empty((X.shape[0], 2))
        for j, cls in enumerate(model.classes):
            mu = np.asarray(model.means[cls])
            var = np.asarray(model.variances[cls])
            log_lik = -0.5 * (np.log(2 * np.pi * var) + (X - mu) ** 2 / var).sum(axis=1)
            log_post[:, j] = log_lik + np.log(model.priors[cls])
        log_post -= log_post.max(axis=1, keepdims=True)
        post = np.exp(log_post)
        post /= post.sum(axis=1, keepdims=True)
        return post[:, model.classes.index("machine")]
    if isinstance(model, RFModel):
        if not model.trees:
            raise UnfittedModel("forest has no trees")
        votes = np.zeros(X.shape[0])
        for tree in model.trees:
            votes += _apply_tree(tree, X)
        return votes / len(model.trees)
    raise UnfittedModel(f"not a fitted model: {type(model).__name__}")


def predict_proba(model, row: FeatureRow) -> float:
    """Probability that the row is machine text."""
    return float(_score_batch(model, _features([row]))[0])


@dataclass
class EvalReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    specificity: float
    auc_roc: float
    auc_pr: float
    tp: int
    fp: int
    fn: int
    tn: int
    threshold: float
    positive_class: str = "machine"


def evaluate(model, test: list[FeatureRow], threshold: float = 0.5) -> EvalReport:
    """Threshold the machine probability for the confusion-based metrics;
    rank the continuous scores for the areas. Positive class = machine."""
    _check_both_classes(test)
    X = _features(test)
    y = _machine_labels(test)
    scores = _score_batch(model, X)
    pred = scores >= threshold
    tp = int(np.count_nonzero(pred & (y == 1)))
    fp = int(np.count_nonzero(pred & (y == 0)))
    fn = int(np.count_nonzero(~pred & (y == 1)))
    tn = int(np.count_nonzero(~pred & (y == 0)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EvalReport(
        accuracy=(tp + tn) / len(test),
        precision=precision,
        recall=recall,
        f1=f1,
        specificity=tn / (tn + fp) if tn + fp else 0.0,
        auc_roc=auc_roc(scores, y),
        auc_pr=average_precision(scores, y),
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
        threshold=threshold,
    )


# --- model (de)serialization ---

def model_to_json(model) -> dict:
    if isinstance(model, LRModel):
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "kind": "lr",
            "w0": model.w0,
            "w_div": model.w_div,
            "w_pred": model.w_pred,
            "feature_scaling": model.feature_scaling,
            "converged": model.converged,
            "iterations": model.iterations,
        }
    if isinstance(model, GNBModel):
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "kind": "nb",
            "classes": list(model.classes),
            "means": model.means,
            "variances": model.variances,
            "priors": model.priors,
            "variance_floor": model.variance_floor,
        }
    if isinstance(model, RFModel):
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "kind": "rf",
            "n_trees": model.n_trees,
            "seed": model.seed,
            "trees": [
                {
                    "feature": t.feature,
                    "threshold": t.threshold,
                    "left": t.left,
                    "right": t.right,
                    "count0": t.count0,
                    "count1": t.count1,
                }
                for t in model.trees
            ],
        }
    raise UnfittedModel(f"not a fitted model: {type(model).__name__}")


def model_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "lr":
        return LRModel(
            w0=obj["w0"],
            w_div=obj["w_div"],
            w_pred=obj["w_pred"],
            feature_scaling=obj["feature_scaling"],
            converged=obj["converged"],
            iterations=obj["iterations"],
        )
    if kind == "nb":
        return GNBModel(
            classes=tuple(obj["classes"]),
            means=obj["means"],
            variances=obj["variances"],
            priors=obj["priors"],
            variance_floor=obj["variance_floor"],
        )
    if kind == "rf":
        return RFModel(
            trees=[
                Tree(
                    feature=t["feature"],
                    threshold=t["threshold"],
                    left=t["left"],
                    right=t["right"],
                    count0=t["count0"],
                    count1=t["count1"],
                )
                for t in obj["trees"]
            ],
            n_trees=obj["n_trees"],
            seed=obj["seed"],
        )
    raise ValueError(f"unknown model kind {kind!r}")
