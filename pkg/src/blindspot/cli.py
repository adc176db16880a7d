"""Batch command-line surface: file-to-file report generation.

Every subcommand writes its tables plus a manifest.json recording tool
version, seed, input digests, and all effective parameters. Identical
inputs and seed produce byte-identical outputs. Exit codes: 0 success,
1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from . import detect as detect_mod
from . import events, metrics, posanal, stats, synth, truncation
from .errors import BlindspotError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_text(path: Path, lines: list[str]) -> None:
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def _write_json(path: Path, obj) -> None:
    path.write_bytes((json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8"))


def _write_manifest(outdir: Path, command: str, args, inputs: list[str], params: dict) -> None:
    _write_json(
        outdir / "manifest.json",
        {
            "tool": "blindspot",
            "version": __version__,
            "kernel_backend": _kernels.BACKEND,
            "command": command,
            "seed": getattr(args, "seed", None),
            "threads": args.threads,
            "inputs": {os.path.basename(p): _sha256(p) for p in inputs},
            "params": params,
        },
    )


def _load_corpus(paths: list[str]) -> events.Corpus:
    docs = []
    for p in paths:
        docs.extend(events.load_event_log(p).docs)
    corpus = events.Corpus(docs=docs)
    report = events.validate_corpus(corpus)
    if not report.ok:
        v = report.violations[0]
        raise BlindspotError(
            f"{len(report.violations)} invariant violation(s); first: "
            f"doc {v.doc_id!r} position {v.position}: {v.rule}"
        )
    return corpus


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


RATE_CSV_HEADER = "policy,k_or_p,point,ci_low,ci_high,n_tokens,n_docs"


def _rate_csv_line(policy: truncation.TruncationPolicy, est: truncation.RateEstimate) -> str:
    ci_low = "" if est.ci_low is None else repr(est.ci_low)
    ci_high = "" if est.ci_high is None else repr(est.ci_high)
    return (
        f"{policy.kind},{policy.param!r},{est.point!r},"
        f"{ci_low},{ci_high},{est.n_tokens},{est.n_docs}"
    )


def cmd_exclusion(args) -> int:
    corpus = _load_corpus(args.inputs)
    out = _outdir(args)
    lines = [RATE_CSV_HEADER]
    for spec in args.policy:
        policy = truncation.TruncationPolicy.parse(spec)
        if args.ci:
            est = truncation.exclusion_rate_ci(corpus, policy, B=args.ci, seed=args.seed)
        else:
            est = truncation.exclusion_rate(corpus, policy)
        lines.append(_rate_csv_line(policy, est))
    _write_text(out / "exclusion.csv", lines)
    _write_manifest(
        out, "exclusion", args, args.inputs,
        {"policies": args.policy, "ci_B": args.ci, "ci_method": "doc-bootstrap-percentile"},
    )
    return 0


def cmd_ranks(args) -> int:
    corpus = _load_corpus(args.inputs)
    hist = truncation.rank_distribution(corpus)
    out = _outdir(args)
    lines = ["bin,share"]
    for label, share in zip(hist.bin_labels, hist.bin_shares):
        lines.append(f"{label},{share!r}")
    lines.append(f"median_rank,{hist.median_rank!r}")
    lines.append(f"mean_rank,{hist.mean_rank!r}")
    lines.append(f"rank1_share,{hist.rank1_share!r}")
    _write_text(out / "ranks.csv", lines)
    _write_manifest(out, "ranks", args, args.inputs, {"n_tokens": hist.n_tokens})
    return 0


def cmd_features(args) -> int:
    corpus = _load_corpus(args.inputs)
    rows = metrics.feature_table(corpus)
    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    _write_text(out_path, metrics.feature_csv_lines(rows))
    args.outdir = str(out_path.parent)
    _write_manifest(
        Path(args.outdir), "features", args, args.inputs,
        {"ngram_unit": "word", "n_docs": len(rows), "output": out_path.name},
    )
    return 0


def _read_feature_csv(path: str) -> list[metrics.FeatureRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as f:
        for rec in csv.DictReader(f):
            rows.append(
                metrics.FeatureRow(
                    doc_id=rec["doc_id"],
                    predictability=float(rec["predictability"]),
                    diversity=float(rec["diversity"]),
                    label=rec["label"],
                    strategy=rec.get("strategy") or None,
                    config=rec.get("config") or None,
                    dataset=rec.get("dataset") or None,
                    generator=rec.get("generator") or None,
                )
            )
    return rows


METRICS_CSV_HEADER = (
    "model,accuracy,precision,recall,f1,specificity,auc_roc,auc_pr,"
    "threshold,tp,fp,fn,tn"
)


def cmd_detect(args) -> int:
    rows = _read_feature_csv(args.features)
    train, test = detect_mod.stratified_split(rows, args.split, args.seed)
    if args.model == "rf":
        model = detect_mod.fit_forest(train, n_trees=args.trees, seed=args.seed)
    elif args.model == "lr":
        model = detect_mod.fit_logistic(train)
    else:
        model = detect_mod.fit_gnb(train)
    report = detect_mod.evaluate(model, test)
    out = _outdir(args)
    _write_text(
        out / "metrics.csv",
        [
            METRICS_CSV_HEADER,
            f"{args.model},{report.accuracy!r},{report.precision!r},{report.recall!r},"
            f"{report.f1!r},{report.specificity!r},{report.auc_roc!r},{report.auc_pr!r},"
            f"{report.threshold!r},{report.tp},{report.fp},{report.fn},{report.tn}",
        ],
    )
    _write_json(out / "model.json", detect_mod.model_to_json(model))
    if args.verbose:
        # human-positive orientation of the same confusion matrix
        p_h = report.tn / (report.tn + report.fn) if report.tn + report.fn else 0.0
        r_h = report.tn / (report.tn + report.fp) if report.tn + report.fp else 0.0
        print(f"positive=machine: precision={report.precision:.4f} recall={report.recall:.4f}")
        print(f"positive=human:   precision={p_h:.4f} recall={r_h:.4f}")
    _write_manifest(
        out, "detect", args, [args.features],
        {
            "model": args.model,
            "split": args.split,
            "trees": args.trees if args.model == "rf" else None,
            "threshold": 0.5,
            "n_train": len(train),
            "n_test": len(test),
        },
    )
    return 0


def cmd_overlap(args) -> int:
    corpus_a = _load_corpus([args.corpus_a])
    corpus_b = _load_corpus([args.corpus_b])
    policy = truncation.TruncationPolicy.parse(args.policy)
    stat = truncation.truncation_overlap(corpus_a, corpus_b, policy)
    out = _outdir(args)
    _write_text(
        out / "overlap.csv",
        [
            "policy,mean_jaccard,std_jaccard,n_positions,n_skipped",
            f"{policy.label()},{stat.mean_jaccard!r},{stat.std_jaccard!r},"
            f"{stat.n_positions},{stat.n_skipped}",
        ],
    )
    _write_manifest(out, "overlap", args, [args.corpus_a, args.corpus_b], {"policy": args.policy})
    return 0


def cmd_pos(args) -> int:
    corpus = _load_corpus(args.inputs)
    policy = truncation.TruncationPolicy.parse(args.policy)
    profile = posanal.pos_exclusion_profile(corpus, policy)
    out = _outdir(args)
    _write_text(out / "pos.csv", posanal.pos_csv_lines(profile))
    try:
        r, p = posanal.frequency_exclusion_correlation(profile)
        correlation = {"r": r, "p": p}
    except BlindspotError as e:
        correlation = {"error": str(e)}
    _write_json(
        out / "pos_summary.json",
        {
            "policy": policy.label(),
            "content_mean": profile.content_mean,
            "function_mean": profile.function_mean,
            "asymmetry_ratio": "inf"
            if profile.asymmetry_ratio == float("inf")
            else profile.asymmetry_ratio,
            "content_mean_weighted": profile.content_mean_weighted,
            "function_mean_weighted": profile.function_mean_weighted,
            "degenerate": profile.degenerate,
            "n_tagged": profile.n_tagged,
            "frequency_exclusion_correlation": correlation,
        },
    )
    _write_manifest(out, "pos", args, args.inputs, {"policy": args.policy})
    return 0


def cmd_effects(args) -> int:
    factors = [f for f in (args.factors.split(",") if args.factors else []) if f]
    rows = []
    response = []
    with open(args.results, newline="", encoding="utf-8") as f:
        for rec in csv.DictReader(f):
            design_row: dict = {}
            for cov in args.covariate:
                design_row[cov] = float(rec[cov])
            for fac in factors:
                design_row[fac] = rec[fac]
            rows.append(design_row)
            response.append(float(rec[args.response]))
    result = stats.ols_fit(rows, response)
    out = _outdir(args)
    lines = ["term,beta,se,p"]
    for term in result.terms:
        lines.append(
            f"{term},{result.coef[term]!r},{result.se[term]!r},{result.p_value[term]!r}"
        )
    _write_text(out / "effects.csv", lines)
    _write_json(
        out / "effects_summary.json",
        {"r_squared": result.r_squared, "n": result.n, "response": args.response},
    )
    _write_manifest(
        out, "effects", args, [args.results],
        {"response": args.response, "covariates": args.covariate, "factors": factors},
    )
    return 0


def cmd_synth(args) -> int:
    model = synth.make_zipf_model(args.vocab, args.zipf, seed=args.seed)
    human = synth.HumanDist(synth.make_zipf_model(args.vocab, args.human_zipf).probs)
    docs = []
    for i, child in enumerate(np.random.SeedSequence(args.seed).spawn(args.docs)):
        doc_seed = int(child.generate_state(1)[0])
        corpus_i = synth.generate_synthetic_corpus(
            model, human, args.tokens, seed=doc_seed, doc_id=f"synth-{i}"
        )
        docs.extend(corpus_i.docs)
    corpus = events.Corpus(docs=docs)
    out_path = Path(args.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    events.dump_event_log(corpus, out_path)
    args.outdir = str(out_path.parent)
    _write_manifest(
        Path(args.outdir), "synth", args, [],
        {
            "vocab": args.vocab,
            "zipf": args.zipf,
            "human_zipf": args.human_zipf,
            "tokens": args.tokens,
            "docs": args.docs,
            "prng": synth.PRNG_NAME,
            "output": out_path.name,
        },
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blindspot", description=__doc__)
    parser.add_argument("--threads", type=int, default=os.cpu_count(),
                        help="internal parallelism degree (recorded in the manifest)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exclusion", help="exclusion rates under truncation policies")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--policy", action="append", required=True,
                   help="topk:K or topp:P (repeatable)")
    p.add_argument("--ci", type=int, default=0, metavar="B",
                   help="bootstrap replicates for a 95%% CI (0 = point only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_exclusion)

    p = sub.add_parser("ranks", help="rank distribution histogram")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_ranks)

    p = sub.add_parser("features", help="per-document predictability/diversity table")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output", default="features.csv")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("detect", help="fit and evaluate a detector on a feature table")
    p.add_argument("features")
    p.add_argument("--model", choices=("rf", "lr", "nb"), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--split", type=float, default=0.2)
    p.add_argument("--trees", type=int, default=500)
    p.add_argument("--verbose", action="store_true")
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("overlap", help="truncation-set Jaccard overlap of two scorings")
    p.add_argument("corpus_a")
    p.add_argument("corpus_b")
    p.add_argument("--policy", required=True)
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("pos", help="per-POS exclusion profile")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--policy", required=True)
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_pos)

    p = sub.add_parser("effects", help="OLS of a response on covariates and factors")
    p.add_argument("results")
    p.add_argument("--response", required=True)
    p.add_argument("--covariate", action="append", default=[])
    p.add_argument("--factors", default="")
    p.add_argument("-o", "--outdir", default=".")
    p.set_defaults(func=cmd_effects)

    p = sub.add_parser("synth", help="generate a synthetic event log")
    p.add_argument("--vocab", type=int, required=True)
    p.add_argument("--zipf", type=float, required=True)
    p.add_argument("--tokens", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--human-zipf", type=float, default=None,
                   help="Zipf exponent of the human distribution (default: same as --zipf)")
    p.add_argument("--docs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "synth" and args.human_zipf is None:
        args.human_zipf = args.zipf
    try:
        return args.func(args)
    except BlindspotError as e:
        print(f"blindspot: data error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"blindspot: i/o error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
