"""bsl-adapter command line: score | generate | tag."""

from __future__ import annotations

import argparse
import json
import sys

from .decoding import generate_texts
from .errors import AdapterError
from .events import write_log
from .hf import load_model
from .scoring import score_texts
from .specs import GenSpec, ScoringSpec
from .tagging import project_tags, tag_text, token_offsets


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_texts(path, plain):
    """[(doc_id, text)] from a jsonl file or plain one-per-line text."""
    items = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            if plain:
                items.append((f"doc-{i:06d}", line.rstrip("\n")))
            else:
                obj = json.loads(line)
                items.append((obj.get("doc_id", f"doc-{i:06d}"), obj["text"]))
    return items


def _pos_tags_for(model, texts, backend):
    """Per-document token-level tags via word tagging + projection."""
    all_tags = []
    for text in texts:
        ids = model.encode(text)
        surfaces = [model.token_surface(t) for t in ids]
        words = tag_text(text, backend=backend)
        try:
            offsets = token_offsets(text, surfaces)
        except ValueError:
            all_tags.append([None] * len(ids))
            continue
        tags, _ = project_tags(words, offsets)
        all_tags.append(tags)
    return all_tags


def cmd_score(args):
    model = load_model(args.model, device=args.device)
    spec = ScoringSpec(model=args.model, topn=args.topn, device=args.device,
                       prompt_in_window=args.prompt_in_window,
                       batch_size=args.batch_size)
    items = _read_texts(args.input, args.plain)
    texts = [t for _, t in items]
    pos_tags = _pos_tags_for(model, texts, args.tag_backend) if args.tag else None
    docs, skipped = score_texts(
        model, spec, texts,
        dataset=args.dataset,
        origin=args.origin,
        doc_ids=[d for d, _ in items],
        strategy=args.strategy,
        config=args.config,
        generator=args.generator,
        pos_tags=pos_tags,
    )
    for s in skipped:
        print(f"skipped {s.doc_id}: {s.reason}", file=sys.stderr)
    write_log(docs, args.output)
    print(f"wrote {len(docs)} documents ({len(skipped)} skipped) to {args.output}")
    return 0


def _gen_params(args):
    if args.strategy == "beam":
        return {"width": args.width}
    if args.strategy == "contrastive":
        return {"k": args.k, "alpha": args.alpha}
    if args.strategy == "topk":
        return {"k": args.k}
    if args.strategy == "topp":
        return {"p": args.p}
    return {"t": args.t}


def cmd_generate(args):
    model = load_model(args.model, device=args.device)
    spec = GenSpec(model=args.model, strategy=args.strategy,
                   params=_gen_params(args),
                   max_new_tokens=args.max_new_tokens, seed=args.seed)
    prompts = [t for _, t in _read_texts(args.prompts, args.plain)]
    results = generate_texts(model, spec, prompts)
    with open(args.output, "w", encoding="utf-8") as fh:
        for i, g in enumerate(results):
            fh.write(json.dumps({
                "doc_id": f"gen-{i:06d}",
                "prompt": g.prompt,
                "text": g.text,
                "strategy": g.strategy,
                "config": g.config,
                "seed": g.seed,
                "generator": args.model,
                "prompt_ids": list(g.prompt_ids),
                "token_ids": list(g.token_ids),
            }, ensure_ascii=False) + "\n")
    print(f"wrote {len(results)} generations to {args.output}")
    return 0


def cmd_tag(args):
    items = _read_texts(args.input, args.plain)
    with open(args.output, "w", encoding="utf-8") as fh:
        for doc_id, text in items:
            words = tag_text(text, backend=args.backend)
            fh.write(json.dumps({
                "doc_id": doc_id,
                "words": [{"start": w.start, "end": w.end,
                           "word": w.word, "tag": w.tag} for w in words],
            }, ensure_ascii=False) + "\n")
    print(f"tagged {len(items)} documents to {args.output}")
    return 0


def build_parser():
    ap = _Parser(prog="bsl-adapter",
                 description="produce .bsl.jsonl token-event logs from language models")
    sub = ap.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("score", parents=[], help="teacher-forced scoring of texts")
    sc.add_argument("input", help="jsonl with doc_id/text, or plain text with --plain")
    sc.add_argument("--model", required=True)
    sc.add_argument("--topn", type=int, default=50)
    sc.add_argument("--device", default="cpu")
    sc.add_argument("--batch-size", type=int, default=8)
    sc.add_argument("--prompt-in-window", action="store_true")
    sc.add_argument("--dataset", default="unlabeled")
    sc.add_argument("--origin", choices=("human", "machine"), default="human")
    sc.add_argument("--strategy", default=None)
    sc.add_argument("--config", default=None)
    sc.add_argument("--generator", default=None)
    sc.add_argument("--tag", action="store_true", help="attach projected POS tags")
    sc.add_argument("--tag-backend", default="auto",
                    choices=("auto", "spacy", "lexicon"))
    sc.add_argument("--plain", action="store_true")
    sc.add_argument("-o", "--output", required=True)
    sc.set_defaults(fn=cmd_score)

    ge = sub.add_parser("generate", help="generate continuations under a decoding config")
    ge.add_argument("prompts", help="jsonl with doc_id/text, or plain text with --plain")
    ge.add_argument("--model", required=True)
    ge.add_argument("--device", default="cpu")
    ge.add_argument("--strategy", required=True,
                    choices=("beam", "contrastive", "topk", "topp", "temperature"))
    ge.add_argument("--width", type=int, default=5, help="beam width")
    ge.add_argument("--k", type=int, default=10)
    ge.add_argument("--alpha", type=float, default=0.6)
    ge.add_argument("--p", type=float, default=0.95)
    ge.add_argument("--t", type=float, default=1.0)
    ge.add_argument("--max-new-tokens", type=int, default=256)
    ge.add_argument("--seed", type=int, default=0)
    ge.add_argument("--plain", action="store_true")
    ge.add_argument("-o", "--output", required=True)
    ge.set_defaults(fn=cmd_generate)

    tg = sub.add_parser("tag", help="word-level UD POS tagging")
    tg.add_argument("input", help="jsonl with doc_id/text, or plain text with --plain")
    tg.add_argument("--backend", default="auto", choices=("auto", "spacy", "lexicon"))
    tg.add_argument("--plain", action="store_true")
    tg.add_argument("-o", "--output", required=True)
    tg.set_defaults(fn=cmd_tag)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (AdapterError, OSError, json.JSONDecodeError, KeyError) as e:
        print(f"bsl-adapter: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
