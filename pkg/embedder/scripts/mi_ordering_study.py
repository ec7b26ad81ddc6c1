#!/usr/bin/env python3
"""Directional MI study: do edge-keeping condensations retain the most?

For a sample of real reasoning traces and a pretrained instruct model,
condense at a fixed ratio under each strategy, embed every variant plus
the full traces, and compare I(E_variant; E_full). The expected ordering
is epic > hoc > moc > toc, with epic within 10% of the full-vs-full
self-MI reference.

Requires a real dataset and model, so it is not part of the hermetic test
suite; the suite runs it automatically when COTEMBED_MI_DATASET and
COTEMBED_MI_MODEL are set.

Example:
    python scripts/mi_ordering_study.py \
        --dataset openr1math.jsonl --model Qwen/Qwen2.5-0.5B-Instruct \
        --sample 500 --tau 0.5 --out-dir study/
"""

import argparse
import json
import shutil
import subprocess
import sys
from pathlib import Path

STRATEGIES = ("epic", "hoc", "moc", "toc", "random")


def cli(*args):
    binary = shutil.which("cotcondense")
    if binary is None:
        sys.exit("cotcondense CLI not found; install the condensation toolkit first")
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"cotcondense {' '.join(args[:1])} failed:\n{proc.stderr}")
    return json.loads(proc.stdout) if proc.stdout.strip() else None


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dataset", required=True, help="JSONL with problem/generation/answer")
    parser.add_argument("--model", required=True)
    parser.add_argument("--sample", type=int, default=500, help="examples to use (from the top)")
    parser.add_argument("--tau", default="0.5")
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--batch", type=int, default=8)
    parser.add_argument("--max-len", type=int, default=4096)
    parser.add_argument("--device", default="auto")
    parser.add_argument("--text-field", default="generation")
    parser.add_argument("--out-dir", default="mi_study")
    args = parser.parse_args()

    from cotembed.extract import EmbedJob, embed_traces

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    subset = out / "sample.jsonl"
    with open(args.dataset, encoding="utf-8") as src, open(subset, "w", encoding="utf-8") as dst:
        taken = 0
        for line in src:
            if taken >= args.sample:
                break
            if line.strip():
                dst.write(line)
                taken += 1
    print(f"sampled {taken} examples", file=sys.stderr)

    def embed(dataset, name, strategy, tau):
        target = out / f"{name}.embm"
        embed_traces(
            EmbedJob(
                input_path=str(dataset),
                output_path=str(target),
                model_id=args.model,
                text_field=args.text_field,
                batch_size=args.batch,
                max_length=args.max_len,
                device=args.device,
                strategy=strategy,
                tau=tau,
            )
        )
        return target

    full_embm = embed(subset, "full", "full", 1.0)

    scores = {}
    for strategy in STRATEGIES:
        condensed = out / f"{strategy}.jsonl"
        cli_args = [
            "condense",
            "--input", str(subset),
            "--output", str(condensed),
            "--strategy", strategy,
            "--ratio", str(args.tau),
            "--report", str(out / f"{strategy}_condense.json"),
        ]
        if strategy == "random":
            cli_args += ["--seed", str(args.seed)]
        cli(*cli_args)
        variant_embm = embed(condensed, strategy, strategy, float(args.tau))
        report = cli("mi", "--a", str(full_embm), "--b", str(variant_embm), "--k", str(args.k))
        scores[strategy] = report["value_nats"]
        print(f"I(full; {strategy:6s}) = {scores[strategy]:.4f} nats", file=sys.stderr)

    reference = cli("mi", "--a", str(full_embm), "--b", str(full_embm), "--k", str(args.k))
    self_mi = reference["value_nats"]
    print(f"I(full; full)   = {self_mi:.4f} nats (upper reference)", file=sys.stderr)

    ordering_ok = scores["epic"] > scores["hoc"] > scores["moc"] > scores["toc"]
    within_ok = scores["epic"] >= 0.9 * self_mi
    result = {
        "tau": args.tau,
        "k": args.k,
        "sample": taken,
        "model": args.model,
        "mi_nats": scores,
        "full_self_mi_nats": self_mi,
        "ordering_epic_hoc_moc_toc": ordering_ok,
        "epic_within_10pct_of_reference": within_ok,
        "passed": ordering_ok and within_ok,
    }
    print(json.dumps(result, indent=2))
    sys.exit(0 if result["passed"] else 1)


if __name__ == "__main__":
    main()
