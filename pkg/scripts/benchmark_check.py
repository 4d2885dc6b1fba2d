"""Time one claim check over a corpus with the baseline scorers.

    python scripts/make_synthetic_corpus.py --docs 1000 --out synthetic.jsonl
    python scripts/benchmark_check.py --corpus synthetic.jsonl \
        --question "Does zinc prevent influenza?" --workers 4
"""

import argparse
import time

from scichk.claims import parse_claim
from scichk.corpus import load_jsonl
from scichk.pipeline import check_claim
from scichk.scoring import LexicalEqaScorer, RuleBqaClassifier


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--corpus", required=True)
    parser.add_argument("--question", default="Does zinc prevent influenza?")
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--limit", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    corpus, ingest = load_jsonl(args.corpus)
    print(f"corpus: {len(corpus)} documents ({len(ingest.skipped)} lines skipped)")
    query = parse_claim(args.question)
    eqa, bqa = LexicalEqaScorer(), RuleBqaClassifier()

    for run in range(1, args.repeat + 1):
        started = time.perf_counter()
        report = check_claim(
            query, corpus, eqa, bqa, retrieval_limit=args.limit, workers=args.workers
        )
        elapsed = time.perf_counter() - started
        rate = len(report.articles) / elapsed if elapsed else float("inf")
        print(
            f"run {run}: {len(report.articles)} articles in {elapsed:.3f}s "
            f"({rate:.0f}/s) -> {report.label.value} "
            f"(yes={report.n_yes} no={report.n_no} neutral={report.n_neutral})"
        )


if __name__ == "__main__":
    main()
