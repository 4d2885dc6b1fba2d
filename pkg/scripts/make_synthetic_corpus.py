"""Generate a synthetic abstract corpus for load and throughput testing.

    python scripts/make_synthetic_corpus.py --docs 1000 --out synthetic.jsonl
"""

import argparse
import json
import random

FILLERS = [
    "The cohort enrolled adults across twelve clinical sites.",
    "Participants were followed for twenty weeks after randomization.",
    "Baseline characteristics were balanced between the study arms.",
    "Adverse events were mild and resolved without intervention.",
    "Secondary endpoints are reported in the supplementary material.",
    "Funding sources had no role in the study design.",
]

OUTCOME_TEMPLATES = [
    "{Agent} supplementation significantly reduced {disease} incidence in this arm.",
    "{Agent} lozenges did not reduce {disease} duration compared with placebo.",
    "{Agent} intake showed no association either way with {disease} in this cohort.",
    "{Agent} treatment failed to improve {disease} outcomes at any dose.",
    "Early {agent} use was associated with reduced {disease} severity scores.",
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=1000)
    parser.add_argument("--out", required=True)
    parser.add_argument("--agent", default="zinc")
    parser.add_argument("--disease", default="influenza")
    parser.add_argument("--seed", type=int, default=20240601)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        for i in range(args.docs):
            sentences = rng.sample(FILLERS, k=rng.randint(1, 4))
            outcome = rng.choice(OUTCOME_TEMPLATES).format(
                agent=args.agent, Agent=args.agent.capitalize(), disease=args.disease
            )
            sentences.insert(rng.randint(0, len(sentences)), outcome)
            record = {
                "id": f"syn-{i:05d}",
                "title": f"Synthetic trial {i:05d}",
                "abstract": " ".join(sentences),
                "year": rng.randint(2015, 2024),
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {args.docs} records to {args.out}")


if __name__ == "__main__":
    main()
