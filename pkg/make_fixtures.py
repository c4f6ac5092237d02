"""
One-shot script writing the demo corpus and the agreement fixtures of every
printed Senseval system pair.

Run:  python make_fixtures.py [out_dir]

Layout:
    <out_dir>/corpus/train.tsv, test.tsv          synthetic bank / line / plant sample
    <out_dir>/agreement/<task>/<a>--<b>/          gold.tsv + one prediction file per system
    <out_dir>/experiment.env                      config for `python -m lexvote experiment`
"""
import sys
from pathlib import Path

from lexvote.seed import SENSEVAL_PAIRWISE, generate_corpus, write_agreement_fixture, write_corpus

out = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")

# 1. Corpus
train, test = write_corpus(generate_corpus(seed=0), out / "corpus")
print(f"✅ Corpus: {train}, {test}")

# 2. One fixture per printed system pair: buckets are (zero, one, both)
for task, rows in SENSEVAL_PAIRWISE.items():
    for system_a, system_b, (both, one, zero), _ in rows:
        directory = out / "agreement" / task / f"{system_a}--{system_b}"
        write_agreement_fixture((zero, one, both), (system_a, system_b), directory)
        print(f"✅ {task}: {system_a} / {system_b} ({both + one + zero} instances)")

# 3. Experiment config
config = out / "experiment.env"
config.write_text(
    f"TRAIN={train}\nTEST={test}\nOUT={out / 'report'}\nSEED=0\nBAGS=10\n",
    encoding="utf-8",
)
print(f"✅ Config: {config}  (python -m lexvote experiment --config {config})")
