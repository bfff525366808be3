#!/usr/bin/env python3
"""Write a synthetic ingest document for experiments and demos.

Example:
    python scripts/generate_corpus.py --copies 200 --seed 7 --out corpus.json
    provenance-atlas serve --dataset corpus.json
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from provenance_atlas.synth import SynthConfig, synth_document


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--copies", type=int, default=200)
    parser.add_argument("--max-provenances", type=int, default=10)
    parser.add_argument("--editions", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1481)
    parser.add_argument("--out", type=Path, default=Path("corpus.json"))
    args = parser.parse_args()

    doc = synth_document(SynthConfig(
        n_copies=args.copies,
        max_provenances=args.max_provenances,
        n_editions=args.editions,
        seed=args.seed,
    ))
    args.out.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n",
                        encoding="utf-8")
    n_prov = sum(len(c["provenances"]) for c in doc["copies"])
    print(f"wrote {args.out}: {len(doc['copies'])} copies, {n_prov} provenances")


if __name__ == "__main__":
    main()
