"""Regenerate crates/core/tests/fixtures/descriptor_oracle.tsv with RDKit.

Usage: python3 tools/descriptor_oracle.py moses_test.csv.gz > descriptor_oracle.tsv
"""
import gzip
import random
import sys

from rdkit import Chem, RDLogger
from rdkit.Chem import QED, Crippen, RDConfig

sys.path.insert(0, RDConfig.RDContribDir + "/SA_Score")
import sascorer  # noqa: E402

RDLogger.DisableLog("rdApp.*")

smiles = [l.strip().split(",")[0] for l in gzip.open(sys.argv[1], "rt")][1:]
pick = random.Random(7).sample(smiles, 100)
print("smiles\tlogp\tqed\tsa")
for s in pick:
    m = Chem.MolFromSmiles(s)
    print(f"{s}\t{Crippen.MolLogP(m):.6f}\t{QED.qed(m):.6f}\t{sascorer.calculateScore(m):.6f}")
