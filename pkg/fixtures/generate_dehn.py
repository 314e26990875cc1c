"""Regenerate the Dehn twist reference images with the brute-force drawing oracle.

Run from the repository root: ``python3 fixtures/generate_dehn.py``.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT.parent / "tests"))

import oracles  # noqa: E402
from totaljohnson.surface import FatSurface  # noqa: E402
from totaljohnson.words import Word  # noqa: E402

CURVES = {
    "dehn_s11": ("s11.json", ["a", "b", "a b", "a b'", "a a b"]),
    "dehn_genus2": ("genus2.json", ["a1", "b2", "a1 b1", "a1 b1 a1' b1'", "b1 a2", "a2 a1"]),
}


def main():
    for name, (surf, curves) in CURVES.items():
        s = FatSurface.load(ROOT / "surfaces" / surf)
        gap = s.default_basepoint
        items = []
        for text in curves:
            loop = s.parse_cyclic(text).letters
            images = oracles.twist_automorphism(s.order, loop, gap, 1)
            items.append({
                "curve": text,
                "images": {s.alphabet.names[i]: s.alphabet.format(Word(img)) for i, img in enumerate(images)},
            })
        out = {
            "schema": 1,
            "kind": "dehn-twists",
            "name": name,
            "surface": f"../surfaces/{surf}",
            "N": 6,
            "provenance": "generator images of the positive twist, drawn by tests/oracles.py (generate_dehn.py)",
            "curves": items,
        }
        (ROOT / "verify" / f"{name}.json").write_text(json.dumps(out, indent=1, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
