"""The seeded fixture corpus: two families of near-duplicates plus unrelated files."""
from __future__ import annotations

import hashlib
import json
import random
from pathlib import Path

from .demos import counterexample_strings, flip_bit
from .sampler import binary_bytes, mutate, random_bytes, text_bytes

CORPUS_SEED = 20240611


def build_corpus(seed: int = CORPUS_SEED) -> dict[str, bytes]:
    rng = random.Random(seed)
    text = text_bytes(rng, 12_000)
    binary = binary_bytes(rng, 12_000)
    files = {"text-0.txt": text}
    for k in (1, 2, 3):
        files[f"text-{k}.txt"] = mutate(rng, text, edits=20)
    files["binary-0.bin"] = binary
    for k in (1, 2, 3):
        files[f"binary-{k}.bin"] = mutate(rng, binary, edits=20)
    files["random-0.bin"] = random_bytes(rng, 8_000)
    files["random-1.bin"] = random_bytes(rng, 8_000)
    return files


def manifest(files: dict[str, bytes]) -> dict:
    return {name: hashlib.sha256(data).hexdigest() for name, data in sorted(files.items())}


def write_corpus(directory: Path, seed: int = CORPUS_SEED) -> dict:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = build_corpus(seed)
    for name, data in files.items():
        (directory / name).write_bytes(data)
    man = manifest(files)
    (directory / "MANIFEST.json").write_text(json.dumps({"seed": seed, "sha256": man}, indent=1) + "\n")
    return man


def load_corpus(directory: Path) -> list[tuple[str, bytes]]:
    """``(name, bytes)`` for every corpus file listed in the manifest, sorted by name."""
    directory = Path(directory)
    man = json.loads((directory / "MANIFEST.json").read_text())["sha256"]
    return [(name, (directory / name).read_bytes()) for name in sorted(man)]


def write_counterexample(directory: Path, n: int = 10_000, seed: int = 0) -> dict:
    """x.bin, y.bin and the two one-bit variants of y used by the set-based schemes."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    x, y = counterexample_strings(n, seed)
    files = {"x.bin": x, "y.bin": y, "y-flip0.bin": flip_bit(y, 0), "y-flip1.bin": flip_bit(y, 1)}
    for name, data in files.items():
        (directory / name).write_bytes(data)
    man = manifest(files)
    (directory / "MANIFEST.json").write_text(json.dumps({"n": n, "seed": seed, "sha256": man}, indent=1) + "\n")
    return man


if __name__ == "__main__":
    import sys

    root = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    print(json.dumps({"corpus": write_corpus(root / "corpus"),
                      "counterexample": write_counterexample(root / "counterexample")}, indent=1))
