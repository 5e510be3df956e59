import json
import math
import random
from pathlib import Path

import pytest

from apsum.core import LogSparseSet, SetFamily, minimal_sparsity_c

REPO_ROOT = Path(__file__).resolve().parent.parent
SCHEMA_DIR = REPO_ROOT / "schemas"


def load_schema(name: str) -> dict:
    with open(SCHEMA_DIR / f"{name}.schema.json") as fh:
        return json.load(fh)


def assert_valid(doc: dict, schema_name: str) -> None:
    import jsonschema

    jsonschema.validate(doc, load_schema(schema_name))


def random_sparse_elements(
    rng: random.Random, c: int = 2, max_value: int = 1 << 20, tries: int = 60
) -> tuple[int, ...]:
    """Log-uniform positive integers, greedily kept C-log-sparse."""
    chosen: list[int] = []
    log_top = math.log2(max_value)
    for _ in range(tries):
        v = max(1, int(2 ** rng.uniform(0.0, log_top)))
        if v in chosen:
            continue
        candidate = sorted(set(chosen) | {v})
        if minimal_sparsity_c(candidate) <= c:
            chosen = candidate
    return tuple(chosen)


def random_family(
    rng: random.Random,
    n_sets: int,
    c: int = 2,
    max_value: int = 1 << 20,
    tries: int = 60,
) -> SetFamily:
    sets = tuple(
        LogSparseSet(random_sparse_elements(rng, c, max_value, tries), sparsity_c=c)
        for _ in range(n_sets)
    )
    return SetFamily(sets, provenance={"kind": "manual", "sparsity_c": c})


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xA95)
