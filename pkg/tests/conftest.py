import random

import pytest

from flora.fis import Aggregator, Fis, alpha_mean
from flora.kg import KnowledgeGraph


def build_kg(triples, name="kg"):
    """A graph from plain label triples."""
    kg = KnowledgeGraph(name)
    for h, r, t in triples:
        kg.add_triple(h, r, t)
    return kg


def random_fis(rng: random.Random) -> Fis:
    """A small random recursive rule system (used against the oracle)."""
    outs = [f"x{i}" for i in range(rng.randint(1, 6))]
    fis = Fis()
    for name in outs:
        fis.add_output(name, initial=rng.choice([0.0, 0.0, 0.0,
                                                 round(rng.random() * 0.3, 3)]))
    for _ in range(rng.randint(1, 10)):
        kind = rng.choice(["min", "hmean", "alpha_mean", "identity"])
        agg = alpha_mean(3.0) if kind == "alpha_mean" else Aggregator(kind)
        n = 1 if kind == "identity" else rng.randint(1, 3)
        premises = []
        for _ in range(n):
            if rng.random() < 0.7:
                premises.append(rng.choice(outs))
            else:
                premises.append(round(rng.random(), 3))
        fis.add_rule(premises, agg, rng.choice(outs))
    return fis


@pytest.fixture(scope="session")
def small_run():
    """One aligned synthetic pair shared by read-only tests."""
    from flora.engine import Config, run
    from flora.synthetic import SyntheticSpec, generate

    ds = generate(SyntheticSpec(n_entities=40, n_rel_triples=200,
                                n_extra_anchors=20, seed=11))
    result = run(ds.bundle, Config())
    return ds, result
