"""Seeded synthetic KG pairs with a known gold alignment.

The generator builds one random graph and emits two label-scrambled copies
of it, so entity and relation names carry no signal; only literal values are
shared.  Every entity gets a unique string anchor (and a unique number), so
an intact copy should align perfectly.  Optional perturbations: dropping
triples independently on each side, and injecting dangling entities that
exist on one side only.  Dangling entities attach to disjoint halves of the
core on the two sides, so a KG1 dangling and a KG2 dangling never share a
neighborhood.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ingest import DatasetBundle, write_triples
from .kg import KnowledgeGraph
from .literals import parse_literal


@dataclass
class SyntheticSpec:
    n_entities: int = 200
    n_relations: int = 6
    n_attributes: int = 3
    n_rel_triples: int = 1000
    n_extra_anchors: int = 100
    with_numbers: bool = True  # one numeric literal per entity
    with_dates: bool = True    # one date literal per second entity
    drop_rate: float = 0.0
    dangling_rate: float = 0.0
    seed: int = 7


@dataclass
class SyntheticDataset:
    bundle: DatasetBundle
    gold_relations: list[tuple[str, str, str]]
    dangling1: list[str]
    dangling2: list[str]
    spec: SyntheticSpec = field(default_factory=SyntheticSpec)

    def write(self, directory: str) -> None:
        """Write the OpenEA file layout plus a dangling label list."""
        import os

        os.makedirs(directory, exist_ok=True)
        write_triples(self.bundle.kg1, f"{directory}/rel_triples_1",
                      f"{directory}/attr_triples_1")
        write_triples(self.bundle.kg2, f"{directory}/rel_triples_2",
                      f"{directory}/attr_triples_2")
        with open(f"{directory}/ent_links", "w", encoding="utf-8") as fh:
            for a, b in self.bundle.gold_entity_links:
                fh.write(f"{a}\t{b}\n")
        with open(f"{directory}/dangling", "w", encoding="utf-8") as fh:
            for label in self.dangling1 + self.dangling2:
                fh.write(label + "\n")


def _token(rng: np.random.Generator, used: set[str]) -> str:
    while True:
        t = "".join(rng.choice(list("0123456789abcdef"), size=8))
        if t not in used:
            used.add(t)
            return t


def generate(spec: SyntheticSpec) -> SyntheticDataset:
    rng = np.random.default_rng(spec.seed)
    n = spec.n_entities

    rel_triples: set[tuple[int, int, int]] = set()
    while len(rel_triples) < spec.n_rel_triples:
        h, t = rng.integers(0, n, size=2)
        if h == t:
            continue
        rel_triples.add((int(h), int(rng.integers(spec.n_relations)), int(t)))
    rel_list = sorted(rel_triples)

    used: set[str] = set()
    attr_triples: list[tuple[int, int, str]] = []
    for i in range(n):
        attr_triples.append((i, i % spec.n_attributes,
                             f"anchor {i} {_token(rng, used)}"))
    for k in range(spec.n_extra_anchors):
        i = int(rng.integers(n))
        attr_triples.append((i, k % spec.n_attributes,
                             f"extra {k} {_token(rng, used)}"))
    num_triples = ([(i, float(1000 + i)) for i in range(n)]
                   if spec.with_numbers else [])
    date_triples = ([(i, f"{1970 + (i * 7) % 30:04d}-{1 + (i * 3) % 12:02d}-"
                         f"{1 + (i * 5) % 28:02d}")
                     for i in range(0, n, 2)]
                    if spec.with_dates else [])

    ents1 = [f"x:e{i:03d}" for i in range(n)]
    ents2 = [f"y:{_token(rng, used)}" for _ in range(n)]
    rels1 = [f"x:r{j}" for j in range(spec.n_relations)]
    rels2 = [f"y:R{_token(rng, used)}" for _ in range(spec.n_relations)]
    attrs1 = [f"x:a{j}" for j in range(spec.n_attributes)]
    attrs2 = [f"y:A{_token(rng, used)}" for _ in range(spec.n_attributes)]
    num1, num2 = "x:quantity", f"y:N{_token(rng, used)}"
    date1, date2 = "x:since", f"y:D{_token(rng, used)}"

    emissions: list[tuple[tuple[str, str, str], tuple[str, str, str], bool]] = []
    for h, r, t in rel_list:
        emissions.append(((ents1[h], rels1[r], ents1[t]),
                          (ents2[h], rels2[r], ents2[t]), False))
    for i, a, value in attr_triples:
        emissions.append(((ents1[i], attrs1[a], value),
                          (ents2[i], attrs2[a], value), True))
    for i, value in num_triples:
        emissions.append(((ents1[i], num1, repr(value)),
                          (ents2[i], num2, repr(value)), True))
    for i, value in date_triples:
        emissions.append(((ents1[i], date1, value),
                          (ents2[i], date2, value), True))

    keep1 = rng.random(len(emissions)) >= spec.drop_rate
    keep2 = rng.random(len(emissions)) >= spec.drop_rate

    kg1 = KnowledgeGraph("kg1")
    kg2 = KnowledgeGraph("kg2")
    side2: list[tuple[str, str, str, bool, bool]] = []
    for idx, (t1, t2, is_attr) in enumerate(emissions):
        if keep1[idx]:
            if is_attr:
                kg1.add_triple(t1[0], t1[1], parse_literal(t1[2]))
            else:
                kg1.add_triple(*t1)
        side2.append((*t2, bool(keep2[idx]), is_attr))

    dangling1: list[str] = []
    dangling2: list[str] = []
    n_dang = round(spec.dangling_rate * n)
    for d in range(n_dang):
        label = f"x:stray{d:03d}"
        dangling1.append(label)
        for _ in range(2):
            c = int(rng.integers(0, n // 2))
            r = int(rng.integers(spec.n_relations))
            if rng.random() < 0.5:
                kg1.add_triple(label, rels1[r], ents1[c])
            else:
                kg1.add_triple(ents1[c], rels1[r], label)
        kg1.add_triple(label, attrs1[d % spec.n_attributes],
                       parse_literal(f"stray {d} {_token(rng, used)}"))
    for d in range(n_dang):
        label = f"y:stray{_token(rng, used)}"
        dangling2.append(label)
        for _ in range(2):
            c = int(rng.integers(n // 2, n))
            r = int(rng.integers(spec.n_relations))
            if rng.random() < 0.5:
                side2.append((label, rels2[r], ents2[c], True, False))
            else:
                side2.append((ents2[c], rels2[r], label, True, False))
        side2.append((label, attrs2[d % spec.n_attributes],
                      f"loner {d} {_token(rng, used)}", True, True))

    # scrambled insertion order on side 2, to decouple handle assignment
    order = rng.permutation(len(side2))
    for idx in order:
        h, r, t, keep, is_attr = side2[int(idx)]
        if not keep:
            continue
        if is_attr:
            kg2.add_triple(h, r, parse_literal(t))
        else:
            kg2.add_triple(h, r, t)

    gold = [(ents1[i], ents2[i]) for i in range(n)]
    gold_rels = ([(rels1[j], "EQV", rels2[j]) for j in range(spec.n_relations)]
                 + [(attrs1[j], "EQV", attrs2[j]) for j in range(spec.n_attributes)]
                 + [(num1, "EQV", num2), (date1, "EQV", date2)])
    bundle = DatasetBundle(kg1, kg2, gold_entity_links=gold,
                           gold_relation_links=gold_rels)
    return SyntheticDataset(bundle, gold_rels, dangling1, dangling2, spec)
