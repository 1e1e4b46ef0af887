"""Dataset loading: tab-separated triple files and the OpenEA layout.

Relational files hold head TAB relation TAB tail with entity tails;
attribute files hold head TAB relation TAB literal.  Link files hold one
label pair per line.  Malformed lines are collected as warnings; a file
whose malformed share exceeds 1% is rejected outright.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

from .kg import KnowledgeGraph
from .literals import parse_literal

log = logging.getLogger(__name__)

MALFORMED_FATAL_SHARE = 0.01
DEFAULT_TYPE_RELATION = "rdf:type"

REL_OPS = ("SUB", "SUP", "EQV")
_OP_ALIASES = {"⊆": "SUB", "⊇": "SUP", "≡": "EQV",
               "SUB": "SUB", "SUP": "SUP", "EQV": "EQV"}


class IngestError(Exception):
    """Unreadable or unusably malformed input data."""


@dataclass
class DatasetBundle:
    """Two graphs plus whatever reference data came with them."""

    kg1: KnowledgeGraph
    kg2: KnowledgeGraph
    gold_entity_links: list[tuple[str, str]] = field(default_factory=list)
    gold_relation_links: list[tuple[str, str, str]] | None = None
    seed_links: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    sources: dict[str, str] = field(default_factory=dict)


def parse_triple_file(kg: KnowledgeGraph, path: str, attribute: bool,
                      warnings: list[str]) -> int:
    """Load one triple file into the graph; returns triples added."""
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise IngestError(f"cannot read {path}: {e}") from e
    added = 0
    malformed = 0
    total = 0
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            total += 1
            parts = line.split("\t")
            if len(parts) != 3 or not parts[0] or not parts[1] or not parts[2]:
                malformed += 1
                if len(warnings) < 20:
                    warnings.append(f"{path}:{lineno}: malformed line")
                continue
            h, r, t = parts
            before = kg.n_triples()
            if attribute:
                kg.add_triple(h, r, parse_literal(t), verbatim_tail=t)
            else:
                kg.add_triple(h, r, t)
            added += kg.n_triples() - before
    if malformed and total and malformed / total > MALFORMED_FATAL_SHARE:
        raise IngestError(
            f"{path}: {malformed}/{total} malformed lines exceeds "
            f"{MALFORMED_FATAL_SHARE:.0%}")
    if malformed:
        log.warning("%s: skipped %d malformed lines", path, malformed)
    return added


def load_links(path: str) -> list[tuple[str, str]]:
    """Load label1 TAB label2 pairs."""
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise IngestError(f"cannot read {path}: {e}") from e
    pairs = []
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise IngestError(f"{path}:{lineno}: expected 2 columns")
            pairs.append((parts[0], parts[1]))
    return pairs


def load_relation_links(path: str) -> list[tuple[str, str, str]]:
    """Load label1 TAB op TAB label2 rows, op in SUB/SUP/EQV (or ⊆/⊇/≡)."""
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise IngestError(f"cannot read {path}: {e}") from e
    rows = []
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[1] not in _OP_ALIASES:
                raise IngestError(f"{path}:{lineno}: expected label1, op, label2")
            rows.append((parts[0], _OP_ALIASES[parts[1]], parts[2]))
    return rows


def load_plain(rel1: str, rel2: str, attr1: str | None = None,
               attr2: str | None = None, links: str | None = None,
               type_relation: str = DEFAULT_TYPE_RELATION) -> DatasetBundle:
    """Load two graphs from explicit file paths."""
    kg1 = KnowledgeGraph("kg1")
    kg2 = KnowledgeGraph("kg2")
    warnings: list[str] = []
    sources = {}
    n1 = parse_triple_file(kg1, rel1, False, warnings)
    sources["rel1"] = rel1
    n2 = parse_triple_file(kg2, rel2, False, warnings)
    sources["rel2"] = rel2
    if attr1:
        parse_triple_file(kg1, attr1, True, warnings)
        sources["attr1"] = attr1
    if attr2:
        parse_triple_file(kg2, attr2, True, warnings)
        sources["attr2"] = attr2
    gold = []
    if links:
        gold = load_links(links)
        sources["links"] = links
    if n1 == 0:
        warnings.append(f"{rel1}: no relational triples")
    if n2 == 0:
        warnings.append(f"{rel2}: no relational triples")
    kg1.mark_classes(type_relation)
    kg2.mark_classes(type_relation)
    return DatasetBundle(kg1, kg2, gold_entity_links=gold, warnings=warnings,
                         sources=sources)


def load_openea_dir(directory: str,
                    type_relation: str = DEFAULT_TYPE_RELATION) -> DatasetBundle:
    """Load the OpenEA directory layout.

    Expects rel_triples_1, rel_triples_2, attr_triples_1, attr_triples_2 and
    ent_links in ``directory``.  Attribute files may be absent.
    """
    def p(name: str) -> str:
        return os.path.join(directory, name)

    for required in ("rel_triples_1", "rel_triples_2", "ent_links"):
        if not os.path.exists(p(required)):
            raise IngestError(f"{directory}: missing {required}")
    attr1 = p("attr_triples_1") if os.path.exists(p("attr_triples_1")) else None
    attr2 = p("attr_triples_2") if os.path.exists(p("attr_triples_2")) else None
    return load_plain(p("rel_triples_1"), p("rel_triples_2"), attr1, attr2,
                      links=p("ent_links"), type_relation=type_relation)


def attach_seeds(bundle: DatasetBundle, path: str) -> None:
    """Attach seed alignment pairs; unknown labels are dropped with a warning."""
    pairs = load_links(path)
    kept = []
    for a, b in pairs:
        if bundle.kg1.has_entity(a) and bundle.kg2.has_entity(b):
            kept.append((a, b))
        else:
            bundle.warnings.append(f"seed pair ({a}, {b}) names unknown entities")
    bundle.seed_links = kept
    bundle.sources["seeds"] = path


def write_triples(kg: KnowledgeGraph, rel_path: str, attr_path: str) -> None:
    """Write the graph back out as relational and attribute TSV files."""
    with open(rel_path, "w", encoding="utf-8") as rel_fh, \
            open(attr_path, "w", encoding="utf-8") as attr_fh:
        for h, r, t in kg.triples():
            if kg.is_literal(t):
                attr_fh.write(f"{kg.ent_label(h)}\t{kg.rel_label(r)}\t"
                              f"{kg.literal_values[t].raw}\n")
            else:
                rel_fh.write(f"{kg.ent_label(h)}\t{kg.rel_label(r)}\t"
                             f"{kg.ent_label(t)}\n")
