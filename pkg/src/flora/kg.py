"""In-memory knowledge graph with interned handles and inverse-closed indexes.

Every relation r is stored together with a synthetic inverse r"⁻¹", so that a
fact r(h, t) is visible both as an outgoing fact of h and as an incoming fact
of t under the inverse label.  Each logical fact is stored once; the indexes
expose both directions.  Graphs are append-only during ingestion and freeze
lazily on first query: incident fact lists are then sorted by (relation
label, head label) so iteration order is a function of content alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .literals import LiteralValue

INSTANCE = "instance"
CLASS = "class"
LITERAL = "literal"

INVERSE_MARKER = "⁻¹"


@dataclass
class EntityRef:
    id: int
    kind: str
    label: str


@dataclass
class RelationRef:
    id: int
    label: str
    inverse_id: int
    is_inverse: bool


class KnowledgeGraph:
    """One side of an alignment task: entities, relations and facts."""

    def __init__(self, name: str = "") -> None:
        self.name = name
        self.entities: list[EntityRef] = []
        self.relations: list[RelationRef] = []
        self.literal_values: dict[int, LiteralValue] = {}
        self._ent_by_label: dict[str, int] = {}
        self._rel_by_label: dict[str, int] = {}
        self._lit_by_key: dict[tuple, int] = {}
        self._lit_by_raw: dict[str, int] = {}
        self._triples: list[tuple[int, int, int]] = []
        self._triple_index: dict[tuple[int, int, int], int] = {}
        self._incident: dict[int, list[tuple[int, int]]] = {}
        self._tails: dict[tuple[int, int], list[int]] = {}
        self._rel_facts: dict[int, list[tuple[int, int]]] = {}
        self._tail_heads: dict[int, dict[int, list[int]]] = {}
        self._frozen = False

    # -- interning ---------------------------------------------------------

    def intern_entity(self, label: str, kind: str = INSTANCE) -> int:
        if not label:
            raise ValueError("empty entity label")
        eid = self._ent_by_label.get(label)
        if eid is not None:
            return eid
        eid = len(self.entities)
        self.entities.append(EntityRef(eid, kind, label))
        self._ent_by_label[label] = eid
        return eid

    def intern_literal(self, value: LiteralValue, verbatim: str | None = None) -> int:
        """Intern a literal node, one node per (type, canonical form)."""
        eid = self._lit_by_key.get(value.key())
        if eid is None:
            label = value.raw
            if label in self._ent_by_label:
                # a non-literal entity already owns this label; disambiguate
                label = f"{label}#{value.type}"
            eid = len(self.entities)
            self.entities.append(EntityRef(eid, LITERAL, label))
            self._ent_by_label[label] = eid
            self._lit_by_key[value.key()] = eid
            self.literal_values[eid] = value
            self._lit_by_raw.setdefault(value.raw, eid)
            self._lit_by_raw.setdefault(value.canonical, eid)
        if verbatim is not None:
            self._lit_by_raw.setdefault(verbatim, eid)
        return eid

    def intern_relation(self, label: str) -> int:
        """Intern a base relation, creating its inverse alongside."""
        if not label:
            raise ValueError("empty relation label")
        rid = self._rel_by_label.get(label)
        if rid is not None:
            return rid
        rid = len(self.relations)
        inv = rid + 1
        inv_label = label + INVERSE_MARKER
        if inv_label in self._rel_by_label:
            raise ValueError(f"relation label collides with inverse: {inv_label!r}")
        self.relations.append(RelationRef(rid, label, inv, False))
        self.relations.append(RelationRef(inv, inv_label, rid, True))
        self._rel_by_label[label] = rid
        self._rel_by_label[inv_label] = inv
        self._rel_facts[rid] = []
        return rid

    # -- lookups -----------------------------------------------------------

    def entity_id(self, label: str) -> int:
        return self._ent_by_label[label]

    def has_entity(self, label: str) -> bool:
        return label in self._ent_by_label

    def relation_id(self, label: str) -> int:
        return self._rel_by_label[label]

    def has_relation(self, label: str) -> bool:
        return label in self._rel_by_label

    def literal_id(self, verbatim: str) -> int | None:
        """Resolve a literal by its verbatim file form, raw or canonical form."""
        eid = self._lit_by_raw.get(verbatim)
        if eid is None:
            from .literals import parse_literal

            eid = self._lit_by_key.get(parse_literal(verbatim).key())
        return eid

    def ent_label(self, eid: int) -> str:
        return self.entities[eid].label

    def rel_label(self, rid: int) -> str:
        return self.relations[rid].label

    def inverse(self, rid: int) -> int:
        return self.relations[rid].inverse_id

    def base_relation_ids(self) -> list[int]:
        return [r.id for r in self.relations if not r.is_inverse]

    def is_literal(self, eid: int) -> bool:
        return self.entities[eid].kind == LITERAL

    # -- construction ------------------------------------------------------

    def add_triple(self, head_label: str, relation_label: str,
                   tail: str | LiteralValue, verbatim_tail: str | None = None) -> int:
        """Add one fact; duplicates are no-ops returning the original id."""
        h = self.intern_entity(head_label)
        r = self.intern_relation(relation_label)
        if isinstance(tail, LiteralValue):
            t = self.intern_literal(tail, verbatim_tail)
        else:
            if not tail:
                raise ValueError("empty tail label")
            t = self.intern_entity(tail)
        if self.relations[r].is_inverse:
            # r⁻¹(h, t) is the same fact as r(t, h); store the base direction
            h, r, t = t, self.relations[r].inverse_id, h
        key = (h, r, t)
        existing = self._triple_index.get(key)
        if existing is not None:
            return existing
        tid = len(self._triples)
        self._triples.append(key)
        self._triple_index[key] = tid
        self._frozen = False
        inv = self.inverse(r)
        self._rel_facts[r].append((h, t))
        self._incident.setdefault(t, []).append((r, h))
        self._incident.setdefault(h, []).append((inv, t))
        self._tails.setdefault((h, r), []).append(t)
        self._tails.setdefault((t, inv), []).append(h)
        self._tail_heads.clear()
        return tid

    def mark_classes(self, type_relation: str) -> int:
        """Flag tails of the given relation as classes; returns how many."""
        rid = self._rel_by_label.get(type_relation)
        if rid is None:
            return 0
        n = 0
        for _, t in self._rel_facts[rid]:
            ref = self.entities[t]
            if ref.kind == INSTANCE:
                ref.kind = CLASS
                n += 1
        return n

    def _freeze(self) -> None:
        if self._frozen:
            return
        for facts in self._incident.values():
            facts.sort(key=lambda rh: (self.relations[rh[0]].label,
                                       self.entities[rh[1]].label))
        for tails in self._tails.values():
            tails.sort(key=lambda t: self.entities[t].label)
        self._frozen = True

    # -- fact access -------------------------------------------------------

    def incident_facts(self, eid: int) -> list[tuple[int, int]]:
        """Facts r(h, eid) as (relation id, head id), inverse-closed.

        The list covers both directions: a stored fact r(eid, t) appears here
        as (r⁻¹, t).  Order is (relation label, head label) ascending.
        """
        if not 0 <= eid < len(self.entities):
            raise KeyError(f"unknown entity id {eid}")
        self._freeze()
        return self._incident.get(eid, [])

    def outgoing_facts(self, eid: int) -> list[tuple[int, int]]:
        """Facts r(eid, t) as (relation id, tail id), inverse-closed."""
        inv = self.inverse
        return [(inv(r), t) for r, t in self.incident_facts(eid)]

    def tails_of(self, head: int, rid: int) -> list[int]:
        """All t with r(head, t), sorted by label."""
        self._freeze()
        return self._tails.get((head, rid), [])

    def facts_of(self, rid: int) -> Iterator[tuple[int, int]]:
        """All (h, t) with r(h, t); swaps stored pairs for inverse relations."""
        ref = self.relations[rid]
        if ref.is_inverse:
            return ((t, h) for h, t in self._rel_facts[ref.inverse_id])
        return iter(self._rel_facts[rid])

    def n_facts(self, rid: int) -> int:
        ref = self.relations[rid]
        return len(self._rel_facts[ref.inverse_id if ref.is_inverse else rid])

    def tail_to_heads(self, rid: int) -> dict[int, list[int]]:
        """t -> heads h with r(h, t); head lists sorted by label."""
        cached = self._tail_heads.get(rid)
        if cached is not None:
            return cached
        groups: dict[int, list[int]] = {}
        for h, t in self.facts_of(rid):
            groups.setdefault(t, []).append(h)
        for heads in groups.values():
            heads.sort(key=lambda h: self.entities[h].label)
        self._tail_heads[rid] = groups
        return groups

    # -- summary -----------------------------------------------------------

    def triples(self) -> list[tuple[int, int, int]]:
        return list(self._triples)

    def n_triples(self) -> int:
        return len(self._triples)

    def entity_ids(self, kinds: Iterable[str] = (INSTANCE, CLASS)) -> list[int]:
        wanted = set(kinds)
        return [e.id for e in self.entities if e.kind in wanted]

    def literal_ids(self, type_: str | None = None) -> list[int]:
        if type_ is None:
            return sorted(self.literal_values)
        return [eid for eid, v in sorted(self.literal_values.items())
                if v.type == type_]

    def degree(self, eid: int) -> int:
        return len(self.incident_facts(eid))

    def __repr__(self) -> str:
        return (f"KnowledgeGraph({self.name!r}, {len(self.entities)} entities, "
                f"{len(self.relations) // 2} relations, {self.n_triples()} facts)")
