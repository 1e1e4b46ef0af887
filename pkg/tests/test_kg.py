"""Graph store: interning, inverse bookkeeping, adjacency."""

import pytest

from conftest import build_kg
from flora.kg import CLASS, INSTANCE, LITERAL, KnowledgeGraph
from flora.literals import parse_literal


class TestInterning:
    def test_entity_idempotent(self):
        kg = KnowledgeGraph()
        assert kg.intern_entity("berlin") == kg.intern_entity("berlin")

    def test_relation_creates_inverse(self):
        kg = KnowledgeGraph()
        rid = kg.intern_relation("capital")
        ref = kg.relations[rid]
        inv = kg.relations[ref.inverse_id]
        assert not ref.is_inverse
        assert inv.is_inverse
        assert inv.label == "capital⁻¹"
        assert inv.inverse_id == rid

    def test_inverse_label_resolves_to_inverse_id(self):
        kg = KnowledgeGraph()
        rid = kg.intern_relation("capital")
        assert kg.intern_relation("capital⁻¹") == kg.relations[rid].inverse_id

    def test_inverse_label_collision_rejected(self):
        kg = KnowledgeGraph()
        kg.intern_relation("r⁻¹")  # base whose label ends with the marker
        with pytest.raises(ValueError):
            kg.intern_relation("r")

    def test_literal_entity_label_collision(self):
        kg = KnowledgeGraph()
        eid = kg.intern_entity("42")
        lid = kg.intern_literal(parse_literal("42"))
        assert eid != lid
        assert kg.entities[lid].kind == LITERAL
        assert kg.ent_label(eid) != kg.ent_label(lid)

    def test_literal_lookup_by_any_form(self):
        kg = KnowledgeGraph()
        lid = kg.intern_literal(parse_literal('"6378.1"^^xsd:double'),
                                verbatim='"6378.1"^^xsd:double')
        assert kg.literal_id('"6378.1"^^xsd:double') == lid
        assert kg.literal_id("6378.1") == lid
        assert kg.literal_id("6378.10") == lid  # same canonical number

    def test_equal_literals_intern_once(self):
        kg = KnowledgeGraph()
        assert kg.intern_literal(parse_literal("1.50")) == \
            kg.intern_literal(parse_literal("1.5"))


class TestTriples:
    def test_duplicate_fact_is_noop(self):
        kg = build_kg([("a", "r", "b"), ("a", "r", "b")])
        assert kg.n_facts(kg.relation_id("r")) == 1

    def test_inverse_label_triple_stored_swapped(self):
        kg = build_kg([("a", "r", "b")])
        kg.add_triple("b", "r⁻¹", "a")  # same fact, other direction
        assert kg.n_facts(kg.relation_id("r")) == 1
        kg.add_triple("c", "r⁻¹", "d")
        tails = kg.tails_of(kg.entity_id("d"), kg.relation_id("r"))
        assert [kg.ent_label(t) for t in tails] == ["c"]

    def test_facts_mirror_between_directions(self):
        kg = build_kg([("za", "capital", "pta"), ("za", "capital", "cpt")])
        rid = kg.relation_id("capital")
        inv = kg.inverse(rid)
        fwd = {(kg.ent_label(h), kg.ent_label(t)) for h, t in kg.facts_of(rid)}
        bwd = {(kg.ent_label(h), kg.ent_label(t)) for h, t in kg.facts_of(inv)}
        assert fwd == {("za", "pta"), ("za", "cpt")}
        assert bwd == {(t, h) for h, t in fwd}
        assert kg.n_facts(rid) == kg.n_facts(inv) == 2

    def test_literal_tail(self):
        kg = KnowledgeGraph()
        kg.add_triple("berlin", "population", parse_literal("3500000"))
        rid = kg.relation_id("population")
        ((h, t),) = list(kg.facts_of(rid))
        assert kg.is_literal(t)
        assert not kg.is_literal(h)


class TestAdjacency:
    def test_incident_facts_cover_both_directions(self):
        kg = build_kg([("a", "r", "b"), ("c", "s", "a")])
        rows = kg.incident_facts(kg.entity_id("a"))
        seen = {(kg.rel_label(r), kg.ent_label(h)) for r, h in rows}
        assert seen == {("r⁻¹", "b"), ("s", "c")}

    def test_incident_facts_sorted_deterministically(self):
        kg = build_kg([("a", "z", "x"), ("a", "b", "y"), ("a", "b", "w")])
        rows = kg.incident_facts(kg.entity_id("a"))
        keys = [(kg.rel_label(r), kg.ent_label(h)) for r, h in rows]
        assert keys == sorted(keys)

    def test_incident_facts_unknown_entity(self):
        kg = build_kg([("a", "r", "b")])
        with pytest.raises(KeyError):
            kg.incident_facts(999)

    def test_outgoing_mirrors_incident(self):
        kg = build_kg([("a", "r", "b"), ("c", "s", "a")])
        out = {(kg.rel_label(r), kg.ent_label(t))
               for r, t in kg.outgoing_facts(kg.entity_id("a"))}
        assert out == {("r", "b"), ("s⁻¹", "c")}

    def test_tail_to_heads(self):
        kg = build_kg([("b", "r", "x"), ("a", "r", "x"), ("c", "r", "y")])
        rid = kg.relation_id("r")
        heads = kg.tail_to_heads(rid)[kg.entity_id("x")]
        assert [kg.ent_label(h) for h in heads] == ["a", "b"]

    def test_degree(self):
        kg = build_kg([("a", "r", "b"), ("a", "s", "c"), ("d", "t", "a")])
        assert kg.degree(kg.entity_id("a")) == 3
        assert kg.degree(kg.entity_id("b")) == 1


class TestKinds:
    def test_mark_classes(self):
        kg = build_kg([("berlin", "rdf:type", "City")])
        kg.mark_classes("rdf:type")
        assert kg.entities[kg.entity_id("City")].kind == CLASS
        assert kg.entities[kg.entity_id("berlin")].kind == INSTANCE

    def test_entity_ids_filter(self):
        kg = build_kg([("berlin", "rdf:type", "City")])
        kg.add_triple("berlin", "population", parse_literal("3500000"))
        kg.mark_classes("rdf:type")
        inst = [kg.ent_label(e) for e in kg.entity_ids(kinds=(INSTANCE,))]
        assert inst == ["berlin"]
        assert len(kg.entity_ids(kinds=(LITERAL,))) == 1
        assert kg.literal_ids() == kg.entity_ids(kinds=(LITERAL,))
