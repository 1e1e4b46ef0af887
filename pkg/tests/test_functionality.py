"""Functionality measures against definition-level brute force."""

import random

import pytest

import oracles
from conftest import build_kg
from flora.functionality import FunctionalityIndex

# a country with one capital, one with three; capital⁻¹ is what identifies
# the country from the city
CAPITALS = [
    ("za", "capital", "pretoria"),
    ("za", "capital", "capetown"),
    ("za", "capital", "bloemfontein"),
    ("fr", "capital", "paris"),
]

# birth date and family name: each alone maps many people to the same value,
# together they identify a person
PEOPLE = [
    ("p1", "bornOn", "d1"), ("p1", "surname", "smith"),
    ("p2", "bornOn", "d1"), ("p2", "surname", "jones"),
    ("p3", "bornOn", "d2"), ("p3", "surname", "smith"),
    ("p4", "bornOn", "d2"), ("p4", "surname", "jones"),
]


def index_of(triples, **kw):
    return FunctionalityIndex(build_kg(triples), **kw)


class TestSingleRelation:
    def test_three_capitals_local(self):
        idx = index_of(CAPITALS)
        kg = idx.kg
        got = idx.local_fun(kg.relation_id("capital"), kg.entity_id("za"))
        assert got.value == pytest.approx(1 / 3)
        assert got.mode == "exact"

    def test_single_capital_local(self):
        idx = index_of(CAPITALS)
        kg = idx.kg
        got = idx.local_fun(kg.relation_id("capital"), kg.entity_id("fr"))
        assert got.value == 1.0

    def test_global_fun_matches_oracle(self):
        idx = index_of(CAPITALS)
        got = idx.global_fun(idx.kg.relation_id("capital"))
        assert got.value == oracles.brute_fun(CAPITALS, "capital") == 0.5

    def test_inverse_direction(self):
        idx = index_of(CAPITALS)
        rid = idx.kg.relation_id("capital⁻¹")
        assert idx.global_fun(rid).value == oracles.brute_fun(CAPITALS,
                                                              "capital⁻¹") == 1.0

    def test_zero_facts_neutral(self):
        kg = build_kg(CAPITALS)
        kg.intern_relation("unused")
        idx = FunctionalityIndex(kg)
        assert idx.global_fun(kg.relation_id("unused")).value == 1.0

    def test_local_fun_undefined_head(self):
        idx = index_of(CAPITALS)
        kg = idx.kg
        with pytest.raises(ValueError):
            idx.local_fun(kg.relation_id("capital"), kg.entity_id("paris"))

    def test_memoized_identity(self):
        idx = index_of(CAPITALS)
        rid = idx.kg.relation_id("capital")
        assert idx.global_fun(rid) is idx.global_fun(rid)


class TestRelationLists:
    def test_combination_is_functional(self):
        # each single relation has fun 0.5 but the pair identifies the person
        idx = index_of(PEOPLE)
        kg = idx.kg
        born = kg.relation_id("bornOn⁻¹")
        name = kg.relation_id("surname⁻¹")
        assert idx.global_fun(born).value == 0.5
        assert idx.global_fun(name).value == 0.5
        got = idx.global_fun_list([born, name])
        assert got.mode == "exact"
        assert got.value == oracles.brute_fun_list(PEOPLE,
                                                   ["bornOn⁻¹", "surname⁻¹"])
        assert got.value == 1.0

    def test_local_list_intersection(self):
        idx = index_of(PEOPLE)
        kg = idx.kg
        pairs = [(kg.relation_id("bornOn⁻¹"), kg.entity_id("d1")),
                 (kg.relation_id("surname⁻¹"), kg.entity_id("smith"))]
        got = idx.local_fun_list(pairs)
        assert got.value == oracles.brute_local_fun_list(
            PEOPLE, [("bornOn⁻¹", "d1"), ("surname⁻¹", "smith")]) == 1.0

    def test_local_list_empty_intersection_undefined(self):
        triples = [("a", "r", "t1"), ("b", "s", "t2")]
        idx = index_of(triples)
        kg = idx.kg
        with pytest.raises(ValueError):
            idx.local_fun_list([(kg.relation_id("r"), kg.entity_id("a")),
                                (kg.relation_id("s"), kg.entity_id("b"))])

    def test_single_entry_reduces_to_global_fun(self):
        idx = index_of(CAPITALS, exact_cap=0)  # force sampling eligibility
        rid = idx.kg.relation_id("capital")
        assert idx.global_fun_list([rid], budget=3) == idx.global_fun(rid)

    def test_duplicate_pairs_collapse(self):
        idx = index_of(CAPITALS)
        kg = idx.kg
        pair = (kg.relation_id("capital"), kg.entity_id("za"))
        assert idx.local_fun_list([pair, pair]).value == pytest.approx(1 / 3)

    def test_canonical_pairs_sorted_by_label(self):
        idx = index_of(PEOPLE)
        kg = idx.kg
        pairs = [(kg.relation_id("surname⁻¹"), kg.entity_id("smith")),
                 (kg.relation_id("bornOn⁻¹"), kg.entity_id("d1"))]
        canon = idx.canonical_pairs(pairs)
        labels = [kg.rel_label(r) for r, _ in canon]
        assert labels == sorted(labels)


class TestAgainstRandomGraphs:
    def test_exact_matches_oracle_on_toy_graphs(self):
        rng = random.Random(42)
        for _ in range(25):
            triples = oracles.random_triples(rng, n_triples=20)
            idx = index_of(triples, exact_cap=10 ** 9)
            kg = idx.kg
            for ref in kg.relations:
                if kg.n_facts(ref.id) == 0:
                    continue
                assert idx.global_fun(ref.id).value == pytest.approx(
                    oracles.brute_fun(triples, ref.label), abs=0)
            rels = [ref.id for ref in kg.relations if kg.n_facts(ref.id)]
            if len(rels) >= 2:
                pick = rng.sample(rels, 2)
                got = idx.global_fun_list(pick)
                want = oracles.brute_fun_list(triples,
                                              [kg.rel_label(r) for r in pick])
                assert got.mode == "exact"
                assert got.value == pytest.approx(want, abs=0)

    def test_sampled_close_to_exact(self):
        rng = random.Random(5)
        checked = 0
        for _ in range(10):
            triples = oracles.random_triples(rng, n_entities=6, n_triples=25)
            exact_idx = index_of(triples, exact_cap=10 ** 9)
            sampled_idx = index_of(triples, seed=123, exact_cap=0)
            kg = exact_idx.kg
            rels = [ref.id for ref in kg.relations if kg.n_facts(ref.id)]
            if len(rels) < 2:
                continue
            pick = rng.sample(rels, 2)
            exact = exact_idx.global_fun_list(pick)
            got = sampled_idx.global_fun_list(
                [sampled_idx.kg.relation_id(kg.rel_label(r)) for r in pick],
                budget=10_000)
            if got.mode != "sampled":
                continue
            checked += 1
            assert got.sample_count == 10_000
            assert got.value == pytest.approx(exact.value, abs=0.05)
        assert checked >= 5

    def test_sampling_is_call_order_independent(self):
        triples = oracles.random_triples(random.Random(9), n_triples=25)
        kg_labels = None
        results = []
        for order in (False, True):
            idx = index_of(triples, seed=77, exact_cap=0)
            kg = idx.kg
            rels = sorted((ref.id for ref in kg.relations if kg.n_facts(ref.id)),
                          key=kg.rel_label)
            queries = [[rels[0], rels[1]], [rels[1], rels[2]]] \
                if len(rels) >= 3 else [[rels[0], rels[1]]]
            if order:
                queries = list(reversed(queries))
            got = {tuple(q): idx.global_fun_list(q, budget=500) for q in queries}
            results.append(got)
            kg_labels = kg
        for key in results[0]:
            assert results[0][key].value == results[1][key].value
