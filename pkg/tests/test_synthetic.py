"""The synthetic benchmark generator's own guarantees."""

from flora.ingest import load_openea_dir
from flora.synthetic import SyntheticSpec, generate


class TestGenerate:
    def test_gold_covers_every_instance(self):
        ds = generate(SyntheticSpec(n_entities=30, n_rel_triples=150,
                                    n_extra_anchors=10, seed=1))
        kg1 = ds.bundle.kg1
        gold_left = {a for a, _ in ds.bundle.gold_entity_links}
        instances = {kg1.ent_label(e) for e in kg1.entity_ids()}
        assert gold_left == instances

    def test_same_spec_same_dataset(self):
        spec = SyntheticSpec(n_entities=30, n_rel_triples=150, seed=4)
        a, b = generate(spec), generate(spec)
        assert a.bundle.gold_entity_links == b.bundle.gold_entity_links
        for kg_a, kg_b in ((a.bundle.kg1, b.bundle.kg1),
                           (a.bundle.kg2, b.bundle.kg2)):
            ta = {(kg_a.ent_label(h), kg_a.rel_label(r), kg_a.ent_label(t))
                  for h, r, t in kg_a.triples()}
            tb = {(kg_b.ent_label(h), kg_b.rel_label(r), kg_b.ent_label(t))
                  for h, r, t in kg_b.triples()}
            assert ta == tb

    def test_different_seeds_differ(self):
        a = generate(SyntheticSpec(n_entities=30, n_rel_triples=150, seed=1))
        b = generate(SyntheticSpec(n_entities=30, n_rel_triples=150, seed=2))
        assert a.bundle.gold_entity_links != b.bundle.gold_entity_links

    def test_drop_rate_removes_triples(self):
        intact = generate(SyntheticSpec(n_entities=30, n_rel_triples=150,
                                        seed=6))
        dropped = generate(SyntheticSpec(n_entities=30, n_rel_triples=150,
                                         seed=6, drop_rate=0.2))
        assert dropped.bundle.kg1.n_triples() < intact.bundle.kg1.n_triples()
        assert dropped.bundle.kg2.n_triples() < intact.bundle.kg2.n_triples()

    def test_dangling_entities_outside_gold(self):
        ds = generate(SyntheticSpec(n_entities=30, n_rel_triples=150,
                                    seed=6, dangling_rate=0.2))
        assert ds.dangling1 and ds.dangling2
        gold_left = {a for a, _ in ds.bundle.gold_entity_links}
        gold_right = {b for _, b in ds.bundle.gold_entity_links}
        assert not (set(ds.dangling1) & gold_left)
        assert not (set(ds.dangling2) & gold_right)
        assert all(ds.bundle.kg1.has_entity(d) for d in ds.dangling1)
        assert all(ds.bundle.kg2.has_entity(d) for d in ds.dangling2)

    def test_write_round_trips_through_loader(self, tmp_path):
        ds = generate(SyntheticSpec(n_entities=30, n_rel_triples=150,
                                    n_extra_anchors=10, seed=6))
        ds.write(str(tmp_path / "out"))
        back = load_openea_dir(str(tmp_path / "out"))
        assert back.kg1.n_triples() == ds.bundle.kg1.n_triples()
        assert back.kg2.n_triples() == ds.bundle.kg2.n_triples()
        assert back.gold_entity_links == ds.bundle.gold_entity_links
