"""Functionality of relations and of relation lists.

For a single relation, fun(r) = |distinct heads| / |facts| and the local
fun(r, h) = 1 / |tails of h|.  For a relation list R (a multiset of
relations), a head list H assigns distinct head entities to every occurrence,
and R(H, t) holds when each bound fact r(h, t) is present.  Then

    fun(R)    = |distinct H with some tail| / |distinct (H, t) pairs|
    fun(R, H) = 1 / |distinct tails of H|

Pairs (H, t) decompose by tail: each tail t contributes the product over
relations r of C(n_{r,t}, m_r) combinations, with n_{r,t} the heads of t
under r and m_r the multiplicity of r in R.  Small lists are enumerated
exactly; larger ones are estimated by fun(R) = E[1/k(H)] over (H, t) drawn
uniformly, which is unbiased because every H is counted once per distinct
tail it reaches, and k(H) is that tail count, computed exactly per sample.

Sampling uses an RNG derived from the index seed and the queried relation
list, so results do not depend on call order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .kg import KnowledgeGraph


@dataclass(frozen=True)
class FunEstimate:
    """A functionality value plus how it was obtained."""

    value: float
    mode: str  # "exact" | "sampled"
    sample_count: int = 0


@dataclass(frozen=True)
class RelationList:
    """Canonical multiset of relation ids, sorted by relation label."""

    rel_ids: tuple[int, ...]


@dataclass(frozen=True)
class HeadList:
    """Heads aligned positionally with a RelationList."""

    head_ids: tuple[int, ...]


class FunctionalityIndex:
    """Memoizing calculator of functionality measures for one graph.

    ``exact_cap`` bounds the number of (H, t) pairs that exact enumeration is
    willing to walk; anything larger falls back to sampling with the caller's
    budget.  Degenerate queries (no facts, no eligible pairs) return the
    neutral 1.0 so they never dominate a min-aggregation.
    """

    def __init__(self, kg: KnowledgeGraph, seed: int = 0,
                 exact_cap: int = 1000) -> None:
        self.kg = kg
        self.seed = seed
        self.exact_cap = exact_cap
        self._memo: dict[tuple, FunEstimate] = {}

    # -- canonical forms ---------------------------------------------------

    def canonical_pairs(self, pairs: Iterable[tuple[int, int]]
                        ) -> tuple[tuple[int, int], ...]:
        """Sort (relation, head) pairs by labels and drop duplicates."""
        uniq = set(pairs)
        return tuple(sorted(uniq, key=lambda rh: (self.kg.rel_label(rh[0]),
                                                  self.kg.ent_label(rh[1]))))

    def as_lists(self, pairs: Iterable[tuple[int, int]]
                 ) -> tuple[RelationList, HeadList]:
        canon = self.canonical_pairs(pairs)
        return (RelationList(tuple(r for r, _ in canon)),
                HeadList(tuple(h for _, h in canon)))

    # -- single relation ---------------------------------------------------

    def global_fun(self, rid: int) -> FunEstimate:
        key = ("g", rid)
        got = self._memo.get(key)
        if got is None:
            n = self.kg.n_facts(rid)
            if n == 0:
                got = FunEstimate(1.0, "exact")
            else:
                heads = len({h for h, _ in self.kg.facts_of(rid)})
                got = FunEstimate(heads / n, "exact")
            self._memo[key] = got
        return got

    def local_fun(self, rid: int, head: int) -> FunEstimate:
        tails = self.kg.tails_of(head, rid)
        if not tails:
            raise ValueError(
                f"local functionality of {self.kg.rel_label(rid)!r} undefined: "
                f"no facts with head {self.kg.ent_label(head)!r}")
        return FunEstimate(1.0 / len(tails), "exact")

    # -- relation lists ----------------------------------------------------

    def local_fun_list(self, pairs: Iterable[tuple[int, int]]) -> FunEstimate:
        """fun(R, H) = 1 / |common tails of all (r, h) pairs|."""
        canon = self.canonical_pairs(pairs)
        key = ("lh", canon)
        got = self._memo.get(key)
        if got is not None:
            return got
        if not canon:
            raise ValueError("empty relation list")
        tails: set[int] | None = None
        for rid, head in canon:
            ts = set(self.kg.tails_of(head, rid))
            tails = ts if tails is None else tails & ts
            if not tails:
                raise ValueError("local list functionality undefined: "
                                 "the given heads share no tail")
        got = FunEstimate(1.0 / len(tails), "exact")
        self._memo[key] = got
        return got

    def global_fun_list(self, rel_ids: Sequence[int],
                        budget: int = 10_000) -> FunEstimate:
        """fun(R) for a multiset of relations, exact or sampled."""
        if not rel_ids:
            raise ValueError("empty relation list")
        rels = tuple(sorted(rel_ids, key=self.kg.rel_label))
        if len(rels) == 1:
            return self.global_fun(rels[0])
        exact_key = ("gl", rels)
        got = self._memo.get(exact_key)
        if got is not None:
            return got
        mult: dict[int, int] = {}
        for r in rels:
            mult[r] = mult.get(r, 0) + 1
        support = self._support(mult)
        total = sum(c for _, c in support)
        if total == 0:
            got = FunEstimate(1.0, "exact")
            self._memo[exact_key] = got
            return got
        if total <= self.exact_cap:
            got = FunEstimate(self._exact_count(mult, support) / total, "exact")
            self._memo[exact_key] = got
            return got
        sample_key = ("gls", rels, budget)
        got = self._memo.get(sample_key)
        if got is None:
            got = FunEstimate(self._sampled(mult, support, total, budget),
                              "sampled", budget)
            self._memo[sample_key] = got
        return got

    def _support(self, mult: dict[int, int]) -> list[tuple[int, int]]:
        """Tails eligible for every relation, with their combination counts."""
        groups = {r: self.kg.tail_to_heads(r) for r in mult}
        smallest = min(groups.values(), key=len)
        out = []
        for t in smallest:
            c = 1
            for r, m in mult.items():
                heads = groups[r].get(t)
                c *= comb(len(heads), m) if heads else 0
                if c == 0:
                    break
            if c:
                out.append((t, c))
        out.sort(key=lambda tc: self.kg.ent_label(tc[0]))
        return out

    def _exact_count(self, mult: dict[int, int],
                     support: list[tuple[int, int]]) -> int:
        rels = sorted(mult, key=self.kg.rel_label)
        distinct: set[tuple] = set()
        for t, _ in support:
            per_rel = [combinations(self.kg.tail_to_heads(r)[t], mult[r])
                       for r in rels]
            for choice in product(*per_rel):
                distinct.add(tuple(h for heads in choice for h in heads))
        return len(distinct)

    def _sampled(self, mult: dict[int, int], support: list[tuple[int, int]],
                 total: int, budget: int) -> float:
        rels = sorted(mult, key=self.kg.rel_label)
        rng = self._derived_rng(rels, budget)
        weights = np.array([c for _, c in support], dtype=float)
        picks = rng.choice(len(support), size=budget, p=weights / weights.sum())
        acc = 0.0
        for i in picks:
            t = support[i][0]
            pairs = []
            for r in rels:
                heads = self.kg.tail_to_heads(r)[t]
                idx = rng.choice(len(heads), size=mult[r], replace=False)
                pairs.extend((r, heads[j]) for j in idx)
            tails: set[int] | None = None
            for r, h in pairs:
                ts = set(self.kg.tails_of(h, r))
                tails = ts if tails is None else tails & ts
            acc += 1.0 / len(tails)  # type: ignore[arg-type]
        return acc / budget

    def _derived_rng(self, rels: Sequence[int], budget: int) -> np.random.Generator:
        """Seed from the query itself, so call order cannot matter."""
        tag = "\x1f".join(self.kg.rel_label(r) for r in rels)
        digest = hashlib.blake2b(f"{tag}\x1e{budget}".encode(),
                                 digest_size=16).digest()
        words = [int.from_bytes(digest[i:i + 4], "big") for i in range(0, 16, 4)]
        return np.random.default_rng([self.seed, *words])
