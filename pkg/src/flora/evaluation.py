"""Alignment quality metrics against a gold standard.

Classification metrics treat predictions and gold as sets of pairs.  Ranking
metrics score one source at a time with optimistic shared ranks: a target
tied with others gets rank 1 + (number of strictly better targets).  Both
restrict their denominators to gold: sources without a gold target are
excluded (and counted), gold sources missing from the ranking count as
misses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .kg import CLASS, LITERAL, KnowledgeGraph

Pair = tuple[str, str]


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    if precision == recall:  # harmonic mean of equals, kept exact
        return precision
    return 2.0 * precision * recall / (precision + recall)


def classification_metrics(pred: Iterable[Pair], gold: Iterable[Pair]
                           ) -> tuple[float, float, float]:
    """Precision, recall and F1 of predicted pairs against gold pairs."""
    pred_set = set(pred)
    gold_set = set(gold)
    if not gold_set:
        raise ValueError("empty gold standard")
    if not pred_set:
        return 0.0, 0.0, 0.0
    hit = len(pred_set & gold_set)
    p = hit / len(pred_set)
    r = hit / len(gold_set)
    return p, r, f1_score(p, r)


def optimistic_rank(row: Sequence[tuple[str, float]], targets: set[str]) -> int | None:
    """Rank of the best gold target, ties resolved optimistically."""
    best = None
    for tgt, score in row:
        if tgt in targets and (best is None or score > best):
            best = score
    if best is None:
        return None
    return 1 + sum(1 for _, score in row if score > best)


@dataclass
class RankingMetrics:
    hits: dict[int, float]
    mrr: float
    n_gold_sources: int
    excluded_sources: int


def ranking_metrics(rows: Iterable[tuple[str, str, float]],
                    gold: Iterable[Pair],
                    ks: Sequence[int] = (1, 10)) -> RankingMetrics:
    """Hit@K and MRR of scored pairs against gold, denominators from gold."""
    targets: dict[str, set[str]] = {}
    for a, b in gold:
        targets.setdefault(a, set()).add(b)
    if not targets:
        raise ValueError("empty gold standard")
    ranked: dict[str, list[tuple[str, float]]] = {}
    excluded = set()
    for a, b, s in rows:
        if a not in targets:
            excluded.add(a)
            continue
        ranked.setdefault(a, []).append((b, s))
    hits = {k: 0 for k in ks}
    rr = 0.0
    for a, tgts in targets.items():
        rank = optimistic_rank(ranked.get(a, ()), tgts)
        if rank is None:
            continue
        rr += 1.0 / rank
        for k in ks:
            if rank <= k:
                hits[k] += 1
    n = len(targets)
    return RankingMetrics({k: hits[k] / n for k in ks}, rr / n, n, len(excluded))


def categorize(label: str, kg: KnowledgeGraph) -> str:
    """relation / class / instance, per the graph's own vocabulary."""
    if kg.has_relation(label):
        return "relation"
    if kg.has_entity(label):
        kind = kg.entities[kg.entity_id(label)].kind
        if kind == CLASS:
            return "class"
        if kind == LITERAL:
            return "uncategorized"
        return "instance"
    return "uncategorized"


@dataclass
class EvalReport:
    precision: float
    recall: float
    f1: float
    per_category: dict[str, tuple[float, float, float, int]] = field(
        default_factory=dict)
    ranking: RankingMetrics | None = None

    def lines(self) -> list[tuple[str, str]]:
        out = [("precision", f"{self.precision:.6f}"),
               ("recall", f"{self.recall:.6f}"),
               ("f1", f"{self.f1:.6f}")]
        for cat in sorted(self.per_category):
            p, r, f1, support = self.per_category[cat]
            out.append((f"{cat}_precision", f"{p:.6f}"))
            out.append((f"{cat}_recall", f"{r:.6f}"))
            out.append((f"{cat}_f1", f"{f1:.6f}"))
            out.append((f"{cat}_gold", str(support)))
        if self.ranking is not None:
            for k in sorted(self.ranking.hits):
                out.append((f"hits@{k}", f"{self.ranking.hits[k]:.6f}"))
            out.append(("mrr", f"{self.ranking.mrr:.6f}"))
            out.append(("ranking_excluded_sources",
                        str(self.ranking.excluded_sources)))
        return out


def evaluate(pred: Iterable[Pair], gold: Iterable[Pair],
             ranking_rows: Iterable[tuple[str, str, float]] | None = None,
             kg1: KnowledgeGraph | None = None,
             ks: Sequence[int] = (1, 10)) -> EvalReport:
    """Full evaluation; category breakdown needs kg1, ranking needs rows."""
    pred_set = set(pred)
    gold_set = set(gold)
    p, r, f1 = classification_metrics(pred_set, gold_set)
    report = EvalReport(p, r, f1)
    if kg1 is not None:
        by_cat: dict[str, tuple[set, set]] = {}
        for pair in pred_set | gold_set:
            cat = categorize(pair[0], kg1)
            preds, golds = by_cat.setdefault(cat, (set(), set()))
            if pair in pred_set:
                preds.add(pair)
            if pair in gold_set:
                golds.add(pair)
        for cat, (preds, golds) in sorted(by_cat.items()):
            hit = len(preds & golds)
            cp = hit / len(preds) if preds else 0.0
            cr = hit / len(golds) if golds else 0.0
            report.per_category[cat] = (cp, cr, f1_score(cp, cr), len(golds))
    if ranking_rows is not None:
        report.ranking = ranking_metrics(ranking_rows, gold_set, ks)
    return report
