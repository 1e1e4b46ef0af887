"""Literal similarity: exact dates, tolerant numbers, fuzzy strings.

Dates match (score 1) when year, month and day agree; a time component is
compared only when both sides carry one.  Numbers match within a relative
error of 1e-9.  Strings are scored by the active provider; the builtin one
uses character-trigram multiset Jaccard on a casefolded, whitespace-normalized
form.  Only string scores >= theta_s are kept, and at most top_k counterparts
per string on either side.  An external provider can replace the builtin via
a precomputed score file.
"""

from __future__ import annotations

import bisect
import logging
import re
from collections import Counter
from dataclasses import dataclass, field

from .kg import KnowledgeGraph
from .literals import DATE, NUMBER, STRING, LiteralValue

log = logging.getLogger(__name__)

NUMBER_REL_TOL = 1e-9

_WS = re.compile(r"\s+")


def normalize_string(s: str) -> str:
    return _WS.sub(" ", s.casefold()).strip()


def trigrams(s: str) -> Counter:
    s = normalize_string(s)
    return Counter(s[i:i + 3] for i in range(len(s) - 2))


def trigram_similarity(s1: str, s2: str) -> float:
    """Multiset Jaccard over character trigrams of the normalized strings.

    Equal normalized strings score 1 outright, which also covers strings too
    short to have any trigram.
    """
    n1, n2 = normalize_string(s1), normalize_string(s2)
    if n1 == n2:
        return 1.0
    g1, g2 = trigrams(n1), trigrams(n2)
    union = sum((g1 | g2).values())
    if union == 0:
        return 0.0
    return sum((g1 & g2).values()) / union


def match_dates(d1: LiteralValue, d2: LiteralValue) -> float:
    if d1.type != DATE or d2.type != DATE:
        return 0.0
    k1, k2 = d1.date_key, d2.date_key
    if k1[:3] != k2[:3]:
        return 0.0
    if k1[3] is not None and k2[3] is not None and k1[3] != k2[3]:
        return 0.0
    return 1.0


def match_numbers(n1: LiteralValue, n2: LiteralValue) -> float:
    if n1.type != NUMBER or n2.type != NUMBER:
        return 0.0
    a, b = n1.number, n2.number
    if a == b:
        return 1.0
    return 1.0 if abs(a - b) <= NUMBER_REL_TOL * max(abs(a), abs(b)) else 0.0


@dataclass
class LiteralSimTable:
    """Fixed literal-to-literal scores between the two graphs.

    Keys are (literal id in KG1, literal id in KG2); a missing pair means 0.
    These entries seed the alignment and never change afterwards.
    """

    provider: str
    theta_s: float
    scores: dict[tuple[int, int], float] = field(default_factory=dict)
    rows_loaded: int = 0
    rows_skipped: int = 0

    def score(self, lit1: int, lit2: int) -> float:
        return self.scores.get((lit1, lit2), 0.0)

    def items(self):
        return self.scores.items()

    def __len__(self) -> int:
        return len(self.scores)


def _string_pairs_builtin(kg1: KnowledgeGraph, kg2: KnowledgeGraph,
                          theta_s: float, top_k: int) -> dict[tuple[int, int], float]:
    """Score cross-graph string pairs, keeping mutual top-k above theta_s.

    Candidate pairs come from an inverted trigram index over KG2, so strings
    sharing no trigram are never scored (their Jaccard is 0 anyway).
    """
    ids1 = kg1.literal_ids(STRING)
    ids2 = kg2.literal_ids(STRING)
    norm2: dict[int, str] = {i: normalize_string(kg2.literal_values[i].raw)
                             for i in ids2}
    by_norm2: dict[str, list[int]] = {}
    index2: dict[str, set[int]] = {}
    for i in ids2:
        n = norm2[i]
        by_norm2.setdefault(n, []).append(i)
        for g in set(trigrams(n)):
            index2.setdefault(g, set()).add(i)
    scored: dict[tuple[int, int], float] = {}
    for i in ids1:
        n1 = normalize_string(kg1.literal_values[i].raw)
        g1 = trigrams(n1)
        cands = set(by_norm2.get(n1, ()))
        for g in set(g1):
            cands |= index2.get(g, set())
        row = []
        for j in cands:
            s = 1.0 if n1 == norm2[j] else _jaccard(g1, trigrams(norm2[j]))
            if s >= theta_s:
                row.append((s, j))
        row.sort(key=lambda sj: (-sj[0], kg2.ent_label(sj[1])))
        for s, j in row[:top_k]:
            scored[(i, j)] = s
    return _column_top_k(scored, kg1, top_k)


def _jaccard(g1: Counter, g2: Counter) -> float:
    union = sum((g1 | g2).values())
    return sum((g1 & g2).values()) / union if union else 0.0


def _column_top_k(scored: dict[tuple[int, int], float], kg1: KnowledgeGraph,
                  top_k: int) -> dict[tuple[int, int], float]:
    cols: dict[int, list[tuple[float, int]]] = {}
    for (i, j), s in scored.items():
        cols.setdefault(j, []).append((s, i))
    keep: set[tuple[int, int]] = set()
    for j, row in cols.items():
        row.sort(key=lambda si: (-si[0], kg1.ent_label(si[1])))
        keep.update((i, j) for _, i in row[:top_k])
    return {k: v for k, v in scored.items() if k in keep}


def load_precomputed(path: str, kg1: KnowledgeGraph, kg2: KnowledgeGraph,
                     theta_s: float) -> tuple[dict[tuple[int, int], float], int, int]:
    """Read literal1 TAB literal2 TAB score rows against the graphs' literals.

    Literals must appear verbatim as in the triple files.  Rows naming an
    unknown literal, or scoring below theta_s, are skipped with a count.
    """
    scores: dict[tuple[int, int], float] = {}
    loaded = skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                skipped += 1
                log.warning("%s:%d: expected 3 columns", path, lineno)
                continue
            try:
                s = float(parts[2])
            except ValueError:
                skipped += 1
                log.warning("%s:%d: bad score %r", path, lineno, parts[2])
                continue
            if not 0.0 <= s <= 1.0:
                skipped += 1
                log.warning("%s:%d: score %g outside [0,1]", path, lineno, s)
                continue
            l1 = kg1.literal_id(parts[0])
            l2 = kg2.literal_id(parts[1])
            if l1 is None or l2 is None:
                skipped += 1
                log.warning("%s:%d: unknown literal", path, lineno)
                continue
            if s < theta_s:
                skipped += 1
                continue
            loaded += 1
            key = (l1, l2)
            if s > scores.get(key, -1.0):
                scores[key] = s
    return scores, loaded, skipped


def build_similarity_table(kg1: KnowledgeGraph, kg2: KnowledgeGraph,
                           theta_s: float = 0.7, top_k: int = 10,
                           sim_file: str | None = None) -> LiteralSimTable:
    """Build the fixed literal similarity entries for an alignment run.

    Dates and numbers are matched by the builtin exact and tolerance rules.
    String scores come from the precomputed ``sim_file`` when given, else
    from the builtin trigram provider.
    """
    provider = f"precomputed:{sim_file}" if sim_file else "builtin_trigram"
    table = LiteralSimTable(provider, theta_s)
    if sim_file:
        table.scores, table.rows_loaded, table.rows_skipped = load_precomputed(
            sim_file, kg1, kg2, theta_s)
    else:
        table.scores = _string_pairs_builtin(kg1, kg2, theta_s, top_k)

    by_day: dict[tuple, list[int]] = {}
    for j in kg2.literal_ids(DATE):
        by_day.setdefault(kg2.literal_values[j].date_key[:3], []).append(j)
    for i in kg1.literal_ids(DATE):
        v1 = kg1.literal_values[i]
        for j in by_day.get(v1.date_key[:3], ()):
            if match_dates(v1, kg2.literal_values[j]):
                table.scores[(i, j)] = 1.0

    nums2 = sorted((kg2.literal_values[j].number, j)
                   for j in kg2.literal_ids(NUMBER))
    keys2 = [n for n, _ in nums2]
    for i in kg1.literal_ids(NUMBER):
        a = kg1.literal_values[i].number
        window = 2.0 * NUMBER_REL_TOL * (abs(a) + 1.0)
        lo = bisect.bisect_left(keys2, a - window)
        hi = bisect.bisect_right(keys2, a + window)
        v1 = kg1.literal_values[i]
        for n, j in nums2[lo:hi]:
            if match_numbers(v1, kg2.literal_values[j]):
                table.scores[(i, j)] = 1.0
    return table
