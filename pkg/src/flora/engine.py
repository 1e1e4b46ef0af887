"""The alignment engine: alternating entity and relation score iteration.

Scores live in [0,1] and only ever increase within a step, so the whole
procedure is one big positive rule system evaluated towards its least fixed
point.  Entity scores are raised by the strongest rule instance found over
matched incident facts; relation scores are recomputed from fact coverage;
a mutual-max pruning keeps the score matrix sparse between iterations.

Entity updates within one step read a snapshot of the scores taken at the
step start and are merged commutatively (max), so splitting the work across
threads cannot change the result.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

from .fis import HMEAN
from .functionality import FunctionalityIndex, FunEstimate
from .ingest import DatasetBundle
from .kg import KnowledgeGraph
from .litsim import LiteralSimTable, build_similarity_table

log = logging.getLogger(__name__)


@dataclass
class Config:
    """Run parameters; defaults follow the values that work on benchmarks."""

    theta_r: float = 0.1      # initial relation similarity before any evidence
    theta_s: float = 0.7      # string similarity floor
    theta_e: float = 0.1      # entity pairs must exceed this to be reported
    alpha: float = 3.0        # slack factor on subrelation coverage means
    epsilon: float = 0.01     # stop when an iteration moves less than this
    max_iters: int = 10
    l_max: int = 8            # longest evidence prefix evaluated per pair
    fun_budget: int = 50      # samples for functionality of large lists
    rel_report_threshold: float = 0.1
    rng_seed: int = 0
    candidate_cap: int = 50   # candidates ranked per entity and step
    exact_cap: int = 1000     # max (H, t) pairs enumerated exactly
    top_k: int = 10           # string matches kept per literal and side
    pruning: bool = True
    threads: int = 0          # 0: use FLORA_THREADS or fall back to 1
    type_relation: str = "rdf:type"

    def __post_init__(self) -> None:
        for name in ("theta_r", "theta_s", "theta_e", "epsilon",
                     "rel_report_threshold"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0,1], got {v}")
        if self.alpha < 1.0:
            raise ValueError("alpha must be >= 1")
        if self.max_iters < 1 or self.l_max < 1:
            raise ValueError("max_iters and l_max must be positive")
        if self.fun_budget < 1 or self.candidate_cap < 1 or self.top_k < 1:
            raise ValueError("budgets and caps must be positive")
        if self.exact_cap < 0 or self.threads < 0:
            raise ValueError("exact_cap and threads must be >= 0")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def merged(self, **overrides) -> "Config":
        given = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **given)

    @classmethod
    def from_file(cls, path: str) -> "Config":
        """Parse ``key = value`` lines; # starts a comment."""
        values: dict = {}
        types = {f.name: f.type for f in fields(cls)}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, _, raw = line.partition("=")
                key, raw = key.strip(), raw.strip()
                if key not in types:
                    raise ValueError(f"{path}:{lineno}: unknown option {key!r}")
                values[key] = _coerce(raw, types[key], key)
        return cls(**values)

    def resolve_threads(self) -> int:
        if self.threads > 0:
            return self.threads
        env = os.environ.get("FLORA_THREADS", "")
        if env.strip():
            try:
                n = int(env)
            except ValueError:
                raise ValueError(f"FLORA_THREADS must be an integer, got {env!r}")
            if n < 1:
                raise ValueError("FLORA_THREADS must be >= 1")
            return n
        return 1


def _coerce(raw: str, type_name: str, key: str):
    if type_name == "bool":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"option {key!r}: expected a boolean, got {raw!r}")
    if type_name == "int":
        return int(raw)
    if type_name == "float":
        return float(raw)
    return raw


@dataclass
class MatchedPosition:
    """One matched pair of incident facts supporting an entity pair."""

    rel1: int
    head1: int
    rel2: int
    head2: int
    head_score: float
    rel_score: float


@dataclass
class RuleInstance:
    """The strongest justification found for one entity pair.

    kind is "rule" for fact-evidence matches, "seed" for fixed training
    pairs, "literal" for fixed literal similarities.
    """

    tail1: int
    tail2: int
    positions: list[MatchedPosition]
    fun_r1: FunEstimate | None
    fun_rh1: FunEstimate | None
    fun_r2: FunEstimate | None
    fun_rh2: FunEstimate | None
    strength: float
    kind: str = "rule"


def instance_strength(inst: RuleInstance) -> float:
    """Recompute a rule instance's strength from its stored components."""
    if inst.kind != "rule":
        return inst.strength
    heads = [p.head_score for p in inst.positions]
    rels = [p.rel_score for p in inst.positions]
    return min(HMEAN(heads), HMEAN(rels), inst.fun_r1.value, inst.fun_rh1.value,
               inst.fun_r2.value, inst.fun_rh2.value)


class MatchStore:
    """Sparse score matrix with row and column views kept in sync."""

    def __init__(self) -> None:
        self.rows: dict[int, dict[int, float]] = {}
        self.cols: dict[int, dict[int, float]] = {}
        self.fixed: set[tuple[int, int]] = set()
        self.best_rule: dict[tuple[int, int], RuleInstance] = {}
        self.all_scores: dict[tuple[int, int], float] = {}

    def get(self, e1: int, e2: int) -> float:
        return self.rows.get(e1, {}).get(e2, 0.0)

    def row(self, e1: int) -> dict[int, float]:
        return self.rows.get(e1, {})

    def col(self, e2: int) -> dict[int, float]:
        return self.cols.get(e2, {})

    def set_fixed(self, e1: int, e2: int, score: float,
                  rule: RuleInstance | None = None) -> None:
        self.rows.setdefault(e1, {})[e2] = score
        self.cols.setdefault(e2, {})[e1] = score
        self.fixed.add((e1, e2))
        if rule is not None:
            self.best_rule[(e1, e2)] = rule

    def merge(self, e1: int, e2: int, inst: RuleInstance) -> float:
        """Raise (e1, e2) to the instance strength; fixed entries never move."""
        if (e1, e2) in self.fixed:
            return 0.0
        old = self.rows.get(e1, {}).get(e2, 0.0)
        if inst.strength > self.all_scores.get((e1, e2), 0.0):
            self.all_scores[(e1, e2)] = inst.strength
        if inst.strength <= old:
            return 0.0
        self.rows.setdefault(e1, {})[e2] = inst.strength
        self.cols.setdefault(e2, {})[e1] = inst.strength
        self.best_rule[(e1, e2)] = inst
        return inst.strength - old

    def prune_mutual_max(self) -> int:
        """Drop entries dominated in their row or column; fixed ones stay."""
        row_max = {e1: max(r.values()) for e1, r in self.rows.items() if r}
        col_max = {e2: max(c.values()) for e2, c in self.cols.items() if c}
        doomed = [
            (e1, e2)
            for e1, r in self.rows.items()
            for e2, v in r.items()
            if (e1, e2) not in self.fixed
            and (v < row_max[e1] or v < col_max[e2])
        ]
        for e1, e2 in doomed:
            del self.rows[e1][e2]
            del self.cols[e2][e1]
            self.best_rule.pop((e1, e2), None)
        return len(doomed)

    def entries(self):
        for e1, r in self.rows.items():
            for e2, v in r.items():
                yield e1, e2, v


@dataclass
class IterationStats:
    index: int
    entity_delta: float
    rel_delta: float
    pruned: int
    retained: int
    retained_score: float
    seconds: float


class Aligner:
    """Mutable alignment state over a dataset bundle."""

    def __init__(self, bundle: DatasetBundle, config: Config,
                 table: LiteralSimTable) -> None:
        self.kg1 = bundle.kg1
        self.kg2 = bundle.kg2
        self.bundle = bundle
        self.cfg = config
        self.table = table
        self.store = MatchStore()
        self.fun1 = FunctionalityIndex(self.kg1, config.rng_seed, config.exact_cap)
        self.fun2 = FunctionalityIndex(self.kg2, config.rng_seed, config.exact_cap)
        self.rel12: dict[tuple[int, int], float] = {}
        self.rel21: dict[tuple[int, int], float] = {}
        self.rel_initialized = False
        self.threads = config.resolve_threads()

    # -- setup -------------------------------------------------------------

    def initialize(self) -> None:
        """Fix literal similarities and seed pairs in the store."""
        for (l1, l2), s in sorted(self.table.items(),
                                  key=lambda kv: (self.kg1.ent_label(kv[0][0]),
                                                  self.kg2.ent_label(kv[0][1]))):
            inst = RuleInstance(l1, l2, [], None, None, None, None, s, "literal")
            self.store.set_fixed(l1, l2, s, inst)
        for a, b in self.bundle.seed_links:
            e1 = self.kg1.entity_id(a)
            e2 = self.kg2.entity_id(b)
            inst = RuleInstance(e1, e2, [], None, None, None, None, 1.0, "seed")
            self.store.set_fixed(e1, e2, 1.0, inst)

    # -- relation similarity -----------------------------------------------

    def _canon12(self, r1: int, r2: int) -> tuple[int, int]:
        # sub(r⁻¹ ⊆ s⁻¹) = sub(r ⊆ s): keep the KG1 side a base relation
        if self.kg1.relations[r1].is_inverse:
            return self.kg1.inverse(r1), self.kg2.inverse(r2)
        return r1, r2

    def _canon21(self, r2: int, r1: int) -> tuple[int, int]:
        if self.kg2.relations[r2].is_inverse:
            return self.kg2.inverse(r2), self.kg1.inverse(r1)
        return r2, r1

    def rel_sim(self, r1: int, r2: int) -> float:
        """max of the two subrelation directions, theta_r before any evidence."""
        default = 0.0 if self.rel_initialized else self.cfg.theta_r
        s12 = self.rel12.get(self._canon12(r1, r2), default)
        s21 = self.rel21.get(self._canon21(r2, r1), default)
        return max(s12, s21)

    # -- entity step ---------------------------------------------------------

    def candidate_search(self, t: int) -> list[int]:
        """Rank KG2 counterpart candidates for t by shared fact evidence.

        A fact r(h, t) supports candidate t' when some fact r'(h', t') exists
        with score(h, h') > 0 and rel_sim(r, r') > 0.  Candidates are ranked
        by how many distinct facts of t they cover, then by their best single
        fact evidence, then by label; at most candidate_cap survive.
        """
        covered: dict[int, set[int]] = {}
        best: dict[int, float] = {}
        for idx, (r1, h1) in enumerate(self.kg1.incident_facts(t)):
            for h2, hs in self.store.row(h1).items():
                if hs <= 0.0:
                    continue
                for r2, t2 in self.kg2.outgoing_facts(h2):
                    if self.kg2.is_literal(t2):
                        continue
                    rs = self.rel_sim(r1, r2)
                    if rs <= 0.0:
                        continue
                    covered.setdefault(t2, set()).add(idx)
                    ev = hs * rs
                    if ev > best.get(t2, 0.0):
                        best[t2] = ev
        ranked = sorted(covered, key=lambda t2: (-len(covered[t2]), -best[t2],
                                                 self.kg2.ent_label(t2)))
        return ranked[:self.cfg.candidate_cap]

    def evaluate_pair(self, t: int, t2: int) -> RuleInstance:
        """Best rule instance for (t, t2) over greedily matched fact pairs.

        Candidate fact pairs are sorted by head score times relation score,
        matched one-to-one greedily, truncated to l_max, and every prefix of
        the matching is scored; the strongest prefix wins.  No matchable
        facts means strength 0.
        """
        facts1 = self.kg1.incident_facts(t)
        by_head2: dict[int, list[tuple[int, int]]] = {}
        for j, (r2, h2) in enumerate(self.kg2.incident_facts(t2)):
            by_head2.setdefault(h2, []).append((r2, j))
        cands: list[tuple[float, int, int, float, float]] = []
        for i, (r1, h1) in enumerate(facts1):
            row = self.store.row(h1)
            if not row:
                continue
            for h2, hs in row.items():
                if hs <= 0.0:
                    continue
                for r2, j in by_head2.get(h2, ()):
                    rs = self.rel_sim(r1, r2)
                    if rs > 0.0:
                        cands.append((hs * rs, i, j, hs, rs))
        cands.sort(key=lambda c: (-c[0], c[1], c[2]))
        used_i: set[int] = set()
        used_j: set[int] = set()
        matched: list[tuple[int, int, float, float]] = []
        for ev, i, j, hs, rs in cands:
            if i in used_i or j in used_j:
                continue
            used_i.add(i)
            used_j.add(j)
            matched.append((i, j, hs, rs))
            if len(matched) >= self.cfg.l_max:
                break
        if not matched:
            return RuleInstance(t, t2, [], None, None, None, None, 0.0)
        facts2 = self.kg2.incident_facts(t2)
        best: RuleInstance | None = None
        for n in range(1, len(matched) + 1):
            prefix = matched[:n]
            heads = [hs for _, _, hs, _ in prefix]
            rels = [rs for _, _, _, rs in prefix]
            pairs1 = [facts1[i] for i, _, _, _ in prefix]
            pairs2 = [facts2[j] for _, j, _, _ in prefix]
            fun_r1 = self.fun1.global_fun_list([r for r, _ in pairs1],
                                               self.cfg.fun_budget)
            fun_rh1 = self.fun1.local_fun_list(pairs1)
            fun_r2 = self.fun2.global_fun_list([r for r, _ in pairs2],
                                               self.cfg.fun_budget)
            fun_rh2 = self.fun2.local_fun_list(pairs2)
            strength = min(HMEAN(heads), HMEAN(rels), fun_r1.value,
                           fun_rh1.value, fun_r2.value, fun_rh2.value)
            if best is None or strength > best.strength:
                positions = [MatchedPosition(facts1[i][0], facts1[i][1],
                                             facts2[j][0], facts2[j][1], hs, rs)
                             for i, j, hs, rs in prefix]
                best = RuleInstance(t, t2, positions, fun_r1, fun_rh1,
                                    fun_r2, fun_rh2, strength)
        return best

    def _evaluate_entities(self, ents: list[int]
                           ) -> list[tuple[int, int, RuleInstance]]:
        out = []
        for t in ents:
            for t2 in self.candidate_search(t):
                inst = self.evaluate_pair(t, t2)
                if inst.strength > 0.0:
                    out.append((t, t2, inst))
        return out

    def entity_step(self) -> float:
        """Re-score all KG1 entities against their candidates; returns the
        total score increase.  Reads see the scores as of the step start,
        updates are merged afterwards, so chunk boundaries cannot matter."""
        ents = self.kg1.entity_ids()
        if self.threads > 1 and len(ents) > 1:
            size = max(1, -(-len(ents) // (self.threads * 4)))
            chunks = [ents[i:i + size] for i in range(0, len(ents), size)]
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(self._evaluate_entities, chunks))
            updates = [u for part in results for u in part]
        else:
            updates = self._evaluate_entities(ents)
        delta = 0.0
        for t, t2, inst in updates:
            delta += self.store.merge(t, t2, inst)
        return delta

    # -- relation step -------------------------------------------------------

    def subrelation_step(self) -> float:
        """Recompute both subrelation score maps from current entity scores."""
        delta = self._subrel_pass(self.kg1, self.kg2, self.store.row, self.rel12)
        delta += self._subrel_pass(self.kg2, self.kg1, self.store.col, self.rel21)
        self.rel_initialized = True
        return delta

    def _subrel_pass(self, src: KnowledgeGraph, dst: KnowledgeGraph,
                     row_of, target: dict[tuple[int, int], float]) -> float:
        """One direction of sub(r ⊆ r'): alpha-scaled mean fact coverage.

        Each fact r(h, t) contributes its best witness min(score(h, h'),
        score(t, t')) over counterpart facts r'(h', t'); facts with no
        counterpart contribute 0.  Computed values overwrite old ones; pairs
        with no witnesses this pass keep their last value.
        """
        delta = 0.0
        for r in src.base_relation_ids():
            n = src.n_facts(r)
            if n == 0:
                continue
            sums: dict[int, float] = {}
            for h, t in src.facts_of(r):
                hrow = row_of(h)
                trow = row_of(t)
                if not hrow or not trow:
                    continue
                fact_best: dict[int, float] = {}
                for h2, sh in hrow.items():
                    if sh <= 0.0:
                        continue
                    for r2, t2 in dst.outgoing_facts(h2):
                        st = trow.get(t2, 0.0)
                        if st <= 0.0:
                            continue
                        w = min(sh, st)
                        if w > fact_best.get(r2, 0.0):
                            fact_best[r2] = w
                for r2, w in fact_best.items():
                    sums[r2] = sums.get(r2, 0.0) + w
            for r2 in sorted(sums, key=dst.rel_label):
                new = min(1.0, self.cfg.alpha * sums[r2] / n)
                old = target.get((r, r2), 0.0)
                if new != old:
                    delta += abs(new - old)
                    target[(r, r2)] = new
        return delta

    # -- pruning -------------------------------------------------------------

    def max_assignment(self) -> int:
        return self.store.prune_mutual_max()


@dataclass
class AlignmentResult:
    """Everything a run produced, still wired to the in-memory graphs."""

    bundle: DatasetBundle
    config: Config
    table: LiteralSimTable
    store: MatchStore
    rel12: dict[tuple[int, int], float]
    rel21: dict[tuple[int, int], float]
    iterations: list[IterationStats]
    converged: bool

    def entity_matches(self) -> list[tuple[str, str, float]]:
        """Reported matches: score > theta_e, one-to-one, strongest first.

        Literal pairs are inputs, not findings, and are not reported.  Seed
        pairs win ties so that given training pairs are always kept.
        """
        kg1, kg2 = self.bundle.kg1, self.bundle.kg2
        rows = []
        for e1, e2, v in self.store.entries():
            if v <= self.config.theta_e:
                continue
            if kg1.is_literal(e1) or kg2.is_literal(e2):
                continue
            seed_rank = 0 if (e1, e2) in self.store.fixed else 1
            rows.append((-v, seed_rank, kg1.ent_label(e1), kg2.ent_label(e2)))
        rows.sort()
        taken1: set[str] = set()
        taken2: set[str] = set()
        out = []
        for nv, _, l1, l2 in rows:
            if l1 in taken1 or l2 in taken2:
                continue
            taken1.add(l1)
            taken2.add(l2)
            out.append((l1, l2, -nv))
        return out

    def relation_matches(self) -> list[tuple[str, str, str, float, float]]:
        """All relation pairs with a nonzero subrelation score in either
        direction.

        op is EQV when both directions reach the report threshold, SUB or SUP
        when only the respective direction does (label1 ⊆ label2 reads as
        SUB); below the threshold the op names the stronger direction.
        """
        kg1, kg2 = self.bundle.kg1, self.bundle.kg2
        tau = self.config.rel_report_threshold
        pairs = set(self.rel12)
        for r2, r1 in self.rel21:
            # rel21 keys have the KG2 side base; flip to the shared key space
            pairs.add((r1, r2) if not kg1.relations[r1].is_inverse
                      else (kg1.inverse(r1), kg2.inverse(r2)))
        out = []
        for r1, r2 in pairs:
            s12 = self.rel12.get((r1, r2), 0.0)
            if kg2.relations[r2].is_inverse:
                s21 = self.rel21.get((kg2.inverse(r2), kg1.inverse(r1)), 0.0)
            else:
                s21 = self.rel21.get((r2, r1), 0.0)
            if max(s12, s21) <= 0.0:
                continue
            if s12 >= tau and s21 >= tau:
                op = "EQV"
            elif s12 >= tau or (s21 < tau and s12 >= s21):
                op = "SUB"
            else:
                op = "SUP"
            out.append((kg1.rel_label(r1), op, kg2.rel_label(r2), s12, s21))
        out.sort(key=lambda row: (-max(row[3], row[4]), row[0], row[2]))
        return out

    def ranking(self) -> list[tuple[str, str, float]]:
        """Every entity pair ever scored, including later-pruned ones."""
        kg1, kg2 = self.bundle.kg1, self.bundle.kg2
        scores: dict[tuple[int, int], float] = {}
        for (e1, e2), v in self.store.all_scores.items():
            if not (kg1.is_literal(e1) or kg2.is_literal(e2)):
                scores[(e1, e2)] = v
        for e1, e2 in self.store.fixed:
            if not (kg1.is_literal(e1) or kg2.is_literal(e2)):
                scores[(e1, e2)] = max(scores.get((e1, e2), 0.0),
                                       self.store.get(e1, e2))
        out = [(kg1.ent_label(e1), kg2.ent_label(e2), v)
               for (e1, e2), v in scores.items()]
        out.sort(key=lambda row: (row[0], -row[2], row[1]))
        return out


def run(bundle: DatasetBundle, config: Config,
        sim_file: str | None = None) -> AlignmentResult:
    """Full alignment: build literal table, iterate to quiescence, report."""
    table = build_similarity_table(bundle.kg1, bundle.kg2, config.theta_s,
                                   config.top_k, sim_file)
    aligner = Aligner(bundle, config, table)
    aligner.initialize()
    stats: list[IterationStats] = []
    converged = False
    prev_total = 0.0
    for i in range(1, config.max_iters + 1):
        started = time.perf_counter()
        ed = aligner.entity_step()
        # prune before recomputing relation scores: subrelation coverage must
        # see assigned (mutually best) entity pairs, not the full blanket of
        # candidate scores, or every relation pair saturates together
        pruned = aligner.max_assignment() if config.pruning else 0
        rd = aligner.subrelation_step()
        retained = 0
        total = 0.0
        for r in aligner.store.rows.values():
            retained += len(r)
            total += sum(r.values())
        stats.append(IterationStats(i, ed, rd, pruned, retained, total,
                                    time.perf_counter() - started))
        log.info("iteration %d: entity delta %.4f, relation delta %.4f, "
                 "pruned %d, retained %d (score %.4f)", i, ed, rd, pruned,
                 retained, total)
        # the stop criterion watches the total retained score, not the raw
        # merge delta: pruned-then-rescored pairs would otherwise churn forever
        if abs(total - prev_total) + rd < config.epsilon:
            converged = True
            break
        prev_total = total
    return AlignmentResult(bundle, config, table, aligner.store,
                           aligner.rel12, aligner.rel21, stats, converged)
