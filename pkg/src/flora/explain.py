"""Turning stored rule instances into human-readable justifications.

Every reported match keeps the rule instance that set its score: the matched
incident facts with their head and relation scores, and the four
functionality values that capped the strength.  An explanation is that
instance resolved back to labels, renderable as text or as a JSON record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .engine import AlignmentResult, RuleInstance, instance_strength
from .functionality import FunEstimate

STATUS_REPORTED = "reported"
STATUS_BELOW_THRESHOLD = "below_threshold"
STATUS_PRUNED = "pruned"
STATUS_UNSCORED = "unscored"


@dataclass
class Explanation:
    entity1: str
    entity2: str
    score: float
    status: str
    kind: str = "rule"  # "rule" | "seed" | "literal"
    evidence: list[dict] = field(default_factory=list)
    funs: dict[str, dict] = field(default_factory=dict)
    note: str = ""

    def to_record(self) -> dict:
        """JSON-ready record; field names are part of the output format."""
        return {
            "entity1": self.entity1,
            "entity2": self.entity2,
            "score": round(self.score, 6),
            "status": self.status,
            "kind": self.kind,
            "evidence": self.evidence,
            "functionality": self.funs,
            "note": self.note,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Explanation":
        return cls(rec["entity1"], rec["entity2"], rec["score"], rec["status"],
                   rec.get("kind", "rule"), rec.get("evidence", []),
                   rec.get("functionality", {}), rec.get("note", ""))

    def render(self) -> str:
        lines = [f"{self.entity1}  <=>  {self.entity2}",
                 f"  score {self.score:.6f} ({self.status}, {self.kind})"]
        if self.note:
            lines.append(f"  {self.note}")
        for i, ev in enumerate(self.evidence, 1):
            lines.append(
                f"  fact {i}: {ev['relation1']}({ev['head1']}, x) ~ "
                f"{ev['relation2']}({ev['head2']}, y)  "
                f"head {ev['head_score']:.4f}, relation {ev['relation_score']:.4f}")
        for name, f in self.funs.items():
            mode = f["mode"]
            suffix = f" ({f['samples']} samples)" if mode == "sampled" else ""
            lines.append(f"  {name} = {f['value']:.6f} [{mode}]{suffix}")
        return "\n".join(lines)


def _fun_dict(f: FunEstimate) -> dict:
    return {"value": round(f.value, 9), "mode": f.mode, "samples": f.sample_count}


def _from_instance(result: AlignmentResult, inst: RuleInstance,
                   score: float, status: str) -> Explanation:
    kg1, kg2 = result.bundle.kg1, result.bundle.kg2
    exp = Explanation(kg1.ent_label(inst.tail1), kg2.ent_label(inst.tail2),
                      score, status, inst.kind)
    if inst.kind == "seed":
        exp.note = "fixed seed pair"
        return exp
    if inst.kind == "literal":
        exp.note = f"fixed literal similarity ({result.table.provider})"
        return exp
    exp.evidence = [{
        "relation1": kg1.rel_label(p.rel1),
        "head1": kg1.ent_label(p.head1),
        "relation2": kg2.rel_label(p.rel2),
        "head2": kg2.ent_label(p.head2),
        "head_score": round(p.head_score, 6),
        "relation_score": round(p.rel_score, 6),
    } for p in inst.positions]
    exp.funs = {
        "fun_r1": _fun_dict(inst.fun_r1),
        "fun_rh1": _fun_dict(inst.fun_rh1),
        "fun_r2": _fun_dict(inst.fun_r2),
        "fun_rh2": _fun_dict(inst.fun_rh2),
    }
    return exp


def explain_pair(result: AlignmentResult, label1: str, label2: str) -> Explanation:
    """Explanation for one entity pair, whatever its fate was."""
    kg1, kg2 = result.bundle.kg1, result.bundle.kg2
    if not kg1.has_entity(label1):
        raise KeyError(f"unknown entity in KG1: {label1!r}")
    if not kg2.has_entity(label2):
        raise KeyError(f"unknown entity in KG2: {label2!r}")
    e1, e2 = kg1.entity_id(label1), kg2.entity_id(label2)
    score = result.store.get(e1, e2)
    inst = result.store.best_rule.get((e1, e2))
    if inst is not None and score > 0.0:
        status = (STATUS_REPORTED if score > result.config.theta_e
                  else STATUS_BELOW_THRESHOLD)
        return _from_instance(result, inst, score, status)
    ever = result.store.all_scores.get((e1, e2), 0.0)
    if ever > 0.0:
        exp = Explanation(label1, label2, ever, STATUS_PRUNED)
        exp.note = ("scored during iteration but dropped by mutual-max "
                    "pruning or outgrown by a stronger candidate")
        return exp
    exp = Explanation(label1, label2, 0.0, STATUS_UNSCORED)
    exp.note = ("never scored: no shared positive evidence, or outside the "
                "candidate cap")
    return exp


def reported_explanations(result: AlignmentResult) -> list[Explanation]:
    """One explanation per reported entity match, in report order."""
    return [explain_pair(result, l1, l2)
            for l1, l2, _ in result.entity_matches()]


def check_consistency(result: AlignmentResult, tol: float = 1e-12) -> list[str]:
    """Recompute every reported score from its stored instance.

    Returns a list of problems, empty when every reported match carries a
    rule instance whose recomputed strength equals the reported score.
    """
    kg1, kg2 = result.bundle.kg1, result.bundle.kg2
    problems = []
    for l1, l2, score in result.entity_matches():
        e1, e2 = kg1.entity_id(l1), kg2.entity_id(l2)
        inst = result.store.best_rule.get((e1, e2))
        if inst is None:
            problems.append(f"({l1}, {l2}): reported without a rule instance")
            continue
        again = instance_strength(inst)
        if abs(again - score) > tol:
            problems.append(f"({l1}, {l2}): reported {score!r} but instance "
                            f"recomputes to {again!r}")
    return problems


def write_jsonl(explanations: list[Explanation], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for exp in explanations:
            fh.write(json.dumps(exp.to_record(), ensure_ascii=False,
                                sort_keys=True) + "\n")
