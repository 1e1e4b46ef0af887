"""Positive rule systems over [0,1] variables and their least fixed points.

A system consists of input variables (fixed values), output variables
(initial values, usually 0) and rules "premises =AGG=> conclusion".  A rule
fires with the strength AGG(premise values) and requires its conclusion to be
at least that strong.  All aggregators here are non-decreasing and continuous
on [0,1]^n, so by Knaster-Tarski a least solution exists and iterating the
rules from the initial values converges to it from below.

``solve`` runs in-place sweeps (new values are visible within the same
sweep); ``verify_least_fixed_point`` checks an assignment against an
independent oracle that iterates rounded-up values on a grid, which reaches a
provably-sound upper envelope of the least fixed point in finitely many steps.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Aggregator:
    """Non-decreasing, continuous aggregation of premise values.

    kinds: ``min``; ``hmean`` (harmonic mean, extended with 0 whenever any
    argument is 0, which keeps it continuous); ``alpha_mean`` (alpha times the
    arithmetic mean, clamped to [0,1], alpha >= 1); ``identity`` (single
    premise passthrough).
    """

    kind: str
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("min", "hmean", "alpha_mean", "identity"):
            raise ValueError(f"unknown aggregator kind {self.kind!r}")
        if self.kind == "alpha_mean" and self.alpha < 1.0:
            raise ValueError("alpha_mean requires alpha >= 1")

    def __call__(self, values: Sequence[float]) -> float:
        if self.kind == "min":
            return min(values)
        if self.kind == "hmean":
            if any(v <= 0.0 for v in values):
                return 0.0
            return len(values) / sum(1.0 / v for v in values)
        if self.kind == "alpha_mean":
            return min(1.0, max(0.0, self.alpha * sum(values) / len(values)))
        return values[0]

    def __str__(self) -> str:
        if self.kind == "alpha_mean":
            return f"alpha_mean:{self.alpha:g}"
        return self.kind


MIN = Aggregator("min")
HMEAN = Aggregator("hmean")
IDENTITY = Aggregator("identity")


def alpha_mean(alpha: float) -> Aggregator:
    return Aggregator("alpha_mean", alpha)


@dataclass(frozen=True)
class FisRule:
    premises: tuple
    aggregator: Aggregator
    conclusion: str


@dataclass
class FisVariable:
    name: str
    role: str
    initial: float = 0.0


@dataclass
class Assignment:
    """Solver result: one value per variable, plus convergence bookkeeping."""

    values: dict[str, float]
    sweeps: int
    converged: bool
    history: list[dict[str, float]] | None = None


@dataclass
class VerifyResult:
    ok: bool
    variable: str | None = None
    oracle_value: float | None = None
    assigned_value: float | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


class Fis:
    """A positive rule system under construction."""

    def __init__(self) -> None:
        self.variables: dict[str, FisVariable] = {}
        self.rules: list[FisRule] = []

    def add_input(self, name: str, value: float) -> None:
        _check_unit(value, name)
        if name in self.variables:
            raise ValueError(f"variable {name!r} already declared")
        self.variables[name] = FisVariable(name, "input", value)

    def add_output(self, name: str, initial: float = 0.0) -> None:
        _check_unit(initial, name)
        if name in self.variables:
            raise ValueError(f"variable {name!r} already declared")
        self.variables[name] = FisVariable(name, "output", initial)

    def add_rule(self, premises: Sequence, aggregator: Aggregator,
                 conclusion: str) -> None:
        """Append a rule; undeclared names become outputs with initial 0."""
        if not premises:
            raise ValueError("a rule needs at least one premise")
        if aggregator.kind == "identity" and len(premises) != 1:
            raise ValueError("identity aggregates exactly one premise")
        resolved = []
        for p in premises:
            if isinstance(p, str):
                if p not in self.variables:
                    self.add_output(p)
                resolved.append(p)
            else:
                value = float(p)
                _check_unit(value, "constant premise")
                resolved.append(value)
        if conclusion not in self.variables:
            self.add_output(conclusion)
        if self.variables[conclusion].role != "output":
            raise ValueError(f"conclusion {conclusion!r} is an input variable")
        self.rules.append(FisRule(tuple(resolved), aggregator, conclusion))

    def initial_values(self) -> dict[str, float]:
        return {v.name: v.initial for v in self.variables.values()}

    def output_names(self) -> list[str]:
        return [v.name for v in self.variables.values() if v.role == "output"]


def _check_unit(value: float, what: str) -> None:
    if not (isinstance(value, (int, float)) and 0.0 <= value <= 1.0):
        raise ValueError(f"{what}: value {value!r} outside [0,1]")


def firing_strength(rule: FisRule, values: dict[str, float]) -> float:
    args = [values[p] if isinstance(p, str) else p for p in rule.premises]
    return rule.aggregator(args)


def solve(fis: Fis, convergence_eps: float = 1e-9, max_sweeps: int = 10_000,
          record_history: bool = False) -> Assignment:
    """Iterate all rules until no value moves by more than the tolerance.

    Values only ever increase, so the sweep sequence is monotone and bounded;
    it approaches the least fixed point of the rule system from below.
    """
    values = fis.initial_values()
    history: list[dict[str, float]] | None = [] if record_history else None
    converged = False
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        delta = 0.0
        for rule in fis.rules:
            s = firing_strength(rule, values)
            old = values[rule.conclusion]
            if s > old:
                values[rule.conclusion] = s
                delta = max(delta, s - old)
        if history is not None:
            history.append(dict(values))
        if delta <= convergence_eps:
            converged = True
            break
    return Assignment(values, sweeps, converged, history)


def verify_least_fixed_point(fis: Fis, assignment: Assignment,
                             grid_step: float = 1e-9,
                             tol: float = 1e-6) -> VerifyResult:
    """Check that an assignment is (close to) the least fixed point.

    Two conditions: every rule is satisfied up to ``tol``, and an independent
    grid iteration agrees with the assignment within ``tol`` componentwise.
    The oracle rounds every firing strength up to the next multiple of
    ``grid_step``; values then live on a finite grid and the monotone
    iteration terminates exactly, at a point at most one creeping grid step
    per application above the true least fixed point.  ``tol`` must absorb
    that creep; the default 1e-6 is ample for systems whose aggregators
    amplify a perturbation by at most ~1000x along any rule chain.
    """
    values = assignment.values
    for i, rule in enumerate(fis.rules):
        s = firing_strength(rule, values)
        have = values[rule.conclusion]
        if have < s - tol:
            return VerifyResult(False, rule.conclusion, s, have,
                                f"rule {i} unsatisfied")
    levels = round(1.0 / grid_step)

    def up(x: float) -> int:
        return min(levels, math.ceil(x * levels - 1e-9))

    lev = {name: up(fis.variables[name].initial) for name in fis.output_names()}
    fixed = {v.name: v.initial for v in fis.variables.values() if v.role == "input"}
    for _ in range(2_000_000):
        cur = dict(fixed)
        for name, k in lev.items():
            cur[name] = k / levels
        nxt = dict(lev)
        for rule in fis.rules:
            k = up(firing_strength(rule, cur))
            if k > nxt[rule.conclusion]:
                nxt[rule.conclusion] = k
        if nxt == lev:
            break
        lev = nxt
    else:
        raise RuntimeError("least-fixed-point oracle did not stabilize")
    for name in sorted(lev):
        oracle = lev[name] / levels
        have = values[name]
        if abs(oracle - have) > tol:
            return VerifyResult(False, name, oracle, have,
                                "assignment differs from oracle")
    return VerifyResult(True)


# -- rule-file format ------------------------------------------------------

_RULE_RE = re.compile(
    r"^(?P<conc>\S+)\s*<=\s*(?P<agg>[A-Za-z_]+)(?::(?P<alpha>[0-9.]+))?"
    r"\((?P<args>.*)\)\s*$"
)


def parse_rules(text: str) -> Fis:
    """Parse one rule per line: ``conclusion <= AGG(premise_or_const, ...)``.

    AGG is ``min``, ``hmean``, ``identity`` or ``alpha_mean:A``.  Bare numbers
    are constants, everything else names an output variable (initial 0).
    Blank lines and ``#`` comments are skipped.
    """
    fis = Fis()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _RULE_RE.match(line)
        if not m:
            raise ValueError(f"line {lineno}: cannot parse rule {line!r}")
        kind = m.group("agg").lower()
        agg = Aggregator(kind, float(m.group("alpha") or 1.0))
        premises: list = []
        for tok in m.group("args").split(","):
            tok = tok.strip()
            if not tok:
                raise ValueError(f"line {lineno}: empty premise")
            try:
                premises.append(float(tok))
            except ValueError:
                premises.append(tok)
        fis.add_rule(premises, agg, m.group("conc"))
    return fis
