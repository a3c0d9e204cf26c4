"""Report assembly and threshold scans over the built-in state families."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .covariance import bipartite_blocks
from .criteria import (
    AB,
    BA,
    DECISION_TOL,
    SteeringVerdict,
    WitnessReport,
    extract_witness,
    parse_direction,
    prop1,
    prop2,
)
from .exceptions import InvalidParameter, NoViolationInRange
from .gaussian import GaussianCM, cm_to_json, prop3
from .loo import gell_mann_loos
from .states import BipartiteState, FamilySpec, family_state, state_to_json

DISCRETE_CRITERIA = ("prop1", "prop2", "witness")
SCAN_CRITERIA = DISCRETE_CRITERIA + ("any",)
SIG_DIGITS = 12


@dataclass(frozen=True)
class AnalysisConfig:
    """What to analyse. Exactly one of ``family``, ``state`` or ``gaussian`` is set."""

    family: FamilySpec | None = None
    state: BipartiteState | None = None
    gaussian: GaussianCM | None = None
    criteria: tuple[str, ...] | None = None
    directions: tuple[str, ...] = (AB, BA)
    scan: dict | None = None
    label: str | None = None

    def __post_init__(self):
        given = [x is not None for x in (self.family, self.state, self.gaussian)]
        if sum(given) != 1:
            raise InvalidParameter("exactly one of family, state or gaussian must be given")
        if self.scan is not None:
            fam = self.scan.get("family", self.family.family if self.family else None)
            if fam in (None, "explicit"):
                raise InvalidParameter("threshold scans need a one-parameter family")
        object.__setattr__(self, "directions", tuple(parse_direction(d) for d in self.directions))


@dataclass
class Report:
    input: dict
    verdicts: list[SteeringVerdict] = field(default_factory=list)
    witness: list[WitnessReport] = field(default_factory=list)
    threshold: dict | None = None
    version: str = __version__

    def to_dict(self) -> dict:
        doc = {"input": self.input, "version": self.version, "verdicts": [v.as_dict() for v in self.verdicts]}
        if self.witness:
            doc["witness"] = [_witness_dict(w) for w in self.witness]
        if self.threshold is not None:
            doc["threshold"] = self.threshold
        return _round(doc)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"covsteer {self.version}  input: {_describe(self.input)}"]
        for v in self.verdicts:
            flag = "STEERABLE" if v.violated else "not detected"
            lines.append(
                f"  {v.criterion:<12} {v.direction}  lhs={v.lhs:.6g}  rhs={v.rhs:.6g}  "
                f"margin={v.margin:+.3e}  {flag}"
            )
        for w in self.witness:
            lines.append(
                f"  witness {w.direction}: gain={w.gain:.6g}  value={w.lurValue:.6g}  "
                f"bound={w.bound:g}  {'violated' if w.violated else 'satisfied'}"
            )
        if self.threshold is not None:
            t = self.threshold
            lines.append(f"  threshold[{t['criterion']}, {t['direction']}] = {t['value']:.8g}")
        return "\n".join(lines)


def _describe(inp: dict) -> str:
    if "parameter" in inp:
        return f"{inp['family']}({inp['parameter']})"
    if "family" in inp:
        return f"{inp['family']} scan"
    return inp.get("label") or inp.get("kind", "?")


def _round(obj):
    if isinstance(obj, float):
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _ops_json(ops) -> list:
    return [{"re": o.real.tolist(), "im": o.imag.tolist()} for o in ops]


def _witness_dict(w: WitnessReport) -> dict:
    return {
        "direction": w.direction,
        "gain": w.gain,
        "lurValue": w.lurValue,
        "bound": w.bound,
        "violated": w.violated,
        "observablesA": _ops_json(w.setA.observables),
        "observablesB": _ops_json(w.setB.observables),
    }


def discrete_verdicts(state: BipartiteState, criteria=DISCRETE_CRITERIA, directions=(AB, BA)):
    """Evaluate the requested LOO criteria on ``state`` with canonical LOO sets."""
    looA, looB = gell_mann_loos(state.dimA), gell_mann_loos(state.dimB)
    blocks = bipartite_blocks(state, looA, looB)
    verdicts, witnesses = [], []
    for crit in criteria:
        for d in directions:
            if crit == "prop1":
                verdicts.append(prop1(blocks, direction=d))
            elif crit == "prop2":
                verdicts.append(prop2(blocks, direction=d))
            elif crit == "witness":
                w = extract_witness(blocks, looA, looB, direction=d)
                witnesses.append(w)
                verdicts.append(w.verdict())
            else:
                raise InvalidParameter(f"criterion {crit!r} does not apply to finite-dimensional states")
    return verdicts, witnesses


def run_analysis(config: AnalysisConfig) -> Report:
    if config.gaussian is not None:
        criteria = config.criteria or ("gaussian",)
        bad = set(criteria) - {"gaussian"}
        if bad:
            raise InvalidParameter(f"criteria {sorted(bad)} need a finite-dimensional state")
        report = Report(input={"kind": "gaussian", **cm_to_json(config.gaussian)})
        report.verdicts = [prop3(config.gaussian, d) for d in config.directions]
        return report

    if config.family is not None:
        state = family_state(config.family)
        inp = {"kind": "family", "family": config.family.family, "parameter": config.family.parameter}
    else:
        state = config.state
        inp = {"kind": "state", **state_to_json(state)}
    if config.label:
        inp["label"] = config.label
    criteria = config.criteria or DISCRETE_CRITERIA
    if "gaussian" in criteria:
        raise InvalidParameter("criterion 'gaussian' needs a Gaussian covariance matrix input")
    report = Report(input=inp)
    report.verdicts, report.witness = discrete_verdicts(state, criteria, config.directions)
    if config.scan is not None:
        scan = dict(config.scan)
        scan.setdefault("family", config.family.family if config.family else None)
        report.threshold = scan_record(**scan)
    return report


def margin_function(family: str, criterion: str, direction: str) -> Callable[[float], float]:
    """Map a family parameter to the margin of ``criterion`` (positive means steerable)."""
    direction = parse_direction(direction)
    if criterion not in SCAN_CRITERIA:
        raise InvalidParameter(f"unknown scan criterion {criterion!r}; expected one of {SCAN_CRITERIA}")
    crits = ("prop1", "prop2") if criterion == "any" else (criterion,)

    def margin(x: float) -> float:
        state = family_state(FamilySpec(family, float(x)))
        verdicts, _ = discrete_verdicts(state, crits, (direction,))
        return max(v.margin for v in verdicts)

    return margin


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    # invariant: lo is not violated, hi is
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > DECISION_TOL:
            hi = mid
        else:
            lo = mid
    return hi


def threshold_scan(family: str, criterion: str, direction: str, lo: float = 0.0, hi: float = 1.0,
                   tol: float = 1e-6, grid_step: float = 1e-3) -> float:
    """Smallest family parameter in [lo, hi] at which ``criterion`` detects steering.

    Bisects on the sign of the margin when the bracket straddles the
    threshold; otherwise walks a grid of step ``grid_step`` to find a
    bracket first.

    Raises
    ------
    NoViolationInRange
        If no grid point in [lo, hi] is violated.
    """
    f = margin_function(family, criterion, direction)

    def violated(x):
        # same rule as SteeringVerdict.violated; analytic zeros at the ends stay unflagged
        return f(x) > DECISION_TOL

    if not violated(lo) and violated(hi):
        return _bisect(f, lo, hi, tol)
    grid = np.linspace(lo, hi, max(int(round((hi - lo) / grid_step)), 1) + 1)
    hits = [x for x in grid if violated(x)]
    if not hits:
        raise NoViolationInRange(f"{criterion} never detects {family} steering ({direction}) on [{lo}, {hi}]")
    first = hits[0]
    if first == grid[0]:
        return float(first)
    prev = grid[np.searchsorted(grid, first) - 1]
    return _bisect(f, float(prev), float(first), tol)


def scan_record(family: str, criterion: str, direction: str, lo: float = 0.0, hi: float = 1.0,
                tol: float = 1e-6) -> dict:
    value = threshold_scan(family, criterion, direction, lo, hi, tol)
    return {
        "family": family,
        "criterion": criterion,
        "direction": parse_direction(direction),
        "lo": lo,
        "hi": hi,
        "tol": tol,
        "value": value,
    }
