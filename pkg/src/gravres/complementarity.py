"""Coherence/entanglement trade-off relations and the parameter sweeps built on them.

For a product initial state evolved by the gravitational unitary, three sums of
a local coherence measure of mass A and an entanglement measure are bounded by
one:

* ``L1NegSquared``   C_l1(rho_A)^2 + N(rho_AB)^2
* ``L1ConcSquared``  C_l1(rho_A)^2 + C(rho_AB)^2
* ``RelEntPlusEnt``  C_r(rho_A) + S(rho_A)

Every quantity is computed numerically from the evolved density matrix; the
closed forms below are provided for cross-checks only.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import tolerances
from .errors import InvalidInputError
from .gravity import PhaseSet, build_unitary, evolve
from .measures import (
    Measure,
    MeasureValue,
    concurrence,
    entanglement_entropy,
    l1_coherence,
    negativity,
    relative_entropy_coherence,
)
from .states import ProductStateParams, build_product_state, partial_trace, pure_to_density

COLUMNS = (
    "dphi_lr",
    "dphi_rl",
    "p_a",
    "p_b",
    "c_l1_local",
    "c_rel_local",
    "negativity",
    "concurrence",
    "ent_entropy",
    "sum_sq_l1_neg",
    "sum_rel_ent",
)

_MEASURE_KINDS = {
    "c_l1_local": (Measure.L1_COHERENCE, 2),
    "c_rel_local": (Measure.REL_ENT_COHERENCE, 2),
    "negativity": (Measure.NEGATIVITY, 4),
    "concurrence": (Measure.CONCURRENCE, 4),
    "ent_entropy": (Measure.ENT_ENTROPY, 4),
}


class Relation(str, enum.Enum):
    L1_NEG_SQUARED = "L1NegSquared"
    L1_CONC_SQUARED = "L1ConcSquared"
    REL_ENT_PLUS_ENT = "RelEntPlusEnt"


@dataclass(frozen=True)
class ComplementarityReport:
    relation: Relation
    lhs_value: float
    bound: float = 1.0
    residual: float = field(init=False)
    saturated: bool = field(init=False)

    def __post_init__(self):
        residual = self.lhs_value - self.bound
        object.__setattr__(self, "residual", residual)
        object.__setattr__(self, "saturated", abs(residual) <= tolerances.get().saturation)

    def holds(self, tol: float | None = None) -> bool:
        """The inequality lhs <= bound, up to arithmetic tolerance."""
        tol = tolerances.get().arithmetic if tol is None else tol
        return self.residual <= tol


@dataclass(frozen=True)
class SweepRecord:
    dphi_LR: float
    dphi_RL: float
    p_A: float
    p_B: float
    measures: dict[str, float]
    reports: tuple[ComplementarityReport, ...]

    def report(self, relation: Relation) -> ComplementarityReport:
        for r in self.reports:
            if r.relation == relation:
                return r
        raise KeyError(relation)

    def measure_values(self) -> list[MeasureValue]:
        return [MeasureValue(kind, self.measures[key], dim) for key, (kind, dim) in _MEASURE_KINDS.items()]

    def row(self) -> dict[str, float]:
        """Flat mapping keyed by COLUMNS."""
        return {
            "dphi_lr": self.dphi_LR,
            "dphi_rl": self.dphi_RL,
            "p_a": self.p_A,
            "p_b": self.p_B,
            **{k: self.measures[k] for k in _MEASURE_KINDS},
            "sum_sq_l1_neg": self.report(Relation.L1_NEG_SQUARED).lhs_value,
            "sum_rel_ent": self.report(Relation.REL_ENT_PLUS_ENT).lhs_value,
        }


def evaluate(params: ProductStateParams, phases: PhaseSet) -> SweepRecord:
    """Prepare the product state, evolve it and evaluate every measure and relation.

    The global phase is dropped first: all measures are invariant under it, and
    working in one gauge makes results depend on the phase differences alone.
    """
    rho0 = pure_to_density(build_product_state(params))
    rho = evolve(rho0, build_unitary(phases.relative()))
    rho_A = partial_trace(rho, "A")

    c_l1 = l1_coherence(rho_A)
    c_rel = relative_entropy_coherence(rho_A)
    neg = negativity(rho)
    conc = concurrence(rho)
    ent = entanglement_entropy(rho)

    reports = (
        ComplementarityReport(Relation.L1_NEG_SQUARED, c_l1 ** 2 + neg ** 2),
        ComplementarityReport(Relation.L1_CONC_SQUARED, c_l1 ** 2 + conc ** 2),
        ComplementarityReport(Relation.REL_ENT_PLUS_ENT, c_rel + ent),
    )
    measures = {
        "c_l1_local": c_l1,
        "c_rel_local": c_rel,
        "negativity": neg,
        "concurrence": conc,
        "ent_entropy": ent,
    }
    return SweepRecord(phases.dphi_LR, phases.dphi_RL, params.p_A, params.p_B, measures, reports)


def check_relations(params: ProductStateParams, phases: PhaseSet) -> tuple[ComplementarityReport, ...]:
    return evaluate(params, phases).reports


def expects_saturation(params: ProductStateParams) -> bool:
    """Both masses start maximally coherent, where all three sums equal one."""
    return params.p_A == 0.5 and params.p_B == 0.5


def closed_form_negativity(p_A: float, p_B: float, total_phase: float) -> float:
    """4 sqrt(p_A p_B (1-p_A)(1-p_B)) |sin(total/2)|."""
    return 4.0 * math.sqrt(p_A * p_B * (1.0 - p_A) * (1.0 - p_B)) * abs(math.sin(total_phase / 2.0))


def closed_form_local_l1(total_phase: float) -> float:
    """|cos(total/2)|, the local l1 coherence for equal-weight initial states."""
    return abs(math.cos(total_phase / 2.0))


def _check_grid(grid: Sequence[float], name: str, lo: float | None = None, hi: float | None = None) -> list[float]:
    values = [float(x) for x in grid]
    if not values:
        raise InvalidInputError(f"{name} must not be empty")
    for x in values:
        if not math.isfinite(x):
            raise InvalidInputError(f"{name} contains a non-finite value")
        if (lo is not None and x < lo) or (hi is not None and x > hi):
            raise InvalidInputError(f"{name} value {x!r} outside [{lo}, {hi}]")
    return values


def _evaluate_args(args: tuple[float, float, float, float]) -> SweepRecord:
    p_A, p_B, dphi_LR, dphi_RL = args
    return evaluate(ProductStateParams(p_A, p_B), PhaseSet.from_differences(dphi_LR, dphi_RL))


def _run(points: list[tuple[float, float, float, float]], workers: int) -> list[SweepRecord]:
    if workers <= 1 or len(points) < 2:
        return [_evaluate_args(p) for p in points]
    chunk = max(1, len(points) // (4 * workers))
    with ProcessPoolExecutor(
        max_workers=workers, initializer=tolerances.set_active, initargs=(tolerances.get(),)
    ) as pool:
        # map() yields in submission order, so row order never depends on scheduling.
        return list(pool.map(_evaluate_args, points, chunksize=chunk))


def sweep_phases(
    grid_LR: Iterable[float],
    grid_RL: Iterable[float],
    params: ProductStateParams = ProductStateParams(),
    *,
    workers: int = 1,
) -> list[SweepRecord]:
    """One record per (dphi_LR, dphi_RL), row-major with dphi_LR as the slow index."""
    lr = _check_grid(list(grid_LR), "grid_LR")
    rl = _check_grid(list(grid_RL), "grid_RL")
    points = [(params.p_A, params.p_B, a, b) for a in lr for b in rl]
    return _run(points, workers)


def sweep_initial_coherence(
    grid_pA: Iterable[float],
    grid_pB: Iterable[float],
    phases: PhaseSet,
    *,
    workers: int = 1,
) -> list[SweepRecord]:
    """One record per (p_A, p_B), row-major with p_A as the slow index."""
    pa = _check_grid(list(grid_pA), "grid_pA", 0.0, 1.0)
    pb = _check_grid(list(grid_pB), "grid_pB", 0.0, 1.0)
    points = [(a, b, phases.dphi_LR, phases.dphi_RL) for a in pa for b in pb]
    return _run(points, workers)
