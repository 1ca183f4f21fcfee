"""Fitness functions and dominance relations for the five search algorithms.

All fitness arithmetic is exact integer arithmetic.  Infeasibility is priced
with the coefficient m^2, which strictly exceeds any reachable cost
(c(x) <= 2m), so a scalar fitness value below m^2 certifies feasibility of
the structural property it penalizes.

Fitness values:

* scalar, for the edge (1+1) EA:  c(x) + m^2 * (2*N_{d>2}(x) + max(|x|-n, 0))
* weight/cost vector:             (|x|, c(x) + m^2 * N_{d>2}(x))
* deficiency/cost vector:         (|V_d(x)| + m^2 * (N_cc(x)-1),
                                   c(x) + m^2 * max(|x|-n, 0))

Dominance verdicts are reported from the first argument's point of view.
"""

from __future__ import annotations

from enum import Enum

from .graph_model import Instance
from .edge_repr import EdgeSolution, metrics, deficiency_set_size
from . import vertex_repr


def penalty(inst: Instance) -> int:
    return inst.m * inst.m


def f_one_plus_one(inst: Instance, x: EdgeSolution) -> int:
    met = metrics(inst, x)
    over = met.hamming - inst.n
    return met.cost + penalty(inst) * (2 * met.n_d_gt(2) + (over if over > 0 else 0))


def f_m(inst: Instance, x: EdgeSolution) -> tuple[int, int]:
    met = metrics(inst, x)
    return met.hamming, met.cost + penalty(inst) * met.n_d_gt(2)


def f_m2(inst: Instance, x: EdgeSolution, node_budget: int = 1_000_000) -> tuple[int, int]:
    met = metrics(inst, x)
    vd = deficiency_set_size(inst, x, node_budget=node_budget)
    over = met.hamming - inst.n
    f1 = vd + penalty(inst) * (met.n_cc - 1)
    f2 = met.cost + penalty(inst) * (over if over > 0 else 0)
    return f1, f2


def f_vertex(inst: Instance, x: "vertex_repr.VertexSolution") -> int:
    return vertex_repr.cost(inst, x)


class Dominance(Enum):
    """Relation of y to z: y strictly better, identical, worse, or neither."""

    STRICT = "strict"
    EQUAL = "equal"
    DOMINATED = "dominated"
    INCOMPARABLE = "incomparable"

    @property
    def weak(self) -> bool:
        """True iff y weakly dominates z."""
        return self in (Dominance.STRICT, Dominance.EQUAL)


def _by_value(a: int, b: int) -> Dominance:
    if a < b:
        return Dominance.STRICT
    if a > b:
        return Dominance.DOMINATED
    return Dominance.EQUAL


def dominates_gsemo(y: tuple[int, int], z: tuple[int, int], n: int) -> Dominance:
    """Weight-slotted dominance: weights in [0, n] compete only at equal weight;
    once either weight leaves [0, n], lower weight wins outright."""
    hy, fy = y
    hz, fz = z
    if hy <= n and hz <= n:
        if hy != hz:
            return Dominance.INCOMPARABLE
        return _by_value(fy, fz)
    if hy != hz:
        return Dominance.STRICT if hy < hz else Dominance.DOMINATED
    return _by_value(fy, fz)


def dominates_gsemo1(y: tuple[int, int], z: tuple[int, int], n: int) -> Dominance:
    """Distance-to-n dominance keeping the weight-n and weight-(n+1) slots apart.

    Outside the [n, n+1] pair, a smaller |weight - n| wins; distance ties
    (equal weights, or the mirrored pair n-k / n+k) fall through to the cost
    component so that incomparability is confined to weights n vs n+1 and
    the population never exceeds those two slots.
    """
    hy, fy = y
    hz, fz = z
    if hy in (n, n + 1) and hz in (n, n + 1):
        if hy != hz:
            return Dominance.INCOMPARABLE
        return _by_value(fy, fz)
    dy = hy - n if hy >= n else n - hy
    dz = hz - n if hz >= n else n - hz
    if dy != dz:
        return Dominance.STRICT if dy < dz else Dominance.DOMINATED
    return _by_value(fy, fz)


def dominates_gsemo2(y: tuple[int, int], z: tuple[int, int]) -> Dominance:
    """Deficiency-first dominance: a deficiency value of 0 and of 1 coexist;
    anything above 1 is dominated by any smaller deficiency."""
    ay, by = y
    az, bz = z
    if ay <= 1 and az <= 1:
        if ay != az:
            return Dominance.INCOMPARABLE
        return _by_value(by, bz)
    if ay != az:
        return Dominance.STRICT if ay < az else Dominance.DOMINATED
    return _by_value(by, bz)
