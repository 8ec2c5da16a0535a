"""One-call pipeline from a graph to its chain, hitting times, and Green's function."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import (
    Distribution,
    TransitionMatrix,
    WeightedDigraph,
    stationary_distribution,
    transition_matrix,
)
from .greens import GreensMatrix, greens_function
from .hitting import HittingTimeMatrix, hitting_times


@dataclass(frozen=True)
class ChainAnalysis:
    graph: WeightedDigraph
    transition: TransitionMatrix
    stationary: Distribution
    hitting: HittingTimeMatrix
    greens: GreensMatrix


def analyze(g: WeightedDigraph, beta: float = 0.0) -> ChainAnalysis:
    """Run the full solver chain on a graph."""
    P = transition_matrix(g, beta)
    pi = stationary_distribution(P)
    H = hitting_times(P, pi)
    G = greens_function(H, pi)
    return ChainAnalysis(g, P, pi, H, G)
