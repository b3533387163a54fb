"""Exhaustive enumeration of every diameter assignment, for small instances."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .objective import Evaluation, Problem

__all__ = ["DEFAULT_CAP", "InstanceTooLarge", "BruteForceResult", "design_count", "brute_force"]

DEFAULT_CAP = 10**6


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class BruteForceResult:
    genome: tuple[int, ...]
    evaluation: Evaluation
    designs: int


def design_count(problem: Problem) -> int:
    return problem.num_alleles**problem.num_genes


def brute_force(problem: Problem, cap: int = DEFAULT_CAP) -> BruteForceResult:
    """Minimum penalized objective over all assignments.

    Ties go to the lexicographically smallest genome.  Raises
    :class:`InstanceTooLarge` when there are more than ``cap`` designs.
    """
    count = design_count(problem)
    if count > cap:
        raise InstanceTooLarge(
            f"instance has {count} designs ({problem.num_alleles}^{problem.num_genes}), "
            f"above the enumeration cap of {cap}"
        )
    best_genome = None
    best = None
    for genome in itertools.product(range(problem.num_alleles), repeat=problem.num_genes):
        ev = problem.evaluate(genome, cache=False)
        if best is None or ev.penalized_objective < best.penalized_objective:
            best_genome, best = genome, ev
    return BruteForceResult(best_genome, best, count)
