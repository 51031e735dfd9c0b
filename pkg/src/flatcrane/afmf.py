"""Operating-point selection by average fuzzy membership.

Each front member gets a linear membership per objective, 1 at the
objective's best value over the front and 0 at its worst; the member with
the highest average membership is selected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import ParetoFront


@dataclass(frozen=True)
class AfmfResult:
    """Selected index with the membership vectors behind the choice."""

    index: int
    score: float
    lambda1: np.ndarray
    lambda2: np.ndarray

    @property
    def scores(self) -> np.ndarray:
        return 0.5 * (self.lambda1 + self.lambda2)


def afmf_select(front: ParetoFront) -> AfmfResult:
    """Pick the front member maximizing the mean linear membership.

    Memberships are computed against the front's own objective extremes; a
    degenerate objective (max equal to min) scores 1 for every member.
    Ties resolve to the smallest f1 (the faster operation).
    """
    if len(front) == 0:
        raise ValueError("cannot select from an empty front")
    lambdas = []
    for j in range(2):
        col = front.points[:, j]
        hi, lo = col.max(), col.min()
        if hi == lo:
            lambdas.append(np.ones_like(col))
        else:
            lambdas.append((hi - col) / (hi - lo))
    score = 0.5 * (lambdas[0] + lambdas[1])
    # argmax returns the first maximum; the front is sorted by f1 ascending,
    # so ties already resolve to the smaller f1
    index = int(np.argmax(score))
    return AfmfResult(index=index, score=float(score[index]),
                      lambda1=lambdas[0], lambda2=lambdas[1])
