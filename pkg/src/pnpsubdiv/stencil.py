"""Affine stencils and their compilation into chains of binary averages.

A subdivision rule computes an output element as an affine combination of
``k`` input elements. Rewriting that combination as ``k - 1`` weighted
binary averages lets the same rule run with *any* binary average operator:
the plain affine one reproduces the linear scheme exactly, and the circle
average of point-normal pairs yields the modified scheme.

Compilation reorders the terms so that all positive weights come first.
Because the weights sum to one, every partial sum is then strictly positive
and no binary weight ever divides by zero. Within each sign group terms are
ordered by descending absolute weight, ties by ascending element index, so
plans are identical across runs and platforms. (Observed nonlinear results
are nearly independent of the order, so any fixed order does; the recorded
spread across orders is checked in the test suite, not asserted.)

``compile_plan`` is memoized: subdivision reuses the same few stencils for
every vertex of a mesh. Precompute plans before fanning evaluation out to
threads, or rely on the cache being safe for concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .errors import AffineWeightError, ZeroWeightError

__all__ = [
    "Stencil",
    "AvgPlan",
    "compile_plan",
    "evaluate_plan",
    "affine_average",
]

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Stencil:
    """An affine combination: ``terms`` maps element indices to weights.

    Weights must be nonzero, indices distinct and nonnegative, and the
    weights must sum to one within 1e-12.
    """

    terms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.terms:
            raise AffineWeightError("stencil must have at least one term")
        seen = set()
        total = 0.0
        for idx, weight in self.terms:
            if idx < 0:
                raise ValueError(f"negative element index {idx}")
            if idx in seen:
                raise ValueError(f"duplicate element index {idx}")
            seen.add(idx)
            if weight == 0.0:
                raise ZeroWeightError(f"zero weight at element {idx}")
            total += weight
        if abs(total - 1.0) > _SUM_TOL:
            raise AffineWeightError(f"weights sum to {total!r}, expected 1")

    @classmethod
    def merged(cls, pairs: Iterable[tuple[int, float]]) -> "Stencil":
        """Build a stencil summing weights of repeated indices, dropping zeros.

        Subdivision rules assembled from overlapping templates (butterfly
        wings on small meshes, tensor-product grids that wrap around) can
        hit the same vertex more than once or cancel it out entirely.
        """
        acc: dict[int, float] = {}
        for idx, weight in pairs:
            acc[idx] = acc.get(idx, 0.0) + weight
        return cls(tuple((i, w) for i, w in sorted(acc.items()) if w != 0.0))


@dataclass(frozen=True)
class AvgPlan:
    """A stencil compiled to repeated binary averages.

    Evaluation starts from element ``first`` and folds ``steps`` left to
    right; each step averages the running value with element ``index`` using
    binary weight ``w`` (meaning ``(1 - w) * acc + w * element`` under the
    affine operator). A single-term stencil compiles to an empty plan and
    evaluates to the input element itself, which is what keeps interpolatory
    schemes exact on their original vertices.
    """

    first: int
    steps: tuple[tuple[int, float], ...]


@lru_cache(maxsize=65536)
def compile_plan(stencil: Stencil) -> AvgPlan:
    """Compile ``stencil`` into its canonical chain of binary averages.

    Positive-weight terms are consumed first, so every intermediate partial
    weight stays strictly positive; that is asserted during compilation.
    """
    pos = sorted((t for t in stencil.terms if t[1] > 0.0), key=lambda t: (-abs(t[1]), t[0]))
    neg = sorted((t for t in stencil.terms if t[1] < 0.0), key=lambda t: (-abs(t[1]), t[0]))
    if not pos:
        raise AffineWeightError("stencil has no positive weight")
    ordered = pos + neg
    first_idx, sigma = ordered[0]
    steps = []
    for idx, alpha in ordered[1:]:
        denom = sigma + alpha
        if denom <= 0.0:
            raise AffineWeightError(f"non-positive partial weight sum {denom!r}")
        steps.append((idx, alpha / denom))
        sigma = denom
    return AvgPlan(first=first_idx, steps=tuple(steps))


def evaluate_plan(plan: AvgPlan, elements: Sequence, binop: Callable) -> object:
    """Fold ``plan`` over ``elements`` with the binary average ``binop``.

    ``binop(a, b, w)`` must return the weighted average of ``a`` and ``b``.
    With :func:`affine_average` the result equals the direct weighted sum of
    the stencil; with the circle average it is the modified-scheme value.
    """
    acc = elements[plan.first]
    for idx, w in plan.steps:
        acc = binop(acc, elements[idx], w)
    return acc


def affine_average(a, b, w: float):
    """The plain weighted average ``(1 - w) * a + w * b``."""
    return (1.0 - w) * a + w * b
