"""Impurity functions over class counts and the gain of a binary split.

Every criterion is a Tsallis entropy of some order, optionally normalised
by the entropy of the split proportions:

============================  =====  ==========
kind                          order  normalised
============================  =====  ==========
``shannon``                   1      no
``gini``                      2      no
``gain-ratio``                1      yes
``tsallis``                   q      no
``tsallis-gain-ratio``        q      yes
============================  =====  ==========

Because the classical criteria are routed through the same arithmetic as
their Tsallis counterparts, ``tsallis`` at ``q=2`` scores every split
exactly like ``gini`` (and so on), down to the last bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .entropy import _tsallis
from .errors import ChildParentMismatch, EmptyChild, EmptyNode, InvalidCriterion

SHANNON = "shannon"
GINI = "gini"
GAIN_RATIO = "gain-ratio"
TSALLIS = "tsallis"
TSALLIS_GAIN_RATIO = "tsallis-gain-ratio"

KINDS = (SHANNON, GINI, GAIN_RATIO, TSALLIS, TSALLIS_GAIN_RATIO)
TSALLIS_KINDS = (TSALLIS, TSALLIS_GAIN_RATIO)
RATIO_KINDS = (GAIN_RATIO, TSALLIS_GAIN_RATIO)

ClassCounts = Sequence[int]


@dataclass(frozen=True)
class SplitCriterion:
    kind: str
    q: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidCriterion(f"unknown criterion {self.kind!r}; expected one of {KINDS}")
        if self.kind in TSALLIS_KINDS:
            if self.q is None:
                raise InvalidCriterion(f"criterion {self.kind!r} requires q")
            q = float(self.q)
            if not math.isfinite(q) or q <= 0.0:
                raise InvalidCriterion(f"q must be finite and > 0, got {self.q!r}")
            object.__setattr__(self, "q", q)
        elif self.q is not None:
            raise InvalidCriterion(f"criterion {self.kind!r} takes no q")

    @classmethod
    def shannon(cls) -> "SplitCriterion":
        return cls(SHANNON)

    @classmethod
    def gini(cls) -> "SplitCriterion":
        return cls(GINI)

    @classmethod
    def gain_ratio(cls) -> "SplitCriterion":
        return cls(GAIN_RATIO)

    @classmethod
    def tsallis(cls, q: float) -> "SplitCriterion":
        return cls(TSALLIS, q)

    @classmethod
    def tsallis_gain_ratio(cls, q: float) -> "SplitCriterion":
        return cls(TSALLIS_GAIN_RATIO, q)

    @property
    def order(self) -> float:
        """Entropy order used for node impurity (and the ratio denominator)."""
        if self.kind in (SHANNON, GAIN_RATIO):
            return 1.0
        if self.kind == GINI:
            return 2.0
        return self.q

    @property
    def normalized(self) -> bool:
        return self.kind in RATIO_KINDS

    def __str__(self) -> str:
        if self.q is None:
            return self.kind
        return f"{self.kind}(q={self.q:g})"


def impurity(counts: ClassCounts, criterion: SplitCriterion) -> float:
    """Impurity ``T(D)`` of a node from its class counts."""
    total = 0
    for c in counts:
        if c < 0:
            raise ValueError(f"negative class count {c}")
        total += c
    if total == 0:
        raise EmptyNode("impurity of an empty node is undefined")
    return _tsallis([c / total for c in counts], criterion.order)


def split_gain(
    parent: ClassCounts,
    left: ClassCounts,
    right: ClassCounts,
    criterion: SplitCriterion,
) -> float:
    """Impurity decrease of splitting ``parent`` into ``left`` and ``right``.

    Ratio criteria divide the decrease by the entropy (same order) of the
    two-outcome distribution ``(|left|/|parent|, |right|/|parent|)``.
    """
    if len(left) != len(parent) or len(right) != len(parent):
        raise ChildParentMismatch("children and parent have different class counts lengths")
    if any(l + r != p for p, l, r in zip(parent, left, right)):
        raise ChildParentMismatch("left + right does not equal parent")
    n_left, n_right = sum(left), sum(right)
    if n_left == 0 or n_right == 0:
        raise EmptyChild("both children must hold at least one instance")
    n = n_left + n_right
    w_left = n_left / n
    w_right = n_right / n
    gain = (
        impurity(parent, criterion)
        - w_left * impurity(left, criterion)
        - w_right * impurity(right, criterion)
    )
    if criterion.normalized:
        gain = gain / _tsallis([w_left, w_right], criterion.order)
    return gain
