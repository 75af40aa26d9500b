"""Shannon and Tsallis entropies of finite discrete distributions.

All logarithms are natural. Zero-probability terms are skipped, which
implements the conventions ``0 ln 0 = 0`` and ``0**q = 0`` for ``q > 0``.
The ``q == 1`` case of every Tsallis quantity takes the Shannon code path
directly instead of approaching the limit numerically, so results at
``q = 1`` are bit-identical to the Shannon ones.

Sums are accumulated left to right with plain float arithmetic. The
compiled split kernel uses the same order, which keeps trees identical
whichever backend scored the candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, InvalidDistribution, NonFiniteOrder

PROB_TOL = 1e-9


@dataclass(frozen=True)
class ProbabilityDistribution:
    """A validated finite distribution ``p(x_1), ..., p(x_n)``."""

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) < 1:
            raise InvalidDistribution("distribution needs at least one outcome")
        for p in probs:
            if not math.isfinite(p) or p < 0.0:
                raise InvalidDistribution(f"invalid probability {p!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidDistribution(f"probabilities sum to {total!r}, not 1")

    def __len__(self) -> int:
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "ProbabilityDistribution":
        total = sum(counts)
        if total <= 0:
            raise InvalidDistribution("counts sum to zero")
        return cls(tuple(c / total for c in counts))


@dataclass(frozen=True)
class JointDistribution:
    """A validated joint table ``p(x, y)``; rows index x, columns index y."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidDistribution("joint distribution must be a non-empty 2-D table")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise InvalidDistribution("joint cells must be finite and non-negative")
        total = math.fsum(arr.ravel().tolist())
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidDistribution(f"joint cells sum to {total!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def transpose(self) -> "JointDistribution":
        """The same table with the roles of X and Y swapped."""
        return JointDistribution(self.probs.T)

    def marginal_x(self) -> list[float]:
        return [_plain_sum(row) for row in self.probs.tolist()]

    def marginal_y(self) -> list[float]:
        return [_plain_sum(col) for col in self.probs.T.tolist()]


DistLike = Union[ProbabilityDistribution, Sequence[float], np.ndarray]
JointLike = Union[JointDistribution, Sequence[Sequence[float]], np.ndarray]


def _plain_sum(values) -> float:
    s = 0.0
    for v in values:
        s += v
    return s


def _as_dist(dist: DistLike) -> tuple[float, ...]:
    if isinstance(dist, ProbabilityDistribution):
        return dist.probs
    return ProbabilityDistribution(tuple(np.asarray(dist, dtype=float).ravel())).probs


def _as_joint(joint: JointLike) -> JointDistribution:
    if isinstance(joint, JointDistribution):
        return joint
    return JointDistribution(joint)


def _check_order(q: float) -> float:
    q = float(q)
    if not math.isfinite(q):
        raise NonFiniteOrder(f"entropy order must be finite, got {q!r}")
    return q


def _shannon(probs) -> float:
    s = 0.0
    for p in probs:
        if p > 0.0:
            s += p * math.log(p)
    return -s


def _tsallis(probs, q: float) -> float:
    if q == 1.0:
        return _shannon(probs)
    s = 0.0
    for p in probs:
        if p > 0.0:
            s += p**q
    return (s - 1.0) / (1.0 - q)


def shannon_entropy(dist: DistLike) -> float:
    """``-sum p ln p`` in nats."""
    return _shannon(_as_dist(dist))


def tsallis_entropy(dist: DistLike, q: float) -> float:
    """``(sum p**q - 1) / (1 - q)``; Shannon entropy when ``q == 1``.

    >>> tsallis_entropy([0.2, 0.3, 0.5], 2.0)
    0.62
    """
    q = _check_order(q)
    return _tsallis(_as_dist(dist), q)


def q_log(x: float, q: float) -> float:
    """The q-logarithm ``(x**(1-q) - 1) / (1 - q)``, ``ln x`` at ``q = 1``."""
    q = _check_order(q)
    x = float(x)
    if not x >= 0.0:
        raise DomainError(f"q_log undefined for x={x!r}")
    if x == 0.0 and q >= 1.0:
        raise DomainError(f"q_log(0, q) diverges for q={q!r} >= 1")
    if q == 1.0:
        return math.log(x)
    return (x ** (1.0 - q) - 1.0) / (1.0 - q)


def q_exp(x: float, q: float) -> float:
    """The q-exponential, inverse of :func:`q_log` on its valid branch.

    Returns 0 where ``1 + (1 - q) x`` is negative.
    """
    q = _check_order(q)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"q_exp needs a finite argument, got {x!r}")
    if q == 1.0:
        return math.exp(x)
    base = 1.0 + (1.0 - q) * x
    if base < 0.0:
        return 0.0
    return base ** (1.0 / (1.0 - q))


def tsallis_joint_entropy(joint: JointLike, q: float) -> float:
    """``S_q(X, Y)``: Tsallis entropy of the flattened cell distribution."""
    q = _check_order(q)
    return _tsallis(_as_joint(joint).probs.ravel().tolist(), q)


def tsallis_conditional_entropy(joint: JointLike, q: float) -> float:
    """``S_q(X | Y) = sum_y p(y)**q S_q(X | Y=y)``.

    Columns with ``p(y) = 0`` contribute nothing. Pass ``joint.transpose()``
    for ``S_q(Y | X)``.
    """
    q = _check_order(q)
    jd = _as_joint(joint)
    total = 0.0
    for col in jd.probs.T.tolist():
        py = _plain_sum(col)
        if py <= 0.0:
            continue
        cond = [c / py for c in col]
        if q == 1.0:
            total += py * _shannon(cond)
        else:
            total += py**q * _tsallis(cond, q)
    return total


def tsallis_conditional_entropy_pointwise(joint: JointLike, q: float) -> float:
    """``S_q(X | Y)`` as ``-sum_{x,y} p(x,y)**q ln_q p(x|y)``.

    Algebraically equal to :func:`tsallis_conditional_entropy`; kept as an
    independent route for cross-checking.
    """
    q = _check_order(q)
    jd = _as_joint(joint)
    py = jd.marginal_y()
    s = 0.0
    for row in jd.probs.tolist():
        for y, pxy in enumerate(row):
            if pxy <= 0.0:
                continue
            w = pxy if q == 1.0 else pxy**q
            s += w * q_log(pxy / py[y], q)
    return -s


def tsallis_mutual_information(joint: JointLike, q: float) -> float:
    """``I_q(X; Y) = S_q(X) - S_q(X | Y)``.

    With the ``p(y)**q`` weighting of the conditional entropy this equals
    ``S_q(X) + S_q(Y) - S_q(X, Y)``, so it is symmetric in X and Y.
    """
    q = _check_order(q)
    jd = _as_joint(joint)
    return _tsallis(jd.marginal_x(), q) - tsallis_conditional_entropy(jd, q)
