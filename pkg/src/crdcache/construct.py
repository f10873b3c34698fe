"""Resolvable designs from q-ary expansions.

For ``0 < t < m`` the points are ``0 .. q**m - 1``. Every choice of ``t``
coordinates ``J`` and digit tuple ``a`` gives the block of all points whose
q-ary digits agree with ``a`` on ``J``. Each coordinate subset is one parallel
class. With ``t = 1`` the result is a maximal cross resolvable design.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from crdcache.design import Design, Resolution, validate_design, validate_resolution
from crdcache.errors import InvalidParamsError, OutOfRangeError


@dataclass(frozen=True)
class ConstructionParams:
    q: int
    m: int
    t: int

    def __post_init__(self):
        if self.q < 2:
            raise InvalidParamsError(f"q must be >= 2, got {self.q}")
        if self.m < 2:
            raise InvalidParamsError(f"m must be >= 2, got {self.m}")
        if not 0 < self.t < self.m:
            raise InvalidParamsError(f"need 0 < t < m, got t={self.t}, m={self.m}")


@dataclass(frozen=True)
class PredictedParams:
    v: int
    b: int
    r: int
    k: int
    b_r: int
    mu: dict[int, int] | None


def qary_expand(y: int, q: int, m: int) -> tuple[int, ...]:
    """Digits of ``y`` in base ``q``, least significant first, padded to ``m``."""
    if q < 2:
        raise InvalidParamsError(f"q must be >= 2, got {q}")
    if not 0 <= y < q**m:
        raise OutOfRangeError(f"{y} is outside 0..{q**m - 1}")
    digits = []
    for _ in range(m):
        y, d = divmod(y, q)
        digits.append(d)
    return tuple(digits)


def _tuple_value(a: tuple[int, ...], q: int) -> int:
    # same digit order as qary_expand: first entry least significant
    return sum(d * q**i for i, d in enumerate(a))


def construct(params: ConstructionParams) -> tuple[Design, Resolution]:
    q, m, t = params.q, params.m, params.t
    digits = [qary_expand(y, q, m) for y in range(q**m)]
    blocks = []
    classes = []
    for coords in itertools.combinations(range(m), t):
        members: dict[tuple[int, ...], list[int]] = {}
        for y, dig in enumerate(digits):
            members.setdefault(tuple(dig[j] for j in coords), []).append(y)
        cls = []
        for a in sorted(members, key=lambda a: _tuple_value(a, q)):
            cls.append(len(blocks))
            blocks.append(members[a])
        classes.append(cls)
    design = validate_design(q**m, blocks)
    return design, validate_resolution(design, classes)


def predicted_params(params: ConstructionParams) -> PredictedParams:
    q, m, t = params.q, params.m, params.t
    mu = {z: q ** (m - z) for z in range(2, m + 1)} if t == 1 else None
    return PredictedParams(
        v=q**m,
        b=q**t * comb(m, t),
        r=comb(m, t),
        k=q ** (m - t),
        b_r=q**t,
        mu=mu,
    )


def design_json(params: ConstructionParams, res: Resolution) -> dict:
    doc = {"family": "qary", "q": params.q, "m": params.m, "t": params.t}
    doc.update(res.to_json())
    return doc
