"""Finite uniform block designs, resolutions and cross intersection numbers.

Points are the integers ``0 .. v-1``. A :class:`Design` is a list of equal-size
blocks; a :class:`Resolution` partitions the block list into parallel classes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from crdcache import kernels
from crdcache.errors import (
    ClassDoesNotCoverError,
    ClassNotDisjointError,
    DuplicatePointInBlockError,
    EmptyBlockError,
    IndexOutOfRangeError,
    InvalidParamsError,
    NonUniformBlockSizeError,
    NotAPartitionError,
    PointOutOfRangeError,
)

Block = tuple[int, ...]


@dataclass(frozen=True)
class Design:
    v: int
    blocks: tuple[Block, ...]

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks[0])

    @cached_property
    def incidence(self) -> np.ndarray:
        """``b x v`` 0/1 matrix, row ``j`` marks the points of block ``j``."""
        inc = np.zeros((self.b, self.v), dtype=np.uint8)
        for j, block in enumerate(self.blocks):
            inc[j, list(block)] = 1
        inc.setflags(write=False)
        return inc

    def to_json(self) -> dict:
        return {"v": self.v, "blocks": [list(b) for b in self.blocks]}


@dataclass(frozen=True)
class Resolution:
    design: Design
    classes: tuple[tuple[int, ...], ...]

    @property
    def r(self) -> int:
        return len(self.classes)

    @property
    def b_r(self) -> int:
        return len(self.classes[0])

    def block(self, cls: int, pos: int) -> Block:
        return self.design.blocks[self.classes[cls][pos]]

    def to_json(self) -> dict:
        doc = self.design.to_json()
        doc["classes"] = [list(c) for c in self.classes]
        return doc


@dataclass(frozen=True)
class CrdProfile:
    r: int
    mu: dict[int, int] = field(default_factory=dict)

    @property
    def is_crd(self) -> bool:
        return bool(self.mu)

    @property
    def is_maximal(self) -> bool:
        return self.r in self.mu


def validate_design(v: int, raw_blocks: Iterable[Iterable[int]]) -> Design:
    """Check and canonicalise a design.

    Each block is sorted ascending; the order of the block list is preserved.
    """
    if v < 1:
        raise InvalidParamsError(f"v must be >= 1, got {v}")
    blocks = []
    for j, raw in enumerate(raw_blocks):
        pts = [int(p) for p in raw]
        if not pts:
            raise EmptyBlockError(f"block {j} is empty")
        if len(set(pts)) != len(pts):
            raise DuplicatePointInBlockError(f"block {j} repeats a point: {pts}")
        bad = [p for p in pts if p < 0 or p >= v]
        if bad:
            raise PointOutOfRangeError(f"block {j} has points {bad} outside 0..{v - 1}")
        blocks.append(tuple(sorted(pts)))
    if not blocks:
        raise InvalidParamsError("a design needs at least one block")
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise NonUniformBlockSizeError(f"block sizes differ: {sorted(sizes)}")
    return Design(v, tuple(blocks))


def validate_resolution(design: Design, classes: Sequence[Sequence[int]]) -> Resolution:
    classes = tuple(tuple(int(j) for j in c) for c in classes)
    seen = [j for c in classes for j in c]
    if not classes or any(not c for c in classes) or sorted(seen) != list(range(design.b)):
        raise NotAPartitionError(
            f"classes must partition block indices 0..{design.b - 1} with no empty class"
        )
    full = set(range(design.v))
    for i, c in enumerate(classes):
        covered: set[int] = set()
        for j in c:
            block = design.blocks[j]
            if covered.intersection(block):
                raise ClassNotDisjointError(f"class {i}: block {j} meets an earlier block of the class")
            covered.update(block)
        if covered != full:
            raise ClassDoesNotCoverError(f"class {i} misses points {sorted(full - covered)}")
    return Resolution(design, classes)


def find_resolution(design: Design) -> Resolution | None:
    """Lexicographically smallest resolution, or ``None`` if there is none.

    Classes are built one at a time by exact-cover backtracking; each class
    starts from the lowest unused block and extends with increasing indices,
    so the first complete resolution found is the smallest.
    """
    v, k, b = design.v, design.k, design.b
    if v % k or b % (v // k):
        return None
    per_class = v // k
    masks = [sum(1 << p for p in blk) for blk in design.blocks]
    full = (1 << v) - 1
    used = [False] * b
    classes: list[list[int]] = []

    def fill_class(current: list[int], covered: int, start: int) -> bool:
        if covered == full:
            classes.append(current[:])
            if solve():
                return True
            classes.pop()
            return False
        for j in range(start, b):
            if not used[j] and not masks[j] & covered:
                used[j] = True
                current.append(j)
                if fill_class(current, covered | masks[j], j + 1):
                    return True
                current.pop()
                used[j] = False
        return False

    def solve() -> bool:
        try:
            first = used.index(False)
        except ValueError:
            return True
        used[first] = True
        if fill_class([first], masks[first], first + 1):
            return True
        used[first] = False
        return False

    if not solve():
        return None
    assert all(len(c) == per_class for c in classes)
    return Resolution(design, tuple(tuple(c) for c in classes))


def intersection_sizes(res: Resolution, classes: Sequence[int]) -> np.ndarray:
    """Intersection size for every choice of one block from each given class."""
    choices = [res.classes[c] for c in classes]
    combos = np.array(list(itertools.product(*choices)), dtype=np.int64)
    return kernels.intersection_counts(res.design.incidence, combos)


def cross_intersection_number(res: Resolution, i: int) -> int | None:
    """Common size of ``i``-wise intersections across distinct classes, if constant and nonzero."""
    if i < 2 or i > res.r:
        raise IndexOutOfRangeError(f"i must lie in 2..{res.r}, got {i}")
    value = None
    for subset in itertools.combinations(range(res.r), i):
        sizes = intersection_sizes(res, subset)
        lo, hi = int(sizes.min()), int(sizes.max())
        if lo != hi or lo == 0:
            return None
        if value is None:
            value = lo
        elif value != lo:
            return None
    return value


def crd_profile(res: Resolution) -> CrdProfile:
    mu = {}
    for i in range(2, res.r + 1):
        val = cross_intersection_number(res, i)
        if val is not None:
            mu[i] = val
    return CrdProfile(r=res.r, mu=mu)


def check_maximal_point_count(res: Resolution, profile: CrdProfile | None = None) -> dict:
    """A maximal CRD with mu_r = 1 must have exactly b_r**r points."""
    if profile is None:
        profile = crd_profile(res)
    applicable = profile.is_maximal and profile.mu[res.r] == 1
    holds = applicable and res.design.v == res.b_r**res.r
    return {"applicable": applicable, "holds": holds}


def load_json(doc: dict) -> tuple[Design, Resolution | None]:
    """Parse the design JSON schema; ``classes`` is optional."""
    try:
        v = int(doc["v"])
        blocks = doc["blocks"]
    except (KeyError, TypeError) as exc:
        raise InvalidParamsError(f"design JSON needs 'v' and 'blocks': {exc}") from None
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise InvalidParamsError("'blocks' must be a list of point lists")
    design = validate_design(v, blocks)
    classes = doc.get("classes")
    res = validate_resolution(design, classes) if classes is not None else None
    return design, res


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=False, separators=(",", ":")) + "\n"
