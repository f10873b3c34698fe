"""Multi-access coded caching from a cross resolvable design.

Caches are the blocks of the design, files are split into ``v`` subfiles (one
per point), and each user reads ``z`` caches taken from ``z`` distinct parallel
classes. Cache ``j`` stores subfile ``x`` of every file for each point ``x`` of
block ``j``.

Delivery works per choice of ``z`` classes. Pick an unordered pair of blocks in
each chosen class; the ``2**z`` users whose blocks are one member of every pair
take part. A user's missing subfiles sit in the intersection of the blocks it
did *not* pick, and that intersection has ``mu_z`` points, so ``mu_z`` XOR
transmissions serve the group. Each participant caches every other
participant's term, which gives coding gain ``2**z``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

import numpy as np

from crdcache.design import Resolution, crd_profile, load_json
from crdcache.errors import (
    AccessDegreeUnsupportedError,
    DemandCountMismatchError,
    FileIndexOutOfRangeError,
    InvalidParamsError,
    ZOutOfRangeError,
)


@dataclass(frozen=True)
class User:
    class_subset: tuple[int, ...]
    choice: tuple[int, ...]


@dataclass(frozen=True)
class Topology:
    res: Resolution
    z: int
    mu_z: int
    users: tuple[User, ...]

    @property
    def cache_count(self) -> int:
        return self.res.design.b

    @property
    def K(self) -> int:
        return len(self.users)

    @property
    def v(self) -> int:
        return self.res.design.v

    @cached_property
    def user_index(self) -> dict[User, int]:
        return {u: i for i, u in enumerate(self.users)}

    def caches_of(self, user: User) -> tuple[int, ...]:
        """Block (cache) indices the user reads."""
        return tuple(self.res.classes[c][pos] for c, pos in zip(user.class_subset, user.choice))

    def accessible_points(self, user: User) -> frozenset[int]:
        blocks = self.res.design.blocks
        return frozenset(p for j in self.caches_of(user) for p in blocks[j])

    @cached_property
    def access_matrix(self) -> np.ndarray:
        """``K x v`` 0/1 matrix of subfile indices each user can read from its caches."""
        inc = self.res.design.incidence
        out = np.zeros((self.K, self.v), dtype=np.uint8)
        for i, user in enumerate(self.users):
            out[i] = inc[list(self.caches_of(user))].max(axis=0)
        out.setflags(write=False)
        return out


@dataclass(frozen=True)
class Placement:
    cache_points: tuple[frozenset[int], ...]
    n_files: int
    v: int

    @property
    def file_fraction(self) -> Fraction:
        return Fraction(len(self.cache_points[0]), self.v)

    def contents(self, cache: int) -> set[tuple[int, int]]:
        """Every ``(file, point)`` subfile held by ``cache``."""
        return {(n, x) for n in range(self.n_files) for x in self.cache_points[cache]}


@dataclass(frozen=True)
class DemandVector:
    demand: tuple[int, ...]
    n_files: int

    @property
    def distinct(self) -> bool:
        return len(set(self.demand)) == len(self.demand)


@dataclass(frozen=True)
class Transmission:
    classes: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    slot: int
    terms: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class TransmissionPlan:
    z: int
    K: int
    v: int
    transmissions: tuple[Transmission, ...]
    # rate is exact only when demands are distinct; otherwise an upper bound
    upper_bound: bool = False

    @property
    def rate(self) -> Fraction:
        return Fraction(len(self.transmissions), self.v)


@dataclass(frozen=True)
class SchemeParams:
    K: int
    file_fraction: Fraction
    F: int
    R: Fraction
    per_user_rate: Fraction
    gain: int


def build_topology(res: Resolution, z: int) -> Topology:
    if not 2 <= z <= res.r:
        raise ZOutOfRangeError(f"z must lie in 2..{res.r}, got {z}")
    profile = crd_profile(res)
    if z not in profile.mu:
        raise AccessDegreeUnsupportedError(z, profile.mu)
    users = tuple(
        User(subset, choice)
        for subset in itertools.combinations(range(res.r), z)
        for choice in itertools.product(range(res.b_r), repeat=z)
    )
    return Topology(res, z, profile.mu[z], users)


def place(topology: Topology, n_files: int) -> Placement:
    if n_files < 1:
        raise InvalidParamsError(f"need at least one file, got {n_files}")
    design = topology.res.design
    return Placement(tuple(frozenset(b) for b in design.blocks), n_files, design.v)


def effective_fraction(topology: Topology, user: User) -> Fraction:
    """Fraction of every file the user can read from its ``z`` caches."""
    return Fraction(len(topology.accessible_points(user)), topology.v)


def make_demands(demand, n_files: int, K: int) -> DemandVector:
    demand = tuple(int(d) for d in demand)
    if len(demand) != K:
        raise DemandCountMismatchError(f"expected {K} demands, got {len(demand)}")
    bad = [d for d in demand if not 0 <= d < n_files]
    if bad:
        raise FileIndexOutOfRangeError(f"file indices {sorted(set(bad))} outside 0..{n_files - 1}")
    return DemandVector(demand, n_files)


def sample_demands(K: int, n_files: int | None = None, seed: int = 0) -> DemandVector:
    """Seeded demands; distinct whenever ``n_files >= K`` (the default ``n_files = K``)."""
    if n_files is None:
        n_files = K
    rng = random.Random(seed)
    if n_files >= K:
        demand = rng.sample(range(n_files), K)
    else:
        demand = [rng.randrange(n_files) for _ in range(K)]
    return DemandVector(tuple(demand), n_files)


def generate_plan(topology: Topology, demands: DemandVector) -> TransmissionPlan:
    res, z, mu = topology.res, topology.z, topology.mu_z
    demands = make_demands(demands.demand, demands.n_files, topology.K)
    index = topology.user_index
    blocks = res.design.blocks
    pair_choices = list(itertools.combinations(range(res.b_r), 2))
    selections = list(itertools.product((0, 1), repeat=z))

    transmissions = []
    for subset in itertools.combinations(range(res.r), z):
        for pairs in itertools.product(pair_choices, repeat=z):
            group = []
            for sel in selections:
                choice = tuple(pair[s] for pair, s in zip(pairs, sel))
                other = tuple(pair[1 - s] for pair, s in zip(pairs, sel))
                pts = set(blocks[res.classes[subset[0]][other[0]]])
                for c, pos in zip(subset[1:], other[1:]):
                    pts.intersection_update(blocks[res.classes[c][pos]])
                pts = sorted(pts)
                assert len(pts) == mu
                u = index[User(subset, choice)]
                group.append((u, pts))
            for slot in range(mu):
                terms = tuple((u, demands.demand[u], pts[slot]) for u, pts in group)
                transmissions.append(Transmission(subset, pairs, slot + 1, terms))
    return TransmissionPlan(z, topology.K, topology.v, tuple(transmissions), upper_bound=not demands.distinct)


def scheme_params(q: int, m: int, z: int) -> SchemeParams:
    """Closed-form parameters of the scheme from the q-ary design with ``t = 1``."""
    if q < 2 or not 2 <= z <= m:
        raise InvalidParamsError(f"need q >= 2 and 2 <= z <= m, got q={q}, m={m}, z={z}")
    K = q**z * comb(m, z)
    R = comb(m, z) * Fraction(q - 1, 2) ** z
    return SchemeParams(
        K=K,
        file_fraction=Fraction(1, q),
        F=q**m,
        R=R,
        per_user_rate=Fraction(q - 1, 2 * q) ** z,
        gain=2**z,
    )


def plan_to_json(plan: TransmissionPlan, topology: Topology, demands: DemandVector) -> dict:
    """Plan export; carries the design and demands so the file verifies standalone."""
    return {
        "z": plan.z,
        "K": plan.K,
        "F": plan.v,
        "rate": f"{plan.rate.numerator}/{plan.rate.denominator}",
        "rate_is_upper_bound": plan.upper_bound,
        "N": demands.n_files,
        "demands": list(demands.demand),
        "design": topology.res.to_json(),
        "transmissions": [
            {
                "classes": list(t.classes),
                "pairs": [list(p) for p in t.pairs],
                "slot": t.slot,
                "terms": [list(term) for term in t.terms],
            }
            for t in plan.transmissions
        ],
    }


def plan_from_json(doc: dict) -> tuple[TransmissionPlan, Topology, DemandVector]:
    try:
        _, res = load_json(doc["design"])
        z = int(doc["z"])
        n_files = int(doc["N"])
        raw_demands = doc["demands"]
        raw_tx = doc["transmissions"]
    except (KeyError, TypeError) as exc:
        raise InvalidParamsError(f"malformed plan JSON: {exc}") from None
    if res is None:
        raise InvalidParamsError("plan JSON design must include 'classes'")
    topology = build_topology(res, z)
    demands = make_demands(raw_demands, n_files, topology.K)
    try:
        txs = tuple(
            Transmission(
                tuple(t["classes"]),
                tuple(tuple(p) for p in t["pairs"]),
                int(t["slot"]),
                tuple((int(u), int(f), int(p)) for u, f, p in t["terms"]),
            )
            for t in raw_tx
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParamsError(f"malformed transmission: {exc}") from None
    plan = TransmissionPlan(z, topology.K, topology.v, txs, upper_bound=not demands.distinct)
    return plan, topology, demands
