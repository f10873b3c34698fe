"""Brute-force decodability check for a transmission plan.

The symbolic decoder starts each user from the subfiles in its caches and
repeatedly scans the plan: a transmission whose terms are all known except one
reveals that one. This runs to a fixpoint, so it does not rely on the plan
having any particular structure. :func:`payload_trial` repeats the exercise on
random 64-bit payloads with real XOR cancellation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from crdcache import kernels
from crdcache.scheme import DemandVector, Placement, Topology, TransmissionPlan, User


@dataclass(frozen=True)
class UserOutcome:
    cached: int
    delivered: int
    recovered: bool


@dataclass(frozen=True)
class DecodeReport:
    users: tuple[UserOutcome, ...]
    benefited: tuple[int, ...]
    all_decodable: bool
    one_shot: bool
    malformed_terms: int = 0

    @property
    def failures(self) -> list[int]:
        return [i for i, u in enumerate(self.users) if not u.recovered]

    @property
    def gain_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.benefited).items()))

    def to_json(self) -> dict:
        return {
            "all_decodable": self.all_decodable,
            "one_shot": self.one_shot,
            "gain_histogram": {str(g): n for g, n in self.gain_histogram.items()},
            "failures": self.failures,
            "users": len(self.users),
            "transmissions": len(self.benefited),
            "malformed_terms": self.malformed_terms,
        }


def _cached_matrix(placement: Placement, topology: Topology) -> np.ndarray:
    cached = np.zeros((topology.K, placement.v), dtype=np.uint8)
    for i, user in enumerate(topology.users):
        for j in topology.caches_of(user):
            cached[i, list(placement.cache_points[j])] = 1
    return cached


def _term_arrays(plan: TransmissionPlan, n_files: int, v: int):
    """Pad the plan into ``T x G`` file/point arrays; out-of-range terms become padding."""
    width = max((len(t.terms) for t in plan.transmissions), default=1)
    files = np.full((len(plan.transmissions), width), -1, dtype=np.int64)
    points = np.zeros((len(plan.transmissions), width), dtype=np.int64)
    malformed = 0
    for i, tx in enumerate(plan.transmissions):
        for j, (_, f, p) in enumerate(tx.terms):
            if 0 <= f < n_files and 0 <= p < v:
                files[i, j] = f
                points[i, j] = p
            else:
                malformed += 1
    return files, points, malformed


def verify_plan(
    plan: TransmissionPlan,
    placement: Placement,
    topology: Topology,
    demands: DemandVector,
    backend: str | None = None,
) -> DecodeReport:
    cached = _cached_matrix(placement, topology)
    files, points, malformed = _term_arrays(plan, demands.n_files, placement.v)
    recovered, benefited, duplicate = kernels.decode_symbolic(
        cached, demands.demand, demands.n_files, files, points, backend=backend
    )
    n_cached = cached.sum(axis=1)
    n_known = recovered.sum(axis=1)
    users = tuple(
        UserOutcome(int(c), int(k - c), bool(k == placement.v)) for c, k in zip(n_cached, n_known)
    )
    all_ok = all(u.recovered for u in users)
    return DecodeReport(
        users=users,
        benefited=tuple(int(b) for b in benefited),
        all_decodable=all_ok,
        one_shot=all_ok and not duplicate.any(),
        malformed_terms=malformed,
    )


def decode_user(
    plan: TransmissionPlan,
    placement: Placement,
    topology: Topology,
    user: User,
    demands: DemandVector,
    backend: str | None = None,
) -> set[int]:
    """Points of the user's demanded file it holds after decoding."""
    u = topology.user_index[user]
    cached = _cached_matrix(placement, topology)[u : u + 1]
    files, points, _ = _term_arrays(plan, demands.n_files, placement.v)
    recovered, _, _ = kernels.decode_symbolic(
        cached, [demands.demand[u]], demands.n_files, files, points, backend=backend
    )
    return set(np.flatnonzero(recovered[0]).tolist())


def payload_trial(
    plan: TransmissionPlan,
    placement: Placement,
    topology: Topology,
    demands: DemandVector,
    seed: int = 0,
    backend: str | None = None,
) -> bool:
    rng = np.random.default_rng(seed)
    file_values = rng.integers(0, np.iinfo(np.uint64).max, size=(demands.n_files, placement.v),
                               dtype=np.uint64, endpoint=True)
    files, points, _ = _term_arrays(plan, demands.n_files, placement.v)
    gathered = file_values[np.maximum(files, 0), points]
    gathered[files < 0] = 0
    tx_values = np.bitwise_xor.reduce(gathered, axis=1) if len(gathered) else np.zeros(0, np.uint64)
    cached = _cached_matrix(placement, topology)
    ok = kernels.decode_payload(
        cached, demands.demand, demands.n_files, files, points, tx_values, file_values, backend=backend
    )
    return bool(ok.all())
