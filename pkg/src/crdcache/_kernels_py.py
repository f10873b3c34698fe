"""Pure-Python kernels.

Reference implementation of the hot loops, used when the compiled extension is
unavailable and as the comparison baseline in the benchmark. Signatures and
return types match ``_kernels.pyx`` exactly.
"""

import numpy as np


def intersection_counts(incidence, combos):
    """Size of the common intersection of each row of block indices in ``combos``."""
    masks = [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in incidence]
    out = np.zeros(len(combos), dtype=np.int64)
    for c, row in enumerate(combos.tolist()):
        acc = masks[row[0]]
        for j in row[1:]:
            acc &= masks[j]
        out[c] = acc.bit_count()
    return out


def _terms(term_files, term_points):
    # padding slots carry file index -1
    return [
        [(f, p) for f, p in zip(fs, ps) if f >= 0]
        for fs, ps in zip(term_files.tolist(), term_points.tolist())
    ]


def decode_symbolic(cached, demands, n_files, term_files, term_points):
    """Single-unknown cancellation decoder.

    Returns ``(recovered, benefited, duplicate)``: ``recovered[u, p]`` marks
    point ``p`` of user ``u``'s demanded file as known at the fixpoint;
    ``benefited[t]`` counts users that get a demanded subfile from transmission
    ``t`` using cache contents alone; ``duplicate[u]`` is set when two
    transmissions would both hand user ``u`` the same demanded subfile.
    """
    n_users, v = cached.shape
    txs = _terms(term_files, term_points)
    recovered = np.zeros((n_users, v), dtype=np.uint8)
    benefited = np.zeros(len(txs), dtype=np.int64)
    duplicate = np.zeros(n_users, dtype=np.uint8)

    for u in range(n_users):
        have = set(np.flatnonzero(cached[u]).tolist())
        want = int(demands[u])

        hits = set()
        for t, terms in enumerate(txs):
            unknown = [ft for ft in terms if ft[1] not in have]
            if len(unknown) == 1 and unknown[0][0] == want:
                benefited[t] += 1
                if unknown[0][1] in hits:
                    duplicate[u] = 1
                hits.add(unknown[0][1])

        learned = set()
        changed = True
        while changed:
            changed = False
            for terms in txs:
                unknown = [ft for ft in terms if ft[1] not in have and ft not in learned]
                if len(unknown) == 1:
                    learned.add(unknown[0])
                    changed = True

        for p in range(v):
            if p in have or (want, p) in learned:
                recovered[u, p] = 1
    return recovered, benefited, duplicate


def decode_payload(cached, demands, n_files, term_files, term_points, tx_values, file_values):
    """Replay decoding with real XOR arithmetic on 64-bit subfile payloads.

    Returns a uint8 flag per user: 1 iff every subfile of the demanded file is
    recovered and bit-identical to ``file_values``.
    """
    n_users, v = cached.shape
    txs = _terms(term_files, term_points)
    payload = tx_values.tolist()
    truth = file_values.tolist()
    ok = np.zeros(n_users, dtype=np.uint8)

    for u in range(n_users):
        have = set(np.flatnonzero(cached[u]).tolist())
        want = int(demands[u])
        learned = {}
        changed = True
        while changed:
            changed = False
            for t, terms in enumerate(txs):
                acc = payload[t]
                unknown = None
                n_unknown = 0
                for f, p in terms:
                    if p in have:
                        acc ^= truth[f][p]
                    elif (f, p) in learned:
                        acc ^= learned[(f, p)]
                    else:
                        n_unknown += 1
                        unknown = (f, p)
                if n_unknown == 1:
                    learned[unknown] = acc
                    changed = True

        row = truth[want]
        good = True
        for p in range(v):
            if p in have:
                continue
            if learned.get((want, p)) != row[p]:
                good = False
                break
        ok[u] = good
    return ok
