# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contracts as ``_kernels_py``."""

import numpy as np

from libc.stdint cimport int64_t, uint8_t, uint64_t


cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil


def intersection_counts(const uint8_t[:, ::1] incidence, const int64_t[:, ::1] combos):
    cdef Py_ssize_t n = combos.shape[0]
    cdef Py_ssize_t width = combos.shape[1]
    cdef Py_ssize_t b = incidence.shape[0]
    cdef Py_ssize_t v = incidence.shape[1]
    cdef Py_ssize_t words = (v + 63) // 64
    cdef Py_ssize_t c, j, w
    cdef uint64_t acc
    cdef int64_t count

    # rows packed into little-endian 64-bit words, zero padded
    padded = np.zeros((b, words * 64), dtype=np.uint8)
    padded[:, :v] = np.asarray(incidence)
    packed_arr = np.ascontiguousarray(np.packbits(padded, axis=1, bitorder="little").view("<u8"))
    cdef const uint64_t[:, ::1] packed = packed_arr

    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] res = out
    with nogil:
        for c in range(n):
            count = 0
            for w in range(words):
                acc = packed[combos[c, 0], w]
                for j in range(1, width):
                    acc &= packed[combos[c, j], w]
                count += popcount64(acc)
            res[c] = count
    return out


cdef inline bint _known(const uint8_t[:, ::1] cached, int64_t[::1] stamp,
                        Py_ssize_t u, int64_t f, int64_t p, Py_ssize_t v) noexcept nogil:
    return cached[u, p] or stamp[f * v + p] == u + 1


def decode_symbolic(const uint8_t[:, ::1] cached, const int64_t[::1] demands, Py_ssize_t n_files,
                    const int64_t[:, ::1] term_files, const int64_t[:, ::1] term_points):
    cdef Py_ssize_t n_users = cached.shape[0]
    cdef Py_ssize_t v = cached.shape[1]
    cdef Py_ssize_t n_tx = term_files.shape[0]
    cdef Py_ssize_t width = term_files.shape[1]
    cdef Py_ssize_t u, t, j, p, hit_j
    cdef int64_t f, want, n_unknown
    cdef bint changed

    recovered_arr = np.zeros((n_users, v), dtype=np.uint8)
    benefited_arr = np.zeros(n_tx, dtype=np.int64)
    duplicate_arr = np.zeros(n_users, dtype=np.uint8)
    # stamp[f*v + p] == u + 1 marks (f, p) as learned by user u; avoids a reset per user
    stamp_arr = np.zeros(n_files * v, dtype=np.int64)
    hit_arr = np.zeros(v, dtype=np.int64)
    cdef uint8_t[:, ::1] recovered = recovered_arr
    cdef int64_t[::1] benefited = benefited_arr
    cdef uint8_t[::1] duplicate = duplicate_arr
    cdef int64_t[::1] stamp = stamp_arr
    cdef int64_t[::1] hits = hit_arr

    with nogil:
        for u in range(n_users):
            want = demands[u]

            for t in range(n_tx):
                n_unknown = 0
                hit_j = -1
                for j in range(width):
                    f = term_files[t, j]
                    if f < 0:
                        continue
                    if not cached[u, term_points[t, j]]:
                        n_unknown += 1
                        hit_j = j
                if n_unknown == 1 and term_files[t, hit_j] == want:
                    benefited[t] += 1
                    p = term_points[t, hit_j]
                    if hits[p] == u + 1:
                        duplicate[u] = 1
                    hits[p] = u + 1

            changed = True
            while changed:
                changed = False
                for t in range(n_tx):
                    n_unknown = 0
                    hit_j = -1
                    for j in range(width):
                        f = term_files[t, j]
                        if f < 0:
                            continue
                        if not _known(cached, stamp, u, f, term_points[t, j], v):
                            n_unknown += 1
                            hit_j = j
                            if n_unknown > 1:
                                break
                    if n_unknown == 1:
                        stamp[term_files[t, hit_j] * v + term_points[t, hit_j]] = u + 1
                        changed = True

            for p in range(v):
                if cached[u, p] or stamp[want * v + p] == u + 1:
                    recovered[u, p] = 1
    return recovered_arr, benefited_arr, duplicate_arr


def decode_payload(const uint8_t[:, ::1] cached, const int64_t[::1] demands, Py_ssize_t n_files,
                   const int64_t[:, ::1] term_files, const int64_t[:, ::1] term_points,
                   const uint64_t[::1] tx_values, const uint64_t[:, ::1] file_values):
    cdef Py_ssize_t n_users = cached.shape[0]
    cdef Py_ssize_t v = cached.shape[1]
    cdef Py_ssize_t n_tx = term_files.shape[0]
    cdef Py_ssize_t width = term_files.shape[1]
    cdef Py_ssize_t u, t, j, p, hit_j
    cdef int64_t f, want, n_unknown
    cdef uint64_t acc
    cdef bint changed, good

    ok_arr = np.zeros(n_users, dtype=np.uint8)
    stamp_arr = np.zeros(n_files * v, dtype=np.int64)
    value_arr = np.zeros(n_files * v, dtype=np.uint64)
    cdef uint8_t[::1] ok = ok_arr
    cdef int64_t[::1] stamp = stamp_arr
    cdef uint64_t[::1] value = value_arr

    with nogil:
        for u in range(n_users):
            want = demands[u]
            changed = True
            while changed:
                changed = False
                for t in range(n_tx):
                    acc = tx_values[t]
                    n_unknown = 0
                    hit_j = -1
                    for j in range(width):
                        f = term_files[t, j]
                        if f < 0:
                            continue
                        p = term_points[t, j]
                        if cached[u, p]:
                            acc ^= file_values[f, p]
                        elif stamp[f * v + p] == u + 1:
                            acc ^= value[f * v + p]
                        else:
                            n_unknown += 1
                            hit_j = j
                    if n_unknown == 1:
                        p = term_points[t, hit_j]
                        f = term_files[t, hit_j]
                        stamp[f * v + p] = u + 1
                        value[f * v + p] = acc
                        changed = True

            good = True
            for p in range(v):
                if cached[u, p]:
                    continue
                if stamp[want * v + p] != u + 1 or value[want * v + p] != file_values[want, p]:
                    good = False
                    break
            ok[u] = good
    return ok_arr
