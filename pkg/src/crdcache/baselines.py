"""Closed-form metrics for the proposed scheme and the schemes it is compared with.

Every value is an exact ``Fraction`` or ``int``. Rows outside a formula's
stated regime are returned with ``applicable=False`` and a reason instead of
an extrapolated number.

Schemes covered (all with ``caches = q*m`` and ``M/N = 1/q`` in sweeps):

* ``man``: dedicated caches, one per user.
* ``hkd``: cyclic wrap-around multi-access, centralised rate.
* ``rk``: cyclic multi-access achievable rate ``K (1 - z M/N)**2``.
* ``spe``: cyclic multi-access for ``caches * M/N = 2``; subpacketization only.
* ``clwzc``: cyclic multi-access with the same rate as ``hkd`` for all ``z``.
* ``kmr_affine`` / ``kmr_hadamard``: the earlier CRD-based schemes.
* ``proposed``: the q-ary CRD scheme (see :func:`crdcache.scheme.scheme_params`).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import ceil, comb

from crdcache.errors import InvalidMemoryPointError, InvalidParamsError, NonIntegerResultError
from crdcache.scheme import scheme_params

SCHEMES = ("man", "proposed", "hkd", "rk", "spe", "clwzc", "kmr_affine", "kmr_hadamard")

CSV_COLUMNS = [
    "scheme", "caches", "M_over_N", "z", "K", "F", "R", "R_per_K", "gain", "applicable", "reason",
    "R_decimal", "R_per_K_decimal",
]


@dataclass(frozen=True)
class ComparisonRow:
    scheme: str
    caches: int
    file_fraction: Fraction
    z: int
    K: int | None = None
    F: int | None = None
    R: Fraction | None = None
    per_user_rate: Fraction | None = None
    gain: Fraction | None = None
    applicable: bool = True
    reason: str = ""

    def __post_init__(self):
        if not self.applicable and not self.reason:
            raise ValueError("non-applicable rows need a reason")
        if self.F is not None and self.F < 1:
            raise ValueError(f"subpacketization must be >= 1, got {self.F}")


def man_metrics(caches: int, file_fraction: Fraction) -> ComparisonRow:
    file_fraction = Fraction(file_fraction)
    if not 0 <= file_fraction <= 1:
        raise InvalidParamsError(f"M/N must lie in [0, 1], got {file_fraction}")
    K = caches
    t = K * file_fraction
    R = K * (1 - file_fraction) / (1 + t)
    row = dict(scheme="man", caches=caches, file_fraction=file_fraction, z=1, K=K,
               R=R, per_user_rate=R / K, gain=1 + t)
    if t.denominator != 1:
        return ComparisonRow(**row, applicable=False, reason="K*M/N is not an integer; subpacketization undefined")
    return ComparisonRow(**row, F=comb(K, int(t)))


def hkd_rate(K: int, z: int, file_fraction: Fraction) -> Fraction:
    file_fraction = Fraction(file_fraction)
    if K < 1 or z < 1:
        raise InvalidParamsError(f"need K >= 1 and z >= 1, got K={K}, z={z}")
    if file_fraction >= Fraction(1, z):
        return Fraction(0)
    return (K - K * z * file_fraction) / (1 + K * file_fraction)


def hkd_metrics(caches: int, z: int, file_fraction: Fraction) -> ComparisonRow:
    R = hkd_rate(caches, z, file_fraction)
    return ComparisonRow("hkd", caches, Fraction(file_fraction), z, K=caches, R=R, per_user_rate=R / caches,
                         reason="subpacketization not given in closed form")


def rk_metrics(caches: int, z: int, i: int) -> ComparisonRow:
    """Memory point ``M = i N / caches`` with ``0 <= i <= ceil(caches / z)``."""
    if z < 1 or caches < 1:
        raise InvalidParamsError(f"need caches >= 1 and z >= 1, got caches={caches}, z={z}")
    if not 0 <= i <= ceil(caches / z):
        raise InvalidMemoryPointError(f"i must lie in 0..{ceil(caches / z)}, got {i}")
    gamma = Fraction(i, caches)
    R = Fraction(0) if z * i >= caches else caches * (1 - z * gamma) ** 2
    row = dict(scheme="rk", caches=caches, file_fraction=gamma, z=z, K=caches, R=R, per_user_rate=R / caches)
    if i == 0:
        return ComparisonRow(**row, F=1)
    top = caches - i * z + i - 1
    F = Fraction(comb(top, i - 1) * caches, i) if top >= 0 else Fraction(0)
    if F.denominator != 1 or F < 1:
        return ComparisonRow(**row, applicable=False, reason=f"subpacketization formula gives {F}")
    return ComparisonRow(**row, F=int(F))


def spe_subpacketization(caches: int, z: int) -> int:
    F = Fraction(caches * (caches - 2 * z + 2), 4)
    if F.denominator != 1 or F < 1:
        raise NonIntegerResultError(f"C(C-2z+2)/4 = {F} for C={caches}, z={z}")
    return int(F)


def spe_metrics(caches: int, z: int, file_fraction: Fraction) -> ComparisonRow:
    file_fraction = Fraction(file_fraction)
    base = dict(scheme="spe", caches=caches, file_fraction=file_fraction, z=z, K=caches, applicable=False)
    if caches * file_fraction != 2:
        return ComparisonRow(**base, reason="scheme defined only for caches*M/N = 2")
    try:
        F = spe_subpacketization(caches, z)
    except NonIntegerResultError as exc:
        return ComparisonRow(**base, reason=str(exc))
    return ComparisonRow(**base, F=F, reason="rate not available in closed form")


def clwzc_metrics(q: int, m: int, z: int) -> ComparisonRow:
    if q < 1 or m < 1 or z < 1:
        raise InvalidParamsError(f"need q, m, z >= 1, got q={q}, m={m}, z={z}")
    K = q * m
    per_user = max(Fraction(0), (1 - Fraction(z, q)) / (1 + m))
    row = dict(scheme="clwzc", caches=K, file_fraction=Fraction(1, q), z=z, K=K,
               R=per_user * K, per_user_rate=per_user)
    # t = K M/N = m cached "slots", K' = K - t(z-1)
    k_prime = K - m * (z - 1)
    if k_prime < m:
        return ComparisonRow(**row, applicable=False, reason=f"K' = {k_prime} < t = {m}; subpacketization undefined")
    return ComparisonRow(**row, F=K * comb(k_prime, m))


def proposed_metrics(q: int, m: int, z: int) -> ComparisonRow:
    base = dict(scheme="proposed", caches=q * m, file_fraction=Fraction(1, q), z=z)
    if not 2 <= z <= m:
        return ComparisonRow(**base, applicable=False, reason=f"access degree must satisfy 2 <= z <= m = {m}")
    p = scheme_params(q, m, z)
    return ComparisonRow(**base, K=p.K, F=p.F, R=p.R, per_user_rate=p.per_user_rate, gain=Fraction(p.gain))


def access_gain(q: int, m: int, z: int) -> Fraction:
    """MaN per-user rate divided by the proposed per-user rate at equal caches and M/N."""
    if q < 2 or not 2 <= z <= m:
        raise InvalidParamsError(f"need q >= 2 and 2 <= z <= m, got q={q}, m={m}, z={z}")
    return Fraction(q, q - 1) ** (z - 1) * Fraction(2**z, 1 + m)


def is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True


def affine_class_count(q: int, mprime: int) -> int:
    """Parallel classes of the affine-geometry CRD: (q**m' - 1)/(q - 1)."""
    return (q**mprime - 1) // (q - 1)


def kmr_rows(kind: str, **params) -> tuple[ComparisonRow, ComparisonRow]:
    """(earlier CRD scheme, proposed scheme at matching caches and M/N, maximal z)."""
    if kind == "affine":
        q, mprime = params["q"], params["mprime"]
        if not is_prime_power(q) or mprime < 2:
            raise InvalidParamsError(f"affine CRD needs prime-power q and m' >= 2, got q={q}, m'={mprime}")
        m = affine_class_count(q, mprime)
        a, b = q**mprime - 1, q ** (mprime - 1) - 1
        prior = ComparisonRow(
            "kmr_affine", q * m, Fraction(1, q), 2,
            K=Fraction(q**3 * a * b, 2 * (q - 1) ** 2),
            F=q**mprime,
            R=Fraction(q * a * b, 8),
            per_user_rate=Fraction(q - 1, 2 * q) ** 2,
            gain=Fraction(4),
        )
        return _int_k(prior), proposed_metrics(q, m, m)
    if kind == "hadamard":
        n = params["n"]
        if n < 1:
            raise InvalidParamsError(f"Hadamard CRD needs n >= 1, got {n}")
        m = 4 * n - 1
        prior = ComparisonRow(
            "kmr_hadamard", 2 * m, Fraction(1, 2), 2,
            K=4 * (2 * n - 1) * m,
            F=4 * n,
            R=Fraction((2 * n - 1) * m, 4),
            per_user_rate=Fraction(1, 16),
            gain=Fraction(4),
        )
        return prior, proposed_metrics(2, m, m)
    raise InvalidParamsError(f"unknown KMR design family {kind!r}")


def _int_k(row: ComparisonRow) -> ComparisonRow:
    K = Fraction(row.K)
    if K.denominator != 1:
        raise NonIntegerResultError(f"user count {K} is not an integer")
    return ComparisonRow(**{**row.__dict__, "K": int(K)})


@dataclass
class SweepRequest:
    """Scheme list and parameter sweep.

    Points come from ``n`` (Hadamard comparison: q=2, m=4n-1), else ``m``,
    else ``mprime`` (affine comparison: m=(q**m'-1)/(q-1)). Without ``z`` the
    access degree defaults to ``m``.
    """

    schemes: list[str]
    q: list[int] = field(default_factory=lambda: [2])
    m: list[int] | None = None
    z: list[int] | None = None
    mprime: list[int] | None = None
    n: list[int] | None = None

    def points(self) -> list[tuple[int, int, int]]:
        if self.n:
            bases = [(2, 4 * n - 1) for n in self.n]
        elif self.m:
            bases = [(q, m) for q in self.q for m in self.m]
        elif self.mprime:
            bases = [(q, affine_class_count(q, mp)) for q in self.q for mp in self.mprime]
        else:
            raise InvalidParamsError("sweep needs one of m, mprime or n")
        return [(q, m, z) for q, m in bases for z in (self.z or [m])]


def _rows_for(scheme: str, req: SweepRequest) -> list[ComparisonRow]:
    if scheme == "kmr_affine":
        if not req.mprime:
            raise InvalidParamsError("kmr_affine needs an mprime sweep")
        rows = []
        for q in req.q:
            for mp in req.mprime:
                try:
                    rows.append(kmr_rows("affine", q=q, mprime=mp)[0])
                except InvalidParamsError as exc:
                    m = affine_class_count(q, mp) if q >= 2 else 0
                    rows.append(ComparisonRow("kmr_affine", q * m, Fraction(1, q), 2, applicable=False,
                                              reason=str(exc)))
        return rows
    if scheme == "kmr_hadamard":
        if not req.n:
            raise InvalidParamsError("kmr_hadamard needs an n sweep")
        return [kmr_rows("hadamard", n=n)[0] for n in req.n]

    rows = []
    seen = set()
    for q, m, z in req.points():
        if scheme == "man":
            if (q, m) in seen:
                continue
            seen.add((q, m))
            rows.append(man_metrics(q * m, Fraction(1, q)))
        elif scheme == "proposed":
            rows.append(proposed_metrics(q, m, z))
        elif scheme == "hkd":
            rows.append(hkd_metrics(q * m, z, Fraction(1, q)))
        elif scheme == "rk":
            try:
                rows.append(rk_metrics(q * m, z, m))
            except InvalidMemoryPointError as exc:
                rows.append(ComparisonRow("rk", q * m, Fraction(1, q), z, K=q * m, applicable=False,
                                          reason=str(exc)))
        elif scheme == "spe":
            rows.append(spe_metrics(q * m, z, Fraction(1, q)))
        elif scheme == "clwzc":
            rows.append(clwzc_metrics(q, m, z))
        else:
            raise InvalidParamsError(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    return rows


def comparison_table(request: SweepRequest) -> list[ComparisonRow]:
    rows = []
    for scheme in request.schemes:
        rows.extend(_rows_for(scheme, request))
    return rows


def _exact(x) -> str:
    if x is None:
        return ""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _decimal(x) -> str:
    if x is None:
        return ""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = 40
        return format(Decimal(x.numerator) / Decimal(x.denominator), ".12g")


def row_record(row: ComparisonRow) -> dict[str, str]:
    return {
        "scheme": row.scheme,
        "caches": str(row.caches),
        "M_over_N": _exact(row.file_fraction),
        "z": str(row.z),
        "K": _exact(row.K),
        "F": _exact(row.F),
        "R": _exact(row.R),
        "R_per_K": _exact(row.per_user_rate),
        "gain": _exact(row.gain),
        "applicable": "true" if row.applicable else "false",
        "reason": row.reason,
        "R_decimal": _decimal(row.R),
        "R_per_K_decimal": _decimal(row.per_user_rate),
    }


def to_csv(rows: list[ComparisonRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row_record(row))
    return buf.getvalue()
