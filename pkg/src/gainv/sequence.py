"""The sequences h_n (invariants) and c_n in C = Q[s, t, u].

``c_n = sum_i C(n, i) h_{n-i} s^i`` and each ``h_n`` is a Q-combination of
``(-t1)^l u1^k`` with ``2l + 3k = n``, where ``t1 = t - s^2`` and
``u1 = u - 3st + 2s^3``.  The coefficients are fixed by requiring that the
"relevant" monomials ``s^i u^k`` (``i + 3k = n``, ``i + k > e(n)``) of
``c_n`` vanish, which forces ``deg c_n <= e(n) = floor(2n/3)``.  Indices
``n = 0 (mod 6)`` are solved jointly with ``n + 1``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .lfihd import HigherDerivation
from .linalg import SingularMatrixError, exact_det, exact_solve, inverse, matmul, matvec
from .polyring import QQ, Polynomial, Ring

__all__ = [
    "C_RING",
    "THETA_BAR",
    "e",
    "build_matrix",
    "StructuredMatrix",
    "SequenceEntry",
    "SequenceTable",
    "initial_table",
    "extend_sequence",
    "sequence_table",
    "verify_sequence",
    "SequenceError",
]

C_RING = Ring.make("stu", gradings={"w4": dict(s=1, t=2, u=3)})
THETA_BAR = HigherDerivation.from_strings(C_RING, QQ, {
    "s": "s + U",
    "t": "t + 2*s*U + U^2",
    "u": "u + 3*t*U + 3*s*U^2 + U^3",
})
S = C_RING.gen("s")
T1 = C_RING("t - s^2")
U1 = C_RING("u - 3*s*t + 2*s^3")


class SequenceError(AssertionError):
    """A step of the construction failed; this would contradict the theory."""


def e(n: int) -> int:
    return (2 * n) // 3


# ---------------------------------------------------------------------------
# structured matrices


def _entry(a: int, k: int) -> int:
    return comb(a, k) * 2 ** (a - k) if 0 <= k <= a else 0


@dataclass(frozen=True)
class StructuredMatrix:
    kind: str
    d: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def tolist(self):
        return [list(r) for r in self.rows]

    def det(self):
        return exact_det(self.rows)


def build_matrix(kind: str, d: int) -> StructuredMatrix:
    """Binomial matrices ``C(a, k) 2^(a-k)`` indexed by row k and column m'.

    M_e, L: a = 2m', (d+1) x (d+1).   M_o: a = 2m'+1, (d+1) x (d+1).
    M: a = 2m', d x (d+1).             N: a = 2m'+1, (d+1) x d.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    shapes = {
        "M_e": (d + 1, d + 1, 0),
        "L": (d + 1, d + 1, 0),
        "M_o": (d + 1, d + 1, 1),
        "M": (d, d + 1, 0),
        "N": (d + 1, d, 1),
    }
    if kind not in shapes:
        raise ValueError(f"unknown matrix kind {kind!r}")
    nr, nc, odd = shapes[kind]
    rows = tuple(tuple(_entry(2 * j + odd, k) for j in range(nc)) for k in range(nr))
    return StructuredMatrix(kind, d, rows)


# ---------------------------------------------------------------------------
# the table


@dataclass(frozen=True)
class SequenceEntry:
    n: int
    h: Polynomial
    c: Polynomial
    # coefficients of h in the basis (-t1)^l u1^k, as ((l, k), coefficient)
    basis: tuple[tuple[tuple[int, int], Fraction | int], ...] = ()

    @property
    def w4_degree(self) -> int | None:
        return self.c.weighted_degree("w4") if self.c else None

    @property
    def degree(self) -> int | None:
        return self.c.degree() if self.c else None

    @property
    def denominator_primes(self) -> set[int]:
        return self.h.denominator_primes()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "h": self.h.to_json(),
            "c": self.c.to_json(),
            "h_text": self.h.format(),
            "c_text": self.c.format(),
            "w4_degree": self.w4_degree,
            "degree": self.degree,
            "degree_bound": e(self.n),
            "denominator_primes": sorted(self.denominator_primes),
            "basis": [{"l": l, "k": k, "coeff": str(x)} for (l, k), x in self.basis],
        }


@dataclass(frozen=True)
class SequenceTable:
    entries: tuple[SequenceEntry, ...] = field(default=())

    @property
    def N(self) -> int:
        return len(self.entries) - 1

    def h(self, n: int) -> Polynomial:
        return self.entries[n].h

    def c(self, n: int) -> Polynomial:
        return self.entries[n].c

    def to_json(self) -> dict:
        return {"N": self.N, "entries": [en.to_json() for en in self.entries]}


def initial_table() -> SequenceTable:
    one = C_RING.one()
    return SequenceTable((
        SequenceEntry(0, one, one, (((0, 0), 1),)),
        SequenceEntry(1, C_RING.zero(), S, ()),
    ))


@functools.lru_cache(maxsize=None)
def _basis_poly(l: int, k: int) -> Polynomial:
    return (-T1) ** l * U1 ** k


@functools.lru_cache(maxsize=None)
def _s_pow(i: int) -> Polynomial:
    return S ** i


def _partial_sum(hs: list[Polynomial], n: int, start: int) -> Polynomial:
    acc = C_RING.zero()
    for i in range(start, n + 1):
        h = hs[n - i]
        if h:
            acc = acc + (h * _s_pow(i)).scale(comb(n, i))
    return acc


def _relevant(c: Polynomial, n: int, count: int) -> list:
    """Coefficients of s^(n-3k) u^k for k = 0..count-1."""
    return [Fraction(c.coeff((n - 3 * k, 0, k))) for k in range(count)]


def _assemble(coeffs, n: int, parity: int):
    h = C_RING.zero()
    basis = []
    for j, x in enumerate(coeffs):
        k = 2 * j + parity
        l = (n - 3 * k) // 2
        basis.append(((l, k), x))
        if x:
            h = h + _basis_poly(l, k).scale(x)
    return h, tuple(basis)


def _check_degree(c: Polynomial, n: int):
    if n >= 2 and c and c.degree() > e(n):
        raise SequenceError(f"deg c_{n} = {c.degree()} exceeds e({n}) = {e(n)}")


def _single_step(hs: list[Polynomial], n: int) -> SequenceEntry:
    """n = 2, 3, 4, 5 (mod 6): one square system."""
    d = (n - 1) // 6
    c = _partial_sum(hs, n, 1)
    alpha = _relevant(c, n, d + 1)
    A = build_matrix("M_o" if n % 2 else "M_e", d).rows
    try:
        x = exact_solve(A, alpha)
    except SingularMatrixError as exc:
        raise SequenceError(f"singular system at n={n}") from exc
    h, basis = _assemble(x, n, n % 2)
    h = -h
    basis = tuple((lk, -v) for lk, v in basis)
    c_n = c + h
    _check_degree(c_n, n)
    return SequenceEntry(n, h, c_n, basis)


def _joint_step(hs: list[Polynomial], n: int) -> tuple[SequenceEntry, SequenceEntry]:
    """n = 1 (mod 6), n >= 7: build h_{n-1} and h_n together."""
    d = (n - 1) // 6
    c_prev = _partial_sum(hs, n - 1, 1)          # all of c_{n-1} except h_{n-1}
    alpha = _relevant(c_prev, n - 1, d)
    c_rest = _partial_sum(hs + [C_RING.zero()], n, 2)  # c_n minus h_n + n h_{n-1} s
    beta = _relevant(c_rest, n, d + 1)
    M = build_matrix("M", d).rows
    N = build_matrix("N", d).rows
    L = build_matrix("L", d).rows
    try:
        Linv = inverse(L)
        MLinv = matmul(M, Linv)
        K = matmul(MLinv, N)
        rhs = [n * a - b for a, b in zip(alpha, matvec(MLinv, beta))]
        y = exact_solve(K, rhs)
    except SingularMatrixError as exc:
        raise SequenceError(f"singular joint system at n={n}") from exc
    Ny = matvec(N, y)
    x = [-v / n for v in matvec(Linv, [b + t for b, t in zip(beta, Ny)])]
    x = [v.numerator if v.denominator == 1 else v for v in map(Fraction, x)]
    y = [v.numerator if v.denominator == 1 else v for v in map(Fraction, y)]
    h_prev, basis_prev = _assemble(x, n - 1, 0)
    h_n, basis_n = _assemble(y, n, 1)
    c_prev_full = c_prev + h_prev
    _check_degree(c_prev_full, n - 1)
    hs2 = hs + [h_prev]
    c_n = _partial_sum(hs2, n, 1) + h_n
    _check_degree(c_n, n)
    return (SequenceEntry(n - 1, h_prev, c_prev_full, basis_prev),
            SequenceEntry(n, h_n, c_n, basis_n))


def extend_sequence(table: SequenceTable, up_to: int) -> SequenceTable:
    """A new table holding entries 0..up_to (the input is not modified)."""
    if up_to < 0:
        raise ValueError("up_to must be non-negative")
    if up_to <= table.N:
        return SequenceTable(table.entries[:up_to + 1])
    entries = list(table.entries)
    if len(entries) < 2:
        entries = list(initial_table().entries)
    # an entry n = 0 (mod 6) is only final once n + 1 has been solved with it
    if (len(entries) - 1) % 6 == 0 and len(entries) > 1:
        entries.pop()
    hs = [en.h for en in entries]
    while len(entries) - 1 < up_to:
        n = len(entries)
        if n % 6 == 0:
            pair = _joint_step(hs, n + 1)
            entries.extend(pair)
            hs.extend(p.h for p in pair)
        else:
            en = _single_step(hs, n)
            entries.append(en)
            hs.append(en.h)
    return SequenceTable(tuple(entries[:up_to + 1]))


@functools.lru_cache(maxsize=8)
def sequence_table(N: int) -> SequenceTable:
    return extend_sequence(initial_table(), N)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Report:
    items: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(it.passed for it in self.items)

    def failures(self) -> list[CheckResult]:
        return [it for it in self.items if not it.passed]

    def to_json(self):
        return {"passed": self.passed, "items": [it.to_json() for it in self.items]}


def verify_sequence(table: SequenceTable, primes=()) -> Report:
    items: list[CheckResult] = []
    N = table.N
    for n in range(N + 1):
        c_n, h_n = table.c(n), table.h(n)
        parts = THETA_BAR.components(c_n)
        bad = [k for k in range(n + 1) if parts.get(k, C_RING.zero()) != table.c(n - k).scale(comb(n, k))]
        bad += [k for k in parts if k > n]
        items.append(CheckResult(f"theta_bar^(k)(c_{n}) = C({n},k) c_{n}-k", not bad,
                                 f"fails for k in {bad}" if bad else ""))
        conv = _partial_sum([table.h(j) for j in range(n + 1)], n, 0)
        items.append(CheckResult(f"c_{n} = sum C({n},i) h_{n}-i s^i", conv == c_n))
        if n >= 2:
            deg = c_n.degree() if c_n else 0
            items.append(CheckResult(f"deg c_{n} <= {e(n)}", deg <= e(n), f"deg = {deg}"))
        homog = all(not p or p.weighted_degrees("w4") == {n} for p in (h_n, c_n))
        items.append(CheckResult(f"h_{n}, c_{n} w4-homogeneous of degree {n}", homog))
        items.append(CheckResult(f"h_{n} invariant", THETA_BAR.is_invariant(h_n)))
    for p in primes:
        if p > N:
            continue
        low = []
        for j in list(range(p - 1)) + [p]:
            h = table.h(j)
            if h and h.p_valuation(p) < 0:
                low.append(j)
        items.append(CheckResult(f"h_j in Z_({p}) for j <= {p - 2} and j = {p}", not low,
                                 f"pole at j in {low}" if low else ""))
        h = table.h(p - 1)
        v = h.p_valuation(p) if h else None
        items.append(CheckResult(f"h_{p - 1} in (1/{p}) Z_({p})", v is None or v >= -1,
                                 f"valuation {v}"))
    return Report(tuple(items))
