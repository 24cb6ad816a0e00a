"""Exact sparse multivariate polynomials over Q and GF(p).

A :class:`Ring` is an ordered tuple of variable names, optional per-variable
Laurent flags and named integer gradings.  A :class:`Polynomial` is an
immutable map from exponent tuples to nonzero coefficients.  Coefficients are
plain Python numbers: ``int`` or :class:`fractions.Fraction` over Q (integral
values are always stored as ``int``), and ``int`` residues in ``[0, p)`` over
GF(p).
"""

from __future__ import annotations

import functools
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "PolyError",
    "StructuralError",
    "DomainError",
    "ValuationError",
    "ParseError",
    "Field",
    "QQ",
    "GF",
    "Ring",
    "Polynomial",
    "is_prime",
    "ord_p",
    "prime_factors",
]


class PolyError(Exception):
    pass


class StructuralError(PolyError, TypeError):
    """Operands live in different rings or over different fields."""


class DomainError(PolyError, ValueError):
    """An operation left its domain (negative exponent, zero polynomial, ...)."""


class ValuationError(DomainError):
    """A coefficient has a pole at p."""


class ParseError(PolyError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> set[int]:
    n = abs(n)
    out = set()
    f = 2
    while f * f <= n:
        while n % f == 0:
            out.add(f)
            n //= f
        f += 1
    if n > 1:
        out.add(n)
    return out


def ord_p(c, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    c = Fraction(c)
    if c == 0:
        raise DomainError("valuation of zero is undefined")
    v = 0
    num, den = c.numerator, c.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# coefficient fields


class Field:
    characteristic: int

    def coerce(self, c):
        raise NotImplementedError

    def norm(self, c):
        raise NotImplementedError

    def inverse(self, c):
        raise NotImplementedError

    def format_coeff(self, c) -> str:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


class _Rationals(Field):
    characteristic = 0

    def coerce(self, c):
        if isinstance(c, bool):
            c = int(c)
        if isinstance(c, int):
            return c
        if isinstance(c, (Fraction, str)):
            return self.norm(Fraction(c))
        raise StructuralError(f"cannot interpret {c!r} as a rational")

    def norm(self, c):
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    def inverse(self, c):
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.norm(Fraction(1) / c)

    def format_coeff(self, c) -> str:
        return str(c)

    def to_json(self):
        return "Q"

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return "QQ"


QQ = _Rationals()


class PrimeField(Field):
    __slots__ = ("p",)

    def __init__(self, p: int):
        self.p = p
        self.characteristic = p

    def coerce(self, c):
        if isinstance(c, bool):
            c = int(c)
        if isinstance(c, int):
            return c % self.p
        if isinstance(c, str):
            c = Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator % self.p == 0:
                raise ValuationError(f"{c} has a pole at p={self.p}")
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        raise StructuralError(f"cannot interpret {c!r} in GF({self.p})")

    def norm(self, c):
        return c % self.p

    def inverse(self, c):
        if c % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(c, -1, self.p)

    def format_coeff(self, c) -> str:
        return str(c)

    def to_json(self):
        return {"GF": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def __reduce__(self):
        return (GF, (self.p,))


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    """The prime field with ``p`` elements; ``p`` is checked by trial division."""
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"GF(p) needs a prime modulus, got {p!r}")
    return PrimeField(p)


def field_from_json(obj) -> Field:
    if obj == "Q":
        return QQ
    if isinstance(obj, dict) and set(obj) == {"GF"}:
        return GF(int(obj["GF"]))
    raise DomainError(f"unknown field {obj!r}")


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class Ring:
    """Ordered variables, Laurent flags and named gradings.

    ``gradings`` is a tuple of ``(name, weights)`` pairs, one weight per
    variable.  Use :meth:`make` for the friendlier dict-based spelling.
    """

    variables: tuple[str, ...]
    laurent: frozenset[str] = frozenset()
    gradings: tuple[tuple[str, tuple[int, ...]], ...] = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        vs = tuple(self.variables)
        object.__setattr__(self, "variables", vs)
        if len(set(vs)) != len(vs):
            raise StructuralError(f"duplicate variable names in {vs}")
        for v in vs:
            if not _VAR_RE.fullmatch(v):
                raise StructuralError(f"bad variable name {v!r}")
        object.__setattr__(self, "laurent", frozenset(self.laurent))
        if not self.laurent <= set(vs):
            raise StructuralError("Laurent flag on unknown variable")
        grads = tuple((g, tuple(w)) for g, w in self.gradings)
        for g, w in grads:
            if len(w) != len(vs):
                raise StructuralError(f"grading {g!r} must weight every variable")
        object.__setattr__(self, "gradings", grads)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(vs)})

    @classmethod
    def make(cls, variables: Iterable[str], *, laurent: Iterable[str] = (),
             gradings: Mapping[str, Mapping[str, int]] | None = None) -> Ring:
        variables = tuple(variables)
        grads = tuple(
            (g, tuple(w[v] for v in variables)) for g, w in (gradings or {}).items()
        )
        return cls(variables, frozenset(laurent), grads)

    def __len__(self):
        return len(self.variables)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"unknown variable {name!r} in ring {self.variables}") from None

    def weights(self, grading: str) -> tuple[int, ...]:
        for g, w in self.gradings:
            if g == grading:
                return w
        raise StructuralError(f"ring has no grading {grading!r}")

    def grading_names(self) -> tuple[str, ...]:
        return tuple(g for g, _ in self.gradings)

    def extend(self, names: Iterable[str], weights: Mapping[str, Mapping[str, int]] | None = None,
               laurent: Iterable[str] = ()) -> Ring:
        """Append variables; their weight is 0 in every grading unless given."""
        names = tuple(names)
        weights = weights or {}
        grads = tuple(
            (g, w + tuple(weights.get(g, {}).get(n, 0) for n in names))
            for g, w in self.gradings
        )
        return Ring(self.variables + names, self.laurent | set(laurent), grads)

    def drop(self, *names: str) -> Ring:
        keep = [i for i, v in enumerate(self.variables) if v not in names]
        return Ring(
            tuple(self.variables[i] for i in keep),
            self.laurent - set(names),
            tuple((g, tuple(w[i] for i in keep)) for g, w in self.gradings),
        )

    def with_laurent(self, *names: str) -> Ring:
        return Ring(self.variables, self.laurent | set(names), self.gradings)

    def without_laurent(self) -> Ring:
        return Ring(self.variables, frozenset(), self.gradings)

    def with_grading(self, name: str, weights: Mapping[str, int]) -> Ring:
        grads = tuple((g, w) for g, w in self.gradings if g != name)
        grads += ((name, tuple(weights[v] for v in self.variables)),)
        return Ring(self.variables, self.laurent, grads)

    def gen(self, name: str, fld: Field = QQ) -> Polynomial:
        e = [0] * len(self.variables)
        e[self.index(name)] = 1
        return Polynomial._raw(self, fld, {tuple(e): 1})

    def gens(self, fld: Field = QQ) -> tuple[Polynomial, ...]:
        return tuple(self.gen(v, fld) for v in self.variables)

    def zero(self, fld: Field = QQ) -> Polynomial:
        return Polynomial._raw(self, fld, {})

    def one(self, fld: Field = QQ) -> Polynomial:
        return self.constant(1, fld)

    def constant(self, c, fld: Field = QQ) -> Polynomial:
        c = fld.coerce(c)
        terms = {(0,) * len(self.variables): c} if c != 0 else {}
        return Polynomial._raw(self, fld, terms)

    def __call__(self, text: str, fld: Field = QQ) -> Polynomial:
        return Polynomial.parse(text, self, fld)


_VAR_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")

# packed-monomial layout for multiplication: 32 signed bits per variable
_BITS = 32
_OFF = 1 << (_BITS - 1)
_MASK = (1 << _BITS) - 1


def _packer(n: int):
    offsum = sum(_OFF << (_BITS * i) for i in range(n))

    def pack(e):
        k = 0
        for i, x in enumerate(e):
            k |= (x + _OFF) << (_BITS * i)
        return k

    def unpack(k):
        return tuple(((k >> (_BITS * i)) & _MASK) - _OFF for i in range(n))

    return pack, unpack, offsum


_PACKERS: dict[int, tuple] = {}


def _get_packer(n):
    try:
        return _PACKERS[n]
    except KeyError:
        _PACKERS[n] = _packer(n)
        return _PACKERS[n]


def _monomial_key(e):
    # ascending total degree; ties: larger exponent of the later variable first
    return (sum(e), tuple(-x for x in reversed(e)))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable sparse polynomial.

    Arithmetic operators accept another polynomial over the same ring and
    field, or a scalar (int, Fraction) that is coerced into the field.
    """

    __slots__ = ("ring", "field", "terms", "_hash")

    def __init__(self, ring: Ring, fld: Field, terms: Mapping | None = None):
        clean = {}
        n = len(ring)
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise StructuralError(f"exponent vector {e} does not fit ring {ring.variables}")
            c = fld.coerce(c)
            if c != 0:
                clean[e] = fld.norm(clean.get(e, 0) + c)
                if clean[e] == 0:
                    del clean[e]
        _check_exponents(ring, clean)
        self.ring = ring
        self.field = fld
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, fld, terms):
        self = object.__new__(cls)
        self.ring = ring
        self.field = fld
        self.terms = terms
        self._hash = None
        return self

    # -- basic protocol ----------------------------------------------------

    def __repr__(self):
        return f"Polynomial({self.format()!r}, {self.field!r}, {self.ring.variables})"

    def __str__(self):
        return self.format()

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.ring == other.ring and self.field == other.field
                    and self.terms == other.terms)
        if isinstance(other, (int, Fraction)):
            try:
                return self.terms == self.ring.constant(other, self.field).terms
            except PolyError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.field, frozenset(self.terms.items())))
        return self._hash

    def __reduce__(self):
        return (Polynomial, (self.ring, self.field, self.terms))

    # -- arithmetic ----------------------------------------------------------

    def _other(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise StructuralError(
                    f"ring mismatch: {self.ring.variables} vs {other.ring.variables}")
            if other.field != self.field:
                raise StructuralError(f"field mismatch: {self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other, self.field)
        raise StructuralError(f"cannot combine polynomial with {type(other).__name__}")

    def _combine(self, other, sign):
        other = self._other(other)
        norm = self.field.norm
        res = dict(self.terms)
        for e, c in other.terms.items():
            v = norm(res.get(e, 0) + sign * c)
            if v == 0:
                res.pop(e, None)
            else:
                res[e] = v
        return Polynomial._raw(self.ring, self.field, res)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __radd__(self, other):
        return self._combine(other, 1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        norm = self.field.norm
        return Polynomial._raw(self.ring, self.field,
                               {e: norm(-c) for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._other(other)
        return Polynomial._raw(self.ring, self.field,
                               _mul_terms(self.terms, other.terms, len(self.ring), self.field))

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c) -> Polynomial:
        c = self.field.coerce(c)
        if c == 0:
            return self.ring.zero(self.field)
        norm = self.field.norm
        return Polynomial._raw(self.ring, self.field,
                               {e: norm(v * c) for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("exponent must be a non-negative integer")
        result = self.ring.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a scalar or, exactly, by a single-term polynomial."""
        if isinstance(other, (int, Fraction)):
            return self.scale(self.field.inverse(self.field.coerce(other)))
        other = self._other(other)
        if len(other.terms) != 1:
            raise DomainError("only division by a monomial term is supported")
        (e, c), = other.terms.items()
        return self.divide_monomial(e).scale(self.field.inverse(c))

    def divide_monomial(self, exps) -> Polynomial:
        """Exact division by a monomial; raises if some term is not divisible."""
        if isinstance(exps, Mapping):
            exps = self._exps_from_map(exps)
        out = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            out[q] = c
        try:
            _check_exponents(self.ring, out)
        except DomainError:
            raise DomainError(f"monomial {self._mono_str(exps)} does not divide {self}") from None
        return Polynomial._raw(self.ring, self.field, out)

    def _exps_from_map(self, m: Mapping[str, int]):
        e = [0] * len(self.ring)
        for v, k in m.items():
            e[self.ring.index(v)] = k
        return tuple(e)

    # -- inspection -------------------------------------------------------------

    def coeff(self, monomial) -> object:
        """Coefficient of a monomial given as exponent tuple or ``{var: exp}``."""
        if isinstance(monomial, Mapping):
            monomial = self._exps_from_map(monomial)
        return self.terms.get(tuple(monomial), 0)

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; zero polynomial raises."""
        if not self.terms:
            raise DomainError("degree of the zero polynomial is undefined")
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.ring.index(var)
        return max(e[i] for e in self.terms)

    def min_degree(self, var: str) -> int:
        if not self.terms:
            raise DomainError("degree of the zero polynomial is undefined")
        i = self.ring.index(var)
        return min(e[i] for e in self.terms)

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(v for v, x in zip(self.ring.variables, e) if x)
        return used

    def coefficient(self, var: str, n: int) -> Polynomial:
        """The coefficient of ``var**n`` as a polynomial of the same ring."""
        i = self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] == n:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return Polynomial._raw(self.ring, self.field, out)

    def coefficients_in(self, var: str) -> dict[int, Polynomial]:
        i = self.ring.index(var)
        groups: dict[int, dict] = {}
        for e, c in self.terms.items():
            groups.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Polynomial._raw(self.ring, self.field, t) for k, t in sorted(groups.items())}

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def weighted_degree(self, grading: str) -> int:
        if not self.terms:
            raise DomainError("weighted degree of the zero polynomial is undefined")
        w = self.ring.weights(grading)
        return max(sum(map(operator.mul, w, e)) for e in self.terms)

    def weighted_degrees(self, grading: str) -> set[int]:
        w = self.ring.weights(grading)
        return {sum(map(operator.mul, w, e)) for e in self.terms}

    def is_homogeneous(self, grading: str) -> bool:
        return len(self.weighted_degrees(grading)) <= 1

    def homogenize(self, grading: str, target: int, var: str) -> Polynomial:
        """Multiply each term by ``var`` to reach weighted degree ``target``."""
        w = self.ring.weights(grading)
        i = self.ring.index(var)
        if w[i] != 1:
            raise DomainError(f"{var} must have weight 1 in grading {grading!r}")
        out = {}
        for e, c in self.terms.items():
            gap = target - sum(map(operator.mul, w, e))
            if gap < 0:
                raise DomainError(
                    f"term {self._mono_str(e)} exceeds target degree {target} in {grading}")
            e2 = list(e)
            e2[i] += gap
            out[tuple(e2)] = c
        _check_exponents(self.ring, out)
        return Polynomial._raw(self.ring, self.field, out)

    # -- change of ring -----------------------------------------------------------

    def embed(self, target: Ring) -> Polynomial:
        """Move into a ring by variable name; variables missing there must be absent."""
        if target == self.ring:
            return self
        src = self.ring.variables
        pos = []
        for i, v in enumerate(src):
            if v in target:
                pos.append((i, target.index(v)))
        kept = {i for i, _ in pos}
        n = len(target)
        out = {}
        for e, c in self.terms.items():
            for i, x in enumerate(e):
                if x and i not in kept:
                    raise DomainError(f"variable {src[i]!r} does not exist in target ring")
            e2 = [0] * n
            for i, j in pos:
                e2[j] = e[i]
            out[tuple(e2)] = c
        _check_exponents(target, out)
        return Polynomial._raw(target, self.field, out)

    def substitute(self, images: Mapping[str, Polynomial], target: Ring | None = None) -> Polynomial:
        """Ring-homomorphic image under ``var -> images[var]``.

        Every variable needs an image; all images share a ring (the target).
        Negative exponents of Laurent variables require a single-term image.
        """
        missing = [v for v in self.ring.variables if v not in images]
        if missing:
            raise DomainError(f"no image given for {missing}")
        imgs = [images[v] for v in self.ring.variables]
        if target is None:
            target = imgs[0].ring if imgs else self.ring
        fld = self.field
        for g in imgs:
            if g.ring != target:
                raise StructuralError("substitution images must share the target ring")
            if g.field != fld:
                raise StructuralError("substitution images must share the field")
        one = target.one(fld)
        if not self.terms:
            return target.zero(fld)
        powers: list[dict[int, Polynomial]] = [{0: one} for _ in imgs]

        def power(i, k):
            cache = powers[i]
            if k in cache:
                return cache[k]
            if k < 0:
                g = imgs[i]
                if len(g.terms) != 1:
                    raise DomainError(
                        f"negative power of {self.ring.variables[i]} needs a monomial image")
                (e, c), = g.terms.items()
                inv = Polynomial._raw(target, fld, {tuple(-x for x in e): fld.inverse(c)})
                _check_exponents(target, inv.terms)
                r = inv ** (-k)
            elif k - 1 in cache:
                r = cache[k - 1] * imgs[i]
            else:
                r = imgs[i] ** k
            cache[k] = r
            return r

        n = len(self.ring)

        def rec(terms, i):
            if i == n:
                # grouping on every variable leaves exactly one term here
                return target.constant(terms[0][1], fld)
            groups: dict[int, list] = {}
            for e, c in terms:
                groups.setdefault(e[i], []).append((e, c))
            acc = None
            for k, sub in groups.items():
                part = rec(sub, i + 1)
                if k:
                    part = part * power(i, k)
                acc = part if acc is None else acc + part
            return acc

        return rec(list(self.terms.items()), 0)

    def subs(self, **images) -> Polynomial:
        """Substitute some variables inside the same ring; others stay fixed."""
        full = {}
        for v in self.ring.variables:
            g = images.get(v)
            if g is None:
                full[v] = self.ring.gen(v, self.field)
            elif isinstance(g, Polynomial):
                full[v] = g
            else:
                full[v] = self.ring.constant(g, self.field)
        return self.substitute(full, self.ring)

    # -- p-adic helpers -------------------------------------------------------------

    def p_valuation(self, p: int) -> int:
        if self.field is not QQ:
            raise StructuralError("p-adic valuation needs a polynomial over Q")
        if not self.terms:
            raise DomainError("valuation of the zero polynomial is undefined")
        return min(ord_p(c, p) for c in self.terms.values())

    def reduce_mod_p(self, p: int) -> Polynomial:
        if self.field is not QQ:
            raise StructuralError("reduce_mod_p needs a polynomial over Q")
        F = GF(p)
        out = {}
        for e, c in self.terms.items():
            if isinstance(c, Fraction) and c.denominator % p == 0:
                raise ValuationError(
                    f"coefficient {c} of {self._mono_str(e)} has a pole at p={p}")
            r = F.coerce(c)
            if r:
                out[e] = r
        return Polynomial._raw(self.ring, F, out)

    def denominator_primes(self) -> set[int]:
        out = set()
        for c in self.terms.values():
            if isinstance(c, Fraction):
                out |= prime_factors(c.denominator)
        return out

    def content_denominator(self) -> int:
        from math import lcm
        d = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                d = lcm(d, c.denominator)
        return d

    # -- text -------------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _monomial_key(t[0]))

    def _mono_str(self, e) -> str:
        parts = []
        for v, x in zip(self.ring.variables, e):
            if x == 1:
                parts.append(v)
            elif x:
                parts.append(f"{v}^{x}")
        return "*".join(parts) or "1"

    def format(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            neg = self.field is QQ and c < 0
            mag = -c if neg else c
            mono = self._mono_str(e)
            if mono == "1":
                body = self.field.format_coeff(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{self.field.format_coeff(mag)}*{mono}"
            if idx == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    @classmethod
    def parse(cls, text: str, ring: Ring, fld: Field = QQ) -> Polynomial:
        return _Parser(text, ring, fld).parse()

    # -- json -------------------------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for e, c in self.sorted_terms():
            terms.append({
                "c": str(c),
                "m": {v: x for v, x in zip(self.ring.variables, e) if x},
            })
        return {"ring": list(self.ring.variables), "field": self.field.to_json(), "terms": terms}

    @classmethod
    def from_json(cls, obj: Mapping, ring: Ring | None = None) -> Polynomial:
        try:
            names = list(obj["ring"])
            fld = field_from_json(obj["field"])
            raw_terms = obj["terms"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed polynomial JSON: {exc}") from None
        if ring is None:
            neg = set()
            for t in raw_terms:
                neg |= {v for v, x in t.get("m", {}).items() if int(x) < 0}
            ring = Ring(tuple(names), frozenset(neg))
        elif list(ring.variables) != names:
            raise StructuralError(f"JSON ring {names} does not match {ring.variables}")
        terms = {}
        for t in raw_terms:
            e = [0] * len(ring)
            for v, x in t["m"].items():
                e[ring.index(v)] = int(x)
            c = _parse_coeff_text(str(t["c"]))
            e = tuple(e)
            if e in terms:
                raise DomainError(f"duplicate monomial {e} in JSON terms")
            terms[e] = c
        return cls(ring, fld, terms)


def _parse_coeff_text(s: str):
    m = re.fullmatch(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*", s)
    if not m:
        raise DomainError(f"malformed coefficient {s!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise DomainError(f"zero denominator in {s!r}")
    return Fraction(num, den)


def _check_exponents(ring: Ring, terms) -> None:
    if not terms:
        return
    n = len(ring)
    lo = [0] * n
    for e in terms:
        for i, x in enumerate(e):
            if x < lo[i]:
                lo[i] = x
    for i, x in enumerate(lo):
        if x < 0 and ring.variables[i] not in ring.laurent:
            raise DomainError(
                f"negative exponent {x} on non-Laurent variable {ring.variables[i]!r}")


def _mul_terms(a: dict, b: dict, n: int, fld: Field) -> dict:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    pack, unpack, offsum = _get_packer(n)
    pb = [(pack(e) - offsum, c) for e, c in b.items()]
    acc: dict[int, object] = {}
    get = acc.get
    for e, ca in a.items():
        ka = pack(e)
        for kb, cb in pb:
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    norm = fld.norm
    out = {}
    for k, c in acc.items():
        c = norm(c)
        if c != 0:
            out[unpack(k)] = c
    return out


# ---------------------------------------------------------------------------
# parser


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*/^]))")


class _Parser:
    def __init__(self, text: str, ring: Ring, fld: Field):
        self.text = text
        self.ring = ring
        self.field = fld
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        toks = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN_RE.match(text, i)
            if not m or m.end() == i:
                raise ParseError(f"unexpected character {text[i]!r}", i)
            kind = m.lastgroup
            start = m.start(kind)
            toks.append((kind, m.group(kind), start))
            i = m.end()
        toks.append(("end", "", len(text)))
        return toks

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want}, got {got!r}", tok[2])
        return tok

    def parse(self) -> Polynomial:
        n = len(self.ring)
        terms: dict = {}
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        while True:
            e, c = self.term()
            terms[e] = terms.get(e, 0) + sign * c
            tok = self.peek()
            if tok[0] == "end":
                break
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                sign = 1 if tok[1] == "+" else -1
                continue
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        assert all(len(e) == n for e in terms)
        return Polynomial(self.ring, self.field, terms)

    def term(self):
        tok = self.peek()
        coeff = 1
        exps = [0] * len(self.ring)
        if tok[0] == "num":
            coeff = self.coeff()
            if self.peek()[:2] != ("op", "*"):
                return tuple(exps), coeff
            self.take()
        self.factor(exps)
        while self.peek()[:2] == ("op", "*"):
            self.take()
            self.factor(exps)
        return tuple(exps), coeff

    def coeff(self):
        num = int(self.take()[1])
        if self.peek()[:2] == ("op", "/"):
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise ParseError("malformed rational: expected denominator", tok[2])
            den = int(self.take()[1])
            if den == 0:
                raise ParseError("malformed rational: zero denominator", tok[2])
            return Fraction(num, den)
        return num

    def factor(self, exps):
        tok = self.peek()
        if tok[0] != "var":
            got = tok[1] or "end of input"
            raise ParseError(f"expected variable, got {got!r}", tok[2])
        self.take()
        if tok[1] not in self.ring:
            raise ParseError(f"unknown variable {tok[1]!r}", tok[2])
        i = self.ring.index(tok[1])
        k = 1
        if self.peek()[:2] == ("op", "^"):
            self.take()
            neg = False
            if self.peek()[:2] == ("op", "-"):
                # signed exponents only make sense for Laurent variables
                neg = True
                self.take()
            num = self.expect("num")
            k = -int(num[1]) if neg else int(num[1])
        exps[i] += k
