"""Finite commutative rings, integer polynomials, and fraction fields."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from .errors import CapacityError, MalformedInputError, NotADomainError, PreconditionError
from .report import Finding, Report

RING_CAP = 8
GENERATOR_CAP = 2


@dataclass(frozen=True)
class FinRing:
    elements: tuple
    add_table: Mapping[tuple, object]
    mul_table: Mapping[tuple, object]
    zero: object
    one: object
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "add_table", MappingProxyType(dict(self.add_table)))
        object.__setattr__(self, "mul_table", MappingProxyType(dict(self.mul_table)))

    def add(self, a, b):
        return self.add_table[(a, b)]

    def mul(self, a, b):
        return self.mul_table[(a, b)]

    def neg(self, a):
        for b in self.elements:
            if self.add(a, b) == self.zero:
                return b
        raise MalformedInputError(f"{a!r} has no additive inverse in {self.name}")

    def times(self, n: int, a):
        """``n·a`` by double-and-add; negative ``n`` goes through the inverse."""
        if n < 0:
            return self.times(-n, self.neg(a))
        acc, base = self.zero, a
        while n:
            if n & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            n >>= 1
        return acc

    def power(self, a, k: int):
        acc = self.one
        for _ in range(k):
            acc = self.mul(acc, a)
        return acc

    def __len__(self):
        return len(self.elements)


def zmod(n: int) -> FinRing:
    if n < 1:
        raise PreconditionError("modulus must be positive")
    els = tuple(range(n))
    return FinRing(
        els,
        {(a, b): (a + b) % n for a in els for b in els},
        {(a, b): (a * b) % n for a in els for b in els},
        0,
        1 % n,
        f"Z/{n}",
    )


def from_tables(elements: Sequence, add: Sequence[Sequence], mul: Sequence[Sequence], zero, one, name="") -> FinRing:
    """Ring from Cayley tables given as row-major matrices over ``elements``."""
    els = tuple(elements)
    n = len(els)
    if len(add) != n or len(mul) != n or any(len(r) != n for r in (*add, *mul)):
        raise MalformedInputError("ring tables must be square over the element list")
    idx = set(els)
    for r in (*add, *mul):
        for v in r:
            if v not in idx:
                raise MalformedInputError(f"ring table entry {v!r} is not an element")
    if zero not in idx or one not in idx:
        raise MalformedInputError("zero and one must be elements")
    return FinRing(
        els,
        {(els[i], els[j]): add[i][j] for i in range(n) for j in range(n)},
        {(els[i], els[j]): mul[i][j] for i in range(n) for j in range(n)},
        zero,
        one,
        name,
    )


def validate_ring(r: FinRing) -> Report:
    """Commutative ring axioms, checked on every pair and triple."""
    out = []
    els = r.elements
    for a in els:
        if r.add(a, r.zero) != a:
            out.append(Finding("additive-identity", f"{a} + 0 ≠ {a}", (a,)))
        if r.mul(a, r.one) != a:
            out.append(Finding("multiplicative-identity", f"{a}·1 ≠ {a}", (a,)))
        if not any(r.add(a, b) == r.zero for b in els):
            out.append(Finding("additive-inverse", f"{a} has no additive inverse", (a,)))
        for b in els:
            if r.add(a, b) != r.add(b, a):
                out.append(Finding("additive-commutativity", f"{a} + {b} ≠ {b} + {a}", (a, b)))
            if r.mul(a, b) != r.mul(b, a):
                out.append(Finding("commutativity", f"{a}·{b} ≠ {b}·{a}", (a, b)))
            for c in els:
                if r.add(r.add(a, b), c) != r.add(a, r.add(b, c)):
                    out.append(Finding("additive-associativity", f"({a}+{b})+{c}", (a, b, c)))
                if r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c)):
                    out.append(Finding("associativity", f"({a}·{b})·{c}", (a, b, c)))
                if r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c)):
                    out.append(Finding("distributivity", f"{a}·({b}+{c})", (a, b, c)))
    return Report(r.name or "ring", tuple(out))


def zero_divisors(r: FinRing):
    for a in r.elements:
        if a == r.zero:
            continue
        for b in r.elements:
            if b != r.zero and r.mul(a, b) == r.zero:
                return (a, b)
    return None


# --- integer polynomials --------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Element of ℤ[S] in canonical form.

    ``terms`` is a sorted tuple of ``(monomial, coefficient)`` with nonzero
    coefficients; a monomial is a sorted tuple of ``(generator, exponent)``.
    """

    terms: tuple = ()

    @classmethod
    def from_dict(cls, d: Mapping) -> "Poly":
        clean = {}
        for mono, c in d.items():
            mono = _norm_mono(mono)
            clean[mono] = clean.get(mono, 0) + int(c)
        return cls(tuple(sorted((m, c) for m, c in clean.items() if c != 0)))

    @classmethod
    def const(cls, n: int) -> "Poly":
        return cls.from_dict({(): n})

    @classmethod
    def gen(cls, x: str) -> "Poly":
        return cls.from_dict({((x, 1),): 1})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def generators(self) -> set:
        return {g for m, _c in self.terms for g, _e in m}

    def __add__(self, other):
        other = _lift(other)
        d = self.as_dict()
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return Poly.from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-_lift(other))

    def __mul__(self, other):
        other = _lift(other)
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return Poly.from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        acc = Poly.const(1)
        for _ in range(k):
            acc = acc * self
        return acc

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            mono = "·".join(g if e == 1 else f"{g}^{e}" for g, e in m)
            parts.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
        return " + ".join(parts)


def _norm_mono(mono) -> tuple:
    exps: dict = {}
    for g, e in mono:
        if e < 0:
            raise MalformedInputError("negative exponent in polynomial")
        if e:
            exps[g] = exps.get(g, 0) + e
    return tuple(sorted(exps.items()))


def _mono_mul(a, b):
    return _norm_mono(a + b)


def _lift(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly.const(x)
    raise TypeError(f"cannot treat {x!r} as a polynomial")


def free_ring_hom(generator_images: Mapping[str, object], target: FinRing) -> Callable[[Poly], object]:
    """The unique ring map ℤ[S] → target extending the given generator images."""
    images = dict(generator_images)
    for g, v in images.items():
        if v not in set(target.elements):
            raise MalformedInputError(f"image of {g} is not an element of {target.name}")

    def evaluate(p: Poly):
        acc = target.zero
        for mono, c in p.terms:
            term = target.one
            for g, e in mono:
                if g not in images:
                    raise MalformedInputError(f"unknown generator {g!r}")
                term = target.mul(term, target.power(images[g], e))
            acc = target.add(acc, target.times(c, term))
        return acc

    return evaluate


def _monomial_basis(gens: Sequence[str], degree: int = 2) -> list[tuple]:
    basis = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(sorted(gens), d):
            basis.append(_norm_mono(tuple((g, 1) for g in combo)))
    return basis


def _sample_polys(gens: Sequence[str]) -> list[Poly]:
    basis = _monomial_basis(gens, 2)
    polys = [Poly.from_dict({m: 1}) for m in basis]
    polys += [Poly.from_dict({m: c}) for m in basis[:3] for c in (-1, 2, 3)]
    polys.append(Poly.from_dict({m: i + 1 for i, m in enumerate(basis)}))
    return polys


def brute_force_hom_count(gens: Sequence[str], target: FinRing) -> int:
    """Count maps on the degree-≤2 monomial basis that fix 1 and are multiplicative.

    This ignores the generator-assignment construction entirely.
    """
    basis = _monomial_basis(gens, 2)
    pos = {m: i for i, m in enumerate(basis)}
    # products of basis elements that stay inside the basis
    rules = []
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            ab = _mono_mul(a, b)
            if ab in pos:
                rules.append((i, j, pos[ab]))
    count = 0
    for values in itertools.product(target.elements, repeat=len(basis)):
        if values[pos[()]] != target.one:
            continue
        if all(target.mul(values[i], values[j]) == values[k] for i, j, k in rules):
            count += 1
    return count


def check_free_ring_universal(generators: Iterable[str], target: FinRing) -> Report:
    """Assignments S → |R| correspond bijectively to ring maps ℤ[S] → R."""
    gens = sorted(set(generators))
    if len(gens) > GENERATOR_CAP or len(target) > RING_CAP:
        raise CapacityError(
            f"free-ring check limited to {GENERATOR_CAP} generators and rings of size {RING_CAP}"
        )
    out = []
    samples = _sample_polys(gens)
    homs = {}
    for values in itertools.product(target.elements, repeat=len(gens)):
        assignment = dict(zip(gens, values))
        ev = free_ring_hom(assignment, target)
        if ev(Poly.const(1)) != target.one:
            out.append(Finding("unital", f"assignment {assignment} does not send 1 to 1", (values,)))
        for p, q in itertools.product(samples, repeat=2):
            if ev(p + q) != target.add(ev(p), ev(q)) or ev(p * q) != target.mul(ev(p), ev(q)):
                out.append(Finding("homomorphism", f"assignment {assignment} fails on ({p}, {q})", (values,)))
                break
        # separate homs by their values on generators
        signature = tuple(ev(Poly.gen(g)) for g in gens)
        if signature in homs:
            out.append(Finding("injectivity", f"assignments {homs[signature]} and {values} give the same map", (values,)))
        homs[signature] = values
    expected = len(target) ** len(gens)
    brute = brute_force_hom_count(gens, target)
    if len(homs) != expected:
        out.append(Finding("count", f"{len(homs)} maps from assignments, expected {expected}", ()))
    if brute != expected:
        out.append(Finding("count", f"brute-force enumeration finds {brute} maps, expected {expected}", ()))
    return Report(
        f"free ring on {{{', '.join(gens)}}} → {target.name}",
        tuple(out),
        {"homs": len(homs), "brute_force": brute, "expected": expected},
    )


# --- fields ----------------------------------------------------------------


class RationalField:
    """ℚ with exact arithmetic on :class:`fractions.Fraction`."""

    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return 1 / Fraction(a)

    def embed(self, n: int) -> Fraction:
        return Fraction(n)

    def element(self, num: int, den: int = 1) -> Fraction:
        return Fraction(num, den)


class FiniteField:
    """A finite integral domain viewed as a field."""

    def __init__(self, ring: FinRing):
        self.ring = ring
        self.name = ring.name
        self.zero = ring.zero
        self.one = ring.one

    def add(self, a, b):
        return self.ring.add(a, b)

    def mul(self, a, b):
        return self.ring.mul(a, b)

    def neg(self, a):
        return self.ring.neg(a)

    def inv(self, a):
        for b in self.ring.elements:
            if self.ring.mul(a, b) == self.one:
                return b
        raise ZeroDivisionError(f"{a!r} has no inverse in {self.name}")

    def embed(self, n: int):
        return self.ring.times(n, self.one)


@dataclass(frozen=True)
class FractionField:
    field: object
    embedding: Callable


def fraction_field(domain) -> FractionField:
    """ℤ (``"Z"``) gives ℚ with ``n ↦ n/1``; a finite domain is already a field."""
    if domain in ("Z", "ℤ", int):
        q = RationalField()
        return FractionField(q, q.embed)
    if isinstance(domain, FinRing):
        if len(domain) < 2 or domain.zero == domain.one:
            raise NotADomainError(f"{domain.name} is the zero ring", None)
        w = zero_divisors(domain)
        if w is not None:
            raise NotADomainError(f"{domain.name} has zero divisors {w[0]}·{w[1]} = 0", w)
        return FractionField(FiniteField(domain), lambda x: x)
    raise PreconditionError(f"no fraction-field construction for {domain!r}")


def _sample_rationals(bound: int) -> list[Fraction]:
    out = []
    for b in range(1, bound + 1):
        for a in range(-bound, bound + 1):
            out.append(Fraction(a, b))
    return sorted(set(out))


def canonical_extension(hom: Callable[[int], object], field) -> Callable[[Fraction], object]:
    """``a/b ↦ hom(a)·hom(b)⁻¹``."""

    def ext(q):
        q = Fraction(q)
        return field.mul(hom(q.numerator), field.inv(hom(q.denominator)))

    return ext


def check_frac_extension(hom: Callable[[int], object], field, alternative=None, bound: int = 6) -> Report:
    """Extend an injective ``hom: ℤ → field`` to ℚ and test the extension.

    ``alternative`` is another map ℚ → field proposed as an extension; any
    point where it disagrees with the canonical one while agreeing on ℤ is a
    uniqueness violation.
    """
    ints = sorted(range(-4 * bound, 4 * bound + 1), key=lambda n: (abs(n), n < 0))
    seen = {}
    for n in ints:
        v = hom(n)
        if v in seen:
            raise PreconditionError(f"hom is not injective: {seen[v]} and {n} both map to {v!r}")
        seen[v] = n
    ext = canonical_extension(hom, field)
    out = []
    qs = _sample_rationals(bound)
    for n in range(-bound, bound + 1):
        if ext(Fraction(n)) != hom(n):
            out.append(Finding("restriction", f"extension disagrees with hom at {n}", (n,)))
    if ext(Fraction(1)) != field.one:
        out.append(Finding("unital", "extension does not preserve 1", ()))
    for p, q in itertools.product(qs[:: max(1, len(qs) // 25)], repeat=2):
        if ext(p + q) != field.add(ext(p), ext(q)) or ext(p * q) != field.mul(ext(p), ext(q)):
            out.append(Finding("homomorphism", f"extension not additive/multiplicative at ({p}, {q})", (str(p), str(q))))
    if alternative is not None:
        if all(alternative(Fraction(n)) == hom(n) for n in range(-bound, bound + 1)):
            for q in qs:
                if alternative(q) != ext(q):
                    out.append(
                        Finding(
                            "non-unique-extension",
                            f"alternative extension agrees on ℤ but sends {q} to {alternative(q)}, not {ext(q)}",
                            (str(q),),
                        )
                    )
                    break
        else:
            out.append(Finding("not-an-extension", "alternative map does not restrict to hom on ℤ", (), "info"))
    return Report(f"fraction-field extension into {getattr(field, 'name', 'field')}", tuple(out))
