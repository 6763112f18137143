"""Built-in group families and their canonical element forms.

Canonical forms: integer vectors for Z^n, freely reduced words for free
groups, integer triples (p, q, r) for the Heisenberg group under
(p,q,r)*(p',q',r') = (p+p', q+q', r+r'+p*q'), and shortlex-minimal normal
form words for rewriting-defined groups.  Two canonical forms are equal
iff the group elements are equal.
"""
from __future__ import annotations

import os

from .errors import InputError
from .rewriting import RewritingSystem, parse_group_file
from .words import Alphabet, Word, free_reduce, invert

Element = tuple


class Group:
    """A group family instance: alphabet plus generator actions."""

    name: str
    alphabet: Alphabet

    def identity(self) -> Element:
        raise NotImplementedError

    def apply(self, e: Element, gen_id: int) -> Element:
        """Right multiplication by one generator."""
        raise NotImplementedError

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inverse(self, e: Element) -> Element:
        raise NotImplementedError

    def evaluate(self, w: Word) -> Element:
        self.alphabet.check_word(w)
        e = self.identity()
        for g in w:
            e = self.apply(e, g)
        return e

    def exact_norm(self, e: Element) -> int | None:
        """Exact word norm when the family has a closed form, else None."""
        return None

    def geodesic_word(self, e: Element) -> Word | None:
        """A geodesic word for e when the family has a closed form."""
        return None

    def format_element(self, e: Element) -> str:
        return repr(e)


class ZnGroup(Group):
    """Z^n with an arbitrary finite symmetric generating set of vectors."""

    def __init__(self, name: str, gens: list[tuple[str, tuple[int, ...]]]):
        self.name = name
        dims = {len(v) for _, v in gens}
        if len(dims) != 1:
            raise InputError("generating vectors must share a dimension")
        self.dim = dims.pop()
        self.alphabet = Alphabet.with_inverses([lab for lab, _ in gens])
        self._vectors: list[tuple[int, ...]] = []
        for _, v in gens:
            self._vectors.append(tuple(v))
            self._vectors.append(tuple(-x for x in v))

    def identity(self) -> Element:
        return (0,) * self.dim

    def apply(self, e: Element, gen_id: int) -> Element:
        v = self._vectors[gen_id]
        return tuple(a + b for a, b in zip(e, v))

    def multiply(self, a: Element, b: Element) -> Element:
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, e: Element) -> Element:
        return tuple(-x for x in e)

    def format_element(self, e: Element) -> str:
        return "(" + ",".join(str(x) for x in e) + ")"


class FreeGroup(Group):
    """The free group F_k; elements are freely reduced words."""

    def __init__(self, rank: int):
        if rank < 1:
            raise InputError("free group rank must be >= 1")
        self.name = f"f{rank}"
        self.rank = rank
        letters = [chr(ord("a") + i) for i in range(rank)]
        self.alphabet = Alphabet.with_inverses(letters)

    def identity(self) -> Element:
        return ()

    def apply(self, e: Element, gen_id: int) -> Element:
        if e and self.alphabet.inverse(e[-1]) == gen_id:
            return e[:-1]
        return e + (gen_id,)

    def multiply(self, a: Element, b: Element) -> Element:
        e = a
        for g in b:
            e = self.apply(e, g)
        return e

    def inverse(self, e: Element) -> Element:
        return invert(self.alphabet, e)

    def exact_norm(self, e: Element) -> int:
        return len(e)

    def geodesic_word(self, e: Element) -> Word:
        return e

    def format_element(self, e: Element) -> str:
        return self.alphabet.format_word(e) if e else "1"


class HeisenbergGroup(Group):
    """Discrete Heisenberg group <a, b>, modeled as integer triples.

    (p, q, r) stands for the upper unitriangular matrix with a-exponent p,
    b-exponent q and center coordinate r, multiplied by
    (p,q,r)*(p',q',r') = (p+p', q+q', r+r'+p*q').
    """

    def __init__(self):
        self.name = "heisenberg"
        self.alphabet = Alphabet.with_inverses(["a", "b"])
        # a, a^, b, b^
        self._gens = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]

    def identity(self) -> Element:
        return (0, 0, 0)

    def apply(self, e: Element, gen_id: int) -> Element:
        return self.multiply(e, self._gens[gen_id])

    def multiply(self, a: Element, b: Element) -> Element:
        p, q, r = a
        P, Q, R = b
        return (p + P, q + Q, r + R + p * Q)

    def inverse(self, e: Element) -> Element:
        p, q, r = e
        return (-p, -q, p * q - r)

    def format_element(self, e: Element) -> str:
        return "(" + ",".join(str(x) for x in e) + ")"


class RewritingGroup(Group):
    """A group presented by a confluent shortlex rewriting system."""

    def __init__(self, name: str, rs: RewritingSystem):
        self.name = name
        self.rs = rs
        self.alphabet = rs.alphabet

    def identity(self) -> Element:
        return ()

    def apply(self, e: Element, gen_id: int) -> Element:
        return self.rs.normal_form(e + (gen_id,))

    def multiply(self, a: Element, b: Element) -> Element:
        return self.rs.normal_form(a + b)

    def inverse(self, e: Element) -> Element:
        return self.rs.normal_form(invert(self.alphabet, e))

    def evaluate(self, w: Word) -> Element:
        self.alphabet.check_word(w)
        return self.rs.normal_form(free_reduce(self.alphabet, tuple(w)))

    def format_element(self, e: Element) -> str:
        return self.alphabet.format_word(e) if e else "1"


def get_group(selector: str) -> Group:
    """Resolve a built-in family name or a definition file path."""
    if selector == "z2-std":
        return ZnGroup("z2-std", [("a", (1, 0)), ("b", (0, 1))])
    if selector == "z2-abc":
        return ZnGroup("z2-abc", [("a", (1, 0)), ("b", (0, 1)), ("c", (1, 1))])
    if selector == "heisenberg":
        return HeisenbergGroup()
    if selector.startswith("f") and selector[1:].isdigit():
        return FreeGroup(int(selector[1:]))
    if os.path.exists(selector):
        with open(selector, encoding="utf-8") as fh:
            _, rs = parse_group_file(fh.read())
        return RewritingGroup(os.path.basename(selector), rs)
    raise InputError(f"unknown group selector {selector!r}")
