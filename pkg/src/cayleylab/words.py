"""Generator alphabets and plain word operations.

Words are tuples of small integer generator ids.  An alphabet is always
inverse closed: every generator knows the id of its inverse (which may be
itself for involutions).
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError

Word = tuple[int, ...]

EMPTY: Word = ()


@dataclass(frozen=True)
class Generator:
    id: int
    label: str
    inverse_id: int


class Alphabet:
    """An inverse-closed, ordered set of generators.

    The declared order of the labels is the shortlex base order used by
    rewriting systems.
    """

    def __init__(self, generators: list[Generator]):
        if not generators:
            raise InputError("alphabet must be nonempty")
        labels = [g.label for g in generators]
        if len(set(labels)) != len(labels):
            raise InputError("generator labels must be unique")
        for g in generators:
            inv = generators[g.inverse_id]
            if inv.inverse_id != g.id:
                raise InputError("alphabet is not inverse closed")
        self.generators = tuple(generators)
        self._by_label = {g.label: g.id for g in generators}

    @classmethod
    def from_labels(cls, labels: list[str]) -> "Alphabet":
        """Build from base labels; `x` gets an inverse labeled `x^`.

        A label already ending in `^` pairs with its base form, so an
        explicit ordering like ["a", "a^", "b", "b^"] also works.
        """
        gens: list[Generator] = []
        index: dict[str, int] = {}
        for lab in labels:
            if lab in index:
                raise InputError(f"duplicate generator label {lab!r}")
            index[lab] = len(gens)
            gens.append(Generator(len(gens), lab, -1))
        fixed: list[Generator] = []
        for g in gens:
            partner = g.label[:-1] if g.label.endswith("^") else g.label + "^"
            if partner not in index:
                raise InputError(
                    f"missing inverse label for {g.label!r}; "
                    "alphabets must list both x and x^"
                )
            fixed.append(Generator(g.id, g.label, index[partner]))
        return cls(fixed)

    @classmethod
    def with_inverses(cls, base_labels: list[str]) -> "Alphabet":
        """Build from base labels only, interleaving `x^` inverses."""
        labels: list[str] = []
        for lab in base_labels:
            labels.append(lab)
            labels.append(lab + "^")
        return cls.from_labels(labels)

    def __len__(self) -> int:
        return len(self.generators)

    def inverse(self, gen_id: int) -> int:
        return self.generators[gen_id].inverse_id

    def label(self, gen_id: int) -> str:
        return self.generators[gen_id].label

    def id_of(self, label: str) -> int:
        try:
            return self._by_label[label]
        except KeyError:
            raise InputError(f"unknown generator label {label!r}") from None

    def check_word(self, w: Word) -> None:
        for g in w:
            if not (0 <= g < len(self.generators)):
                raise InputError(f"unknown generator id {g}")

    def parse_word(self, text: str, sep: str = ",") -> Word:
        """Parse a word like "a,b,a^" (or space separated)."""
        text = text.strip()
        if not text:
            return EMPTY
        parts = text.split(sep) if sep in text else text.split()
        return tuple(self.id_of(p.strip()) for p in parts if p.strip())

    def format_word(self, w: Word, sep: str = " ") -> str:
        return sep.join(self.label(g) for g in w)


def free_reduce(alphabet: Alphabet, w: Word) -> Word:
    """Delete adjacent letter/inverse pairs until none remain."""
    out: list[int] = []
    for g in w:
        if out and alphabet.inverse(out[-1]) == g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def invert(alphabet: Alphabet, w: Word) -> Word:
    """The reversed sequence of letter inverses."""
    return tuple(alphabet.inverse(g) for g in reversed(w))


def concat(*words: Word) -> Word:
    out: list[int] = []
    for w in words:
        out.extend(w)
    return tuple(out)
