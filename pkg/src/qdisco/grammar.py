"""Pregroup grammar over {n, s}: tokenization, lexicon lookup, and cup-link reduction.

The reduction strategy is repeated leftmost cancellation of adjacent pairs
a^z a^(z+1), which is confluent for the restricted grammar covered here
(nouns, adjectives, transitive verbs). A sentence is accepted when the
residue is exactly [s].
"""
from __future__ import annotations

import json
from dataclasses import dataclass

PUNCTUATION = ".,!?;:\"'()[]"


class ParseError(ValueError):
    """Raised on unknown tokens or when a type sequence does not reduce to s."""

    def __init__(self, message: str, residue: tuple["AtomicType", ...] = ()):
        super().__init__(message)
        self.residue = residue


@dataclass(frozen=True, order=True)
class AtomicType:
    base: str
    adjoint: int = 0

    def __post_init__(self):
        if self.base not in ("n", "s"):
            raise ValueError(f"atomic base must be n or s, got {self.base!r}")

    def __str__(self) -> str:
        if self.adjoint == 0:
            return self.base
        if self.adjoint == 1:
            return f"{self.base}^r"
        if self.adjoint == -1:
            return f"{self.base}^l"
        return f"{self.base}^{self.adjoint}"

    @classmethod
    def parse(cls, text: str) -> "AtomicType":
        base, _, mark = text.partition("^")
        if not mark:
            return cls(base, 0)
        if mark == "r":
            return cls(base, 1)
        if mark == "l":
            return cls(base, -1)
        return cls(base, int(mark))


@dataclass(frozen=True)
class PregroupType:
    atoms: tuple[AtomicType, ...]

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.atoms) if self.atoms else "1"

    def __len__(self) -> int:
        return len(self.atoms)

    @classmethod
    def parse(cls, text: str) -> "PregroupType":
        text = text.strip()
        if text == "1" or not text:
            return cls(())
        return cls(tuple(AtomicType.parse(part) for part in text.split()))


N = AtomicType("n")
S = AtomicType("s")
NOUN = PregroupType((N,))
TRANSITIVE_VERB = PregroupType((AtomicType("n", 1), S, AtomicType("n", -1)))
ADJECTIVE = PregroupType((N, AtomicType("n", -1)))

POS_TYPES = {"noun": NOUN, "tverb": TRANSITIVE_VERB, "adj": ADJECTIVE}


@dataclass(frozen=True)
class LexiconEntry:
    token: str
    part_of_speech: str

    def __post_init__(self):
        if self.part_of_speech not in POS_TYPES:
            raise ValueError(f"unknown part of speech {self.part_of_speech!r}")

    @property
    def type(self) -> PregroupType:
        return POS_TYPES[self.part_of_speech]


Lexicon = dict[str, LexiconEntry]


def load_lexicon(source) -> Lexicon:
    """Read a lexicon from `token<TAB>pos` lines (path, file object, or iterable of lines)."""
    lexicon: Lexicon = {}
    for lineno, line in enumerate(_iter_lines(source), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"lexicon line {lineno}: expected `token<TAB>pos`, got {line!r}")
        token, pos = parts[0].strip().lower(), parts[1].strip()
        if token in lexicon:
            raise ValueError(f"lexicon line {lineno}: duplicate token {token!r}")
        lexicon[token] = LexiconEntry(token, pos)
    return lexicon


def load_corpus(source) -> list[tuple[int, str]]:
    """Read labelled sentences from `label<TAB>sentence` lines; labels must be 0 or 1."""
    examples = []
    for lineno, line in enumerate(_iter_lines(source), start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        label_text, _, sentence = line.partition("\t")
        if label_text not in ("0", "1") or not sentence.strip():
            raise ValueError(f"corpus line {lineno}: expected `label<TAB>sentence` with label 0/1")
        examples.append((int(label_text), sentence.strip()))
    return examples


def _iter_lines(source):
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from source


def tokenize(sentence: str) -> list[str]:
    """Lowercased alphabetic tokens with punctuation stripped from token edges."""
    tokens = []
    for raw in sentence.lower().split():
        word = raw.strip(PUNCTUATION)
        if not word:
            continue
        if not word.isalpha():
            raise ParseError(f"non-alphabetic token {raw!r}")
        tokens.append(word)
    if not tokens:
        raise ParseError("sentence is empty after stripping punctuation")
    return tokens


@dataclass(frozen=True)
class SentenceDiagram:
    """Words with their types, cup links between cancelled atoms, and the surviving wires.

    Atom indices run left to right over the concatenation of the word types. Cups
    are non-crossing by construction of the stack reduction.
    """

    words: tuple[tuple[str, PregroupType], ...]
    cups: tuple[tuple[int, int], ...]
    open_wires: tuple[int, ...]

    @property
    def sentence_atom(self) -> int:
        if len(self.open_wires) != 1:
            raise ValueError("diagram has no unique sentence wire")
        return self.open_wires[0]

    def atom_types(self) -> list[AtomicType]:
        return [atom for _, ptype in self.words for atom in ptype.atoms]

    def to_json(self) -> str:
        doc = {
            "words": [[token, str(ptype)] for token, ptype in self.words],
            "cups": [list(c) for c in self.cups],
            "open_wires": list(self.open_wires),
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SentenceDiagram":
        doc = json.loads(text)
        return cls(
            words=tuple((token, PregroupType.parse(t)) for token, t in doc["words"]),
            cups=tuple((int(i), int(j)) for i, j in doc["cups"]),
            open_wires=tuple(int(i) for i in doc["open_wires"]),
        )


def parse(tokens: list[str], lexicon: Lexicon) -> SentenceDiagram:
    """Reduce the token type sequence to [s], recording each cancellation as a cup."""
    unknown = [t for t in tokens if t not in lexicon]
    if unknown:
        raise ParseError(f"tokens not in lexicon: {unknown}")

    words = tuple((token, lexicon[token].type) for token in tokens)
    atoms: list[AtomicType] = [atom for _, ptype in words for atom in ptype.atoms]

    cups: list[tuple[int, int]] = []
    stack: list[int] = []
    for j, atom in enumerate(atoms):
        if stack:
            i = stack[-1]
            left = atoms[i]
            if left.base == atom.base and atom.adjoint == left.adjoint + 1:
                stack.pop()
                cups.append((i, j))
                continue
        stack.append(j)

    open_wires = tuple(stack)
    if [atoms[i] for i in open_wires] != [S]:
        residue = tuple(atoms[i] for i in open_wires)
        pretty = " ".join(str(a) for a in residue) or "1"
        raise ParseError(f"type sequence does not reduce to s (residue: {pretty})", residue)

    return SentenceDiagram(words=words, cups=tuple(sorted(cups)), open_wires=open_wires)


def parse_sentence(sentence: str, lexicon: Lexicon) -> SentenceDiagram:
    return parse(tokenize(sentence), lexicon)
