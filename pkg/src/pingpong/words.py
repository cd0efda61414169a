"""Words in the generators R and T: parsing, evaluation, sampling.

Grammar:  word := factor+ ; factor := atom ['^' int] ; atom := 'R' | 'T'
| '(' word ')'.  Exponents may be negative.  Words are stored as merged
syllables, so parsing followed by rendering gives a normal form.

Sampling uses a splitmix64 generator so that seeded runs are reproducible
across platforms and Python versions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .catalog import GroupGens, SplittingDescriptor
from .linalg import Mat

Syllable = Tuple[str, int]


class WordFormatError(ValueError):
    """Input text does not match the word grammar."""


def _merge(syllables: Iterable[Syllable]) -> tuple:
    out: List[Syllable] = []
    for gen, exp in syllables:
        if gen not in ("R", "T"):
            raise WordFormatError(f"unknown generator {gen!r}")
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((gen, merged))
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Word in R and T stored as merged syllables (gen, exponent)."""

    syllables: tuple

    def __post_init__(self):
        object.__setattr__(self, "syllables", _merge(self.syllables))

    @property
    def is_empty(self) -> bool:
        return not self.syllables

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        result = Word(())
        for _ in range(k):
            result = result * self
        return result

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return "".join(g if e == 1 else f"{g}^{e}" for g, e in self.syllables)

    def letter_length(self) -> int:
        return sum(abs(e) for _, e in self.syllables)


def _parse_int(text: str, pos: int) -> Tuple[int, int]:
    start = pos
    if pos < len(text) and text[pos] in "+-":
        pos += 1
    digits = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == digits:
        raise WordFormatError(f"expected integer at position {start} in {text!r}")
    return int(text[start:pos]), pos


def _parse_word(text: str, pos: int, depth: int) -> Tuple[Word, int]:
    factors: List[Word] = []
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == ")":
            break
        if ch in ("R", "T"):
            atom = Word(((ch, 1),))
            pos += 1
        elif ch == "(":
            atom, pos = _parse_word(text, pos + 1, depth + 1)
            if pos >= len(text) or text[pos] != ")":
                raise WordFormatError(f"unbalanced parenthesis in {text!r}")
            pos += 1
        else:
            raise WordFormatError(f"unexpected character {ch!r} at position {pos}")
        if pos < len(text) and text[pos] == "^":
            exp, pos = _parse_int(text, pos + 1)
            atom = atom ** exp
        factors.append(atom)
    if not factors:
        raise WordFormatError(f"empty word at position {pos} in {text!r}")
    result = factors[0]
    for factor in factors[1:]:
        result = result * factor
    return result, pos


def parse_word(text: str) -> Word:
    word, pos = _parse_word(text, 0, 0)
    if pos != len(text):
        raise WordFormatError(f"trailing input at position {pos} in {text!r}")
    return word


class WordEvaluator:
    """Evaluates words against a generator set, caching syllable powers."""

    def __init__(self, gens: GroupGens):
        self.gens = gens
        self._cache = {}

    def syllable(self, gen: str, exp: int) -> Mat:
        key = (gen, exp)
        hit = self._cache.get(key)
        if hit is None:
            base = self.gens.R if gen == "R" else self.gens.T
            hit = base ** exp
            self._cache[key] = hit
        return hit

    def eval(self, word: Word) -> Mat:
        result = Mat.identity(self.gens.dim)
        for gen, exp in word.syllables:
            result = result * self.syllable(gen, exp)
        return result


def eval_word(word: Word, gens: GroupGens, evaluator: Optional[WordEvaluator] = None) -> Mat:
    if evaluator is None:
        evaluator = WordEvaluator(gens)
    return evaluator.eval(word)


def verify_relation(text: str, gens: GroupGens) -> str:
    """Evaluate a word exactly; returns "I", "-I" or "other"."""
    value = eval_word(parse_word(text), gens)
    ident = Mat.identity(gens.dim)
    if value == ident:
        return "I"
    if value == ident.scale(-1):
        return "-I"
    return "other"


def order_of_R(gens: GroupGens, bound: int = 24) -> Optional[int]:
    """Exact order of R, or None if it exceeds the bound."""
    ident = Mat.identity(gens.dim)
    power = ident
    for m in range(1, bound + 1):
        power = power * gens.R
        if power == ident:
            return m
    return None


MASK64 = (1 << 64) - 1


class DetRng:
    """splitmix64.  Deterministic across platforms; modulo draw is biased
    by less than 2^-50 for the tiny ranges used here."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return (z ^ (z >> 31)) & MASK64

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("range must be positive")
        return self.next64() % n

    def pick(self, items):
        return items[self.below(len(items))]

    def signed(self, magnitude: int) -> int:
        mag = 1 + self.below(magnitude)
        return mag if self.below(2) == 0 else -mag


@dataclass(frozen=True)
class ReducedFormSpec:
    """Describes the reduced forms of the nontrivial elements of a splitting.

    kinds: "free" (alternating T^a R^b, any nonzero exponents),
    "free-times-finite" (R exponents nonzero mod m), "amalgam" (R exponents
    in {1..2p-1} minus {p}, as elements are tracked mod the central -I),
    "free-on-conjugates" (reduced words in x_i = R^i T R^-i, i < m).
    """

    kind: str
    m: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("free", "free-times-finite", "amalgam", "free-on-conjugates"):
            raise ValueError(f"unknown reduced form kind {self.kind!r}")
        if (self.m is None) != (self.kind == "free"):
            raise ValueError("m is required exactly for the non-free kinds")

    def r_exponents(self) -> Optional[tuple]:
        if self.kind == "free":
            return None
        if self.kind == "free-times-finite":
            return tuple(range(1, self.m))
        if self.kind == "amalgam":
            half = self.m // 2
            return tuple(e for e in range(1, self.m) if e != half)
        return None


def spec_for_splitting(desc: SplittingDescriptor) -> ReducedFormSpec:
    if desc.kind == "free":
        return ReducedFormSpec("free")
    if desc.kind == "free-times-finite":
        return ReducedFormSpec("free-times-finite", desc.m)
    return ReducedFormSpec("amalgam", desc.m)


def conjugate_spec(m: int) -> ReducedFormSpec:
    return ReducedFormSpec("free-on-conjugates", m)


def sample_reduced_words(
    spec: ReducedFormSpec, count: int, max_syllables: int, seed: int
) -> tuple:
    """Deterministically sample nontrivial reduced words.

    Free-product kinds emit alternating T/R syllables whose R exponents
    respect the spec, so every output is nontrivial in the abstract group
    described by the splitting.  The conjugate kind emits reduced words in
    the free generators x_i = R^i T R^-i and expands them.
    """
    if max_syllables < 1:
        raise ValueError("max_syllables must be at least 1")
    rng = DetRng(seed)
    words = []
    if spec.kind == "free-on-conjugates":
        for _ in range(count):
            length = 1 + rng.below(max(1, max_syllables // 2))
            letters = []
            prev = None
            for _ in range(length):
                i = rng.below(spec.m)
                while i == prev:
                    i = rng.below(spec.m)
                prev = i
                letters.append((i, rng.signed(3)))
            syllables = []
            for i, e in letters:
                syllables.extend((("R", i), ("T", e), ("R", -i)))
            words.append(Word(tuple(syllables)))
        return tuple(words)

    r_choices = spec.r_exponents()
    for _ in range(count):
        length = 1 + rng.below(max_syllables)
        start_with_r = rng.below(2) == 0
        syllables = []
        for idx in range(length):
            emit_r = (idx % 2 == 0) == start_with_r
            if emit_r:
                if r_choices is None:
                    syllables.append(("R", rng.signed(5)))
                else:
                    syllables.append(("R", rng.pick(r_choices)))
            else:
                syllables.append(("T", rng.signed(5)))
        words.append(Word(tuple(syllables)))
    return tuple(words)


def oracle_nontriviality(
    words: Iterable[Word], gens: GroupGens, evaluator: Optional[WordEvaluator] = None
) -> tuple:
    """Evaluate words exactly; return those landing in {I, -I}.

    A certified splitting makes every sampled reduced word nontrivial, and
    none of the splitting groups has central torsion beyond -I itself, so
    any hit is a counterexample to the certificate.
    """
    if evaluator is None:
        evaluator = WordEvaluator(gens)
    ident = Mat.identity(gens.dim)
    minus = ident.scale(-1)
    violations = []
    for word in words:
        value = evaluator.eval(word)
        if value == ident or value == minus:
            violations.append(str(word))
    return tuple(violations)


def search_relations(gens: GroupGens, max_len: int = 12) -> tuple:
    """Breadth-first search for shortest relations w = +-I, w not a pure
    R power.  Bounded by letter length; dedup on exact matrices keeps the
    frontier to genuinely new group elements.  Returns (word, value) pairs
    found at the first depth containing any, or () within the bound."""
    ident = Mat.identity(gens.dim)
    minus = ident.scale(-1)
    moves = (
        ("R", 1, gens.R),
        ("R", -1, gens.R.inverse()),
        ("T", 1, gens.T),
        ("T", -1, gens.T.inverse()),
    )
    seen = {ident}
    frontier = [(ident, ())]
    found = []
    for _depth in range(max_len):
        next_frontier = []
        for mat, letters in frontier:
            last = letters[-1] if letters else None
            for gen, exp, step in moves:
                if last is not None and last[0] == gen and last[1] == -exp:
                    continue  # free cancellation
                nxt = mat * step
                path = letters + ((gen, exp),)
                if nxt == ident or nxt == minus:
                    if any(g == "T" for g, _ in path):
                        word = Word(path)
                        found.append((str(word), "I" if nxt == ident else "-I"))
                    continue
                if nxt in seen:
                    continue
                seen.add(nxt)
                next_frontier.append((nxt, path))
        if found:
            return tuple(found)
        frontier = next_frontier
    return tuple(found)
