"""Words over the atom alphabet, evaluation, and reduction to normal form."""

import functools
import operator
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple, Union, overload

from pkpres import DimensionMismatchError, InvalidWordError, ParseError
from pkpres.core import Atom, PkTuple, as_atom, relation_for, scan_tuple, skip_whitespace


LETTER_SEPARATOR = '.'


@dataclass(frozen=True)
class Word:
    """A nonempty word over the atom alphabet.

    Letter ``x_a`` is identified with its atom ``a``.  Two words are equal
    only when their letter sequences are; use ``words_equivalent`` for
    equality in P^K.
    """
    letters: Tuple[Atom, ...]

    def __post_init__(self) -> None:
        letters = tuple(as_atom(letter) for letter in self.letters)
        if not letters:
            raise InvalidWordError('A word needs at least one letter')
        dimension = letters[0].dimension
        for letter in letters[1:]:
            if letter.dimension != dimension:
                raise DimensionMismatchError(
                    f'Mixed dimensions in word: {letters[0].render()} has dimension {dimension}, '
                    f'{letter.render()} has dimension {letter.dimension}',
                    dimension, letter.dimension
                )
        object.__setattr__(self, 'letters', letters)

    @classmethod
    def of(cls, *letters: Union[PkTuple, Sequence[int]]) -> 'Word':
        """Build a word from atoms or plain coordinate sequences."""
        return cls(tuple(letter if isinstance(letter, PkTuple) else Atom(tuple(letter))
                         for letter in letters))

    @property
    def dimension(self) -> int:
        return self.letters[0].dimension

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.letters)

    @overload
    def __getitem__(self, index: int) -> Atom: ...

    @overload
    def __getitem__(self, index: slice) -> Tuple[Atom, ...]: ...

    def __getitem__(self, index: Union[int, slice]) -> Union[Atom, Tuple[Atom, ...]]:
        return self.letters[index]

    def __add__(self, other: 'Word') -> 'Word':
        if not isinstance(other, Word):
            return NotImplemented
        check_same_dimension(self, other)
        return Word(self.letters + other.letters)

    def splice(self, start: int, stop: int, letters: Iterable[Atom]) -> 'Word':
        """Return a copy with ``letters[start:stop]`` replaced."""
        return Word(self.letters[:start] + tuple(letters) + self.letters[stop:])

    def key(self) -> Tuple[Tuple[int, ...], ...]:
        """Sort key: lexicographic over letters, each compared by coordinates."""
        return tuple(letter.coords for letter in self.letters)

    def render(self) -> str:
        return LETTER_SEPARATOR.join(letter.render() for letter in self.letters)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class NormalForm:
    """The word ``x_1^m x_head``, stored as the pair (m, head)."""
    m: int
    head: Atom

    def expand(self) -> Word:
        """Return the denoted word: m copies of x_1 followed by x_head."""
        bone = PkTuple.bone(self.head.dimension)
        return Word((bone,) * self.m + (self.head,))

    def value(self) -> PkTuple:
        """Return ``m*1 + head``."""
        return self.head.shifted(self.m)

    def render(self) -> str:
        return f'1^{self.m} . {self.head.render()}'

    def __str__(self) -> str:
        return self.render()


def check_same_dimension(u: Word, v: Word) -> None:
    if u.dimension != v.dimension:
        raise DimensionMismatchError(
            f'Incompatible operands: words of dimension {u.dimension} and {v.dimension}',
            u.dimension, v.dimension
        )


def evaluate(w: Word) -> PkTuple:
    """Map a word to the coordinatewise sum of its letters."""
    first: PkTuple = w.letters[0]
    return functools.reduce(operator.add, w.letters[1:], first)


def normalize(w: Word) -> NormalForm:
    """Reduce w to its normal form by a single left-to-right fold.

    The accumulator ``(n, b)`` stands for ``x_1^n x_b``.  Each next letter
    ``a`` is absorbed with the schema relation for ``x_b x_a``, which turns
    ``x_b x_a`` into ``x_1^q x_c`` and leaves ``(n + q, c)``.
    """
    n = 0
    head = w.letters[0]
    for letter in w.letters[1:]:
        relation = relation_for(head, letter)
        n += relation.rhs_m
        head = relation.rhs_c
    return NormalForm(m=n, head=head)


def words_equivalent(u: Word, v: Word) -> bool:
    """True iff u and v have the same normal form."""
    check_same_dimension(u, v)
    return normalize(u) == normalize(v)


def parse_word(text: str) -> Word:
    """Parse the word text form, e.g. ``(2,1).(1,3).(1,1)``.

    Raises:
        ParseError: On malformed or empty input; the position is 1-based.
        DimensionMismatchError: If the letters have different dimensions.
        NotAnAtomError: If some letter is not an atom.
    """
    pos = skip_whitespace(text, 0)
    if pos >= len(text):
        raise ParseError('empty word', text, pos + 1)
    letters: List[PkTuple] = []
    while True:
        letter, pos = scan_tuple(text, pos)
        letters.append(letter)
        if pos >= len(text):
            break
        if text[pos] != LETTER_SEPARATOR:
            raise ParseError(f"expected '{LETTER_SEPARATOR}' between letters", text, pos + 1)
        pos += 1
    return Word(tuple(as_atom(letter) for letter in letters))


def render_word(w: Word) -> str:
    return w.render()
