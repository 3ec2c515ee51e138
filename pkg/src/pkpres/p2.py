"""The two-dimensional case P^2 with its renamed alphabet.

In P^2 the atoms are ``(a,1)`` and ``(1,b)``.  The letters are renamed::

    x   = x_(1,1)
    y_a = x_(a,1)    for a >= 2
    z_a = x_(1,a)    for a >= 2

and the relation schema collapses to a short case table, implemented here
directly from the letters rather than through tuple arithmetic, so that it
can be checked against ``relation_for``.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Tuple

from pkpres import COORD_MAX, InvalidTupleError, ParseError, VerificationError
from pkpres.core import Atom, Relation, relation_for
from pkpres.rewrite import NormalForm, Word, normalize

logger = logging.getLogger('pkpres')

_LETTER_RE = re.compile(r'^\s*(?:(x)|([yz])_?([0-9]+))\s*$')


class P2Kind(Enum):
    """Family of a P^2 letter."""
    X = "x"
    Y = "y"
    Z = "z"


@dataclass(frozen=True)
class P2Letter:
    """A letter of the P^2 alphabet: x, y_a or z_a with a >= 2."""
    kind: P2Kind
    subscript: int = 1

    def __post_init__(self) -> None:
        if self.kind == P2Kind.X:
            if self.subscript != 1:
                raise InvalidTupleError('The letter x carries no subscript')
        elif self.subscript < 2:
            raise InvalidTupleError(
                f'{self.kind.value}_{self.subscript} is not a letter: subscripts start at 2'
            )

    @classmethod
    def x(cls) -> 'P2Letter':
        return cls(P2Kind.X)

    @classmethod
    def y(cls, a: int) -> 'P2Letter':
        return cls(P2Kind.Y, a)

    @classmethod
    def z(cls, a: int) -> 'P2Letter':
        return cls(P2Kind.Z, a)

    def to_atom(self) -> Atom:
        if self.kind == P2Kind.X:
            return Atom((1, 1))
        if self.kind == P2Kind.Y:
            return Atom((self.subscript, 1))
        return Atom((1, self.subscript))

    def render(self) -> str:
        if self.kind == P2Kind.X:
            return 'x'
        return f'{self.kind.value}_{self.subscript}'

    def __str__(self) -> str:
        return self.render()


def parse_letter(text: str) -> P2Letter:
    """Parse ``x``, ``y_3``, ``z_2`` (the underscore is optional)."""
    match = _LETTER_RE.match(text)
    if match is None:
        raise ParseError(f'{text!r} is not a P^2 letter', text, 1)
    if match.group(1):
        return P2Letter.x()
    digits = match.group(3)
    if len(digits.lstrip('0')) > len(str(COORD_MAX)):
        raise ParseError(f'subscript exceeds {COORD_MAX}', text, match.start(3) + 1)
    return P2Letter(P2Kind(match.group(2)), int(digits))


def alphabet(bound: int) -> List[P2Letter]:
    """Return x followed by y_2..y_bound and z_2..z_bound."""
    letters = [P2Letter.x()]
    letters.extend(P2Letter.y(a) for a in range(2, bound + 1))
    letters.extend(P2Letter.z(a) for a in range(2, bound + 1))
    return letters


def x_power(n: int) -> Tuple[P2Letter, ...]:
    return (P2Letter.x(),) * n


def _mixed(a: int, b: int) -> Tuple[P2Letter, ...]:
    """Right-hand side of ``y_a z_b`` (equally of ``z_b y_a``)."""
    if a < b:
        return x_power(a) + (P2Letter.z(b - a + 1),)
    if a == b:
        return x_power(a + 1)
    return x_power(b) + (P2Letter.y(a - b + 1),)


def p2_relation(p: P2Letter, q: P2Letter) -> Tuple[P2Letter, ...]:
    """Return the right-hand side of the relation with left side ``p q``.

    The table, with a, b >= 2::

        x y_a = y_a x            x z_a = z_a x
        y_a y_b = x y_{a+b-1}    z_a z_b = x z_{a+b-1}
        y_a z_b = z_b y_a = x^a z_{b-a+1}  if a < b
                            x^{a+1}        if a = b
                            x^b y_{a-b+1}  if a > b

    The remaining orders ``y_a x``, ``z_a x`` and ``x x`` read the commuting
    relations the other way round.
    """
    kinds = (p.kind, q.kind)
    if P2Kind.X in kinds:
        return (q, p)
    if kinds == (P2Kind.Y, P2Kind.Y):
        return (P2Letter.x(), P2Letter.y(p.subscript + q.subscript - 1))
    if kinds == (P2Kind.Z, P2Kind.Z):
        return (P2Letter.x(), P2Letter.z(p.subscript + q.subscript - 1))
    if kinds == (P2Kind.Y, P2Kind.Z):
        return _mixed(p.subscript, q.subscript)
    return _mixed(q.subscript, p.subscript)


def letters_to_word(letters: Tuple[P2Letter, ...]) -> Word:
    return Word(tuple(letter.to_atom() for letter in letters))


def render_letters(letters: Tuple[P2Letter, ...]) -> str:
    """Render a P^2 word, collapsing runs into powers: ``x^2 z_2``."""
    parts: List[str] = []
    for letter, run in itertools.groupby(letters):
        count = len(list(run))
        parts.append(letter.render() if count == 1 else f'{letter.render()}^{count}')
    return ' '.join(parts)


@dataclass(frozen=True)
class P2TableRow:
    """One checked row of the P^2 table."""
    p: P2Letter
    q: P2Letter
    rhs: Tuple[P2Letter, ...]
    relation: Relation

    def render(self) -> str:
        return f'{self.p} {self.q} = {render_letters(self.rhs)}'


def check_p2_relation(p: P2Letter, q: P2Letter) -> P2TableRow:
    """Compute ``p2_relation(p, q)`` and check it against the relation schema.

    The right-hand side, read as atoms and normalized, must give the same
    ``(m, c)`` as ``relation_for`` on the atoms of p and q.

    Raises:
        VerificationError: If the two disagree.
    """
    rhs = p2_relation(p, q)
    relation = relation_for(p.to_atom(), q.to_atom())
    expected = NormalForm(m=relation.rhs_m, head=relation.rhs_c)
    got = normalize(letters_to_word(rhs))
    if got != expected:
        raise VerificationError(
            f'P^2 table gives {p} {q} = {render_letters(rhs)} ({got}), '
            f'relation schema gives {relation} ({expected})'
        )
    return P2TableRow(p=p, q=q, rhs=rhs, relation=relation)


def p2_table(bound: int) -> Iterator[P2TableRow]:
    """Yield a checked row for every ordered letter pair with subscripts <= bound."""
    letters = alphabet(bound)
    logger.debug('Checking P^2 table over %d letters', len(letters))
    for p in letters:
        for q in letters:
            yield check_p2_relation(p, q)
