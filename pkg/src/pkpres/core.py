"""Elements of P^K, atoms, the unique decomposition and the relation schema.

An element of P^K is a K-tuple of positive integers under coordinatewise
addition.  Atoms are the elements that are not a sum of two elements, which
happens exactly when some coordinate equals 1.  Every element splits uniquely
as ``m*1 + b`` with ``b`` an atom, and for every pair of atoms ``(a, b)`` the
schema relation reads ``x_a x_b = x_1^m x_c`` with ``(m, c)`` the split of
``a + b``.
"""

import functools
import itertools
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, List, Tuple

from pkpres import (
    COORD_MAX, ConfigurationError, CoordinateOverflowError, DimensionMismatchError,
    InvalidTupleError, NotAnAtomError, ParseError, format_coords
)

if TYPE_CHECKING:
    from pkpres.rewrite import Word


_INT_RE = re.compile(r'[0-9]+')
_MAX_DIGITS = len(str(COORD_MAX))


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class PkTuple:
    """An element of P^K: a fixed-length tuple of coordinates, each >= 1.

    Instances are immutable and compare by coordinates, so an ``Atom`` and
    a ``PkTuple`` with the same coordinates are equal and hash alike.
    """
    coords: Tuple[int, ...]

    def __post_init__(self) -> None:
        values = tuple(self.coords)
        if not values:
            raise InvalidTupleError('A tuple needs at least one coordinate')
        for value in values:
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidTupleError(f'Coordinate {value!r} is not an integer')
            if value < 1:
                raise InvalidTupleError(f'Coordinate {value} of {format_coords(values)} is not positive')
            if value > COORD_MAX:
                raise CoordinateOverflowError(f'Coordinate {value} exceeds {COORD_MAX}')
        object.__setattr__(self, 'coords', values)

    @classmethod
    def bone(cls, dimension: int) -> 'Atom':
        """Return the all-ones tuple of the given dimension."""
        if dimension < 1:
            raise InvalidTupleError(f'Dimension must be at least 1, got {dimension}')
        return Atom((1,) * dimension)

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def _check_dimension(self, other: 'PkTuple') -> None:
        if self.dimension != other.dimension:
            raise DimensionMismatchError(
                f'Incompatible operands {self.render()} and {other.render()}: '
                f'dimension {self.dimension} vs {other.dimension}',
                self.dimension, other.dimension
            )

    def __add__(self, other: 'PkTuple') -> 'PkTuple':
        if not isinstance(other, PkTuple):
            return NotImplemented
        self._check_dimension(other)
        summed = tuple(x + y for x, y in zip(self.coords, other.coords))
        if any(value > COORD_MAX for value in summed):
            raise CoordinateOverflowError(f'{self.render()} + {other.render()} overflows {COORD_MAX}')
        return PkTuple(summed)

    def __sub__(self, other: 'PkTuple') -> 'PkTuple':
        if not isinstance(other, PkTuple):
            return NotImplemented
        self._check_dimension(other)
        diff = tuple(x - y for x, y in zip(self.coords, other.coords))
        if any(value < 1 for value in diff):
            raise InvalidTupleError(f'{self.render()} - {other.render()} leaves P^K')
        return PkTuple(diff)

    def __mul__(self, factor: int) -> 'PkTuple':
        if not isinstance(factor, int) or isinstance(factor, bool):
            return NotImplemented
        if factor < 1:
            raise InvalidTupleError(f'Scalar multiple by {factor} leaves P^K')
        scaled = tuple(value * factor for value in self.coords)
        if any(value > COORD_MAX for value in scaled):
            raise CoordinateOverflowError(f'{factor} * {self.render()} overflows {COORD_MAX}')
        return PkTuple(scaled)

    __rmul__ = __mul__

    def shifted(self, m: int) -> 'PkTuple':
        """Return ``self + m*1``; ``m`` may be negative as long as the result stays in P^K."""
        moved = tuple(value + m for value in self.coords)
        if any(value < 1 for value in moved):
            raise InvalidTupleError(f'Shifting {self.render()} by {m} leaves P^K')
        if any(value > COORD_MAX for value in moved):
            raise CoordinateOverflowError(f'Shifting {self.render()} by {m} overflows {COORD_MAX}')
        return PkTuple(moved)

    def render(self) -> str:
        return format_coords(self.coords)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f'{type(self).__name__}({self.render()})'

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PkTuple):
            return NotImplemented
        return self.coords == other.coords

    def __lt__(self, other: 'PkTuple') -> bool:
        if not isinstance(other, PkTuple):
            return NotImplemented
        return self.coords < other.coords

    def __hash__(self) -> int:
        return hash(self.coords)


class Atom(PkTuple):
    """A tuple with at least one coordinate equal to 1."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if 1 not in self.coords:
            raise NotAnAtomError(
                f'{self.render()} is not an atom: an atom needs some coordinate equal to 1'
            )


@dataclass(frozen=True)
class Relation:
    """One instance ``x_a x_b = x_1^m x_c`` of the relation schema."""
    lhs: Tuple[Atom, Atom]
    rhs_m: int
    rhs_c: Atom

    def lhs_letters(self) -> Tuple[Atom, ...]:
        return self.lhs

    def rhs_letters(self) -> Tuple[Atom, ...]:
        bone = PkTuple.bone(self.rhs_c.dimension)
        return (bone,) * self.rhs_m + (self.rhs_c,)

    def lhs_word(self) -> 'Word':
        from pkpres.rewrite import Word
        return Word(self.lhs_letters())

    def rhs_word(self) -> 'Word':
        from pkpres.rewrite import Word
        return Word(self.rhs_letters())

    def is_trivial(self) -> bool:
        """True when both sides are the same word, e.g. ``x_1 x_b = x_1^1 x_b``."""
        return self.lhs_letters() == self.rhs_letters()

    def render(self) -> str:
        a, b = self.lhs
        bone = PkTuple.bone(a.dimension)
        return f'x{a.render()} x{b.render()} = x{bone.render()}^{self.rhs_m} x{self.rhs_c.render()}'

    def __str__(self) -> str:
        return self.render()


def as_atom(t: PkTuple) -> Atom:
    """Return t as an Atom, raising NotAnAtomError if it is not one."""
    if isinstance(t, Atom):
        return t
    return Atom(t.coords)


def is_atom(t: PkTuple) -> bool:
    """True iff some coordinate of t equals 1."""
    return 1 in t.coords


def mu(t: PkTuple) -> int:
    """Return the minimum coordinate of t."""
    return min(t.coords)


def decompose(t: PkTuple) -> Tuple[int, Atom]:
    """Split t as ``m*1 + b`` with ``m = mu(t) - 1`` and b an atom."""
    m = mu(t) - 1
    return m, as_atom(t.shifted(-m))


def relation_for(a: PkTuple, b: PkTuple) -> Relation:
    """Return the schema relation with left side ``x_a x_b``.

    Raises:
        NotAnAtomError: If a or b is not an atom.
        DimensionMismatchError: If a and b have different dimensions.
    """
    left, right = as_atom(a), as_atom(b)
    m, c = decompose(left + right)
    return Relation(lhs=(left, right), rhs_m=m, rhs_c=c)


def tuples_in_box(dimension: int, bound: int) -> Iterator[PkTuple]:
    """Yield every tuple of [1, bound]^dimension in coordinate order."""
    _check_box(dimension, bound)
    for coords in itertools.product(range(1, bound + 1), repeat=dimension):
        yield PkTuple(coords)


def atoms_in_box(dimension: int, bound: int) -> Iterator[Atom]:
    """Yield every atom of [1, bound]^dimension in coordinate order."""
    for t in tuples_in_box(dimension, bound):
        if is_atom(t):
            yield Atom(t.coords)


def atoms_below(t: PkTuple) -> List[Atom]:
    """Return the atoms dominated coordinatewise by t, in coordinate order."""
    ranges = [range(1, value + 1) for value in t.coords]
    return [Atom(coords) for coords in itertools.product(*ranges) if 1 in coords]


def relations_in_box(dimension: int, bound: int) -> Iterator[Relation]:
    """Yield the schema relation for every ordered pair of atoms in the box."""
    atoms = list(atoms_in_box(dimension, bound))
    for a in atoms:
        for b in atoms:
            yield relation_for(a, b)


def _check_box(dimension: int, bound: int) -> None:
    if dimension < 1:
        raise ConfigurationError(f'Dimension must be at least 1, got {dimension}')
    if bound < 1:
        raise ConfigurationError(f'Box bound must be at least 1, got {bound}')


def skip_whitespace(text: str, pos: int) -> int:
    """Return the first index at or after pos that is not whitespace."""
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def scan_tuple(text: str, pos: int) -> Tuple[PkTuple, int]:
    """Scan one tuple literal starting at index pos (0-based).

    Surrounding whitespace is skipped.  Returns the tuple and the index just
    past it.  Error positions are reported 1-based.
    """
    pos = skip_whitespace(text, pos)
    if pos >= len(text) or text[pos] != '(':
        raise ParseError("expected '('", text, pos + 1)
    pos += 1
    coords: List[int] = []
    while True:
        pos = skip_whitespace(text, pos)
        match = _INT_RE.match(text, pos)
        if match is None:
            raise ParseError('expected a positive integer', text, pos + 1)
        digits = match.group()
        if len(digits.lstrip('0')) > _MAX_DIGITS:
            raise ParseError(f'coordinate exceeds {COORD_MAX}', text, pos + 1)
        value = int(digits)
        if value < 1:
            raise ParseError('coordinates must be positive', text, pos + 1)
        coords.append(value)
        pos = skip_whitespace(text, match.end())
        if pos >= len(text):
            raise ParseError("expected ',' or ')'", text, pos + 1)
        if text[pos] == ',':
            pos += 1
            continue
        if text[pos] == ')':
            pos += 1
            break
        raise ParseError("expected ',' or ')'", text, pos + 1)
    pos = skip_whitespace(text, pos)
    try:
        return PkTuple(coords), pos
    except CoordinateOverflowError as e:
        raise ParseError(str(e), text, pos + 1) from e


def parse_tuple(text: str) -> PkTuple:
    """Parse the tuple text form, e.g. ``(2,1)``."""
    t, pos = scan_tuple(text, 0)
    if pos != len(text):
        raise ParseError('unexpected trailing input', text, pos + 1)
    return t


def parse_atom(text: str) -> Atom:
    """Parse an atom in tuple text form."""
    return as_atom(parse_tuple(text))
