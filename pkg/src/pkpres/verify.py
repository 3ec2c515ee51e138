"""Brute-force oracles for the presentation of P^K.

Everything here is exhaustive and meant for small boxes: the atom
characterization, uniqueness of the ``m*1 + b`` split, well-formedness of the
relation schema, and completeness of the presentation, checked by showing
that every fiber of the evaluation map is a single class under one-step
rewriting with the schema relations applied in both directions.
"""

import functools
import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Optional, Set, Tuple

from pkpres import InvalidTupleError, ResourceLimitError
from pkpres.core import (
    Atom, PkTuple, atoms_below, decompose, is_atom, mu,
    relation_for, relations_in_box, tuples_in_box
)
from pkpres.rewrite import Word, evaluate, normalize

logger = logging.getLogger('pkpres')

# Hard cap on the number of words enumerated for one fiber
DEFAULT_GUARD = 200_000

# Field order of machine-readable fiber records
RECORD_FIELDS: Tuple[str, ...] = ('target', 'fiber_size', 'component_count', 'pass', 'error')


class UnionFind:
    """Union-find over 0..size-1 with path compression, counting components."""

    def __init__(self, size: int) -> None:
        self.parents: List[int] = list(range(size))
        self.num_components = size

    def find(self, elem: int) -> int:
        root = elem
        while root != self.parents[root]:
            root = self.parents[root]
        # point everything on the path straight at the root
        while elem != root:
            parent = self.parents[elem]
            self.parents[elem] = root
            elem = parent
        return root

    def union(self, a: int, b: int) -> None:
        root_a = self.find(a)
        root_b = self.find(b)
        if root_a == root_b:
            return
        self.parents[root_b] = root_a
        self.num_components -= 1

    def components(self) -> List[List[int]]:
        """Return the components, each sorted, ordered by smallest member."""
        groups: Dict[int, List[int]] = {}
        for elem in range(len(self.parents)):
            groups.setdefault(self.find(elem), []).append(elem)
        return sorted(groups.values(), key=lambda members: members[0])


@dataclass(frozen=True)
class Fiber:
    """All words evaluating to one target, in lexicographic letter order."""
    target: PkTuple
    words: Tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self.words


def _comb(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def count_fiber(target: PkTuple) -> int:
    """Count the words evaluating to target without enumerating them.

    A word of length L is an ordered L-tuple of elements of P^K summing to
    the target, each of which must be an atom.  Per coordinate there are
    ``C(t_k - 1, L - 1)`` compositions; forcing j chosen letters to be
    non-atoms (every coordinate >= 2) removes j from each coordinate first.
    Inclusion-exclusion over those j letters gives the atom-only count.
    """
    total = 0
    for length in range(1, mu(target) + 1):
        for j in range(length + 1):
            per_coord = 1
            for value in target.coords:
                per_coord *= _comb(value - j - 1, length - 1)
            total += (-1) ** j * math.comb(length, j) * per_coord
    return total


def _factorizations(target: PkTuple, memo: Dict[PkTuple, List[Tuple[Atom, ...]]]) -> List[Tuple[Atom, ...]]:
    cached = memo.get(target)
    if cached is not None:
        return cached
    found: List[Tuple[Atom, ...]] = []
    for first in atoms_below(target):
        if first == target:
            found.append((first,))
            continue
        if not all(x < y for x, y in zip(first.coords, target.coords)):
            continue
        for rest in _factorizations(target - first, memo):
            found.append((first,) + rest)
    memo[target] = found
    return found


def enumerate_fiber(target: PkTuple, guard: int = DEFAULT_GUARD) -> Fiber:
    """Return every factorization of target into an ordered sequence of atoms.

    Raises:
        ResourceLimitError: If the fiber has more than ``guard`` words.
    """
    expected = count_fiber(target)
    if expected > guard:
        raise ResourceLimitError(
            f'Fiber of {target.render()} has {expected} words, over the guard of {guard}',
            target.render(), guard, expected
        )
    factorizations = _factorizations(target, {})
    if len(factorizations) > guard:
        raise ResourceLimitError(
            f'Fiber of {target.render()} has {len(factorizations)} words, over the guard of {guard}',
            target.render(), guard, len(factorizations)
        )
    words = tuple(sorted((Word(letters) for letters in factorizations), key=Word.key))
    logger.debug('Fiber of %s has %d words', target.render(), len(words))
    return Fiber(target=target, words=words)


@functools.lru_cache(maxsize=4096)
def atom_pairs_summing_to(total: PkTuple) -> Tuple[Tuple[Atom, Atom], ...]:
    """Return every ordered pair of atoms (a, b) with ``a + b == total``."""
    if mu(total) < 2:
        return ()
    pairs: List[Tuple[Atom, Atom]] = []
    for a in atoms_below(total.shifted(-1)):
        b = total - a
        if is_atom(b):
            pairs.append((a, Atom(b.coords)))
    return tuple(pairs)


def one_step_neighbors(w: Word) -> Set[Word]:
    """Return the words one schema relation away from w, in either direction.

    Left to right, adjacent letters ``x_a x_b`` become ``x_1^m x_c``.  Right
    to left, a factor ``x_1^m x_c`` with ``m >= 1`` becomes ``x_a x_b`` for
    every pair of atoms summing to ``m*1 + c``; by uniqueness of the split
    each such pair has exactly ``(m, c)`` as its relation's right side.
    The word itself is never included.
    """
    neighbors: Set[Word] = set()
    letters = w.letters
    bone = PkTuple.bone(w.dimension)
    for i in range(len(letters) - 1):
        relation = relation_for(letters[i], letters[i + 1])
        neighbors.add(w.splice(i, i + 2, relation.rhs_letters()))
    run = 0
    for j, letter in enumerate(letters):
        for m in range(1, run + 1):
            for a, b in atom_pairs_summing_to(letter.shifted(m)):
                neighbors.add(w.splice(j - m, j + 1, (a, b)))
        run = run + 1 if letter == bone else 0
    neighbors.discard(w)
    return neighbors


@dataclass
class RewriteGraph:
    """One-step rewrite graph on the words of a fiber."""
    fiber: Fiber
    edges: Set[Tuple[int, int]] = field(default_factory=set)
    # neighbors that evaluate outside the fiber; always empty for a sound schema
    stray: List[Tuple[Word, Word]] = field(default_factory=list)

    @classmethod
    def build(cls, fiber: Fiber) -> 'RewriteGraph':
        graph = cls(fiber=fiber)
        index = {word: i for i, word in enumerate(fiber.words)}
        for i, word in enumerate(fiber.words):
            for neighbor in one_step_neighbors(word):
                j = index.get(neighbor)
                if j is None:
                    graph.stray.append((word, neighbor))
                    continue
                graph.edges.add((min(i, j), max(i, j)))
        return graph

    def components(self) -> List[List[int]]:
        finder = UnionFind(len(self.fiber))
        for i, j in self.edges:
            finder.union(i, j)
        return finder.components()


@dataclass(frozen=True)
class FiberReport:
    """Outcome of checking one fiber."""
    target: PkTuple
    fiber_size: Optional[int] = None
    component_count: Optional[int] = None
    component_sizes: Tuple[int, ...] = ()
    stray_edges: int = 0
    normal_form_ok: bool = True
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return (self.error is None and self.component_count == 1
                and self.stray_edges == 0 and self.normal_form_ok)

    @property
    def guard_tripped(self) -> bool:
        return self.error is not None

    def to_record(self) -> Dict[str, Any]:
        values = (self.target.render(), self.fiber_size, self.component_count, self.passed, self.error)
        return dict(zip(RECORD_FIELDS, values))

    def to_json(self) -> str:
        return json.dumps(self.to_record())


def verify_fiber_connected(target: PkTuple, guard: int = DEFAULT_GUARD) -> FiberReport:
    """Check that the fiber over target is a single class of the rewrite graph.

    Also checks that every neighbor stays in the fiber and that every word
    normalizes to the expansion of ``decompose(target)``, which must itself
    be a fiber word.

    Raises:
        ResourceLimitError: If the fiber is larger than the guard.
    """
    fiber = enumerate_fiber(target, guard)
    graph = RewriteGraph.build(fiber)
    components = graph.components()
    m, head = decompose(target)
    expected_nf = Word((PkTuple.bone(target.dimension),) * m + (head,))
    normal_form_ok = expected_nf in fiber and all(normalize(word).expand() == expected_nf for word in fiber)
    if graph.stray:
        word, neighbor = graph.stray[0]
        logger.warning('Rewrite from %s to %s leaves the fiber of %s',
                       word.render(), neighbor.render(), target.render())
    report = FiberReport(
        target=target,
        fiber_size=len(fiber),
        component_count=len(components),
        component_sizes=tuple(len(members) for members in components),
        stray_edges=len(graph.stray),
        normal_form_ok=normal_form_ok,
    )
    logger.debug('Fiber %s: %d words, %d components', target.render(), len(fiber), len(components))
    return report


def check_target(coords: Tuple[int, ...], guard: int) -> FiberReport:
    """Sweep worker: check one target, turning a guard trip into a report."""
    target = PkTuple(coords)
    try:
        return verify_fiber_connected(target, guard)
    except ResourceLimitError as e:
        logger.warning('Skipping %s: %s', target.render(), e)
        return FiberReport(target=target, error=str(e))


def sweep_fibers(dimension: int, max_target: int, guard: int = DEFAULT_GUARD,
                 jobs: int = 1) -> Iterator[FiberReport]:
    """Check every target in [1, max_target]^dimension.

    Reports come back in target order whatever order workers finish in.
    With ``jobs > 1`` fibers are checked in a process pool.
    """
    targets = [t.coords for t in tuples_in_box(dimension, max_target)]
    logger.info('Checking %d fibers in dimension %d (guard %d, jobs %d)',
                len(targets), dimension, guard, jobs)
    if jobs <= 1:
        for coords in targets:
            yield check_target(coords, guard)
        return
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        yield from executor.map(check_target, targets, itertools.repeat(guard), chunksize=4)


@dataclass
class SweepSummary:
    """Order-insensitive tally of fiber reports."""
    checked: int = 0
    passed: int = 0
    failed: int = 0
    guard_errors: int = 0
    largest_fiber: int = 0

    def add(self, report: FiberReport) -> None:
        self.checked += 1
        if report.passed:
            self.passed += 1
        elif report.guard_tripped:
            self.guard_errors += 1
        else:
            self.failed += 1
        if report.fiber_size is not None:
            self.largest_fiber = max(self.largest_fiber, report.fiber_size)

    def extend(self, reports: Iterable[FiberReport]) -> None:
        for report in reports:
            self.add(report)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.guard_errors == 0


@dataclass
class CheckReport:
    """Outcome of an exhaustive sweep over a box."""
    name: str
    dimension: int
    bound: int
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    atoms: Tuple[Atom, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        logger.debug('%s: %s', self.name, message)
        self.failures.append(message)


def _strictly_below(t: PkTuple) -> Iterator[PkTuple]:
    """Yield every u with ``t - u`` in P^K."""
    for coords in itertools.product(*(range(1, value) for value in t.coords)):
        yield PkTuple(coords)


def verify_atoms_minimal(dimension: int, bound: int) -> CheckReport:
    """Check the atom criterion and generation by atoms on [1, bound]^dimension.

    For each tuple, an exhaustive search for a split ``u + v`` must fail
    exactly when some coordinate is 1.  Separately, every tuple of the box
    must be reachable from the box's atoms by addition.
    """
    report = CheckReport(name='atoms', dimension=dimension, bound=bound)
    generated: Dict[PkTuple, bool] = {}
    atoms: List[Atom] = []
    for t in tuples_in_box(dimension, bound):
        report.checked += 1
        split = next(((u, t - u) for u in _strictly_below(t)), None)
        if is_atom(t) == (split is not None):
            if split is None:
                report.fail(f'{t.render()} has no coordinate 1 but no split was found')
            else:
                u, v = split
                report.fail(f'{t.render()} has a coordinate 1 but splits as {u.render()} + {v.render()}')
        if split is None:
            atoms.append(Atom(t.coords))
        # summands precede t in coordinate order, so they are already settled
        generated[t] = split is None or any(generated[u] and generated[t - u] for u in _strictly_below(t))
        if not generated[t]:
            report.fail(f'{t.render()} is not a sum of atoms')
    report.atoms = tuple(atoms)
    logger.info('Atom sweep K=%d B=%d: %d tuples, %d atoms, %d failures',
                dimension, bound, report.checked, len(atoms), len(report.failures))
    return report


def decompositions(t: PkTuple) -> List[Tuple[int, Atom]]:
    """Return every (m, b) with b an atom and ``t == m*1 + b``, by exhaustive search."""
    found: List[Tuple[int, Atom]] = []
    for m in range(max(t.coords)):
        try:
            b = t.shifted(-m)
        except InvalidTupleError:
            continue
        if is_atom(b):
            found.append((m, Atom(b.coords)))
    return found


def verify_decompositions(dimension: int, bound: int) -> CheckReport:
    """Check that decompose() returns the one and only split on the box."""
    report = CheckReport(name='decompositions', dimension=dimension, bound=bound)
    for t in tuples_in_box(dimension, bound):
        report.checked += 1
        found = decompositions(t)
        m, b = decompose(t)
        if found != [(m, b)]:
            rendered = ', '.join(f'({n}, {c.render()})' for n, c in found)
            report.fail(f'{t.render()}: decompose gives ({m}, {b.render()}), search finds [{rendered}]')
        elif b.shifted(m) != t:
            report.fail(f'{t.render()}: {m}*1 + {b.render()} does not add back up')
    logger.info('Decomposition sweep K=%d B=%d: %d tuples, %d failures',
                dimension, bound, report.checked, len(report.failures))
    return report


def verify_relations(dimension: int, bound: int) -> CheckReport:
    """Check every schema relation for atom pairs in the box.

    Each must have ``m >= 1``, an atom on the right, both sides with the same
    value, and the two special cases ``x_1 x_b = x_1^1 x_b`` and
    ``x_a x_1 = x_1^1 x_a``.
    """
    report = CheckReport(name='relations', dimension=dimension, bound=bound)
    bone = PkTuple.bone(dimension)
    for relation in relations_in_box(dimension, bound):
        report.checked += 1
        a, b = relation.lhs
        label = relation.render()
        if relation.rhs_m < 1:
            report.fail(f'{label}: exponent is below 1')
        if not is_atom(relation.rhs_c):
            report.fail(f'{label}: right-hand letter is not an atom')
        if relation.rhs_c.shifted(relation.rhs_m) != a + b:
            report.fail(f'{label}: sides evaluate differently')
        if evaluate(relation.lhs_word()) != evaluate(relation.rhs_word()):
            report.fail(f'{label}: words evaluate differently')
        if a == bone and (relation.rhs_m, relation.rhs_c) != (1, b):
            report.fail(f'{label}: expected x1 x{b.render()} = x1^1 x{b.render()}')
        if b == bone and (relation.rhs_m, relation.rhs_c) != (1, a):
            report.fail(f'{label}: expected x{a.render()} x1 = x1^1 x{a.render()}')
    logger.info('Relation sweep K=%d B=%d: %d relations, %d failures',
                dimension, bound, report.checked, len(report.failures))
    return report

