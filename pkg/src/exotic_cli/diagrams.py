"""
Chords, tesselations and chord diagrams on labeled polygons.

Labels follow the polygon convention: label ``a`` is the corner between side
``a`` and side ``a + 1``, and label ``n`` sits between side ``n`` and side 1.
A chord joins two corners that are not neighbours.
"""

import itertools
import json
import logging
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from exotic_cli.exceptions import DomainError
from exotic_cli.lib import sort_with_sign

_logger = logging.getLogger(__name__)

Bracket = Union[int, Tuple[Any, Any]]

DIAGRAM_CLASSES = ("gravity", "prime", "all")


class Chord(NamedTuple):
    """
    A chord ``{i, j}`` on an n-gon, normalized so that ``i < j``.
    """

    n: int
    i: int
    j: int

    @classmethod
    def of(cls, n: int, a: int, b: int) -> "Chord":
        """
        Build a chord from two labels, reading them modulo ``n`` (0 is ``n``).
        """
        a, b = (a - 1) % n + 1, (b - 1) % n + 1
        i, j = min(a, b), max(a, b)
        if i == j or j - i in {1, n - 1}:
            raise DomainError(f"{{{a},{b}}} is not a chord of the {n}-gon")
        return cls(n, i, j)

    def __str__(self) -> str:
        return f"{{{self.i},{self.j}}}"

    def to_dict(self) -> Dict[str, int]:
        """
        Serialize the chord as ``{i, j}``.
        """
        return {"i": self.i, "j": self.j}


class ChordMonomial(NamedTuple):
    """
    A signed product of chords in canonical (sorted) order.
    """

    n: int
    chords: Tuple[Chord, ...]
    sign: int = 1

    @property
    def degree(self) -> int:
        """
        Number of chords.
        """
        return len(self.chords)

    def __str__(self) -> str:
        prefix = "-" if self.sign < 0 else ""
        return prefix + ("".join(str(chord) for chord in self.chords) or "1")

    def to_dict(self) -> Dict[str, Any]:
        """
        Serialize as ``{n, sign, chords}``.
        """
        return {"n": self.n, "sign": self.sign, "chords": [chord.to_dict() for chord in self.chords]}


class Tesselation(NamedTuple):
    """
    A set of pairwise non-crossing chords.
    """

    n: int
    chords: Tuple[Chord, ...]


class PrimeBracketing(NamedTuple):
    """
    A prime Lie bracketing of the indices ``1..m``.
    """

    word: Bracket

    @property
    def size(self) -> int:
        """
        Number of indices, which is ``n - 1`` for the associated polygon.
        """
        return len(leaves(self.word))

    def __str__(self) -> str:
        return format_bracketing(self.word)


def _check_size(n: int) -> None:
    if n < 4:
        raise DomainError(f"Polygons need at least 4 sides, got {n}")


def chords(n: int) -> List[Chord]:
    """
    Return all chords of the n-gon in canonical order.
    """
    _check_size(n)
    return [
        Chord(n, i, j)
        for i in range(1, n + 1)
        for j in range(i + 2, n + 1)
        if j - i != n - 1
    ]


def crosses(first: Chord, second: Chord) -> bool:
    """
    Return whether two chords cross in the interior of the polygon.
    """
    if first.n != second.n:
        raise DomainError(f"Chords live on different polygons: {first.n} != {second.n}")
    i, j = first.i, first.j
    k, l = second.i, second.j  # pylint: disable=invalid-name
    return i < k < j < l or k < i < l < j


def perp(subset: Iterable[Chord], n: int) -> FrozenSet[Chord]:
    """
    Return the chords that cross every chord in ``subset``.
    """
    members = list(subset)
    return frozenset(
        chord for chord in chords(n) if all(crosses(chord, other) for other in members)
    )


def complete_crossing_pairs(n: int) -> List[Tuple[FrozenSet[Chord], FrozenSet[Chord]]]:
    """
    Return the pairs ``(A, B)`` with ``perp(A) = B`` and ``perp(B) = A``.

    The pairs are found by closing singletons and 2-subsets under ``perp``.
    """
    all_chords = chords(n)
    seeds = itertools.chain(
        ((chord,) for chord in all_chords),
        itertools.combinations(all_chords, 2),
    )

    found = set()
    for seed in seeds:
        first = perp(perp(seed, n), n)
        second = perp(first, n)
        if not first or not second or perp(second, n) != first:
            continue
        found.add(frozenset({first, second}))

    pairs = []
    for pair in found:
        first, second = sorted(pair, key=sorted)
        pairs.append((first, second))
    return sorted(pairs, key=lambda pair: (sorted(pair[0]), sorted(pair[1])))


def canonicalize(
    n: int,
    chord_list: Sequence[Chord],
    sign: int = 1,
) -> Optional[ChordMonomial]:
    """
    Sort chords into canonical order, returning ``None`` on a repeated chord.
    """
    sorted_chords, parity = sort_with_sign(chord_list)
    if sorted_chords is None:
        return None
    for chord in sorted_chords:
        if chord.n != n:
            raise DomainError(f"Chord {chord} does not live on the {n}-gon")
    return ChordMonomial(n, sorted_chords, sign * parity)


def cocompose(
    monomial: ChordMonomial,
    chord: Chord,
) -> Optional[Tuple[ChordMonomial, ChordMonomial]]:
    """
    Split a monomial along a chord into an outer and an inner polygon.

    The outer polygon keeps the corners ``1..a`` and ``b..n``, the inner one
    the corners ``a..b``, both relabeled in order. The result vanishes if a
    chord of the monomial equals or crosses the splitting chord. The overall
    sign sits on the outer factor.
    """
    n, a, b = monomial.n, chord.i, chord.j
    outer_size = n - (b - a) + 1
    inner_size = b - a + 1

    def outer_label(label: int) -> int:
        return label if label <= a else label - (b - a) + 1

    def inner_label(label: int) -> int:
        return label - a + 1

    outer: List[Chord] = []
    inner: List[Chord] = []
    shuffle = 1
    for member in monomial.chords:
        if member == chord or crosses(member, chord):
            return None
        if a <= member.i and member.j <= b:
            inner.append(
                Chord.of(inner_size, inner_label(member.i), inner_label(member.j)),
            )
        else:
            if len(inner) % 2:
                shuffle = -shuffle
            outer.append(
                Chord.of(outer_size, outer_label(member.i), outer_label(member.j)),
            )

    left = canonicalize(outer_size, outer, monomial.sign * shuffle)
    right = canonicalize(inner_size, inner)
    if left is None or right is None:  # pragma: no cover
        raise DomainError(f"Relabeling {monomial} along {chord} produced a repeat")
    return ChordMonomial(left.n, left.chords, left.sign * right.sign), ChordMonomial(
        right.n,
        right.chords,
    )


def residue_diagram(
    monomial: ChordMonomial,
    chord: Chord,
) -> Optional[Tuple[ChordMonomial, ChordMonomial]]:
    """
    Remove ``chord`` from the monomial and split along it.
    """
    if chord not in monomial.chords:
        return None
    position = monomial.chords.index(chord)
    rest = monomial.chords[:position] + monomial.chords[position + 1 :]
    sign = monomial.sign * (-1) ** position
    return cocompose(ChordMonomial(monomial.n, rest, sign), chord)


def _opposite_pair(first: Chord, second: Chord) -> Tuple[int, int]:
    """
    Return the two middle corners of a crossing pair.

    Corners are read in the cyclic order ``n, 1, 2, ..., n - 1``, so the
    top side (between corner ``n`` and corner 1) is at the start.
    """
    n = first.n
    corners = sorted((first.i, first.j, second.i, second.j), key=lambda label: label % n)
    return corners[1], corners[2]


def is_gravity(monomial: ChordMonomial) -> bool:
    """
    Return whether no crossing pair of the diagram is inadmissible.

    A crossing pair is inadmissible when the pair of corners opposite the top
    side is a side of the polygon or a chord of the diagram.
    """
    n = monomial.n
    members = set(monomial.chords)
    for first, second in itertools.combinations(monomial.chords, 2):
        if not crosses(first, second):
            continue
        x, y = _opposite_pair(first, second)  # pylint: disable=invalid-name
        if abs(x - y) in {1, n - 1}:
            return False
        if Chord.of(n, x, y) in members:
            return False
    return True


def is_prime(monomial: ChordMonomial) -> bool:
    """
    Return whether the diagram is gravity and has no residual chords.
    """
    return is_gravity(monomial) and all(
        residue_diagram(monomial, chord) is None for chord in monomial.chords
    )


@lru_cache(maxsize=None)
def _enumerate(n: int, k: int, kind: str) -> Tuple[ChordMonomial, ...]:
    monomials = (
        ChordMonomial(n, combination) for combination in itertools.combinations(chords(n), k)
    )
    if kind == "gravity":
        return tuple(monomial for monomial in monomials if is_gravity(monomial))
    if kind == "prime":
        return tuple(monomial for monomial in monomials if is_prime(monomial))
    return tuple(monomials)


def enumerate_diagrams(n: int, k: int, kind: str = "all") -> List[ChordMonomial]:
    """
    Return all canonical monomials of ``k`` chords in the requested class.
    """
    _check_size(n)
    if not 0 <= k <= n - 3:
        raise DomainError(f"Degree must be between 0 and {n - 3}, got {k}")
    if kind not in DIAGRAM_CLASSES:
        raise DomainError(f"Unknown diagram class: {kind}")
    return list(_enumerate(n, k, kind))


def leaves(word: Bracket) -> List[int]:
    """
    Return the indices of a bracketing, left to right.
    """
    if isinstance(word, int):
        return [word]
    return leaves(word[0]) + leaves(word[1])


def _inner_brackets(word: Bracket) -> Iterator[Tuple[Any, Any]]:
    """
    Yield the brackets below the outermost one, outside in and left to right.
    """

    def visit(node: Bracket) -> Iterator[Tuple[Any, Any]]:
        if isinstance(node, int):
            return
        yield node
        yield from visit(node[0])
        yield from visit(node[1])

    if isinstance(word, int):
        return
    yield from visit(word[0])
    yield from visit(word[1])


def _is_interval(indices: Sequence[int]) -> bool:
    return max(indices) - min(indices) + 1 == len(indices)


def is_prime_bracket(word: Bracket) -> bool:
    """
    Return whether only the outermost bracket encloses consecutive indices.
    """
    return all(not _is_interval(leaves(node)) for node in _inner_brackets(word))


def _brackets_of(indices: Tuple[int, ...]) -> Iterator[Bracket]:
    if len(indices) == 1:
        yield indices[0]
        return
    first, middle = indices[0], indices[1:-1]
    for size in range(len(middle) + 1):
        for chosen in itertools.combinations(middle, size):
            left = tuple(sorted((first,) + chosen))
            right = tuple(index for index in indices if index not in left)
            for left_word in _brackets_of(left):
                for right_word in _brackets_of(right):
                    yield (left_word, right_word)


def enumerate_bracketings(size: int) -> List[Bracket]:
    """
    Return the Lie bracketings of ``1..size`` with minimum left, maximum right.
    """
    if size < 1:
        raise DomainError(f"Bracketings need at least one index, got {size}")
    return list(_brackets_of(tuple(range(1, size + 1))))


def enumerate_prime_bracketings(size: int) -> List[PrimeBracketing]:
    """
    Return the prime bracketings of ``1..size``.
    """
    return [
        PrimeBracketing(word)
        for word in enumerate_bracketings(size)
        if not isinstance(word, int) and is_prime_bracket(word)
    ]


def _validate_word(word: Bracket) -> None:
    if isinstance(word, int):
        return
    left, right = word
    _validate_word(left)
    _validate_word(right)
    indices = leaves(word)
    if min(indices) not in leaves(left) or max(indices) not in leaves(right):
        raise DomainError(
            f"Bracket {format_bracketing(word)} must have its smallest index "
            "on the left and its largest on the right",
        )


def make_bracketing(word: Bracket) -> PrimeBracketing:
    """
    Validate a word and wrap it as a prime bracketing.
    """
    if isinstance(word, int):
        raise DomainError("A prime bracketing needs at least one bracket")
    indices = leaves(word)
    if sorted(indices) != list(range(1, len(indices) + 1)):
        raise DomainError(f"Indices must be 1..{len(indices)} each exactly once")
    _validate_word(word)
    if not is_prime_bracket(word):
        raise DomainError(f"{format_bracketing(word)} is not a prime bracketing")
    return PrimeBracketing(word)


def parse_bracketing(text: str) -> PrimeBracketing:
    """
    Parse the text form, eg, ``[[1,3],[2,4]]``.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as ex:
        raise DomainError(f"Invalid bracketing: {text}") from ex

    def convert(node: Any) -> Bracket:
        if isinstance(node, int):
            return node
        if isinstance(node, list) and len(node) == 2:
            return (convert(node[0]), convert(node[1]))
        raise DomainError(f"Invalid bracketing: {text}")

    return make_bracketing(convert(payload))


def format_bracketing(word: Bracket) -> str:
    """
    Render a bracketing without whitespace.
    """
    if isinstance(word, int):
        return str(word)
    return f"[{format_bracketing(word[0])},{format_bracketing(word[1])}]"


def bracketing_to_diagram(bracketing: PrimeBracketing) -> ChordMonomial:
    """
    Return the prime diagram associated with a prime bracketing.

    An inner bracket with smallest index ``i`` and largest ``j`` becomes the
    chord ``{i - 1, j}``, where corner 0 is corner ``n``. The sign records
    the order in which brackets are read, outside in and left to right.
    """
    n = bracketing.size + 1
    chord_list = [
        Chord.of(n, min(leaves(node)) - 1, max(leaves(node)))
        for node in _inner_brackets(bracketing.word)
    ]
    monomial = canonicalize(n, chord_list)
    if monomial is None:  # pragma: no cover
        raise DomainError(f"{bracketing} produced a repeated chord")
    return monomial


def prime_diagrams(n: int) -> List[Tuple[ChordMonomial, Optional[PrimeBracketing]]]:
    """
    Return the top-degree prime diagrams with the bracketings they come from.

    Diagrams are returned in canonical order; the monomial carries the sign
    of the bracketing reading order.
    """
    _check_size(n)
    by_chords = {}
    for bracketing in enumerate_prime_bracketings(n - 1):
        monomial = bracketing_to_diagram(bracketing)
        by_chords[monomial.chords] = (monomial, bracketing)

    return [
        by_chords.get(diagram.chords, (diagram, None))
        for diagram in enumerate_diagrams(n, n - 3, "prime")
    ]


def tesselations(n: int) -> List[Tesselation]:
    """
    Return all sets of pairwise non-crossing chords, the empty set included.
    """
    all_chords = chords(n)
    found: List[Tesselation] = []

    def extend(start: int, chosen: List[Chord]) -> None:
        found.append(Tesselation(n, tuple(chosen)))
        for index in range(start, len(all_chords)):
            candidate = all_chords[index]
            if any(crosses(candidate, member) for member in chosen):
                continue
            extend(index + 1, chosen + [candidate])

    extend(0, [])
    return found


def split_pieces(n: int, chord_list: Sequence[Chord]) -> List[int]:
    """
    Return the sizes of the polygons cut out by non-crossing chords.
    """
    if not chord_list:
        return [n]
    first, rest = chord_list[0], list(chord_list[1:])
    split = cocompose(ChordMonomial(n, tuple(rest)), first)
    if split is None:
        raise DomainError("Chords of a tesselation must not cross")
    outer, inner = split
    return split_pieces(outer.n, outer.chords) + split_pieces(inner.n, inner.chords)
