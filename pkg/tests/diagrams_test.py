"""
Tests for ``exotic_cli.diagrams``.
"""

import pytest

from exotic_cli.diagrams import (
    Chord,
    ChordMonomial,
    bracketing_to_diagram,
    canonicalize,
    chords,
    cocompose,
    complete_crossing_pairs,
    crosses,
    enumerate_bracketings,
    enumerate_diagrams,
    enumerate_prime_bracketings,
    is_gravity,
    is_prime,
    parse_bracketing,
    perp,
    prime_diagrams,
    residue_diagram,
    split_pieces,
    tesselations,
)
from exotic_cli.exceptions import DomainError


def test_chord() -> None:
    """
    Test ``Chord``.
    """
    assert Chord.of(5, 4, 1) == Chord(5, 1, 4)
    assert Chord.of(5, 0, 3) == Chord(5, 3, 5)
    assert str(Chord(5, 1, 4)) == "{1,4}"
    assert Chord(5, 1, 4).to_dict() == {"i": 1, "j": 4}

    with pytest.raises(DomainError) as excinfo:
        Chord.of(5, 1, 2)
    assert str(excinfo.value) == "{1,2} is not a chord of the 5-gon"

    with pytest.raises(DomainError) as excinfo:
        Chord.of(5, 1, 5)
    assert str(excinfo.value) == "{1,5} is not a chord of the 5-gon"


def test_chords() -> None:
    """
    Test ``chords``.
    """
    assert chords(4) == [Chord(4, 1, 3), Chord(4, 2, 4)]
    assert len(chords(5)) == 5
    assert len(chords(6)) == 9

    with pytest.raises(DomainError) as excinfo:
        chords(3)
    assert str(excinfo.value) == "Polygons need at least 4 sides, got 3"


def test_crosses() -> None:
    """
    Test ``crosses``.
    """
    assert crosses(Chord(5, 1, 3), Chord(5, 2, 4))
    assert crosses(Chord(5, 2, 4), Chord(5, 1, 3))
    assert not crosses(Chord(5, 1, 3), Chord(5, 1, 4))
    assert not crosses(Chord(5, 1, 3), Chord(5, 3, 5))

    with pytest.raises(DomainError):
        crosses(Chord(5, 1, 3), Chord(6, 2, 4))


def test_perp() -> None:
    """
    Test ``perp``.
    """
    assert perp([Chord(4, 1, 3)], 4) == frozenset({Chord(4, 2, 4)})
    assert perp([Chord(5, 1, 3)], 5) == frozenset({Chord(5, 2, 4), Chord(5, 2, 5)})
    assert perp([Chord(5, 2, 4), Chord(5, 2, 5)], 5) == frozenset({Chord(5, 1, 3)})


def test_complete_crossing_pairs() -> None:
    """
    Test ``complete_crossing_pairs``.
    """
    assert complete_crossing_pairs(4) == [
        (frozenset({Chord(4, 1, 3)}), frozenset({Chord(4, 2, 4)})),
    ]
    pairs = complete_crossing_pairs(5)
    assert len(pairs) == 5
    for first, second in pairs:
        assert perp(first, 5) == second
        assert perp(second, 5) == first


def test_canonicalize() -> None:
    """
    Test ``canonicalize``.
    """
    assert canonicalize(5, [Chord(5, 3, 5), Chord(5, 1, 4)]) == ChordMonomial(
        5,
        (Chord(5, 1, 4), Chord(5, 3, 5)),
        -1,
    )
    assert canonicalize(5, [Chord(5, 1, 4), Chord(5, 1, 4)]) is None

    with pytest.raises(DomainError) as excinfo:
        canonicalize(5, [Chord(6, 1, 4)])
    assert str(excinfo.value) == "Chord {1,4} does not live on the 5-gon"


def test_chord_monomial() -> None:
    """
    Test ``ChordMonomial``.
    """
    monomial = ChordMonomial(5, (Chord(5, 1, 4), Chord(5, 3, 5)), -1)
    assert monomial.degree == 2
    assert str(monomial) == "-{1,4}{3,5}"
    assert str(ChordMonomial(5, ())) == "1"
    assert monomial.to_dict() == {
        "n": 5,
        "sign": -1,
        "chords": [{"i": 1, "j": 4}, {"i": 3, "j": 5}],
    }


def test_cocompose() -> None:
    """
    Test ``cocompose``.
    """
    monomial = ChordMonomial(6, (Chord(6, 1, 3),))
    assert cocompose(monomial, Chord(6, 1, 4)) == (
        ChordMonomial(4, ()),
        ChordMonomial(4, (Chord(4, 1, 3),)),
    )

    monomial = ChordMonomial(5, (Chord(5, 1, 4),))
    assert cocompose(monomial, Chord(5, 1, 3)) == (
        ChordMonomial(4, (Chord(4, 1, 3),)),
        ChordMonomial(3, ()),
    )

    # crossing and repeated chords kill the splitting
    assert cocompose(ChordMonomial(5, (Chord(5, 2, 4),)), Chord(5, 1, 3)) is None
    assert cocompose(ChordMonomial(5, (Chord(5, 1, 3),)), Chord(5, 1, 3)) is None


def test_residue_diagram() -> None:
    """
    Test ``residue_diagram``.
    """
    monomial = ChordMonomial(5, (Chord(5, 1, 3), Chord(5, 1, 4)))
    assert residue_diagram(monomial, Chord(5, 1, 3)) == (
        ChordMonomial(4, (Chord(4, 1, 3),)),
        ChordMonomial(3, ()),
    )
    assert residue_diagram(monomial, Chord(5, 2, 4)) is None

    pentagon = ChordMonomial(5, (Chord(5, 1, 4), Chord(5, 3, 5)))
    assert residue_diagram(pentagon, Chord(5, 1, 4)) is None
    assert residue_diagram(pentagon, Chord(5, 3, 5)) is None


def test_is_gravity() -> None:
    """
    Test ``is_gravity``.
    """
    assert is_gravity(ChordMonomial(5, (Chord(5, 1, 3), Chord(5, 1, 4))))
    assert is_gravity(ChordMonomial(5, (Chord(5, 1, 4), Chord(5, 3, 5))))
    assert not is_gravity(ChordMonomial(5, (Chord(5, 1, 3), Chord(5, 2, 4))))
    assert not is_gravity(ChordMonomial(5, (Chord(5, 2, 4), Chord(5, 3, 5))))


def test_is_prime() -> None:
    """
    Test ``is_prime``.
    """
    assert is_prime(ChordMonomial(5, (Chord(5, 1, 4), Chord(5, 3, 5))))
    assert not is_prime(ChordMonomial(5, (Chord(5, 1, 3), Chord(5, 1, 4))))
    assert not is_prime(ChordMonomial(4, (Chord(4, 1, 3),)))


def test_cocompose_heptagon() -> None:
    """
    Test ``cocompose`` and ``residue_diagram`` on a heptagon.
    """
    heptagon = ChordMonomial(7, (Chord(7, 1, 3), Chord(7, 2, 7), Chord(7, 3, 5)))
    assert cocompose(heptagon, Chord(7, 3, 6)) == (
        ChordMonomial(5, (Chord(5, 1, 3), Chord(5, 2, 5))),
        ChordMonomial(4, (Chord(4, 1, 3),)),
    )
    assert residue_diagram(heptagon, Chord(7, 3, 5)) == (
        ChordMonomial(6, (Chord(6, 1, 3), Chord(6, 2, 6))),
        ChordMonomial(3, ()),
    )
    assert not is_prime(heptagon)


def test_is_gravity_octagon() -> None:
    """
    Test ``is_gravity`` on octagons.
    """
    # middle corners form a side
    assert not is_gravity(ChordMonomial(8, (Chord(8, 2, 5), Chord(8, 4, 7))))
    # middle corners form a chord of the diagram
    octagon = ChordMonomial(8, (Chord(8, 1, 5), Chord(8, 3, 5), Chord(8, 3, 7)))
    assert not is_gravity(octagon)
    assert is_gravity(ChordMonomial(8, (Chord(8, 1, 5), Chord(8, 3, 7))))


def test_is_prime_hexagon() -> None:
    """
    Test ``is_prime`` on a hexagon.
    """
    hexagon = ChordMonomial(6, (Chord(6, 1, 5), Chord(6, 3, 6), Chord(6, 4, 6)))
    assert is_gravity(hexagon)
    assert is_prime(hexagon)


def test_enumerate_diagrams() -> None:
    """
    Test ``enumerate_diagrams``.
    """
    assert len(enumerate_diagrams(4, 1, "gravity")) == 2
    assert len(enumerate_diagrams(5, 1, "gravity")) == 5
    assert len(enumerate_diagrams(5, 2, "all")) == 10
    assert len(enumerate_diagrams(5, 2, "gravity")) == 6
    assert enumerate_diagrams(5, 2, "prime") == [
        ChordMonomial(5, (Chord(5, 1, 4), Chord(5, 3, 5))),
    ]
    assert len(enumerate_diagrams(6, 3, "prime")) == 4
    assert enumerate_diagrams(4, 0) == [ChordMonomial(4, ())]
    assert enumerate_diagrams(4, 1, "prime") == []


def test_enumerate_diagrams_errors() -> None:
    """
    Test ``enumerate_diagrams`` with invalid arguments.
    """
    with pytest.raises(DomainError) as excinfo:
        enumerate_diagrams(5, 3)
    assert str(excinfo.value) == "Degree must be between 0 and 2, got 3"

    with pytest.raises(DomainError) as excinfo:
        enumerate_diagrams(5, 1, "planar")
    assert str(excinfo.value) == "Unknown diagram class: planar"

    with pytest.raises(DomainError) as excinfo:
        enumerate_diagrams(3, 0)
    assert str(excinfo.value) == "Polygons need at least 4 sides, got 3"


def test_enumerate_bracketings() -> None:
    """
    Test ``enumerate_bracketings``.
    """
    assert enumerate_bracketings(1) == [1]
    assert enumerate_bracketings(2) == [(1, 2)]
    assert enumerate_bracketings(3) == [(1, (2, 3)), ((1, 2), 3)]
    assert len(enumerate_bracketings(4)) == 6

    with pytest.raises(DomainError) as excinfo:
        enumerate_bracketings(0)
    assert str(excinfo.value) == "Bracketings need at least one index, got 0"


def test_enumerate_prime_bracketings() -> None:
    """
    Test ``enumerate_prime_bracketings``.
    """
    assert enumerate_prime_bracketings(3) == []
    assert [str(bracketing) for bracketing in enumerate_prime_bracketings(4)] == [
        "[[1,3],[2,4]]",
    ]
    assert sorted(str(bracketing) for bracketing in enumerate_prime_bracketings(5)) == [
        "[[1,3],[[2,4],5]]",
        "[[1,4],[2,[3,5]]]",
        "[[1,[2,4]],[3,5]]",
        "[[[1,3],4],[2,5]]",
    ]


def test_parse_bracketing() -> None:
    """
    Test ``parse_bracketing``.
    """
    bracketing = parse_bracketing("[[1,3],[2,4]]")
    assert bracketing.word == ((1, 3), (2, 4))
    assert bracketing.size == 4
    assert str(bracketing) == "[[1,3],[2,4]]"
    assert str(parse_bracketing("[ [1, 3], [2, 4] ]")) == "[[1,3],[2,4]]"

    with pytest.raises(DomainError) as excinfo:
        parse_bracketing("[[1,3],[2,4]")
    assert str(excinfo.value) == "Invalid bracketing: [[1,3],[2,4]"

    with pytest.raises(DomainError) as excinfo:
        parse_bracketing("[[1,3],[2,5]]")
    assert str(excinfo.value) == "Indices must be 1..4 each exactly once"

    with pytest.raises(DomainError) as excinfo:
        parse_bracketing("[[1,2],[3,4]]")
    assert str(excinfo.value) == "[[1,2],[3,4]] is not a prime bracketing"

    with pytest.raises(DomainError) as excinfo:
        parse_bracketing("[[3,1],[2,4]]")
    assert str(excinfo.value) == (
        "Bracket [3,1] must have its smallest index on the left and its largest on the right"
    )

    with pytest.raises(DomainError) as excinfo:
        parse_bracketing("1")
    assert str(excinfo.value) == "A prime bracketing needs at least one bracket"


def test_bracketing_to_diagram() -> None:
    """
    Test ``bracketing_to_diagram``.
    """
    assert bracketing_to_diagram(parse_bracketing("[[1,3],[2,4]]")) == ChordMonomial(
        5,
        (Chord(5, 1, 4), Chord(5, 3, 5)),
        -1,
    )
    assert bracketing_to_diagram(parse_bracketing("[[[1,3],4],[2,5]]")) == ChordMonomial(
        6,
        (Chord(6, 1, 5), Chord(6, 3, 6), Chord(6, 4, 6)),
        -1,
    )


def test_prime_diagrams() -> None:
    """
    Test ``prime_diagrams``.
    """
    ((monomial, bracketing),) = prime_diagrams(5)
    assert monomial == ChordMonomial(5, (Chord(5, 1, 4), Chord(5, 3, 5)), -1)
    assert str(bracketing) == "[[1,3],[2,4]]"

    hexagon = prime_diagrams(6)
    assert [
        [(chord.i, chord.j) for chord in monomial.chords] for monomial, _ in hexagon
    ] == [
        [(1, 4), (1, 5), (3, 6)],
        [(1, 4), (2, 5), (4, 6)],
        [(1, 5), (2, 5), (4, 6)],
        [(1, 5), (3, 6), (4, 6)],
    ]
    assert [str(bracketing) for _, bracketing in hexagon] == [
        "[[1,3],[[2,4],5]]",
        "[[1,[2,4]],[3,5]]",
        "[[1,4],[2,[3,5]]]",
        "[[[1,3],4],[2,5]]",
    ]


def test_tesselations() -> None:
    """
    Test ``tesselations``.
    """
    assert len(tesselations(4)) == 3
    assert len(tesselations(5)) == 11
    assert all(
        not crosses(first, second)
        for tesselation in tesselations(6)
        for first in tesselation.chords
        for second in tesselation.chords
    )


def test_split_pieces() -> None:
    """
    Test ``split_pieces``.
    """
    assert split_pieces(6, []) == [6]
    assert split_pieces(6, [Chord(6, 1, 4)]) == [4, 4]
    assert split_pieces(5, [Chord(5, 1, 3)]) == [4, 3]
    assert sorted(split_pieces(6, [Chord(6, 1, 3), Chord(6, 1, 5)])) == [3, 3, 4]

    with pytest.raises(DomainError) as excinfo:
        split_pieces(5, [Chord(5, 1, 3), Chord(5, 2, 4)])
    assert str(excinfo.value) == "Chords of a tesselation must not cross"
