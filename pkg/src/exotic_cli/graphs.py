"""
Tadpole graphs at the abelianized chain level.

A graph on ``n - 1`` vertices is a wedge word in odd generators: edges
``b_ij`` (``i < j``) and tadpoles ``s_k``. Words are kept in the canonical
order ``s_1 < ... < s_{n-1} < b_12 < b_13 < ...``. Generators carrying the
index ``n`` only appear transiently and are eliminated through the sum
relations of the ribbon braid Lie algebra.
"""

import itertools
import logging
import re
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from exotic_cli.arnold import kz, regularize
from exotic_cli.diagrams import Chord, ChordMonomial, enumerate_diagrams
from exotic_cli.exceptions import DomainError
from exotic_cli.lib import sort_with_sign

_logger = logging.getLogger(__name__)

TADPOLE = 0
EDGE = 1


class GraphGenerator(NamedTuple):
    """
    A tadpole ``s_i`` (``kind=0``, ``j=0``) or an edge ``b_ij`` (``kind=1``).
    """

    kind: int
    i: int
    j: int = 0

    @property
    def is_edge(self) -> bool:
        """
        Whether the generator is an edge.
        """
        return self.kind == EDGE

    def indices(self) -> Tuple[int, ...]:
        """
        The vertices the generator touches.
        """
        return (self.i, self.j) if self.is_edge else (self.i,)

    def __str__(self) -> str:
        return f"b{self.i}{self.j}" if self.is_edge else f"s{self.i}"


Key = Tuple[GraphGenerator, ...]


def s(k: int) -> GraphGenerator:  # pylint: disable=invalid-name
    """
    The tadpole at vertex ``k``.
    """
    return GraphGenerator(TADPOLE, k)


def b(i: int, j: int) -> GraphGenerator:  # pylint: disable=invalid-name
    """
    The edge between vertices ``i`` and ``j``.
    """
    if i == j:
        raise DomainError(f"An edge needs distinct endpoints, got {i}")
    return GraphGenerator(EDGE, min(i, j), max(i, j))


class GraphMonomial(NamedTuple):
    """
    A signed canonical wedge word.
    """

    n: int
    generators: Key
    sign: int = 1

    def __str__(self) -> str:
        prefix = "-" if self.sign < 0 else ""
        return prefix + ("".join(str(generator) for generator in self.generators) or "1")


class GraphChain:
    """
    A rational combination of canonical wedge words.
    """

    def __init__(self, n: int, terms: Optional[Mapping[Key, Union[int, Fraction]]] = None):
        self.n = n
        self.terms: Dict[Key, Fraction] = {}
        for key, value in (terms or {}).items():
            if value:
                self.terms[key] = Fraction(value)

    @classmethod
    def unit(cls, n: int) -> "GraphChain":
        """
        The empty graph.
        """
        return cls(n, {(): 1})

    @classmethod
    def linear(cls, n: int, generators: Iterable[GraphGenerator], coefficient: int = 1) -> "GraphChain":
        """
        A sum of single generators.
        """
        terms: Dict[Key, Fraction] = {}
        for generator in generators:
            terms[(generator,)] = terms.get((generator,), Fraction(0)) + coefficient
        return cls(n, terms)

    @classmethod
    def from_monomial(cls, monomial: GraphMonomial) -> "GraphChain":
        """
        The chain of a single signed word.
        """
        return cls(monomial.n, {monomial.generators: monomial.sign})

    def __add__(self, other: "GraphChain") -> "GraphChain":
        self._check(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + value
        return GraphChain(self.n, terms)

    def __neg__(self) -> "GraphChain":
        return self.scale(-1)

    def __sub__(self, other: "GraphChain") -> "GraphChain":
        return self + (-other)

    def scale(self, factor: Union[int, Fraction]) -> "GraphChain":
        """
        Multiply every coefficient by a scalar.
        """
        return GraphChain(self.n, {key: value * factor for key, value in self.terms.items()})

    def wedge(self, other: "GraphChain") -> "GraphChain":
        """
        Graded-commutative product of two chains.
        """
        self._check(other)
        terms: Dict[Key, Fraction] = {}
        for left, left_value in self.terms.items():
            for right, right_value in other.terms.items():
                key, sign = sort_with_sign(left + right)
                if key is None:
                    continue
                terms[key] = terms.get(key, Fraction(0)) + sign * left_value * right_value
        return GraphChain(self.n, terms)

    def _check(self, other: "GraphChain") -> None:
        if self.n != other.n:
            raise DomainError(f"Chains have different arities: {self.n} != {other.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphChain):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self) -> str:
        return f"GraphChain({self.n}, {self.terms!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"{value}*{''.join(str(generator) for generator in key) or '1'}"
            for key, value in sorted(self.terms.items())
        )

    def is_zero(self) -> bool:
        """
        Return whether all coefficients vanish.
        """
        return not self.terms

    def max_index(self) -> int:
        """
        Largest vertex index present.
        """
        return max(
            (index for key in self.terms for generator in key for index in generator.indices()),
            default=0,
        )


def wedge_all(n: int, factors: Sequence[GraphChain]) -> GraphChain:
    """
    Wedge an ordered sequence of chains.
    """
    result = GraphChain.unit(n)
    for factor in factors:
        result = result.wedge(factor)
    return result


def substitute(chain: GraphChain, image: Callable[[GraphGenerator], GraphChain], n: Optional[int] = None) -> GraphChain:
    """
    Apply the algebra map determined by the images of generators.
    """
    target = chain.n if n is None else n
    result = GraphChain(target)
    cache: Dict[GraphGenerator, GraphChain] = {}
    for key, value in chain.terms.items():
        factors = []
        for generator in key:
            if generator not in cache:
                cache[generator] = image(generator)
            factors.append(cache[generator])
        result = result + wedge_all(target, factors).scale(value)
    return result


def interval_gamma(n: int, labels: Sequence[int]) -> GraphChain:
    """
    Return the sum of all edges and tadpoles inside a set of vertices.

    Labels may include ``n``, in which case the result still needs
    ``eliminate``.
    """
    labels = sorted(labels)
    generators = [b(r, t) for r, t in itertools.combinations(labels, 2)]
    generators += [s(k) for k in labels]
    return GraphChain.linear(n, generators)


def _arc(n: int, start: int, end: int) -> List[int]:
    """
    Labels strictly after ``start`` up to ``end``, going around the polygon.
    """
    labels = []
    label = start
    while label != end:
        label = label % n + 1
        labels.append(label)
    return labels


def gamma_generator(n: int, chord: Chord) -> GraphChain:
    """
    Return the image of the dihedral generator of a chord.

    Reading corners in the order ``n < 1 < ... < n - 1``, with ``i`` before
    ``j``, this is the sum over the labels in ``(i, j]``. The index ``n``
    never occurs.
    """
    if chord.n != n:
        raise DomainError(f"Chord {chord} does not live on the {n}-gon")
    first, second = sorted((chord.i, chord.j), key=lambda label: label % n)
    return interval_gamma(n, _arc(n, first, second))


def gamma_chain(monomial: ChordMonomial) -> GraphChain:
    """
    Return the ordered wedge of the images of the chords of a monomial.
    """
    n = monomial.n
    chain = wedge_all(n, [gamma_generator(n, chord) for chord in monomial.chords])
    return chain.scale(monomial.sign)


def eliminate_index_n(generator: GraphGenerator, n: int) -> GraphChain:
    """
    Rewrite a generator touching index ``n`` in the free basis.

    The edge ``b_an`` becomes ``-2 s_a - sum_{i != a} b_ia`` and the tadpole
    ``s_n`` becomes the sum of all tadpoles and edges on ``1..n-1``.
    """
    free = range(1, n)
    if generator.is_edge and generator.j == n:
        a = generator.i  # pylint: disable=invalid-name
        chain = GraphChain.linear(n, [s(a)], -2)
        return chain + GraphChain.linear(n, [b(i, a) for i in free if i != a], -1)
    if not generator.is_edge and generator.i == n:
        return interval_gamma(n, list(free))
    if generator.i > n or generator.j > n:
        raise DomainError(f"Generator {generator} is out of range for n={n}")
    return GraphChain(n, {(generator,): 1})


def eliminate(chain: GraphChain) -> GraphChain:
    """
    Rewrite every generator touching index ``n``.
    """
    return substitute(chain, lambda generator: eliminate_index_n(generator, chain.n))


def cyclic_tau(chain: GraphChain) -> GraphChain:
    """
    Shift all indices by one modulo ``n``, then eliminate index ``n``.
    """
    n = chain.n

    def image(generator: GraphGenerator) -> GraphChain:
        shifted = (
            b(generator.i % n + 1, generator.j % n + 1)
            if generator.is_edge
            else s(generator.i % n + 1)
        )
        return eliminate_index_n(shifted, n)

    return substitute(chain, image)


def well_definedness_defect(n: int, chord: Chord) -> GraphChain:
    """
    Compare the images of a chord computed from its two complementary arcs.

    The result is zero exactly when both arcs give the same chain after
    elimination.
    """
    first, second = sorted((chord.i, chord.j), key=lambda label: label % n)
    other = eliminate(interval_gamma(n, _arc(n, second, first)))
    return gamma_generator(n, chord) - other


def _insertion_image(
    generator: GraphGenerator,
    slot: int,
    inserted: int,
    n: int,
) -> GraphChain:
    """
    Image of a generator of the outer graph when vertex ``slot`` is replaced
    by ``inserted`` vertices.
    """
    shift = inserted - 1
    block = range(slot, slot + inserted)
    if generator.is_edge:
        p, q = generator.i, generator.j  # pylint: disable=invalid-name
        if q < slot:
            return GraphChain.linear(n, [generator])
        if p < slot < q:
            return GraphChain.linear(n, [b(p, q + shift)])
        if q == slot:
            return GraphChain.linear(n, [b(p, r) for r in block])
        if p == slot:
            return GraphChain.linear(n, [b(r, q + shift) for r in block])
        return GraphChain.linear(n, [b(p + shift, q + shift)])
    p = generator.i  # pylint: disable=invalid-name
    if p < slot:
        return GraphChain.linear(n, [generator])
    if p > slot:
        return GraphChain.linear(n, [s(p + shift)])
    return interval_gamma(n, list(block))


def compose_graphs(outer: GraphMonomial, inner: GraphMonomial, slot: int) -> GraphChain:
    """
    Insert ``inner`` at vertex ``slot`` of ``outer``.

    Edges at the removed vertex are re-attached to every vertex of the
    inserted graph, and its tadpole spreads over the inserted graph as the
    sum of all its edges and tadpoles. The sign comes from the wedge
    algebra: the image of ``outer`` is followed by the relabeled ``inner``.
    """
    vertices = outer.n - 1
    if not 1 <= slot <= vertices:
        raise DomainError(f"Slot {slot} is out of range 1..{vertices}")
    inserted = inner.n - 1
    n = outer.n + inner.n - 2

    outer_chain = GraphChain.from_monomial(outer)
    image = substitute(
        outer_chain,
        lambda generator: _insertion_image(generator, slot, inserted, n),
        n,
    )
    offset = slot - 1
    relabeled = GraphChain.from_monomial(
        GraphMonomial(
            n,
            tuple(
                b(generator.i + offset, generator.j + offset)
                if generator.is_edge
                else s(generator.i + offset)
                for generator in inner.generators
            ),
            inner.sign,
        ),
    )
    # relabeling by a shift preserves the canonical order
    return image.wedge(relabeled)


def compose_chains(outer: GraphChain, inner: GraphChain, slot: int) -> GraphChain:
    """
    Bilinear extension of ``compose_graphs``.
    """
    n = outer.n + inner.n - 2
    result = GraphChain(n)
    for outer_key, outer_value in outer.terms.items():
        for inner_key, inner_value in inner.terms.items():
            composed = compose_graphs(
                GraphMonomial(outer.n, outer_key),
                GraphMonomial(inner.n, inner_key),
                slot,
            )
            result = result + composed.scale(outer_value * inner_value)
    return result


def is_normal_form(generators: Iterable[GraphGenerator]) -> bool:
    """
    Return whether a word avoids the patterns ``b_ij b_jk`` and ``b_ik b_jk b_jl``.
    """
    edges = {(generator.i, generator.j) for generator in generators if generator.is_edge}
    for (i, j), (k, l) in itertools.permutations(edges, 2):  # pylint: disable=invalid-name
        if j == k:
            return False
    for (i, k), (j, other) in itertools.permutations(edges, 2):  # pylint: disable=invalid-name
        if other != k or not i < j:
            continue
        if any(first == j and k < last for first, last in edges):
            return False
    return True


class BVClassVector:
    """
    Coefficients of a class in the normal-form basis.
    """

    def __init__(self, n: int, terms: Optional[Mapping[Key, Any]] = None):
        self.n = n
        self.terms: Dict[Key, Any] = dict(terms or {})
        for key in self.terms:
            if not is_normal_form(key):
                raise DomainError(f"{GraphMonomial(n, key)} is not in normal form")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BVClassVector):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"BVClassVector({self.n}, {self.terms!r})"

    def printed_terms(self) -> Dict[str, Any]:
        """
        Map each printed word to its printed (display-signed) coefficient.
        """
        printed = {}
        for key, value in self.terms.items():
            word, sign = render_word(self.n, key)
            printed[word] = value * sign
        return printed


def extract_bv(chain: GraphChain) -> BVClassVector:
    """
    Restrict a chain to its normal-form words.
    """
    if chain.max_index() >= chain.n:
        raise DomainError("Eliminate index n before extracting classes")
    return BVClassVector(
        chain.n,
        {key: value for key, value in chain.terms.items() if is_normal_form(key)},
    )


class _Node(NamedTuple):
    left: Any
    right: Any
    edge: GraphGenerator


def _forest(n: int, key: Key) -> List[Any]:
    """
    Merge clusters along edges, shortest edges first.

    Returns the components ordered by their smallest vertex; a component is a
    vertex label or a ``_Node``.
    """
    cluster: Dict[int, Any] = {vertex: vertex for vertex in range(1, n)}
    members: Dict[int, List[int]] = {vertex: [vertex] for vertex in range(1, n)}
    owner: Dict[int, int] = {vertex: vertex for vertex in range(1, n)}

    edges = sorted(
        (generator for generator in key if generator.is_edge),
        key=lambda edge: (edge.j - edge.i, edge.i, edge.j),
    )
    for edge in edges:
        left, right = owner[edge.i], owner[edge.j]
        if left == right:
            raise DomainError(f"{GraphMonomial(n, key)} contains a cycle")
        cluster[left] = _Node(cluster[left], cluster.pop(right), edge)
        members[left] += members.pop(right)
        for vertex in members[left]:
            owner[vertex] = left

    return [cluster[root] for root in sorted(cluster, key=lambda root: min(members[root]))]


def _render(tree: Any, tadpoles: set) -> str:
    if isinstance(tree, int):
        return f"Δ({tree})" if tree in tadpoles else str(tree)
    return "{" + _render(tree.left, tadpoles) + "," + _render(tree.right, tadpoles) + "}"


def _preorder_edges(tree: Any) -> List[GraphGenerator]:
    if isinstance(tree, int):
        return []
    return [tree.edge] + _preorder_edges(tree.left) + _preorder_edges(tree.right)


def display_order(n: int, key: Key) -> Key:
    """
    Generators in the order the printed word reads them.

    Brackets come first, outside in and left to right over the components,
    followed by the tadpoles in increasing order.
    """
    edges: List[GraphGenerator] = []
    for tree in _forest(n, key):
        edges.extend(_preorder_edges(tree))
    tadpoles = sorted(generator for generator in key if not generator.is_edge)
    return tuple(edges + tadpoles)


def render_word(n: int, key: Key) -> Tuple[str, int]:
    """
    Return the printed word of a canonical key and its display sign.

    Components are juxtaposed, or separated by spaces once there are more
    than ``WIDE_INPUTS`` inputs.
    """
    tadpoles = {generator.i for generator in key if not generator.is_edge}
    separator = " " if n - 1 > WIDE_INPUTS else ""
    word = separator.join(_render(tree, tadpoles) for tree in _forest(n, key))
    _, sign = sort_with_sign(display_order(n, key))
    return word, sign


def _format_coefficient(value: Any, first: bool) -> str:
    if isinstance(value, (int, Fraction)):
        negative = value < 0
        magnitude = abs(Fraction(value))
        body = "" if magnitude == 1 else f"{magnitude}*"
    else:
        negative, body = False, f"({value})*"
    if first:
        return ("-" if negative else "") + body
    return (" - " if negative else " + ") + body


def pretty_print_bv(vector: BVClassVector) -> str:
    """
    Render a class vector in bracket notation, eg, ``{1,3}{2,4} - {1,2}{3,4}``.
    """
    if not vector.terms:
        return "0"
    parts = []
    for key in sorted(vector.terms):
        word, sign = render_word(vector.n, key)
        value = vector.terms[key]
        parts.append(_format_coefficient(value * sign, not parts) + word)
    return "".join(parts)


_TOKEN = re.compile(r"Δ\((\d)\)|\{|\}|,|\d")
_WIDE_TOKEN = re.compile(r"Δ\((\d+)\)|\{|\}|,|\d+|\s+")

# above this many inputs labels take two digits and components are spaced
WIDE_INPUTS = 9


def _parse_trees(text: str, wide: bool = False) -> List[Any]:
    pattern = _WIDE_TOKEN if wide else _TOKEN
    tokens = []
    position = 0
    while position < len(text):
        match = pattern.match(text, position)
        if not match:
            raise DomainError(f"Cannot parse {text!r} at position {position}")
        if not match.group(0).isspace():
            tokens.append((match.group(0), match.group(1)))
        position = match.end()

    def parse(index: int) -> Tuple[Any, int]:
        token, label = tokens[index]
        if token == "{":
            left, index = parse(index + 1)
            if tokens[index][0] != ",":
                raise DomainError(f"Expected ',' in {text!r}")
            right, index = parse(index + 1)
            if tokens[index][0] != "}":
                raise DomainError(f"Expected '}}' in {text!r}")
            return ("node", left, right), index + 1
        if label is not None:
            return ("tadpole", int(label)), index + 1
        if token.isdigit():
            return ("leaf", int(token)), index + 1
        raise DomainError(f"Unexpected {token!r} in {text!r}")

    trees = []
    index = 0
    while index < len(tokens):
        tree, index = parse(index)
        trees.append(tree)
    return trees


def _tree_leaves(tree: Any) -> List[int]:
    if tree[0] == "node":
        return _tree_leaves(tree[1]) + _tree_leaves(tree[2])
    return [tree[1]]


def _candidate_edges(tree: Any) -> List[List[GraphGenerator]]:
    if tree[0] != "node":
        return [[]]
    left, right = _tree_leaves(tree[1]), _tree_leaves(tree[2])
    here = [b(i, j) for i in left for j in right]
    candidates = []
    for edge in here:
        for left_edges in _candidate_edges(tree[1]):
            for right_edges in _candidate_edges(tree[2]):
                candidates.append([edge] + left_edges + right_edges)
    return candidates


def _tree_tadpoles(tree: Any) -> List[int]:
    if tree[0] == "node":
        return _tree_tadpoles(tree[1]) + _tree_tadpoles(tree[2])
    return [tree[1]] if tree[0] == "tadpole" else []


def parse_bv(text: str, n: int) -> GraphMonomial:
    """
    Recover the normal-form word behind a printed word.

    The returned monomial carries the display sign, so that its chain equals
    the printed word read with coefficient +1.
    """
    trees = _parse_trees(text.strip(), wide=n - 1 > WIDE_INPUTS)
    labels = sorted(label for tree in trees for label in _tree_leaves(tree))
    if labels != list(range(1, n)):
        raise DomainError(f"{text!r} must mention each of 1..{n - 1} exactly once")
    tadpoles = [s(k) for tree in trees for k in _tree_tadpoles(tree)]

    matches = []
    for choice in itertools.product(*(_candidate_edges(tree) for tree in trees)):
        generators = [edge for edges in choice for edge in edges] + tadpoles
        key, _ = sort_with_sign(generators)
        if key is None or not is_normal_form(key):
            continue
        word, sign = render_word(n, key)
        if word == text.strip():
            matches.append(GraphMonomial(n, key, sign))

    if len(matches) != 1:
        raise DomainError(f"{text!r} matches {len(matches)} normal-form words")
    return matches[0]


def word_chain(n: int, key: Key) -> GraphChain:
    """
    Chain representative of the printed word of ``key``.

    Each bracket ``{X,Y}`` contributes the sum of the edges between ``X`` and
    ``Y``, in display order, followed by the tadpoles.
    """
    factors = []
    for tree in _forest(n, key):
        factors.extend(_bracket_sums(n, tree))
    factors += [
        GraphChain.linear(n, [generator])
        for generator in sorted(generator for generator in key if not generator.is_edge)
    ]
    return wedge_all(n, factors)


def _node_leaves(tree: Any) -> List[int]:
    if isinstance(tree, int):
        return [tree]
    return _node_leaves(tree.left) + _node_leaves(tree.right)


def _bracket_sums(n: int, tree: Any) -> List[GraphChain]:
    if isinstance(tree, int):
        return []
    edges = [b(i, j) for i in _node_leaves(tree.left) for j in _node_leaves(tree.right)]
    return (
        [GraphChain.linear(n, edges)]
        + _bracket_sums(n, tree.left)
        + _bracket_sums(n, tree.right)
    )


def representative_chain(vector: BVClassVector) -> GraphChain:
    """
    Sum of word chains weighted by the printed coefficients.
    """
    result = GraphChain(vector.n)
    for key, value in vector.terms.items():
        _, sign = render_word(vector.n, key)
        result = result + word_chain(vector.n, key).scale(value * sign)
    return result


def normal_form_basis(n: int, degree: int) -> List[Key]:
    """
    Normal-form words with ``degree`` generators on ``n - 1`` vertices.
    """
    vertices = range(1, n)
    generators = [s(k) for k in vertices] + [b(i, j) for i, j in itertools.combinations(vertices, 2)]
    return [
        key
        for key in itertools.combinations(sorted(generators), degree)
        if is_normal_form(key) and _is_forest(n, key)
    ]


def _is_forest(n: int, key: Key) -> bool:
    try:
        _forest(n, key)
    except DomainError:
        return False
    return True


@lru_cache(maxsize=None)
def _cached_gamma_chain(monomial: ChordMonomial) -> GraphChain:
    return gamma_chain(monomial)


@lru_cache(maxsize=None)
def _regularized(n: int) -> Tuple[Tuple[ChordMonomial, Any], ...]:
    _logger.debug("Regularizing all top-degree monomials for n=%d", n)
    return tuple(
        (monomial, regularize(kz(monomial)))
        for monomial in enumerate_diagrams(n, n - 3, "all")
    )


def prime_chain(prime: ChordMonomial) -> GraphChain:
    """
    Chain paired with a prime form: the sum over top-degree monomials ``c``
    of the coefficient of ``prime`` in ``regularize(kz(c))`` times
    ``gamma_chain(c)``.
    """
    n = prime.n
    result = GraphChain(n)
    for monomial, vector in _regularized(n):
        coefficient = vector.coefficient(prime)
        if coefficient:
            result = result + _cached_gamma_chain(monomial).scale(coefficient)
    return result
