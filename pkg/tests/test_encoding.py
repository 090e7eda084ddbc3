"""Canonical vertex encodings and the text notation."""

import random

import pytest

from product_percolation.errors import InvalidVertexError
from product_percolation.graphs import (
    GraphSpec,
    LatticePoint,
    Plain,
    ProductVertex,
    StretchNode,
    TreeNode,
    decode_vertex,
    encode_vertex,
    format_vertex,
    parse_vertex,
)


def _random_vertex(rand: random.Random):
    def word():
        return tuple(rand.randrange(12) for _ in range(rand.randrange(6)))

    def coords():
        return tuple(rand.randint(-300, 300) for _ in range(rand.randint(1, 4)))

    choice = rand.randrange(5)
    if choice == 0:
        return TreeNode(word())
    if choice == 1:
        return LatticePoint(word(), coords())
    if choice == 2:
        return Plain(coords())
    if choice == 3:
        return StretchNode(word(), rand.choice((1, 2)))
    return ProductVertex(TreeNode(word()), rand.randint(-1000, 1000))


class TestEncoding:
    def test_plain_round_trip(self):
        v = Plain((0, 0))
        assert decode_vertex(encode_vertex(v)) == v

    def test_word_prefixes_differ(self):
        assert encode_vertex(TreeNode((3, 1, 4))) != encode_vertex(TreeNode((3, 1)))
        assert decode_vertex(encode_vertex(TreeNode((3, 1, 4)))) == TreeNode((3, 1, 4))

    @pytest.mark.parametrize("count", [20_000, pytest.param(100_000, marks=pytest.mark.slow)])
    def test_random_vertices_are_injective(self, count):
        rand = random.Random(12345)
        seen = {}
        for _ in range(count):
            v = _random_vertex(rand)
            data = encode_vertex(v)
            assert decode_vertex(data) == v
            assert seen.setdefault(data, v) == v

    def test_decode_validates_against_spec(self):
        data = encode_vertex(TreeNode((7,)))
        assert decode_vertex(data, GraphSpec.regular_tree(8)) == TreeNode((7,))
        with pytest.raises(InvalidVertexError):
            decode_vertex(data, GraphSpec.regular_tree(3))

    @pytest.mark.parametrize(
        "data",
        [b"", b"\x09", b"\x01\x02\x00", encode_vertex(Plain((1, 2))) + b"\x00", b"\x03\x80\x00"],
    )
    def test_malformed_bytes(self, data):
        with pytest.raises(InvalidVertexError):
            decode_vertex(data)

    def test_nested_product_rejected(self):
        inner = encode_vertex(ProductVertex(Plain((0,)), 1))
        with pytest.raises(InvalidVertexError):
            decode_vertex(b"\x04" + inner + b"\x00")

    def test_encoding_orders_vertices(self):
        vertices = [Plain((2,)), Plain((0,)), Plain((-1,)), TreeNode(())]
        ordered = sorted(vertices, key=encode_vertex)
        assert ordered == sorted(ordered, key=encode_vertex)
        assert ordered[0] == TreeNode(())


class TestNotation:
    @pytest.mark.parametrize(
        "text, vertex",
        [
            ("tree:0.3.1", TreeNode((0, 3, 1))),
            ("tree:", TreeNode(())),
            ("plain:0,-2", Plain((0, -2))),
            ("lattice:1.0|2,-1", LatticePoint((1, 0), (2, -1))),
            ("stretch:4|2", StretchNode((4,), 2)),
            ("product:plain:0,0@3", ProductVertex(Plain((0, 0)), 3)),
        ],
    )
    def test_parse_and_format(self, text, vertex):
        assert parse_vertex(text) == vertex
        assert format_vertex(vertex) == text

    @pytest.mark.parametrize("text", ["0,0", "plain:a", "lattice:1", "stretch:1|1,2", "product:plain:0"])
    def test_malformed_notation(self, text):
        with pytest.raises(InvalidVertexError):
            parse_vertex(text)
