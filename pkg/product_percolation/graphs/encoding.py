"""Canonical byte encoding and text notation for vertex identifiers.

Layout: one tag byte, then unsigned LEB128 varints. Words and coordinate
vectors are length-prefixed; signed integers are zig-zag mapped first.
Comparing encodings as byte strings gives a total order on vertices.
"""

from typing import Optional

from product_percolation.errors import InvalidVertexError
from product_percolation.graphs.base import (
    LatticePoint,
    Plain,
    ProductVertex,
    StretchNode,
    TreeNode,
    VertexId,
)
from product_percolation.graphs.spec import GraphSpec

TAG_TREE = 0x01
TAG_LATTICE = 0x02
TAG_PLAIN = 0x03
TAG_PRODUCT = 0x04
TAG_STRETCH = 0x05


def _zigzag(value: int) -> int:
    return value * 2 if value >= 0 else -value * 2 - 1


def _unzigzag(value: int) -> int:
    return value // 2 if value % 2 == 0 else -(value + 1) // 2


def _put_varint(out: bytearray, value: int) -> None:
    if value < 0:
        raise InvalidVertexError(f"Cannot varint-encode negative value {value}")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _put_word(out: bytearray, word: tuple[int, ...]) -> None:
    _put_varint(out, len(word))
    for index in word:
        _put_varint(out, index)


def _put_coords(out: bytearray, coords: tuple[int, ...]) -> None:
    _put_varint(out, len(coords))
    for c in coords:
        _put_varint(out, _zigzag(c))


def _encode_into(out: bytearray, v: VertexId) -> None:
    if isinstance(v, TreeNode):
        out.append(TAG_TREE)
        _put_word(out, v.word)
    elif isinstance(v, LatticePoint):
        out.append(TAG_LATTICE)
        _put_word(out, v.owner)
        _put_coords(out, v.coords)
    elif isinstance(v, Plain):
        out.append(TAG_PLAIN)
        _put_coords(out, v.coords)
    elif isinstance(v, ProductVertex):
        out.append(TAG_PRODUCT)
        _encode_into(out, v.base)
        _put_varint(out, _zigzag(v.z))
    elif isinstance(v, StretchNode):
        out.append(TAG_STRETCH)
        _put_word(out, v.owner)
        _put_varint(out, v.position)
    else:
        raise InvalidVertexError(f"Not a vertex identifier: {v!r}")


def encode_vertex(v: VertexId) -> bytes:
    """Encode a vertex to its canonical byte string."""
    out = bytearray()
    try:
        _encode_into(out, v)
    except TypeError as e:
        raise InvalidVertexError(f"Malformed vertex {v!r}: {e}") from e
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def byte(self) -> int:
        if self.pos >= len(self.data):
            raise InvalidVertexError("Truncated vertex encoding")
        value = self.data[self.pos]
        self.pos += 1
        return value

    def varint(self) -> int:
        result = 0
        shift = 0
        while True:
            byte = self.byte()
            result |= (byte & 0x7F) << shift
            if not byte & 0x80:
                # Reject non-minimal encodings so decoding stays injective.
                if byte == 0 and shift > 0:
                    raise InvalidVertexError("Non-canonical varint in vertex encoding")
                return result
            shift += 7
            if shift >= 70:
                raise InvalidVertexError("Varint too long in vertex encoding")

    def word(self) -> tuple[int, ...]:
        length = self.varint()
        return tuple(self.varint() for _ in range(length))

    def coords(self) -> tuple[int, ...]:
        length = self.varint()
        return tuple(_unzigzag(self.varint()) for _ in range(length))

    def vertex(self, depth: int = 0) -> VertexId:
        tag = self.byte()
        if tag == TAG_TREE:
            return TreeNode(self.word())
        if tag == TAG_LATTICE:
            owner = self.word()
            return LatticePoint(owner, self.coords())
        if tag == TAG_PLAIN:
            return Plain(self.coords())
        if tag == TAG_PRODUCT:
            if depth > 0:
                raise InvalidVertexError("Nested product vertices are not representable")
            base = self.vertex(depth + 1)
            return ProductVertex(base, _unzigzag(self.varint()))  # type: ignore[arg-type]
        if tag == TAG_STRETCH:
            owner = self.word()
            return StretchNode(owner, self.varint())
        raise InvalidVertexError(f"Unknown vertex tag 0x{tag:02x}")


def decode_vertex(data: bytes, spec: Optional[GraphSpec] = None) -> VertexId:
    """Decode a canonical encoding; when `spec` is given, also validate membership."""
    reader = _Reader(bytes(data))
    v = reader.vertex()
    if reader.pos != len(reader.data):
        raise InvalidVertexError(f"Trailing bytes after vertex encoding: {len(reader.data) - reader.pos}")
    if spec is not None:
        from product_percolation.graphs.families import validate_vertex

        validate_vertex(spec, v)
    return v


def vertex_sort_key(v: VertexId) -> bytes:
    return encode_vertex(v)


def _format_ints(values: tuple[int, ...], sep: str) -> str:
    return sep.join(str(x) for x in values)


def format_vertex(v: VertexId) -> str:
    """Human-readable notation, e.g. ``tree:0.3.1`` or ``product:plain:0,0@3``."""
    if isinstance(v, TreeNode):
        return "tree:" + _format_ints(v.word, ".")
    if isinstance(v, LatticePoint):
        return f"lattice:{_format_ints(v.owner, '.')}|{_format_ints(v.coords, ',')}"
    if isinstance(v, Plain):
        return "plain:" + _format_ints(v.coords, ",")
    if isinstance(v, StretchNode):
        return f"stretch:{_format_ints(v.owner, '.')}|{v.position}"
    if isinstance(v, ProductVertex):
        return f"product:{format_vertex(v.base)}@{v.z}"
    raise InvalidVertexError(f"Not a vertex identifier: {v!r}")


def _parse_ints(text: str, sep: str, what: str) -> tuple[int, ...]:
    if text == "":
        return ()
    try:
        return tuple(int(part) for part in text.split(sep))
    except ValueError as e:
        raise InvalidVertexError(f"Malformed {what}: {text!r}") from e


def parse_vertex(text: str) -> VertexId:
    """Inverse of `format_vertex`."""
    kind, sep, rest = text.strip().partition(":")
    if not sep:
        raise InvalidVertexError(f"Vertex notation needs a 'kind:' prefix: {text!r}")
    if kind == "tree":
        return TreeNode(_parse_ints(rest, ".", "tree word"))
    if kind == "plain":
        return Plain(_parse_ints(rest, ",", "coordinates"))
    if kind in ("lattice", "stretch"):
        owner_text, bar, tail = rest.partition("|")
        if not bar:
            raise InvalidVertexError(f"Expected 'owner|...' in {text!r}")
        owner = _parse_ints(owner_text, ".", "owner word")
        if kind == "lattice":
            return LatticePoint(owner, _parse_ints(tail, ",", "coordinates"))
        position = _parse_ints(tail, ",", "position")
        if len(position) != 1:
            raise InvalidVertexError(f"Malformed stretch position in {text!r}")
        return StretchNode(owner, position[0])
    if kind == "product":
        base_text, at, z_text = rest.rpartition("@")
        if not at:
            raise InvalidVertexError(f"Expected 'base@z' in {text!r}")
        base = parse_vertex(base_text)
        if isinstance(base, ProductVertex):
            raise InvalidVertexError("Nested product vertices are not representable")
        z = _parse_ints(z_text, ",", "line coordinate")
        if len(z) != 1:
            raise InvalidVertexError(f"Malformed line coordinate in {text!r}")
        return ProductVertex(base, z[0])
    raise InvalidVertexError(f"Unknown vertex kind {kind!r} in {text!r}")
