"""
MVI, a self-describing binary container for manifold-valued images.

Layout (all integers little-endian):

    offset 0   magic      b"MVI1"
    offset 4   u8         tag length n
    offset 5   n bytes    ASCII manifold tag ("s2", "spd:3", ...)
    5 + n      u32, u32   N1, N2
    13 + n     f64 * N1 * N2 * ambient_len, row-major pixels

Every decoded pixel must be a valid point of the tagged manifold.
"""
from pathlib import Path
from typing import Union

import numpy as np
from construct import Const, ConstructError, Int8ul, Int32ul, PascalString, Struct

from src.errors import DomainError, ManifoldError, MviParseError, PixelValidationError
from src.manifolds.descriptor import ManifoldDescriptor
from src.manifolds.image import ManifoldImage

MAGIC = b"MVI1"
PAYLOAD_DTYPE = np.dtype("<f8")

magic_struct = Const(MAGIC)
tag_struct = PascalString(Int8ul, "ascii")
dims_struct = Struct("n1" / Int32ul, "n2" / Int32ul)

header_struct = Struct(
    "magic" / magic_struct,
    "tag" / tag_struct,
    "dims" / dims_struct,
)


def _invalid_pixel(image: ManifoldImage) -> int:
    bad = np.flatnonzero(~image.valid_mask().ravel())
    return int(bad[0]) if bad.size else -1


def encode_mvi(image: ManifoldImage) -> bytes:
    """Serialise a valid image"""
    pixel = _invalid_pixel(image)
    if pixel >= 0:
        raise DomainError(f"pixel {pixel} is not a valid {image.descriptor} point, refusing to write")
    n1, n2 = image.dims
    header = header_struct.build(dict(magic=MAGIC, tag=image.descriptor.tag, dims=dict(n1=n1, n2=n2)))
    return header + np.ascontiguousarray(image.data, dtype=PAYLOAD_DTYPE).tobytes()


def decode_mvi(blob: bytes) -> ManifoldImage:
    """
    Parse an MVI byte string.

    Raises:
        MviParseError: malformed header or payload, with the byte offset
        PixelValidationError: a pixel is not on the manifold
    """
    try:
        magic_struct.parse(blob[:4])
    except ConstructError:
        raise MviParseError(f"bad magic {blob[:4]!r}, expected {MAGIC!r}", 0) from None

    try:
        tag = tag_struct.parse(blob[4:])
    except (ConstructError, UnicodeDecodeError) as e:
        raise MviParseError(f"unreadable manifold tag: {e}", 4) from None
    try:
        descriptor = ManifoldDescriptor.from_tag(tag)
    except ManifoldError as e:
        raise MviParseError(f"unknown manifold tag '{tag}': {e}", 5) from None

    offset = 5 + len(tag)
    try:
        dims = dims_struct.parse(blob[offset:offset + dims_struct.sizeof()])
    except ConstructError:
        raise MviParseError("truncated image dimensions", offset) from None
    offset += dims_struct.sizeof()

    n1, n2 = int(dims.n1), int(dims.n2)
    expected = n1 * n2 * descriptor.ambient_len * PAYLOAD_DTYPE.itemsize
    available = len(blob) - offset
    if available < expected:
        raise MviParseError(f"truncated payload: {available} of {expected} bytes", len(blob))
    if available > expected:
        raise MviParseError(f"{available - expected} trailing bytes after the payload", offset + expected)

    data = np.frombuffer(blob, dtype=PAYLOAD_DTYPE, count=expected // PAYLOAD_DTYPE.itemsize, offset=offset)
    image = ManifoldImage(descriptor, data.reshape(n1, n2, descriptor.ambient_len).copy())
    pixel = _invalid_pixel(image)
    if pixel >= 0:
        pixel_bytes = descriptor.ambient_len * PAYLOAD_DTYPE.itemsize
        raise PixelValidationError(pixel, offset + pixel * pixel_bytes, descriptor.tag)
    return image


def write_mvi(image: ManifoldImage, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_bytes(encode_mvi(image))
    return path


def read_mvi(path: Union[str, Path]) -> ManifoldImage:
    return decode_mvi(Path(path).read_bytes())
