"""
Parameter checkpoint layout, all integers little-endian:

    magic      4 bytes  b"BTCK"
    version    uint32   1
    meta_len   uint32   length of a UTF-8 JSON metadata blob
    meta       bytes
    count      uint32   number of tensors
    per tensor:
        name_len uint16, name UTF-8 bytes
        ndim     uint8,  dims uint32 * ndim
        data     float32 little-endian, C order
"""

import json
import struct
import typing

import numpy as np

from ..config import CHECKPOINT_MAGIC, CHECKPOINT_VERSION
from ..error import CheckpointError
from .tensor import Tensor


def encode_checkpoint(
    tensors: typing.Mapping[str, Tensor],
    meta: typing.Optional[typing.Mapping[str, typing.Any]] = None,
) -> bytes:
    meta_bytes = json.dumps(meta or {}, sort_keys=True).encode("utf-8")

    chunks = [
        CHECKPOINT_MAGIC,
        struct.pack("<II", CHECKPOINT_VERSION, len(meta_bytes)),
        meta_bytes,
        struct.pack("<I", len(tensors)),
    ]
    for name, tensor in tensors.items():
        encoded = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<B", tensor.data.ndim))
        chunks.append(struct.pack(f"<{tensor.data.ndim}I", *tensor.shape))
        chunks.append(np.ascontiguousarray(tensor.data, dtype="<f4").tobytes())

    return b"".join(chunks)


def decode_checkpoint(
    data: bytes,
) -> typing.Tuple[typing.Dict[str, Tensor], typing.Dict[str, typing.Any]]:
    if data[:4] != CHECKPOINT_MAGIC:
        raise CheckpointError("not a checkpoint file")

    try:
        version, meta_len = struct.unpack_from("<II", data, 4)
        if version != CHECKPOINT_VERSION:
            raise CheckpointError(f"unsupported checkpoint version {version}")

        offset = 12
        meta = json.loads(data[offset : offset + meta_len].decode("utf-8"))
        offset += meta_len

        (count,) = struct.unpack_from("<I", data, offset)
        offset += 4

        tensors: typing.Dict[str, Tensor] = {}
        for _ in range(count):
            (name_len,) = struct.unpack_from("<H", data, offset)
            offset += 2
            name = data[offset : offset + name_len].decode("utf-8")
            offset += name_len

            (ndim,) = struct.unpack_from("<B", data, offset)
            offset += 1
            shape = struct.unpack_from(f"<{ndim}I", data, offset)
            offset += 4 * ndim

            size = int(np.prod(shape))
            if offset + 4 * size > len(data):
                raise CheckpointError(f"tensor {name} is truncated")

            array = np.frombuffer(data, dtype="<f4", count=size, offset=offset)
            offset += 4 * size

            tensors[name] = Tensor(
                array.reshape(shape).astype(np.float32), requires_grad=True
            )
    except struct.error as e:
        raise CheckpointError(f"truncated checkpoint: {e}")
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"corrupt checkpoint metadata: {e}")

    return tensors, meta


def save_checkpoint(
    path: str,
    tensors: typing.Mapping[str, Tensor],
    meta: typing.Optional[typing.Mapping[str, typing.Any]] = None,
) -> None:
    with open(path, "wb") as h:
        h.write(encode_checkpoint(tensors, meta))


def load_checkpoint(
    path: str,
) -> typing.Tuple[typing.Dict[str, Tensor], typing.Dict[str, typing.Any]]:
    with open(path, "rb") as h:
        return decode_checkpoint(h.read())
