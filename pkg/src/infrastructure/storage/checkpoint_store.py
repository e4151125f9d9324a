"""Binary model checkpoints.

Layout: 8-byte magic, little-endian u32 version, u32 length of a UTF-8 JSON
GnnConfig, the JSON itself, then W_1, b_1, ..., W_K, b_K as row-major '<f8' blocks.
"""

import json
import logging
import struct
from pathlib import Path
from typing import List

import numpy as np

from src.domain.exceptions import FormatVersionError
from src.domain.interfaces import CheckpointStore, PathLike
from src.domain.models import GnnConfig, GnnModel

logger = logging.getLogger(__name__)

MAGIC = b"GTRCCKPT"
VERSION = 1
_HEADER = struct.Struct("<II")
_FLOAT = np.dtype("<f8")


class BinaryCheckpointStore(CheckpointStore):
    """Reads and writes GnnModel checkpoints."""

    def save(self, model: GnnModel, path: PathLike) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        config_bytes = json.dumps(model.config.to_dict(), sort_keys=True).encode("utf-8")
        with open(path, "wb") as f:
            f.write(MAGIC)
            f.write(_HEADER.pack(VERSION, len(config_bytes)))
            f.write(config_bytes)
            for param in model.parameters():
                f.write(np.ascontiguousarray(param, dtype=_FLOAT).tobytes(order="C"))
        logger.info("Saved checkpoint with layer dims %s to %s", model.config.layer_dims, path)

    def load(self, path: PathLike) -> GnnModel:
        """Read a checkpoint.

        Raises:
            FormatVersionError: On a wrong magic or version.
            ValueError: If the file is truncated or has trailing bytes.
        """
        data = Path(path).read_bytes()
        if data[: len(MAGIC)] != MAGIC:
            raise FormatVersionError(found=repr(data[: len(MAGIC)]), expected=repr(MAGIC))
        offset = len(MAGIC)
        if len(data) < offset + _HEADER.size:
            raise ValueError(f"Truncated checkpoint {path}: missing header")
        version, config_length = _HEADER.unpack_from(data, offset)
        if version != VERSION:
            raise FormatVersionError(found=str(version), expected=str(VERSION))
        offset += _HEADER.size
        config = GnnConfig.from_dict(
            json.loads(data[offset : offset + config_length].decode("utf-8"))
        )
        offset += config_length

        params: List[np.ndarray] = []
        dims = config.layer_dims
        for k in range(config.num_layers):
            for shape in ((dims[k], dims[k + 1]), (dims[k + 1],)):
                size = int(np.prod(shape)) * _FLOAT.itemsize
                if offset + size > len(data):
                    raise ValueError(f"Truncated checkpoint {path}: layer {k + 1} incomplete")
                block = np.frombuffer(data, dtype=_FLOAT, count=size // 8, offset=offset)
                params.append(block.reshape(shape).astype(np.float64))
                offset += size
        if offset != len(data):
            raise ValueError(f"Checkpoint {path} has {len(data) - offset} trailing bytes")

        return GnnModel(weights=params[0::2], biases=params[1::2], config=config)
