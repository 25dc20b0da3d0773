"""
NIfTI-1 single file (.nii, magic "n+1") and pair (.hdr/.img, magic "ni1") codec.

Only uncompressed 3D scalar volumes are supported. Voxels are stored with x
fastest, which maps to a Fortran ordered numpy array indexed [x, y, z].
"""

import dataclasses
import logging
import struct
import typing

import numpy as np

from ..config import NIFTI_HEADER_SIZE, NIFTI_VOX_OFFSET
from ..error import (
    BadMagic,
    CompressedNifti,
    InvalidHeader,
    TruncatedData,
    UnsupportedDatatype,
)
from .volume import Volume, VolumeKind


logger = logging.getLogger(__name__)


HEADER_FIELDS = [
    ("i", "sizeof_hdr"),
    ("10s", "data_type"),
    ("18s", "db_name"),
    ("i", "extents"),
    ("h", "session_error"),
    ("b", "regular"),
    ("b", "dim_info"),
    ("8h", "dim"),
    ("f", "intent_p1"),
    ("f", "intent_p2"),
    ("f", "intent_p3"),
    ("h", "intent_code"),
    ("h", "datatype"),
    ("h", "bitpix"),
    ("h", "slice_start"),
    ("8f", "pixdim"),
    ("f", "vox_offset"),
    ("f", "scl_slope"),
    ("f", "scl_inter"),
    ("h", "slice_end"),
    ("b", "slice_code"),
    ("b", "xyzt_units"),
    ("f", "cal_max"),
    ("f", "cal_min"),
    ("f", "slice_duration"),
    ("f", "toffset"),
    ("i", "glmax"),
    ("i", "glmin"),
    ("80s", "descrip"),
    ("24s", "aux_file"),
    ("h", "qform_code"),
    ("h", "sform_code"),
    ("f", "quatern_b"),
    ("f", "quatern_c"),
    ("f", "quatern_d"),
    ("f", "qoffset_x"),
    ("f", "qoffset_y"),
    ("f", "qoffset_z"),
    ("4f", "srow_x"),
    ("4f", "srow_y"),
    ("4f", "srow_z"),
    ("16s", "intent_name"),
    ("4s", "magic"),
]

HEADER_FORMAT = "".join(code for code, _ in HEADER_FIELDS)
assert struct.calcsize("<" + HEADER_FORMAT) == NIFTI_HEADER_SIZE

# datatype code -> (numpy dtype, bitpix)
DATATYPES: typing.Dict[int, typing.Tuple[str, int]] = {
    2: ("u1", 8),
    4: ("i2", 16),
    8: ("i4", 32),
    16: ("f4", 32),
    64: ("f8", 64),
    256: ("i1", 8),
    512: ("u2", 16),
}

SINGLE_MAGIC = b"n+1\x00"
PAIR_MAGIC = b"ni1\x00"


@dataclasses.dataclass(frozen=True)
class NiftiHeader:
    sizeof_hdr: int
    dim: typing.Tuple[int, ...]
    datatype: int
    bitpix: int
    pixdim: typing.Tuple[float, ...]
    vox_offset: float
    scl_slope: float
    scl_inter: float
    magic: bytes
    byteorder: str
    qform_code: int = dataclasses.field(default=0)
    sform_code: int = dataclasses.field(default=0)
    quatern: typing.Tuple[float, float, float] = dataclasses.field(
        default=(0.0, 0.0, 0.0)
    )
    srow: typing.Tuple[typing.Tuple[float, ...], ...] = dataclasses.field(
        default=((0.0,) * 4,) * 3
    )

    @property
    def shape(self) -> typing.Tuple[int, int, int]:
        dims = list(self.dim[1 : self.dim[0] + 1]) + [1, 1, 1]
        return (dims[0], dims[1], dims[2])

    @property
    def spacing(self) -> typing.Tuple[float, float, float]:
        return (abs(self.pixdim[1]), abs(self.pixdim[2]), abs(self.pixdim[3]))


def _unpack(header: bytes, byteorder: str) -> typing.Dict[str, typing.Any]:
    values = struct.unpack(byteorder + HEADER_FORMAT, header[:NIFTI_HEADER_SIZE])

    out: typing.Dict[str, typing.Any] = {}
    offset = 0
    for code, name in HEADER_FIELDS:
        count = int(code[:-1]) if code[:-1] and code[-1] != "s" else 1
        if count > 1:
            out[name] = tuple(values[offset : offset + count])
        else:
            out[name] = values[offset]
        offset += count

    return out


def parse_header(data: bytes) -> NiftiHeader:
    if data[:2] == b"\x1f\x8b":
        raise CompressedNifti(
            "gzip compressed NIfTI, decompress first (e.g. gunzip volume.nii.gz)"
        )

    if len(data) < NIFTI_HEADER_SIZE:
        raise TruncatedData(f"header needs {NIFTI_HEADER_SIZE} bytes, got {len(data)}")

    for byteorder in ("<", ">"):
        (sizeof_hdr,) = struct.unpack(byteorder + "i", data[:4])
        if sizeof_hdr == NIFTI_HEADER_SIZE:
            break
    else:
        raise BadMagic("sizeof_hdr is not 348 in either byte order")

    raw = _unpack(data, byteorder)
    if raw["magic"] not in (SINGLE_MAGIC, PAIR_MAGIC):
        raise BadMagic(f"magic {raw['magic']!r} is not a NIfTI-1 signature")

    dim = tuple(int(d) for d in raw["dim"])
    if not 1 <= dim[0] <= 7:
        raise InvalidHeader(f"dim[0] = {dim[0]} outside 1..7")

    if any(d < 1 for d in dim[1 : dim[0] + 1]):
        raise InvalidHeader(f"non-positive dimension in {dim}")

    if any(d != 1 for d in dim[4 : dim[0] + 1]):
        raise InvalidHeader(f"only 3D scalar volumes are supported, got dim {dim}")

    datatype = int(raw["datatype"])
    if datatype not in DATATYPES:
        raise UnsupportedDatatype(f"datatype code {datatype}")

    bitpix = int(raw["bitpix"])
    if bitpix != DATATYPES[datatype][1]:
        raise InvalidHeader(f"bitpix {bitpix} does not match datatype {datatype}")

    return NiftiHeader(
        sizeof_hdr=sizeof_hdr,
        dim=dim,
        datatype=datatype,
        bitpix=bitpix,
        pixdim=tuple(float(p) for p in raw["pixdim"]),
        vox_offset=float(raw["vox_offset"]),
        scl_slope=float(raw["scl_slope"]),
        scl_inter=float(raw["scl_inter"]),
        magic=raw["magic"],
        byteorder=byteorder,
        qform_code=int(raw["qform_code"]),
        sform_code=int(raw["sform_code"]),
        quatern=(raw["quatern_b"], raw["quatern_c"], raw["quatern_d"]),
        srow=(raw["srow_x"], raw["srow_y"], raw["srow_z"]),
    )


def _warn_orientation(header: NiftiHeader) -> None:
    if header.qform_code > 0 and any(abs(q) > 1e-6 for q in header.quatern):
        logger.warning("qform rotation ignored, volume is read as axis aligned")

    if header.sform_code > 0:
        rows = np.array(header.srow)[:, :3]
        if np.count_nonzero(rows - np.diag(np.diag(rows))):
            logger.warning("sform rotation ignored, volume is read as axis aligned")


def parse_nifti(
    data: bytes,
    image: typing.Optional[bytes] = None,
    kind: VolumeKind = VolumeKind.Intensity,
) -> Volume:
    """
    Decode a NIfTI-1 byte stream; ``image`` carries the .img of a pair file.
    """

    header = parse_header(data)
    _warn_orientation(header)

    if header.magic == PAIR_MAGIC:
        if image is None:
            raise TruncatedData("pair header given without its .img data")
        payload = image
        offset = int(header.vox_offset)
    else:
        payload = data
        offset = int(header.vox_offset)
        if offset < NIFTI_HEADER_SIZE:
            raise InvalidHeader(f"vox_offset {offset} inside the header")

    shape = header.shape
    dtype = np.dtype(DATATYPES[header.datatype][0]).newbyteorder(header.byteorder)
    count = int(np.prod(shape))
    needed = offset + count * dtype.itemsize
    if len(payload) < needed:
        raise TruncatedData(f"voxel data needs {needed} bytes, got {len(payload)}")

    voxels = np.frombuffer(payload, dtype=dtype, count=count, offset=offset)
    array = voxels.reshape(shape, order="F")

    slope, inter = header.scl_slope, header.scl_inter
    if slope != 0 and (slope, inter) != (1.0, 0.0):
        array = array.astype(np.float64) * slope + inter

    spacing = tuple(s if s > 0 else 1.0 for s in header.spacing)
    if kind == VolumeKind.Label:
        return Volume.label(np.rint(array), spacing)  # type: ignore

    return Volume.intensity(array, spacing)  # type: ignore


def write_nifti(volume: Volume, byteorder: str = "<") -> bytes:
    """
    Encode a volume as a single file NIfTI-1 stream (float32 or uint8 labels).
    """

    if volume.kind == VolumeKind.Label:
        datatype = 2
    else:
        datatype = 16
    numpy_code, bitpix = DATATYPES[datatype]

    x, y, z = volume.dims
    sx, sy, sz = volume.spacing
    fields: typing.Dict[str, typing.Any] = {
        "sizeof_hdr": NIFTI_HEADER_SIZE,
        "data_type": b"",
        "db_name": b"",
        "extents": 0,
        "session_error": 0,
        "regular": ord("r"),
        "dim_info": 0,
        "dim": (3, x, y, z, 1, 1, 1, 1),
        "intent_p1": 0.0,
        "intent_p2": 0.0,
        "intent_p3": 0.0,
        "intent_code": 0,
        "datatype": datatype,
        "bitpix": bitpix,
        "slice_start": 0,
        "pixdim": (1.0, sx, sy, sz, 0.0, 0.0, 0.0, 0.0),
        "vox_offset": float(NIFTI_VOX_OFFSET),
        "scl_slope": 1.0,
        "scl_inter": 0.0,
        "slice_end": 0,
        "slice_code": 0,
        "xyzt_units": 2,
        "cal_max": 0.0,
        "cal_min": 0.0,
        "slice_duration": 0.0,
        "toffset": 0.0,
        "glmax": 0,
        "glmin": 0,
        "descrip": b"brats-toolkit",
        "aux_file": b"",
        "qform_code": 0,
        "sform_code": 1,
        "quatern_b": 0.0,
        "quatern_c": 0.0,
        "quatern_d": 0.0,
        "qoffset_x": 0.0,
        "qoffset_y": 0.0,
        "qoffset_z": 0.0,
        "srow_x": (sx, 0.0, 0.0, 0.0),
        "srow_y": (0.0, sy, 0.0, 0.0),
        "srow_z": (0.0, 0.0, sz, 0.0),
        "intent_name": b"",
        "magic": SINGLE_MAGIC,
    }

    values: typing.List[typing.Any] = []
    for _, name in HEADER_FIELDS:
        value = fields[name]
        if isinstance(value, tuple):
            values.extend(value)
        else:
            values.append(value)

    header = struct.pack(byteorder + HEADER_FORMAT, *values)
    extension = b"\x00" * (NIFTI_VOX_OFFSET - NIFTI_HEADER_SIZE)

    dtype = np.dtype(numpy_code).newbyteorder(byteorder)
    voxels = np.asarray(volume.data).astype(dtype).tobytes(order="F")

    return header + extension + voxels


def read_nifti(path: str, kind: VolumeKind = VolumeKind.Intensity) -> Volume:
    with open(path, "rb") as h:
        data = h.read()

    image = None
    if path.endswith(".hdr"):
        with open(path[: -len(".hdr")] + ".img", "rb") as h:
            image = h.read()

    return parse_nifti(data, image=image, kind=kind)


def save_nifti(path: str, volume: Volume) -> None:
    with open(path, "wb") as h:
        h.write(write_nifti(volume))
