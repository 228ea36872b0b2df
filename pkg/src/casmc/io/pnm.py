"""Binary portable pixmaps (PGM ``P5`` / PPM ``P6``, maxval 255) as grid closure spaces."""
from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

import numpy as np

from ..closure import ClosureSpace, Direction, PointSet, SpaceRelation
from ..errors import FormatError, UnsupportedModelError
from ..slcs import SpatialModel

_OPS = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge, "==": operator.eq}
CHANNELS = {"P5": ("gray",), "P6": ("r", "g", "b")}


def parse_pnm(data: bytes, path=None) -> np.ndarray:
    """Pixel array ``(h, w)`` for P5 or ``(h, w, 3)`` for P6, dtype uint8."""
    pos = 0
    n = len(data)

    def skip_space():
        nonlocal pos
        while pos < n:
            c = data[pos:pos + 1]
            if c == b"#":
                while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                return

    def header_int(what):
        nonlocal pos
        skip_space()
        start = pos
        while pos < n and data[pos:pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise FormatError(f"expected {what} in header", path, offset=start)
        return int(data[start:pos]), start

    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise FormatError("not a binary PGM/PPM file (magic must be P5 or P6)", path, offset=0)
    pos = 2
    width, width_at = header_int("width")
    height, height_at = header_int("height")
    maxval, maxval_at = header_int("maxval")
    if width < 1 or height < 1:
        raise FormatError("image dimensions must be positive", path,
                          offset=width_at if width < 1 else height_at)
    if maxval != 255:
        raise FormatError(f"maxval {maxval} unsupported (only 255)", path, offset=maxval_at)
    if pos >= n or not data[pos:pos + 1].isspace():
        raise FormatError("expected a single whitespace byte after maxval", path, offset=pos)
    pos += 1
    channels = 1 if magic == b"P5" else 3
    need = width * height * channels
    payload = data[pos:]
    if len(payload) < need:
        raise FormatError(f"truncated pixel data: need {need} bytes, have {len(payload)}",
                          path, offset=n)
    if len(payload) > need:
        raise FormatError(f"{len(payload) - need} trailing bytes after pixel data",
                          path, offset=pos + need)
    arr = np.frombuffer(payload, dtype=np.uint8)
    return arr.reshape((height, width) if channels == 1 else (height, width, 3)).copy()


def read_pnm(path) -> np.ndarray:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise FormatError(f"cannot read image: {e}", path) from None
    return parse_pnm(data, path)


def encode_ppm(rgb: np.ndarray) -> bytes:
    h, w, _ = rgb.shape
    return b"P6\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(rgb, dtype=np.uint8).tobytes()


def encode_pgm(gray: np.ndarray) -> bytes:
    h, w = gray.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(gray, dtype=np.uint8).tobytes()


def to_rgb(img: np.ndarray) -> np.ndarray:
    return np.repeat(img[:, :, None], 3, axis=2) if img.ndim == 2 else img.copy()


@dataclass
class ImageSpaceConfig:
    adjacency: int = 4
    atom_rules: List[Tuple[str, List[Tuple[str, str, int]]]] = field(default_factory=list)

    def __post_init__(self):
        if self.adjacency not in (4, 8):
            raise FormatError(f"adjacency must be 4 or 8, got {self.adjacency}")
        names = [r[0] for r in self.atom_rules]
        if len(set(names)) != len(names):
            raise FormatError("atom names must be unique")
        for name, conds in self.atom_rules:
            for ch, op, val in conds:
                if op not in _OPS:
                    raise FormatError(f"atom {name}: unknown comparison {op!r}")
                if not 0 <= val <= 255:
                    raise FormatError(f"atom {name}: threshold {val} outside [0, 255]")


_COND = re.compile(r"^\s*([A-Za-z]+)\s*(<=|>=|==|<|>)\s*(-?\d+)\s*$")


def parse_image_config(text, path=None) -> ImageSpaceConfig:
    """``adjacency 4|8`` and ``atom name: channel >= value [, channel < value ...]`` lines."""
    adjacency = 4
    rules = []
    seen = set()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "adjacency":
            if len(words) != 2 or words[1] not in ("4", "8"):
                raise FormatError("usage: adjacency 4|8", path, no)
            adjacency = int(words[1])
        elif words[0] == "atom":
            m = re.match(r"atom\s+([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$", line)
            if not m:
                raise FormatError("usage: atom name: channel >= value [, ...]", path, no)
            name, body = m.groups()
            if name in seen:
                raise FormatError(f"duplicate atom {name!r}", path, no)
            seen.add(name)
            conds = []
            for part in body.split(","):
                c = _COND.match(part)
                if not c:
                    raise FormatError(f"bad condition {part.strip()!r}", path, no)
                ch, op, val = c.group(1), c.group(2), int(c.group(3))
                if not 0 <= val <= 255:
                    raise FormatError(f"threshold {val} outside [0, 255]", path, no)
                conds.append((ch, op, val))
            rules.append((name, conds))
        else:
            raise FormatError(f"unknown statement {words[0]!r}", path, no)
    return ImageSpaceConfig(adjacency, rules)


def load_image_config(path) -> ImageSpaceConfig:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read config: {e}", path) from None
    return parse_image_config(text, path)


def grid_relation(height, width, adjacency=4) -> SpaceRelation:
    """Symmetric pixel adjacency with row-major ids ``r * width + c``."""
    ids = np.arange(height * width, dtype=np.intp).reshape(height, width)
    src, dst = [], []
    offsets = [(0, 1), (1, 0)] + ([(1, 1), (1, -1)] if adjacency == 8 else [])
    for dr, dc in offsets:
        r0, r1 = 0, height - dr
        c0, c1 = max(0, -dc), width - max(0, dc)
        a = ids[r0:r1, c0:c1].ravel()
        b = ids[r0 + dr:r1 + dr, c0 + dc:c1 + dc].ravel()
        src += [a, b]
        dst += [b, a]
    if not src:
        return SpaceRelation(height * width)
    return SpaceRelation(height * width, (np.concatenate(src), np.concatenate(dst)))


def image_model(img: np.ndarray, config: ImageSpaceConfig, path=None) -> SpatialModel:
    kind = "P5" if img.ndim == 2 else "P6"
    h, w = img.shape[:2]
    planes = {"gray": img} if kind == "P5" else {c: img[:, :, i] for i, c in enumerate("rgb")}
    space = ClosureSpace(grid_relation(h, w, config.adjacency), Direction.SYMMETRIC)
    sets = {}
    for name, conds in config.atom_rules:
        mask = np.ones((h, w), dtype=bool)
        for ch, op, val in conds:
            if ch not in planes:
                raise FormatError(f"atom {name}: channel {ch!r} not in a {kind} image "
                                  f"(channels: {', '.join(CHANNELS[kind])})", path)
            mask &= _OPS[op](planes[ch], val)
        sets[name] = PointSet(mask.ravel())
    return SpatialModel.from_sets(space, sets, image=img)


def load_image(path, config: ImageSpaceConfig) -> SpatialModel:
    return image_model(read_pnm(path), config, path)


def overlay(model: SpatialModel, sat: PointSet, color=(255, 0, 0)) -> np.ndarray:
    if model.image is None:
        raise UnsupportedModelError("overlay needs a model loaded from an image")
    rgb = to_rgb(model.image)
    h, w = rgb.shape[:2]
    if sat.size != h * w:
        raise UnsupportedModelError("satisfaction set does not match the image size")
    flat = rgb.reshape(-1, 3)
    flat[sat.mask.astype(bool)] = np.asarray(color, dtype=np.uint8)
    return rgb


def write_overlay(model: SpatialModel, sat: PointSet, path, color=(255, 0, 0)):
    """Write the source image as P6 with satisfying pixels painted ``color``."""
    data = encode_ppm(overlay(model, sat, color))
    Path(path).write_bytes(data)
    return data
