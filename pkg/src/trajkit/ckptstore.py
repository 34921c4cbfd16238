"""Checkpoint file format and trajectory store.

A trajectory is an ordered list of checkpoints with an identical tensor
layout. Each checkpoint lives in its own binary file; a JSON manifest
fixes the trajectory order. Flattening concatenates the selected tensors
in the order they appear in the checkpoint file, upconverted to float64.

Binary layout (all integers little-endian):
    magic    8 bytes  b"TRAJCKPT"
    version  u32      1
    count    u32      number of tensors
    per tensor:
        name_len u16, name bytes (UTF-8),
        dtype u8 (0=F32, 1=F64, 2=F16), rank u8, dims rank x u64,
        raw little-endian payload
"""

from __future__ import annotations

import enum
import json
import math
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    DuplicateIndex,
    EmptySelection,
    EmptyTrajectory,
    InvalidCheckpoint,
    InvalidTensor,
    LayoutMismatch,
    TruncatedFile,
    UnsupportedVersion,
)

MAGIC = b"TRAJCKPT"
FORMAT_VERSION = 1
DEFAULT_MEM_BUDGET = 2 << 30


class Dtype(enum.IntEnum):
    F32 = 0
    F64 = 1
    F16 = 2

    @property
    def np_dtype(self) -> np.dtype:
        return _NP_DTYPES[self]


_NP_DTYPES = {
    Dtype.F32: np.dtype("<f4"),
    Dtype.F64: np.dtype("<f8"),
    Dtype.F16: np.dtype("<f2"),
}


@dataclass
class TensorRecord:
    """One named tensor; ``data`` is the flat row-major payload."""

    name: str
    dtype: Dtype
    dims: tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        self.dtype = Dtype(self.dtype)
        self.dims = tuple(int(d) for d in self.dims)
        if not self.name:
            raise InvalidTensor("tensor name must be non-empty")
        if any(d < 0 for d in self.dims):
            raise InvalidTensor(f"tensor {self.name!r}: negative dim in {self.dims}")
        self.data = np.ascontiguousarray(self.data, dtype=self.dtype.np_dtype).reshape(-1)
        if self.data.size != self.n_elements:
            raise InvalidTensor(
                f"tensor {self.name!r}: {self.data.size} values for dims {self.dims}"
            )

    @property
    def n_elements(self) -> int:
        return math.prod(self.dims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorRecord):
            return NotImplemented
        return (
            self.name == other.name
            and self.dtype == other.dtype
            and self.dims == other.dims
            and self.data.tobytes() == other.data.tobytes()
        )


@dataclass
class Checkpoint:
    index: int
    label: str
    tensors: list[TensorRecord]

    def __post_init__(self):
        names = [t.name for t in self.tensors]
        if len(set(names)) != len(names):
            raise InvalidCheckpoint(f"duplicate tensor names in checkpoint {self.label!r}")

    def layout(self) -> tuple[tuple[str, Dtype, tuple[int, ...]], ...]:
        return tuple((t.name, t.dtype, t.dims) for t in self.tensors)


@dataclass(frozen=True)
class SelectionSpec:
    """Name-based tensor selection for layerwise analysis.

    Glob syntax: ``*`` matches any run of characters except ``.``,
    ``**`` matches across ``.``, ``?`` matches one character.
    """

    include_globs: tuple[str, ...] = ("**",)
    exclude_globs: tuple[str, ...] = ()

    def matches(self, name: str) -> bool:
        if not any(_glob_regex(g).match(name) for g in self.include_globs):
            return False
        return not any(_glob_regex(g).match(name) for g in self.exclude_globs)


ALL = SelectionSpec()

_GLOB_CACHE: dict[str, re.Pattern] = {}


def _glob_regex(pattern: str) -> re.Pattern:
    rx = _GLOB_CACHE.get(pattern)
    if rx is None:
        parts = []
        i = 0
        while i < len(pattern):
            c = pattern[i]
            if c == "*":
                if pattern[i : i + 2] == "**":
                    parts.append(".*")
                    i += 2
                else:
                    parts.append(r"[^.]*")
                    i += 1
            elif c == "?":
                parts.append(".")
                i += 1
            else:
                parts.append(re.escape(c))
                i += 1
        rx = re.compile("^" + "".join(parts) + "$")
        _GLOB_CACHE[pattern] = rx
    return rx


# --- file IO ---


def write_checkpoint(ckpt: Checkpoint, path) -> None:
    if not ckpt.tensors:
        raise InvalidCheckpoint("checkpoint has zero tensors")
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<II", FORMAT_VERSION, len(ckpt.tensors))
    for t in ckpt.tensors:
        name = t.name.encode("utf-8")
        blob += struct.pack("<H", len(name))
        blob += name
        blob += struct.pack("<BB", int(t.dtype), len(t.dims))
        blob += struct.pack(f"<{len(t.dims)}Q", *t.dims)
        blob += t.data.tobytes()
    Path(path).write_bytes(bytes(blob))


class _Reader:
    def __init__(self, path):
        self.path = Path(path)
        self.buf = self.path.read_bytes()
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise TruncatedFile(f"{self.path}: needed {n} bytes at offset {self.pos}")
        out = self.buf[self.pos : self.pos + n]
        self.pos += n
        return out


def _read_header(reader: _Reader, payloads: bool):
    """Parse a checkpoint; with payloads=False records (offset, nbytes) instead."""
    if reader.take(8) != MAGIC:
        raise BadMagic(f"{reader.path}: not a trajectory checkpoint file")
    version, count = struct.unpack("<II", reader.take(8))
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"{reader.path}: version {version}")
    if count == 0:
        raise InvalidCheckpoint(f"{reader.path}: zero tensors")
    tensors = []
    offsets = []
    for _ in range(count):
        (name_len,) = struct.unpack("<H", reader.take(2))
        name = reader.take(name_len).decode("utf-8")
        dtype_code, rank = struct.unpack("<BB", reader.take(2))
        try:
            dtype = Dtype(dtype_code)
        except ValueError:
            raise InvalidTensor(f"{reader.path}: unknown dtype code {dtype_code}")
        dims = struct.unpack(f"<{rank}Q", reader.take(8 * rank))
        nbytes = math.prod(dims) * dtype.np_dtype.itemsize
        if payloads:
            raw = reader.take(nbytes)
            data = np.frombuffer(raw, dtype=dtype.np_dtype).copy()
            tensors.append(TensorRecord(name, dtype, dims, data))
        else:
            offsets.append((name, dtype, tuple(int(d) for d in dims), reader.pos))
            reader.take(nbytes)
    return tensors, offsets


def read_checkpoint(path, *, index: int = 0, label: str = "") -> Checkpoint:
    tensors, _ = _read_header(_Reader(path), payloads=True)
    return Checkpoint(index=index, label=label, tensors=tensors)


# --- trajectory store ---


@dataclass
class _Source:
    """Lazy handle on one checkpoint file: payload offsets by tensor order."""

    path: Path
    offsets: list[tuple[str, Dtype, tuple[int, ...], int]]


class TrajectoryStore:
    """Immutable ordered trajectory with a shared tensor layout."""

    def __init__(self, *, indices, labels, layout, cached=None, sources=None):
        self.indices = list(indices)
        self.labels = list(labels)
        self.layout = tuple(layout)
        self._cached = cached
        self._sources = sources
        self.n_points = len(self.indices)
        self.dim_p = sum(math.prod(dims) for _, _, dims in self.layout)
        self.has_init = self.n_points > 0 and self.indices[0] == 0
        self._matrix_cache: dict = {}

    # construction -----------------------------------------------------

    @classmethod
    def from_checkpoints(cls, checkpoints: list[Checkpoint]) -> "TrajectoryStore":
        if not checkpoints:
            raise EmptyTrajectory("store has no checkpoints")
        layout = checkpoints[0].layout()
        for c in checkpoints[1:]:
            _check_layout(layout, c.layout(), c.label or str(c.index))
        seen = set()
        for c in checkpoints:
            if c.index in seen:
                raise DuplicateIndex(f"checkpoint index {c.index} appears twice")
            seen.add(c.index)
        return cls(
            indices=[c.index for c in checkpoints],
            labels=[c.label for c in checkpoints],
            layout=layout,
            cached=list(checkpoints),
        )

    @classmethod
    def from_arrays(cls, points, labels=None, tensor_name: str = "theta") -> "TrajectoryStore":
        """Build an in-memory store from an (n, p) array of trajectory points."""
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2:
            raise InvalidCheckpoint("points must be a 2-D array")
        n = points.shape[0]
        if labels is None:
            labels = [str(i) for i in range(n)]
        ckpts = [
            Checkpoint(
                index=i,
                label=labels[i],
                tensors=[TensorRecord(tensor_name, Dtype.F64, (points.shape[1],), points[i])],
            )
            for i in range(n)
        ]
        return cls.from_checkpoints(ckpts)

    @property
    def is_cached(self) -> bool:
        return self._cached is not None

    # selection --------------------------------------------------------

    def selected_layout(self, sel: SelectionSpec | None):
        sel = sel or ALL
        chosen = [(i, entry) for i, entry in enumerate(self.layout) if sel.matches(entry[0])]
        if not chosen:
            raise EmptySelection(
                f"selection {sel.include_globs}/{sel.exclude_globs} matches no tensors"
            )
        return chosen

    def selection_dim(self, sel: SelectionSpec | None = None) -> int:
        return sum(math.prod(dims) for _, (_, _, dims) in self.selected_layout(sel))

    # data access ------------------------------------------------------

    def flatten(self, i: int, sel: SelectionSpec | None = None) -> np.ndarray:
        """Flattened float64 parameter vector of checkpoint ``i`` (store order)."""
        chosen = self.selected_layout(sel)
        if self._cached is not None:
            parts = [self._cached[i].tensors[ti].data for ti, _ in chosen]
        else:
            src = self._sources[i]
            parts = []
            with open(src.path, "rb") as f:
                for ti, _ in chosen:
                    name, dtype, dims, off = src.offsets[ti]
                    f.seek(off)
                    nel = math.prod(dims)
                    raw = f.read(nel * dtype.np_dtype.itemsize)
                    parts.append(np.frombuffer(raw, dtype=dtype.np_dtype))
        if not parts:
            return np.empty(0, dtype=np.float64)
        return np.concatenate([p.astype(np.float64) for p in parts])

    def matrix(self, sel: SelectionSpec | None = None) -> np.ndarray:
        """All points stacked as an (n_points, p_selected) float64 matrix."""
        key = (sel.include_globs, sel.exclude_globs) if sel else ((("**",)), ())
        cached = self._matrix_cache.get(key)
        if cached is None:
            cached = np.stack([self.flatten(i, sel) for i in range(self.n_points)])
            self._matrix_cache[key] = cached
        return cached

    def chunk_matrix(self, sel: SelectionSpec | None, start: int, stop: int) -> np.ndarray:
        """Columns [start, stop) of matrix(sel), read lazily when not cached."""
        if self._cached is not None:
            return self.matrix(sel)[:, start:stop]
        chosen = self.selected_layout(sel)
        out = np.empty((self.n_points, stop - start), dtype=np.float64)
        for i in range(self.n_points):
            src = self._sources[i]
            col = 0
            base = 0
            with open(src.path, "rb") as f:
                for ti, (_, _, dims) in chosen:
                    nel = math.prod(dims)
                    lo, hi = max(start - base, 0), min(stop - base, nel)
                    if lo < hi:
                        name, dtype, _, off = src.offsets[ti]
                        f.seek(off + lo * dtype.np_dtype.itemsize)
                        raw = f.read((hi - lo) * dtype.np_dtype.itemsize)
                        vals = np.frombuffer(raw, dtype=dtype.np_dtype)
                        out[i, col : col + hi - lo] = vals.astype(np.float64)
                        col += hi - lo
                    base += nel
        return out


def _check_layout(expected, got, who: str) -> None:
    if expected == got:
        return
    exp_names = {e[0] for e in expected}
    got_names = {g[0] for g in got}
    missing = exp_names - got_names
    extra = got_names - exp_names
    if missing or extra:
        raise LayoutMismatch(
            f"checkpoint {who}: tensor set differs "
            f"(missing {sorted(missing)}, extra {sorted(extra)})"
        )
    for e, g in zip(expected, got):
        if e != g:
            raise LayoutMismatch(f"checkpoint {who}: tensor {g[0]!r} is {g[1:]} vs {e[1:]}")
    raise LayoutMismatch(f"checkpoint {who}: layout differs")


def open_store(manifest_path, mem_budget: int = DEFAULT_MEM_BUDGET) -> TrajectoryStore:
    """Load a trajectory manifest; order follows the manifest entry order.

    Checkpoints whose total payload exceeds ``mem_budget`` bytes stay on
    disk and are streamed chunk-wise during kernel computations.
    """
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("version") != 1:
        raise UnsupportedVersion(f"manifest version {manifest.get('version')!r}")
    entries = manifest["checkpoints"]
    if not entries:
        raise EmptyTrajectory("manifest lists no checkpoints")

    indices, labels, sources = [], [], []
    layout = None
    total_bytes = 0
    seen = set()
    for entry in entries:
        idx = int(entry["index"])
        if idx in seen:
            raise DuplicateIndex(f"manifest index {idx} appears twice")
        seen.add(idx)
        path = (manifest_path.parent / entry["path"]).resolve()
        reader = _Reader(path)
        _, offsets = _read_header(reader, payloads=False)
        this_layout = tuple((n, d, dims) for n, d, dims, _ in offsets)
        if layout is None:
            layout = this_layout
        else:
            _check_layout(layout, this_layout, entry.get("label", str(idx)))
        indices.append(idx)
        labels.append(str(entry.get("label", idx)))
        sources.append(_Source(path, offsets))
        total_bytes += sum(
            math.prod(dims) * d.np_dtype.itemsize for _, d, dims, _ in offsets
        )

    store = TrajectoryStore(indices=indices, labels=labels, layout=layout, sources=sources)
    if total_bytes <= mem_budget:
        cached = [
            read_checkpoint(src.path, index=idx, label=lbl)
            for src, idx, lbl in zip(sources, indices, labels)
        ]
        store._cached = cached
    return store


def write_store(checkpoints: list[Checkpoint], out_dir, manifest_name: str = "manifest.json"):
    """Write checkpoints plus a manifest; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for ckpt in checkpoints:
        fname = f"ckpt_{ckpt.index:06d}.trajckpt"
        write_checkpoint(ckpt, out_dir / fname)
        entries.append({"index": ckpt.index, "label": ckpt.label, "path": fname})
    manifest = {"version": 1, "checkpoints": entries}
    manifest_path = out_dir / manifest_name
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest_path
