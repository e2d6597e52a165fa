"""Sieve primes and record their splitting class in the affine family.

For distinct primes a, p (p odd, p^2 not dividing a^(p-1) - 1) the splitting
field of X^p - a has Galois group the affine group over F_p.  Every prime
q not dividing a*p gets one of the class ids from :mod:`cheblab.frobgroup`:

* id 0 when q = 1 mod p and a is a p-th power residue mod q (full splitting),
* id 1 when q = 1 mod p but a is not a p-th power residue (inert of degree p),
* id c = q mod p otherwise (one linear factor, the rest of degree ord(c)).

Datasets are persisted in a line-based format with a CRC32 trailer so files
are byte-reproducible and verifiable:

    CHEBSET 1 a=<a> p=<p> xmax=<x_max>\\n
    <q>,<class_id>\\n                      (every unramified prime, ascending)
    #count=<n_records> crc32=<8 hex digits>\\n

The checksum covers every byte before the trailer line.
"""

from __future__ import annotations

import io
import math
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arith import is_prime, validate_affine_pair
from .errors import (
    AdmissibilityError,
    BadMagicError,
    ChecksumMismatchError,
    ConfigMismatchError,
    RamifiedError,
    SieveRangeError,
    TruncatedFileError,
    VersionMismatchError,
)

MAGIC = "CHEBSET"
FORMAT_VERSION = 1
MAX_X_MAX = 1 << 33  # sieve segments are addressed with plain int64 offsets
MAX_P = 251  # class ids must fit one byte
DEFAULT_SEGMENT_SIZE = 1 << 20
CACHE_ENV_VAR = "CHEB_CACHE_DIR"


@dataclass(frozen=True)
class SieveConfig:
    """Parameters of one dataset: radicand a, degree prime p, sieve bound."""

    a: int
    p: int
    x_max: int
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __post_init__(self) -> None:
        validate_affine_pair(self.a, self.p)
        if self.p > MAX_P:
            raise AdmissibilityError(f"class ids are stored in one byte; need p <= {MAX_P}")
        if self.x_max < 100:
            raise ValueError(f"x_max must be >= 100, got {self.x_max}")
        if self.x_max > MAX_X_MAX:
            raise SieveRangeError(f"x_max {self.x_max} exceeds supported bound {MAX_X_MAX}")
        if self.segment_size < 1024:
            raise ValueError(f"segment_size must be >= 1024, got {self.segment_size}")


class FrobeniusDataset:
    """Immutable per-prime class assignments for one :class:`SieveConfig`."""

    def __init__(self, config: SieveConfig, primes: np.ndarray, classes: np.ndarray):
        primes = np.asarray(primes, dtype=np.int64)
        classes = np.asarray(classes, dtype=np.uint8)
        if primes.shape != classes.shape:
            raise ValueError("primes and classes must have equal length")
        primes.setflags(write=False)
        classes.setflags(write=False)
        self.config = config
        self.primes = primes
        self.classes = classes
        self._log_primes: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.primes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrobeniusDataset):
            return NotImplemented
        return (
            (self.config.a, self.config.p, self.config.x_max)
            == (other.config.a, other.config.p, other.config.x_max)
            and np.array_equal(self.primes, other.primes)
            and np.array_equal(self.classes, other.classes)
        )

    @property
    def counts(self) -> np.ndarray:
        """Number of recorded primes per class id (length p)."""
        return np.bincount(self.classes, minlength=self.config.p)

    @property
    def log_primes(self) -> np.ndarray:
        """log q for every recorded prime; computed once and cached."""
        if self._log_primes is None:
            lp = np.log(self.primes.astype(np.float64))
            lp.setflags(write=False)
            self._log_primes = lp
        return self._log_primes


def frobenius_class(q: int, config: SieveConfig) -> int:
    """Class id of the Frobenius at an unramified prime q."""
    if q == config.a or q == config.p:
        raise RamifiedError(f"q={q} divides a*p and is ramified")
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    c = q % config.p
    if c != 1:
        return c
    return 0 if pow(config.a, (q - 1) // config.p, q) == 1 else 1


def _simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve of Eratosthenes."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for n in range(2, math.isqrt(limit) + 1):
        if flags[n]:
            flags[n * n :: n] = False
    return np.flatnonzero(flags).astype(np.int64)


def _segment_primes(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi) given base primes up to sqrt(hi)."""
    flags = np.ones(hi - lo, dtype=bool)
    for bp in base:
        bp = int(bp)
        if bp * bp >= hi:
            break
        start = max(bp * bp, ((lo + bp - 1) // bp) * bp)
        flags[start - lo :: bp] = False
    if lo <= 1:
        flags[: min(2 - lo, hi - lo)] = False
    return lo + np.flatnonzero(flags)


def _classify(primes: np.ndarray, a: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Drop ramified primes and compute class ids for the rest."""
    keep = (primes != a) & (primes != p)
    qs = primes[keep]
    ids = (qs % p).astype(np.uint8)
    residue = np.flatnonzero(ids == 1)
    for i in residue:
        q = int(qs[i])
        ids[i] = 0 if pow(a, (q - 1) // p, q) == 1 else 1
    return qs, ids


def _sieve_segment(args: tuple[int, int, int, int, bytes]) -> tuple[np.ndarray, np.ndarray]:
    lo, hi, a, p, base_bytes = args
    base = np.frombuffer(base_bytes, dtype=np.int64)
    return _classify(_segment_primes(lo, hi, base), a, p)


def sieve(config: SieveConfig, workers: int = 1) -> FrobeniusDataset:
    """Sieve all primes <= x_max and classify them.

    Segments are processed independently and merged in ascending order, so
    the result is identical for every worker count.
    """
    base = _simple_sieve(math.isqrt(config.x_max))
    bounds = list(range(2, config.x_max + 1, config.segment_size))
    tasks = [
        (lo, min(lo + config.segment_size, config.x_max + 1), config.a, config.p, base.tobytes())
        for lo in bounds
    ]
    if workers <= 1 or len(tasks) <= 1:
        parts = [_sieve_segment(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sieve_segment, tasks, chunksize=1))
    primes = np.concatenate([q for q, _ in parts])
    classes = np.concatenate([c for _, c in parts])
    return FrobeniusDataset(config, primes, classes)


def _header_line(config: SieveConfig) -> str:
    return f"{MAGIC} {FORMAT_VERSION} a={config.a} p={config.p} xmax={config.x_max}\n"


def serialize(dataset: FrobeniusDataset) -> bytes:
    """Dataset file contents as bytes (header, records, CRC trailer)."""
    out = io.StringIO()
    out.write(_header_line(dataset.config))
    primes = dataset.primes.tolist()
    classes = dataset.classes.tolist()
    for q, cid in zip(primes, classes):
        out.write(f"{q},{cid}\n")
    body = out.getvalue().encode("ascii")
    crc = zlib.crc32(body) & 0xFFFFFFFF
    trailer = f"#count={len(primes)} crc32={crc:08x}\n".encode("ascii")
    return body + trailer


def store(dataset: FrobeniusDataset, path: str | Path) -> None:
    """Write the dataset to ``path`` byte-exactly."""
    Path(path).write_bytes(serialize(dataset))


def parse(data: bytes, expect_config: SieveConfig | None = None) -> FrobeniusDataset:
    """Parse dataset bytes, verifying structure and checksum."""
    header_end = data.find(b"\n")
    if header_end < 0:
        raise BadMagicError("missing header line")
    header = data[: header_end + 1].decode("ascii", errors="replace")
    fields = header.split()
    if len(fields) != 5 or fields[0] != MAGIC:
        raise BadMagicError(f"bad header: {header!r}")
    if fields[1] != str(FORMAT_VERSION):
        raise VersionMismatchError(f"unsupported format version {fields[1]!r}")
    try:
        a = int(fields[2].removeprefix("a="))
        p = int(fields[3].removeprefix("p="))
        x_max = int(fields[4].removeprefix("xmax="))
    except ValueError as exc:
        raise BadMagicError(f"bad header: {header!r}") from exc

    trailer_start = data.rfind(b"\n#count=")
    if trailer_start < 0 or not data.endswith(b"\n"):
        raise TruncatedFileError("missing trailer line")
    trailer_start += 1
    trailer = data[trailer_start:].decode("ascii", errors="replace").strip()
    parts = trailer.split()
    if len(parts) != 2 or not parts[0].startswith("#count=") or not parts[1].startswith("crc32="):
        raise TruncatedFileError(f"bad trailer: {trailer!r}")
    count = int(parts[0].removeprefix("#count="))
    crc_stated = parts[1].removeprefix("crc32=")
    crc_actual = zlib.crc32(data[:trailer_start]) & 0xFFFFFFFF
    if f"{crc_actual:08x}" != crc_stated:
        raise ChecksumMismatchError(
            f"crc32 mismatch: stated {crc_stated}, computed {crc_actual:08x}"
        )

    body = data[header_end + 1 : trailer_start]
    if body:
        table = np.loadtxt(io.BytesIO(body), delimiter=",", dtype=np.int64, ndmin=2)
        primes, classes = table[:, 0], table[:, 1]
    else:
        primes = np.empty(0, dtype=np.int64)
        classes = np.empty(0, dtype=np.int64)
    if len(primes) != count:
        raise TruncatedFileError(f"trailer states {count} records, found {len(primes)}")

    config = SieveConfig(a=a, p=p, x_max=x_max)
    if expect_config is not None and (a, p, x_max) != (
        expect_config.a,
        expect_config.p,
        expect_config.x_max,
    ):
        raise ConfigMismatchError(
            f"dataset is (a={a}, p={p}, xmax={x_max}), expected "
            f"(a={expect_config.a}, p={expect_config.p}, xmax={expect_config.x_max})"
        )
    return FrobeniusDataset(config, primes, classes.astype(np.uint8))


def load(path: str | Path, expect_config: SieveConfig | None = None) -> FrobeniusDataset:
    """Read a dataset file written by :func:`store`."""
    return parse(Path(path).read_bytes(), expect_config)


def cache_path(config: SieveConfig, cache_dir: str | Path) -> Path:
    return Path(cache_dir) / f"chebset_a{config.a}_p{config.p}_x{config.x_max}.txt"


def ensure_dataset(
    config: SieveConfig, cache_dir: str | Path | None = None, workers: int = 1
) -> FrobeniusDataset:
    """Load the dataset from the cache directory, sieving and storing on miss.

    ``cache_dir`` defaults to the CHEB_CACHE_DIR environment variable; with
    neither set, the dataset is sieved without being persisted.
    """
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV_VAR)
    if cache_dir is None:
        return sieve(config, workers=workers)
    path = cache_path(config, cache_dir)
    if path.exists():
        return load(path, expect_config=config)
    dataset = sieve(config, workers=workers)
    path.parent.mkdir(parents=True, exist_ok=True)
    store(dataset, path)
    return dataset
