"""Portable I/O for feature matrices, ground truth, configuration and results.

Two matrix formats are supported:

* binary ``FSM1``: magic ``b"FSM1"``, two little-endian uint32 dims, one kind
  byte (0 = distance, 1 = similarity), then row-major little-endian float64
  values.  Round-trips are bit-exact.
* TSV: header line ``# fsm n=<n> kind=<distance|similarity> name=<str>``
  followed by ``n`` rows of ``n`` tab-separated decimal values.

Results are line-delimited JSON, one self-contained record per query.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

MAGIC = b"FSM1"
KIND_DISTANCE = "distance"
KIND_SIMILARITY = "similarity"
_KIND_BYTE = {KIND_DISTANCE: 0, KIND_SIMILARITY: 1}
_BYTE_KIND = {v: k for k, v in _KIND_BYTE.items()}


class MatrixIOError(Exception):
    """Base class for matrix/config/results I/O failures."""


class BadMagicError(MatrixIOError):
    """File does not start with a recognized matrix header."""


class TruncatedFileError(MatrixIOError):
    """Payload shorter (or longer) than the header promises."""


class NonSquareError(MatrixIOError):
    """Declared dimensions are not square."""


class NonFiniteError(MatrixIOError):
    """Matrix contains NaN or Inf entries."""


class ConfigError(MatrixIOError):
    """Malformed or unknown configuration key/value."""


@dataclass
class FeatureMatrix:
    """N x N pairwise score matrix for one feature."""

    values: np.ndarray
    kind: str
    feature_name: str = ""

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise NonSquareError(f"matrix must be square, got shape {self.values.shape}")
        if self.kind not in _KIND_BYTE:
            raise MatrixIOError(f"unknown matrix kind {self.kind!r}")
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteError("matrix contains NaN or Inf entries")

    @property
    def n(self) -> int:
        return self.values.shape[0]


def load_matrix(path) -> FeatureMatrix:
    """Load a feature matrix in FSM1 binary or TSV format."""
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(MAGIC):
        return _parse_binary(raw, default_name=path.stem)
    if raw.startswith(b"# fsm"):
        return _parse_tsv(raw.decode("utf-8"), default_name=path.stem)
    raise BadMagicError(f"{path}: unrecognized matrix header")


def save_matrix(matrix: FeatureMatrix, path) -> None:
    """Write a matrix; TSV when the path ends in .tsv, FSM1 binary otherwise."""
    path = Path(path)
    if path.suffix == ".tsv":
        lines = [f"# fsm n={matrix.n} kind={matrix.kind} name={matrix.feature_name}"]
        for row in matrix.values:
            lines.append("\t".join(repr(float(v)) for v in row))
        path.write_text("\n".join(lines) + "\n")
    else:
        header = MAGIC + struct.pack("<IIB", matrix.n, matrix.n, _KIND_BYTE[matrix.kind])
        path.write_bytes(header + matrix.values.astype("<f8").tobytes())


def _parse_binary(raw: bytes, default_name: str) -> FeatureMatrix:
    if len(raw) < 13:
        raise TruncatedFileError("binary matrix shorter than its 13-byte header")
    rows, cols, kind_byte = struct.unpack("<IIB", raw[4:13])
    if rows != cols:
        raise NonSquareError(f"declared dims {rows}x{cols} are not square")
    if kind_byte not in _BYTE_KIND:
        raise MatrixIOError(f"unknown kind byte {kind_byte}")
    expected = 13 + rows * cols * 8
    if len(raw) != expected:
        raise TruncatedFileError(f"expected {expected} bytes, found {len(raw)}")
    values = np.frombuffer(raw[13:], dtype="<f8").reshape(rows, cols)
    return FeatureMatrix(values=values.copy(), kind=_BYTE_KIND[kind_byte], feature_name=default_name)


def _parse_tsv(text: str, default_name: str) -> FeatureMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0]
    attrs = {}
    for tok in header[len("# fsm"):].split():
        if "=" not in tok:
            raise BadMagicError(f"malformed TSV header token {tok!r}")
        key, _, val = tok.partition("=")
        attrs[key] = val
    try:
        n = int(attrs["n"])
        kind = attrs["kind"]
    except KeyError as exc:
        raise BadMagicError(f"TSV header missing {exc}") from exc
    if kind not in _KIND_BYTE:
        raise MatrixIOError(f"unknown matrix kind {kind!r}")
    body = lines[1:]
    if len(body) != n:
        raise TruncatedFileError(f"expected {n} rows, found {len(body)}")
    values = np.empty((n, n))
    for i, ln in enumerate(body):
        cells = ln.split("\t")
        if len(cells) != n:
            raise TruncatedFileError(f"row {i}: expected {n} values, found {len(cells)}")
        values[i] = [float(c) for c in cells]
    return FeatureMatrix(values=values, kind=kind, feature_name=attrs.get("name", default_name))


# ---------------------------------------------------------------------------
# ground truth

def load_ground_truth(path) -> dict[int, set[int]]:
    """Read lines of ``<query_id>\\t<id,id,...>`` into a relevance map."""
    truth: dict[int, set[int]] = {}
    for ln in Path(path).read_text().splitlines():
        if not ln.strip() or ln.startswith("#"):
            continue
        qid_s, _, rest = ln.partition("\t")
        truth[int(qid_s)] = {int(tok) for tok in rest.split(",") if tok}
    return truth


def save_ground_truth(truth: dict[int, set[int]], path) -> None:
    lines = [f"{q}\t{','.join(str(i) for i in sorted(ids))}" for q, ids in sorted(truth.items())]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


# ---------------------------------------------------------------------------
# configuration

@dataclass
class FusionConfig:
    """Tunable parameters of the fusion pipeline.

    ``eta``/``theta``/``iota`` default to the feature count at run time when
    left unset.  ``fixed_k`` disables incremental neighbor selection and takes
    the plain top-k instead.
    """

    npc: float = 0.75
    k_max: int = 50
    lambda_scale: float = 1.0
    lambda_mix: float = 0.7
    eta: float | None = None
    theta: float | None = None
    iota: float | None = None
    mu_epsilon: float = 1e-3
    rd_tol: float = 1e-7
    rd_max_iter: int = 10000
    support_eps: float = 1e-6
    seed: int = 0
    fixed_k: int | None = None
    full_ranking: bool = True

    def __post_init__(self):
        if not 0.0 <= self.npc < 1.0:
            raise ConfigError(f"npc must be in [0,1), got {self.npc}")
        if self.k_max < 1:
            raise ConfigError(f"k_max must be >= 1, got {self.k_max}")
        if self.lambda_scale <= 0:
            raise ConfigError(f"lambda_scale must be positive, got {self.lambda_scale}")
        if not 0.0 <= self.lambda_mix <= 1.0:
            raise ConfigError(f"lambda_mix must be in [0,1], got {self.lambda_mix}")
        for name in ("eta", "theta", "iota"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ConfigError(f"{name} must be positive, got {v}")
        for name in ("mu_epsilon", "rd_tol", "support_eps"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.rd_max_iter < 1:
            raise ConfigError("rd_max_iter must be >= 1")
        if self.fixed_k is not None and self.fixed_k < 1:
            raise ConfigError("fixed_k must be >= 1 when set")

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                v = "auto"
            elif isinstance(v, bool):
                v = "true" if v else "false"
            else:
                v = repr(v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FusionConfig":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            if "=" not in ln:
                raise ConfigError(f"malformed config line {ln!r}")
            key, _, val = ln.partition("=")
            key, val = key.strip(), val.strip()
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[key] = _parse_config_value(key, val)
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "FusionConfig":
        return cls.from_text(Path(path).read_text())

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


def _parse_config_value(key: str, val: str):
    if val in ("auto", "none"):
        return None
    if key in ("k_max", "rd_max_iter", "seed", "fixed_k"):
        return int(val)
    if key == "full_ranking":
        if val not in ("true", "false"):
            raise ConfigError(f"full_ranking must be true/false, got {val!r}")
        return val == "true"
    try:
        return float(val)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {val!r}") from exc


# ---------------------------------------------------------------------------
# results

def save_results(results, path) -> None:
    """Write fusion results as one JSON record per line, in input order."""
    path = Path(path)
    try:
        with path.open("w") as fh:
            for res in results:
                fh.write(json.dumps(res.to_dict()) + "\n")
    except OSError as exc:
        raise MatrixIOError(f"cannot write results to {path}: {exc}") from exc


def load_results(path):
    """Read fusion results written by :func:`save_results`."""
    from cdsfuse.fusion import FusionResult

    out = []
    try:
        with Path(path).open() as fh:
            for ln in fh:
                if ln.strip():
                    out.append(FusionResult.from_dict(json.loads(ln)))
    except OSError as exc:
        raise MatrixIOError(f"cannot read results from {path}: {exc}") from exc
    return out
