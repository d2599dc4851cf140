"""Core value types, config validation, RNG streams, and checkpoint I/O."""

from __future__ import annotations

import hashlib
import json
import struct
import zlib
from dataclasses import asdict, dataclass, replace

import numpy as np

SCHEMA_VERSION = 1

MODE_ADAPTIVE = "adaptive"
MODE_FIXED_UNIT = "fixed1"
MODE_FIXED_VALUE = "fixedT"
MODES = (MODE_ADAPTIVE, MODE_FIXED_UNIT, MODE_FIXED_VALUE)

# Checkpoint wire format: magic, then little-endian 64-bit fields in a fixed
# order. Loading is bit-exact with respect to saving.
CHECKPOINT_MAGIC = b"SRTRBM01"

# Clamp for the log-temperature state. Hitting it is logged as an anomaly,
# never raised.
LAMBDA_CLAMP = 20.0


def _f64(x) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


@dataclass(frozen=True)
class RbmParams:
    """Weights and biases of a binary RBM, always float64."""

    w: np.ndarray  # (n_v, n_h) coupling matrix, visible index major
    b_v: np.ndarray  # (n_v,) visible biases
    b_h: np.ndarray  # (n_h,) hidden biases

    def __post_init__(self):
        object.__setattr__(self, "w", _f64(self.w))
        object.__setattr__(self, "b_v", _f64(self.b_v))
        object.__setattr__(self, "b_h", _f64(self.b_h))
        if self.w.ndim != 2:
            raise ValueError("w must be a 2-d array")
        if self.b_v.shape != (self.w.shape[0],):
            raise ValueError("b_v length must match w rows")
        if self.b_h.shape != (self.w.shape[1],):
            raise ValueError("b_h length must match w columns")

    @property
    def n_v(self) -> int:
        return self.w.shape[0]

    @property
    def n_h(self) -> int:
        return self.w.shape[1]


@dataclass(frozen=True)
class ThermoState:
    """Controller state: log-temperature, flip-rate reference, Cesaro gap."""

    lam: float = 0.0  # lambda, micro log-temperature
    c: float = 0.0  # flip-rate reference (EMA of observed rates)
    delta_f_bar: float = 0.0  # Cesaro running mean of the free-energy gap
    t: int = 0  # completed controller updates (epochs)


@dataclass(frozen=True)
class ChainState:
    """One Gibbs chain: current visible and hidden configuration."""

    v: np.ndarray  # (n_v,) binary
    h: np.ndarray  # (n_h,) binary

    def __post_init__(self):
        object.__setattr__(self, "v", _f64(self.v))
        object.__setattr__(self, "h", _f64(self.h))


@dataclass(frozen=True)
class ChainTrace:
    """States visited by a chain, initial state first.

    vs has K+1 rows for a K-step run; hs[0] is the hidden state paired
    with vs[0].
    """

    vs: np.ndarray  # (K+1, n_v)
    hs: np.ndarray  # (K+1, n_h)

    def __post_init__(self):
        object.__setattr__(self, "vs", _f64(self.vs))
        object.__setattr__(self, "hs", _f64(self.hs))
        if self.vs.shape[0] != self.hs.shape[0]:
            raise ValueError("vs and hs must have the same number of steps")

    @property
    def k(self) -> int:
        return self.vs.shape[0] - 1


@dataclass(frozen=True)
class EpochMetrics:
    """Per-epoch training record.

    Controller fields (temperature, lam, reference, cesaro_gap) are the state
    that was in force during the epoch; parameter-derived fields use the
    end-of-epoch parameters.
    """

    flip_rate: float  # epoch mean persistent-chain visible flip rate
    temperature: float  # T in force during the epoch
    lam: float  # lambda entering the epoch
    reference: float  # flip-rate reference c entering the epoch
    gap: float  # epoch mean free-energy gap, data minus model
    cesaro_gap: float  # Cesaro mean gap entering the epoch
    recon_mse: float  # epoch mean one-step reconstruction error
    theta_norm: float  # l2 norm of the full parameter vector
    beta_norm: float  # theta_norm / T
    beta_eff: float  # Frobenius norm of w / T
    beta_spectral: float  # spectral norm of w / T
    mean_abs_de: float  # mean |energy step| along chains, 0 when K < 2


@dataclass(frozen=True)
class TrainConfig:
    """Training and controller hyperparameters."""

    n_hidden: int
    epochs: int
    batch_size: int = 128
    k: int = 1  # Gibbs steps per parameter update
    eta: float = 5e-4  # learning rate
    eta_lambda: float = 0.05  # controller gain on the flip-rate error
    alpha: float = 0.05  # reference EMA rate
    kappa: float = 0.02  # macro gap-to-temperature scale
    phi: float = 1.0  # controller leak, 1 means pure integral feedback
    psi_w: float = 1e-4  # weight decay on w
    psi_b: float = 0.0  # weight decay on biases
    mode: str = MODE_ADAPTIVE
    temperature: float | None = None  # required iff mode == fixedT
    seed: int = 1
    init_std: float = 0.05  # std of the Normal weight init
    checkpoint_every: int = 0  # 0 disables periodic checkpoints

    def resolved(self) -> dict:
        """JSON-safe dict of the full configuration."""
        d = asdict(self)
        return d


def validate_config(config: TrainConfig) -> TrainConfig:
    """Check every config invariant; raise ValueError naming violations.

    Returns the config unchanged when valid.
    """
    errs = []
    if config.n_hidden < 1:
        errs.append("n_hidden must be >= 1")
    if config.epochs < 0:
        errs.append("epochs must be >= 0")
    if config.batch_size < 1:
        errs.append("batch_size must be >= 1")
    if config.k < 1:
        errs.append("k must be >= 1")
    if not config.eta > 0:
        errs.append("eta must be > 0")
    psi_max = max(config.psi_w, config.psi_b)
    if config.psi_w < 0 or config.psi_b < 0:
        errs.append("psi_w and psi_b must be >= 0")
    elif not config.eta * psi_max < 2:
        errs.append("eta * max(psi_w, psi_b) must be < 2 (contraction)")
    if not config.eta_lambda > 0:
        errs.append("eta_lambda must be > 0")
    if not 0 < config.alpha <= 1:
        errs.append("alpha must be in (0, 1]")
    if config.kappa < 0:
        errs.append("kappa must be >= 0")
    if not 0 < config.phi <= 1:
        errs.append("phi must be in (0, 1]")
    if config.mode not in MODES:
        errs.append("mode must be one of %s" % (MODES,))
    if config.mode == MODE_FIXED_VALUE:
        if config.temperature is None or not config.temperature > 0:
            errs.append("fixedT mode requires temperature > 0")
    if config.init_std < 0:
        errs.append("init_std must be >= 0")
    if config.checkpoint_every < 0:
        errs.append("checkpoint_every must be >= 0")
    if errs:
        raise ValueError("invalid config: " + "; ".join(errs))
    return config


def replace_config(config: TrainConfig, **kwargs) -> TrainConfig:
    return validate_config(replace(config, **kwargs))


# ---------------------------------------------------------------------------
# RNG streams


def _path_element(x) -> int:
    if isinstance(x, str):
        return zlib.crc32(x.encode("utf-8"))
    return int(x) & 0xFFFFFFFF


def rng_stream(seed: int, *path) -> np.random.Generator:
    """Independent, reproducible Philox stream for a (seed, path) key.

    Path elements may be ints or short strings (hashed stably). Streams with
    different paths are statistically independent; the same key always yields
    the same sequence, independent of any other stream's consumption.
    """
    key = tuple(_path_element(x) for x in path)
    ss = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


# ---------------------------------------------------------------------------
# Parameter vector helpers


def param_vector(params: RbmParams) -> np.ndarray:
    """Flatten (w, b_v, b_h) into one vector, w first in row-major order."""
    return np.concatenate([params.w.ravel(), params.b_v, params.b_h])


def theta_norm(params: RbmParams) -> float:
    return float(np.linalg.norm(param_vector(params)))


# ---------------------------------------------------------------------------
# Checkpoint I/O


def save_checkpoint(path, params: RbmParams, state: ThermoState) -> None:
    """Write the fixed binary checkpoint format (all fields little-endian)."""
    n_v, n_h = params.n_v, params.n_h
    with open(path, "wb") as f:
        f.write(CHECKPOINT_MAGIC)
        f.write(struct.pack("<QQ", n_v, n_h))
        f.write(params.w.astype("<f8").tobytes(order="C"))
        f.write(params.b_v.astype("<f8").tobytes())
        f.write(params.b_h.astype("<f8").tobytes())
        f.write(struct.pack("<ddd", state.lam, state.c, state.delta_f_bar))
        f.write(struct.pack("<Q", state.t))


def load_checkpoint(path) -> tuple[RbmParams, ThermoState]:
    """Read a checkpoint written by save_checkpoint, bit-exactly."""
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:8] != CHECKPOINT_MAGIC:
        raise ValueError("bad checkpoint magic: %r" % blob[:8])
    n_v, n_h = struct.unpack_from("<QQ", blob, 8)
    off = 24
    need = off + 8 * (n_v * n_h + n_v + n_h) + 24 + 8
    if len(blob) != need:
        raise ValueError(
            "checkpoint truncated or oversized: %d bytes, want %d" % (len(blob), need)
        )
    w = np.frombuffer(blob, dtype="<f8", count=n_v * n_h, offset=off).reshape(n_v, n_h)
    off += 8 * n_v * n_h
    b_v = np.frombuffer(blob, dtype="<f8", count=n_v, offset=off)
    off += 8 * n_v
    b_h = np.frombuffer(blob, dtype="<f8", count=n_h, offset=off)
    off += 8 * n_h
    lam, c, dfb = struct.unpack_from("<ddd", blob, off)
    off += 24
    (t,) = struct.unpack_from("<Q", blob, off)
    params = RbmParams(w=w.copy(), b_v=b_v.copy(), b_h=b_h.copy())
    return params, ThermoState(lam=lam, c=c, delta_f_bar=dfb, t=t)


# ---------------------------------------------------------------------------
# Structured record helpers shared by the CLI


def build_id() -> str:
    """Stable short identifier of this build (same seed, same bytes out)."""
    from . import __version__

    digest = hashlib.sha256(("srtrbm-" + __version__).encode()).hexdigest()
    return digest[:12]


def json_line(record: dict) -> str:
    """Canonical single-line JSON encoding used for every emitted record.

    Keys are sorted and NaN/inf are rejected, so equal records always
    serialize to identical bytes and the output is strict JSON.
    """
    return json.dumps(record, separators=(",", ":"), allow_nan=False, sort_keys=True)


def provenance(config: TrainConfig | None, seed: int) -> dict:
    rec = {
        "schema_version": SCHEMA_VERSION,
        "build": build_id(),
        "seed": int(seed),
    }
    if config is not None:
        rec["config"] = config.resolved()
    return rec
