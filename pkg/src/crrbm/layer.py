"""
Single-layer RBM primitives
Conditionals of binary hidden units, Bernoulli sampling, and visible reconstruction
(logistic for binary visible units, linear for Gaussian visible units with unit variance)
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from src.config import WEIGHT_INIT_STD
from src.errors import DimensionMismatchError

BINARY = "binary"
GAUSSIAN = "gaussian"
VISIBLE_KINDS = (BINARY, GAUSSIAN)


def _readonly(array) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class RbmParams:
    """W is M x M' (visible x hidden), a has length M, b has length M'"""

    W: np.ndarray
    a: np.ndarray
    b: np.ndarray
    visible_kind: str = BINARY

    def __post_init__(self):
        W, a, b = _readonly(self.W), _readonly(self.a), _readonly(self.b)
        if W.ndim != 2 or a.shape != (W.shape[0],) or b.shape != (W.shape[1],):
            raise DimensionMismatchError(
                f"inconsistent shapes W={W.shape}, a={a.shape}, b={b.shape}"
            )
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("RBM parameters must be finite")
        if self.visible_kind not in VISIBLE_KINDS:
            raise ValueError(f"unknown visible kind '{self.visible_kind}'")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n_visible(self) -> int:
        return self.W.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.W.shape[1]

    @classmethod
    def initialize(cls, n_visible: int, n_hidden: int, visible_kind: str,
                   rng: np.random.Generator) -> "RbmParams":
        """W ~ N(0, 0.01^2), zero biases"""
        W = rng.normal(0.0, WEIGHT_INIT_STD, size=(n_visible, n_hidden))
        return cls(W=W, a=np.zeros(n_visible), b=np.zeros(n_hidden), visible_kind=visible_kind)

    @classmethod
    def zeros(cls, n_visible: int, n_hidden: int, visible_kind: str = BINARY) -> "RbmParams":
        return cls(W=np.zeros((n_visible, n_hidden)), a=np.zeros(n_visible),
                   b=np.zeros(n_hidden), visible_kind=visible_kind)


def hidden_probs(p: RbmParams, V: np.ndarray) -> np.ndarray:
    """P(h_j = 1 | v) = sigmoid(b_j + sum_i v_i w_ij) for every row of V"""
    V = np.atleast_2d(np.asarray(V, dtype=np.float64))
    if V.shape[1] != p.n_visible:
        raise DimensionMismatchError(f"batch has {V.shape[1]} columns, layer expects {p.n_visible}")
    return expit(V @ p.W + p.b)


def sample_bernoulli(P: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """1 where the next uniform draw (row-major order) falls below the probability"""
    P = np.asarray(P, dtype=np.float64)
    if P.size and (P.min() < 0.0 or P.max() > 1.0 or np.isnan(P).any()):
        raise ValueError("probabilities must lie in [0, 1]")
    return (rng.random(P.shape) < P).astype(np.float64)


def reconstruct_visible(p: RbmParams, H: np.ndarray) -> np.ndarray:
    """Logistic reconstruction for binary visible units, affine (noise-free) for Gaussian ones"""
    H = np.atleast_2d(np.asarray(H, dtype=np.float64))
    if H.shape[1] != p.n_hidden:
        raise DimensionMismatchError(f"hidden batch has {H.shape[1]} columns, layer has {p.n_hidden}")
    activation = H @ p.W.T + p.a
    if p.visible_kind == GAUSSIAN:
        return activation
    return expit(activation)
