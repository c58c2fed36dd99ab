"""Domain types: data, parameters, priors, and the skewness vectorization.

The skewness matrix D acts on a nonnegative latent vector, R_t = mu + D Z_t
+ eps_t. Because row sums against Z are permutation-invariant, an
unconstrained D is identified only up to simultaneous column permutations
of D and Z; the lower-triangular layout removes every nontrivial
permutation and restores interpretability. The diagonal of D is left
unsigned: Z >= 0 already fixes signs, only the zero pattern is enforced.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonPositiveParameter
from .numerics import spd_logdet, symmetrize

FULL_NOWI = "full-nowi"
LT_NOWI = "lt-nowi"
LT_HSGHS = "lt-hsghs"
VARIANTS = (FULL_NOWI, LT_NOWI, LT_HSGHS)

SKEW_NORMAL = "skew-normal"
SKEW_T = "skew-t"
TAILS = (SKEW_NORMAL, SKEW_T)


@dataclass
class Dataset:
    """T x N observation matrix, rows are observations."""

    r: np.ndarray

    def __post_init__(self):
        self.r = np.ascontiguousarray(self.r, dtype=np.float64)
        if self.r.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d matrix, got {self.r.shape}")
        if not np.all(np.isfinite(self.r)):
            raise ValueError("observations contain non-finite entries")

    @property
    def t(self):
        return self.r.shape[0]

    @property
    def n(self):
        return self.r.shape[1]


class DeltaLayout:
    """Bijection between skewness-matrix positions and the stacked vector.

    Stacking is row-major: (1,1), (2,1), (2,2), ..., (N,1), ..., (N,N) for
    the lower-triangular layout, or full rows for the unconstrained layout.
    """

    def __init__(self, n, lower_triangular=True):
        self.n = int(n)
        self.lower_triangular = bool(lower_triangular)
        if self.lower_triangular:
            self.positions = [(i, j) for i in range(self.n) for j in range(i + 1)]
        else:
            self.positions = [(i, j) for i in range(self.n) for j in range(self.n)]

    @property
    def size(self):
        return len(self.positions)

    def to_matrix(self, vec):
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.size,):
            raise DimensionMismatch(f"expected {self.size} entries, got {vec.shape}")
        mat = np.zeros((self.n, self.n))
        for idx, (i, j) in enumerate(self.positions):
            mat[i, j] = vec[idx]
        return mat

    def to_vec(self, mat):
        mat = np.asarray(mat, dtype=np.float64)
        if mat.shape != (self.n, self.n):
            raise DimensionMismatch(f"expected {self.n}x{self.n}, got {mat.shape}")
        return np.array([mat[i, j] for (i, j) in self.positions])


def layout_for(variant, n):
    return DeltaLayout(n, lower_triangular=variant != FULL_NOWI)


def build_w(z_t, layout):
    """Design matrix W_t with W_t vec(D) = D z_t for the given layout.

    Row i holds (z_1, ..., z_i) in the column block for row i of D under
    the lower-triangular layout (the full layout uses all of z_t per row).
    """
    z_t = np.asarray(z_t, dtype=np.float64)
    if z_t.shape != (layout.n,):
        raise DimensionMismatch(f"expected length {layout.n}, got {z_t.shape}")
    w = np.zeros((layout.n, layout.size))
    for col, (i, j) in enumerate(layout.positions):
        w[i, col] = z_t[j]
    return w


@dataclass
class ModelParams:
    """Location mu, skewness matrix delta, precision omega."""

    mu: np.ndarray
    delta: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=np.float64)
        self.delta = np.asarray(self.delta, dtype=np.float64)
        self.omega = np.asarray(self.omega, dtype=np.float64)
        n = self.mu.shape[0]
        if self.delta.shape != (n, n) or self.omega.shape != (n, n):
            raise DimensionMismatch("mu, delta, omega dimensions disagree")

    @property
    def n(self):
        return self.mu.shape[0]

    def copy(self):
        return ModelParams(self.mu.copy(), self.delta.copy(), self.omega.copy())


@dataclass
class LatentState:
    """Nonnegative latent matrix Z and, under skew-t, the mixing scalars."""

    z: np.ndarray
    gamma: np.ndarray | None = None

    def __post_init__(self):
        self.z = np.ascontiguousarray(self.z, dtype=np.float64)
        if np.any(self.z < 0):
            raise ValueError("latent matrix must be nonnegative")
        if self.gamma is not None:
            self.gamma = np.asarray(self.gamma, dtype=np.float64)
            if self.gamma.shape != (self.z.shape[0],):
                raise DimensionMismatch("gamma length must match rows of Z")
            if np.any(self.gamma <= 0):
                raise NonPositiveParameter("gamma must be positive")

    def weights(self):
        """Mixing weights; all ones under skew-normal."""
        if self.gamma is None:
            return np.ones(self.z.shape[0])
        return self.gamma

    def copy(self):
        return LatentState(
            self.z.copy(), None if self.gamma is None else self.gamma.copy()
        )


@dataclass
class PriorConfig:
    """Hyperparameters for all three variants, plus variant/tail selectors."""

    variant: str
    tail: str
    b_mu: np.ndarray
    a_mu: np.ndarray
    b_delta: np.ndarray
    a_delta: np.ndarray
    s_omega: np.ndarray
    nu_omega: float
    a_eta: float = 1.0
    b_eta: float = 0.0
    a_varphi: float = 2.0
    b_varphi: float = 0.1

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.tail not in TAILS:
            raise ValueError(f"unknown tail {self.tail!r}")
        n = self.b_mu.shape[0]
        j = DeltaLayout(n, self.variant != FULL_NOWI).size
        if self.b_delta.shape != (j,):
            raise DimensionMismatch(
                f"b_delta must have {j} entries under {self.variant}"
            )
        if self.nu_omega < n:
            raise NonPositiveParameter(f"nu_omega {self.nu_omega} < dimension {n}")

    @property
    def n(self):
        return self.b_mu.shape[0]

    def layout(self):
        return layout_for(self.variant, self.n)

    @classmethod
    def default(cls, variant, tail, n, *, a_mu_scale=0.01, a_delta_scale=0.01,
                s_omega_scale=None, nu_omega=None, a_eta=1.0, b_eta=0.0,
                a_varphi=2.0, b_varphi=0.1):
        """Reference hyperparameters: weak normal-Wishart, unit-information Wishart scale."""
        j = layout_for(variant, n).size
        return cls(
            variant=variant,
            tail=tail,
            b_mu=np.zeros(n),
            a_mu=a_mu_scale * np.eye(n),
            b_delta=np.zeros(j),
            a_delta=a_delta_scale * np.eye(j),
            s_omega=(n if s_omega_scale is None else s_omega_scale) * np.eye(n),
            nu_omega=float(n if nu_omega is None else nu_omega),
            a_eta=a_eta,
            b_eta=b_eta,
            a_varphi=a_varphi,
            b_varphi=b_varphi,
        )


def residual(params, latent, data):
    """R - mu - Z D' as a T x N matrix."""
    return data.r - params.mu - latent.z @ params.delta.T


def loglik(params, latent, data, method="trace"):
    """Gaussian log-likelihood of the data given the latent matrix.

    The sum form accumulates the per-observation quadratic forms; the trace
    form works through tr(Omega S) with S the residual cross-product. Both
    include the (2 pi)^(-TN/2) constant and agree to rounding.
    """
    t, n = data.t, data.n
    logdet = spd_logdet(params.omega)
    resid = residual(params, latent, data)
    if method == "trace":
        quad = float(np.sum(params.omega * symmetrize(resid.T @ resid)))
    elif method == "sum":
        quad = float(np.einsum("ti,ij,tj->", resid, params.omega, resid))
    else:
        raise ValueError(f"unknown method {method!r}")
    return -0.5 * t * n * np.log(2.0 * np.pi) + 0.5 * t * logdet - 0.5 * quad
