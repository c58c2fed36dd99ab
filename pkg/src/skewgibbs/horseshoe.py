"""Horseshoe hierarchy for the skewness vector and the graphical horseshoe
block sweep for the precision matrix.

Half-Cauchy scales are represented through inverse-gamma auxiliary
variables, so every hyperparameter update is a conjugate inverse-gamma
draw. The precision matrix keeps positive definiteness through the
eta = w11 - w21' Omega22^-1 w21 reparameterization: eta gets a gamma draw,
the off-diagonal column moves inside its feasibility ellipsoid by one
Hit-and-Run step.
"""

from dataclasses import dataclass

import numpy as np

from .distributions import as_generator, draw_gamma, draw_inv_gamma, draw_trunc_normal
from .errors import InfeasibleStart
from .numerics import partition_at, reassemble_at, spd_inverse, symmetrize


@dataclass
class DeltaShrinkState:
    """Local/global scales (and their auxiliaries) for the skewness vector."""

    lambda2: np.ndarray
    tau2: float
    nu: np.ndarray
    xi: float

    def __post_init__(self):
        if np.any(self.lambda2 <= 0) or np.any(self.nu <= 0):
            raise ValueError("local scales must be positive")
        if self.tau2 <= 0 or self.xi <= 0:
            raise ValueError("global scales must be positive")

    @classmethod
    def from_prior(cls, size, rng):
        rng = as_generator(rng)
        nu = draw_inv_gamma(0.5, np.ones(size), rng)
        xi = float(draw_inv_gamma(0.5, 1.0, rng))
        lambda2 = draw_inv_gamma(0.5, 1.0 / nu, rng)
        tau2 = float(draw_inv_gamma(0.5, 1.0 / xi, rng))
        return cls(lambda2=lambda2, tau2=tau2, nu=nu, xi=xi)


@dataclass
class OmegaShrinkState:
    """Graphical-horseshoe scales for the strict upper triangle.

    ``rho2`` and ``upsilon`` are kept as symmetric N x N arrays (diagonal
    unused) so block sweeps can read the pair (pivot, partner) directly.
    """

    rho2: np.ndarray
    psi2: float
    upsilon: np.ndarray
    zeta: float

    def __post_init__(self):
        iu = np.triu_indices(self.rho2.shape[0], k=1)
        if np.any(self.rho2[iu] <= 0) or np.any(self.upsilon[iu] <= 0):
            raise ValueError("local scales must be positive")
        if self.psi2 <= 0 or self.zeta <= 0:
            raise ValueError("global scales must be positive")

    @classmethod
    def from_prior(cls, n, rng):
        rng = as_generator(rng)
        iu = np.triu_indices(n, k=1)
        upsilon = np.ones((n, n))
        rho2 = np.ones((n, n))
        ups = draw_inv_gamma(0.5, np.ones(iu[0].size), rng)
        zeta = float(draw_inv_gamma(0.5, 1.0, rng))
        rho = draw_inv_gamma(0.5, 1.0 / ups, rng)
        psi2 = float(draw_inv_gamma(0.5, 1.0 / zeta, rng))
        upsilon[iu] = ups
        upsilon.T[iu] = ups
        rho2[iu] = rho
        rho2.T[iu] = rho
        return cls(rho2=rho2, psi2=psi2, upsilon=upsilon, zeta=zeta)


def update_delta_shrink(delta, state, rng):
    """Conjugate refresh of the skewness shrinkage hierarchy.

    The global shape is (J + 1) / 2 with J the stacked lower-triangular
    length N(N+1)/2.
    """
    rng = as_generator(rng)
    delta = np.asarray(delta, dtype=np.float64)
    j = delta.shape[0]
    lambda2 = draw_inv_gamma(1.0, 1.0 / state.nu + delta**2 / (2.0 * state.tau2), rng)
    tau2 = float(
        draw_inv_gamma(
            (j + 1) / 2.0, 1.0 / state.xi + 0.5 * np.sum(delta**2 / lambda2), rng
        )
    )
    nu = draw_inv_gamma(1.0, 1.0 + 1.0 / lambda2, rng)
    xi = float(draw_inv_gamma(1.0, 1.0 + 1.0 / tau2, rng))
    return DeltaShrinkState(lambda2=lambda2, tau2=tau2, nu=nu, xi=xi)


def build_horseshoe_prior_precision(state):
    """Diagonal prior precision diag(1 / (tau2 lambda_j^2)) and zero mean term."""
    return np.diag(1.0 / (state.tau2 * state.lambda2)), np.zeros(state.lambda2.shape[0])


def update_omega_shrink(omega, state, rng):
    """Conjugate refresh of the precision-matrix shrinkage hierarchy."""
    rng = as_generator(rng)
    omega = np.asarray(omega, dtype=np.float64)
    n = omega.shape[0]
    iu = np.triu_indices(n, k=1)
    w2 = omega[iu] ** 2
    rho = draw_inv_gamma(1.0, 1.0 / state.upsilon[iu] + w2 / (2.0 * state.psi2), rng)
    psi2 = float(
        draw_inv_gamma(
            n * (n - 1) / 4.0 + 0.5, 1.0 / state.zeta + 0.5 * np.sum(w2 / rho), rng
        )
    )
    ups = draw_inv_gamma(1.0, 1.0 + 1.0 / rho, rng)
    zeta = float(draw_inv_gamma(1.0, 1.0 + 1.0 / psi2, rng))
    rho2 = np.ones((n, n))
    upsilon = np.ones((n, n))
    rho2[iu] = rho
    rho2.T[iu] = rho
    upsilon[iu] = ups
    upsilon.T[iu] = ups
    return OmegaShrinkState(rho2=rho2, psi2=psi2, upsilon=upsilon, zeta=zeta)


def update_eta(s11, t, a_eta, b_eta, rng):
    """Gamma draw for the reparameterized diagonal excess."""
    return float(draw_gamma(a_eta + t / 2.0, b_eta + s11 / 2.0, rng))


def hnr_line_params(omega21, omega11, omega22_inv, s21, a_omega_hat, alpha):
    """Mean, variance and feasible interval of the move length along ``alpha``.

    The feasible interval solves the quadratic
    a k^2 + 2 b k + c < 0 with a = a' Oinv a, b = w21' Oinv a and
    c = w21' Oinv w21 - w11; c < 0 at a feasible start, so the
    discriminant is positive and the interval contains zero.
    """
    denom = alpha @ a_omega_hat @ alpha
    mu_k = -(s21 @ alpha + omega21 @ a_omega_hat @ alpha) / denom
    sig2 = 1.0 / denom
    a_k = alpha @ omega22_inv @ alpha
    b_k = omega21 @ omega22_inv @ alpha
    c_k = omega21 @ omega22_inv @ omega21 - omega11
    disc = np.sqrt(b_k * b_k - a_k * c_k)
    return mu_k, sig2, (-b_k - disc) / a_k, (-b_k + disc) / a_k


def hit_and_run_omega21(omega21, omega11, omega22_inv, s21, s11, a_omega, rng,
                        direction=None):
    """One Hit-and-Run move of the off-diagonal column.

    Target: N(-A_hat^-1 s21, A_hat^-1) with A_hat = A_omega + s11 Omega22^-1,
    restricted to {w : w' Omega22^-1 w < w11}. Picks a uniform direction,
    draws the signed distance from the exact one-dimensional restriction,
    and returns a strictly feasible point.
    """
    rng = as_generator(rng)
    omega21 = np.asarray(omega21, dtype=np.float64)
    if omega21.size == 0:
        return omega21.copy()
    if not omega21 @ omega22_inv @ omega21 < omega11:
        raise InfeasibleStart(
            "current off-diagonal column lies outside the feasibility ellipsoid"
        )
    if direction is None:
        u = rng.standard_normal(omega21.shape[0])
        direction = u / np.linalg.norm(u)
    a_omega = np.asarray(a_omega, dtype=np.float64)
    if a_omega.ndim == 1:
        a_omega = np.diag(a_omega)
    a_hat = symmetrize(a_omega + s11 * omega22_inv)
    mu_k, sig2, lo, hi = hnr_line_params(
        omega21, omega11, omega22_inv, s21, a_hat, direction
    )
    kappa = draw_trunc_normal(mu_k, sig2, lo, hi, rng)
    return omega21 + kappa * direction


def ghs_block_sweep(omega, s, shrink, t, prior, rng):
    """One block-Gibbs pass over all pivots of the precision matrix.

    Per pivot: partition, draw eta, rebuild the pivot diagonal from the old
    off-diagonal column, move the column by one Hit-and-Run step with the
    horseshoe prior precision, write back. Positive definiteness holds
    after every pivot because eta stays positive and the move stays inside
    the ellipsoid.
    """
    rng = as_generator(rng)
    omega = np.asarray(omega, dtype=np.float64).copy()
    n = omega.shape[0]
    for j in range(n):
        part = partition_at(omega, s, j)
        eta = update_eta(part.s_scalar, t, prior.a_eta, prior.b_eta, rng)
        if n == 1:
            omega[0, 0] = eta
            continue
        omega22_inv = spd_inverse(part.rest)
        omega11 = eta + part.off_col @ omega22_inv @ part.off_col
        partners = part.order[1:]
        rho_pair = shrink.rho2[j, partners]
        a_omega = np.diag(1.0 / (shrink.psi2 * rho_pair))
        new_col = hit_and_run_omega21(
            part.off_col, omega11, omega22_inv, part.s_col, part.s_scalar,
            a_omega, rng,
        )
        omega = reassemble_at(omega11, new_col, part.rest, j)
    return omega
