"""Closed-form score and Hessian of the GMOKw-E log-likelihood.

A second, independent implementation used to cross-check the generic score
and the finite-difference observed information. Parameters are ordered
(theta, alpha, a, b, lam); with E = exp(-lam t), G = 1 - E, A = 1 - G^a,
S = A^b and D = 1 - (1 - alpha) S,

    l = n log(theta a b lam) + n theta log(alpha) - lam sum t + (a-1) sum log G
        + (b theta - 1) sum log A - (theta + 1) sum log D.

The terms are written out one by one rather than generated, so that an error
in either implementation shows up as a disagreement.
"""

from __future__ import annotations

import numpy as np

__all__ = ["gmokwe_loglik", "gmokwe_score", "gmokwe_hessian"]


def _pieces(params, t):
    theta, alpha, a, b, lam = (float(v) for v in params)
    t = np.asarray(t, dtype=float)
    E = np.exp(-lam * t)
    G = -np.expm1(-lam * t)
    # log1p keeps 1 - G^a accurate in the upper tail, where G rounds towards 1
    lG = np.where(E < 0.5, np.log1p(-E), np.log(G))
    Ga = G**a
    A = -np.expm1(a * lG)
    lA = np.log(A)
    S = A**b
    D = 1.0 - (1.0 - alpha) * S
    return theta, alpha, a, b, lam, t, E, G, lG, Ga, A, lA, S, D


def gmokwe_loglik(params, t) -> float:
    theta, alpha, a, b, lam, t, E, G, lG, Ga, A, lA, S, D = _pieces(params, t)
    n = t.size
    return float(
        n * np.log(theta * a * b * lam) + n * theta * np.log(alpha) - lam * t.sum()
        + (a - 1) * lG.sum() + (b * theta - 1) * lA.sum() - (theta + 1) * np.log(D).sum()
    )


def gmokwe_score(params, t) -> np.ndarray:
    """Gradient in the order (theta, alpha, a, b, lam)."""
    theta, alpha, a, b, lam, t, E, G, lG, Ga, A, lA, S, D = _pieces(params, t)
    n = t.size
    ab = 1.0 - alpha
    u_theta = n / theta + n * np.log(alpha) + b * lA.sum() - np.log(D).sum()
    u_alpha = n * theta / alpha - (theta + 1) * np.sum(S / D)
    u_a = (
        n / a + lG.sum() + (1 - b * theta) * np.sum(Ga * lG / A)
        - (theta + 1) * np.sum(ab * b * A ** (b - 1) * Ga * lG / D)
    )
    u_b = n / b + theta * lA.sum() + (theta + 1) * np.sum(ab * S * lA / D)
    u_lam = (
        n / lam - t.sum() + (a - 1) * np.sum(t * E / G)
        + (1 - b * theta) * np.sum(a * t * G ** (a - 1) * E / A)
        - (theta + 1) * np.sum(ab * a * b * t * A ** (b - 1) * G ** (a - 1) * E / D)
    )
    return np.array([u_theta, u_alpha, u_a, u_b, u_lam])


def gmokwe_hessian(params, t) -> np.ndarray:
    """Matrix of second derivatives of the log-likelihood (not negated)."""
    theta, alpha, a, b, lam, t, E, G, lG, Ga, A, lA, S, D = _pieces(params, t)
    n = t.size
    ab = 1.0 - alpha
    th1 = theta + 1
    c = 1 - b * theta
    D2 = D * D
    Gm1 = G ** (a - 1)
    Gm2 = G ** (a - 2)
    Ab1 = A ** (b - 1)
    Ab2 = A ** (b - 2)
    t2 = t * t
    E2 = E * E

    h_tt = -n / theta**2
    h_aa_alpha = -n * theta / alpha**2 + th1 * np.sum(S**2 / D2)
    h_aa = (
        -n / a**2
        + c * np.sum(Ga**2 * lG**2 / A**2)
        + c * np.sum(Ga * lG**2 / A)
        + th1 * np.sum(ab**2 * b**2 * A ** (2 * (b - 1)) * Ga**2 * lG**2 / D2)
        + th1 * np.sum(b * (b - 1) * ab * Ab2 * Ga**2 * lG**2 / D)
        - th1 * np.sum(b * ab * Ab1 * Ga * lG**2 / D)
    )
    h_bb = (
        -n / b**2
        + th1 * np.sum(ab**2 * S**2 * lA**2 / D2)
        + th1 * np.sum(ab * S * lA**2 / D)
    )
    h_ll = (
        -n / lam**2
        + (a - 1) * np.sum(-E2 * t2 / G**2 - E * t2 / G)
        + c * np.sum(a**2 * G ** (2 * (a - 1)) * E2 * t2 / A**2)
        + c * np.sum(a * (a - 1) * Gm2 * E2 * t2 / A)
        - c * np.sum(a * Gm1 * E * t2 / A)
        + th1 * np.sum(ab**2 * a**2 * b**2 * E2 * G ** (2 * (a - 1)) * A ** (2 * (b - 1)) * t2 / D2)
        + th1 * np.sum(a**2 * ab * b * (b - 1) * E2 * G ** (2 * (a - 1)) * Ab2 * t2 / D)
        - th1 * np.sum(a * (a - 1) * ab * b * E2 * Gm2 * Ab1 * t2 / D)
        + th1 * np.sum(a * b * ab * E * Gm1 * Ab1 * t2 / D)
    )
    h_t_al = n / alpha - np.sum(S / D)
    h_t_a = -b * np.sum(Ga * lG / A) - np.sum(b * ab * Ab1 * Ga * lG / D)
    h_t_b = lA.sum() + np.sum(ab * S * lA / D)
    h_t_l = -b * np.sum(a * t * Gm1 * E / A) - np.sum(ab * a * b * t * Ab1 * Gm1 * E / D)
    h_al_a = (
        th1 * np.sum(ab * b * A ** (2 * b - 1) * Ga * lG / D2)
        + th1 * np.sum(b * Ab1 * Ga * lG / D)
    )
    h_al_b = (
        -th1 * np.sum(ab * A ** (2 * b) * lA / D2)
        - th1 * np.sum(S * lA / D)
    )
    h_al_l = (
        th1 * np.sum(ab * a * b * E * Gm1 * A ** (2 * b - 1) * t / D2)
        + th1 * np.sum(a * b * E * Gm1 * Ab1 * t / D)
    )
    h_a_b = (
        -theta * np.sum(Ga * lG / A)
        - th1 * np.sum(ab * Ga * Ab1 * lG / D)
        - th1 * np.sum(b * ab**2 * Ga * A ** (2 * b - 1) * lG * lA / D2)
        - th1 * np.sum(b * ab * Ga * Ab1 * lG * lA / D)
    )
    h_a_l = (
        np.sum(E * t / G)
        + c * np.sum(a * G ** (2 * a - 1) * E * t * lG / A**2)
        + c * np.sum(Gm1 * E * t / A)
        + c * np.sum(a * Gm1 * E * t * lG / A)
        - th1 * np.sum(b * ab * E * Gm1 * Ab1 * t / D)
        + th1 * np.sum(a * b**2 * ab**2 * E * G ** (2 * a - 1) * A ** (2 * (b - 1)) * t * lG / D2)
        + th1 * np.sum(a * b * (b - 1) * ab * E * G ** (2 * a - 1) * Ab2 * t * lG / D)
        - th1 * np.sum(a * b * ab * E * Gm1 * Ab1 * t * lG / D)
    )
    h_b_l = (
        -theta * np.sum(a * E * Gm1 * t / A)
        - th1 * np.sum(a * ab * E * Gm1 * Ab1 * t / D)
        - th1 * np.sum(a * b * ab**2 * E * Gm1 * A ** (2 * b - 1) * t * lA / D2)
        - th1 * np.sum(a * b * ab * E * Gm1 * Ab1 * t * lA / D)
    )
    H = np.array([
        [h_tt, h_t_al, h_t_a, h_t_b, h_t_l],
        [h_t_al, h_aa_alpha, h_al_a, h_al_b, h_al_l],
        [h_t_a, h_al_a, h_aa, h_a_b, h_a_l],
        [h_t_b, h_al_b, h_a_b, h_bb, h_b_l],
        [h_t_l, h_al_l, h_a_l, h_b_l, h_ll],
    ])
    return H
