"""Quadrature: 1-d Gauss-Jacobi rules, exact product rules on spheres,
deterministic rotation sections, and composed rotation-group grids.

All sphere rules are positive product rules with weights normalized to sum
to one (the surface measure here is a probability measure); rotation grids
carry normalized Haar weights.  Product rules are deliberately simple:
positivity and exactness are what the frame machinery needs, and node counts
stay modest at the bandwidths this library targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ._config import node_cap
from .errors import CapacityError, ParameterError
from .harmonics import spherical_to_cartesian, to_spherical

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Rule1D:
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int  # algebraic degree for Jacobi rules, trig degree for circle rules


def gauss_symmetric_jacobi(m: int, alpha: float) -> Rule1D:
    """Gauss rule for the weight (1-t^2)^alpha on [-1, 1].

    Nodes and weights come from the symmetric tridiagonal eigenproblem of the
    Jacobi recurrence matrix (Golub-Welsch); exact through degree 2m-1.
    """
    if m < 1:
        raise ParameterError(f"node count must be positive, got {m}")
    if alpha <= -1:
        raise ParameterError(f"Jacobi exponent must exceed -1, got {alpha}")
    mu0 = math.sqrt(math.pi) * math.gamma(alpha + 1.0) / math.gamma(alpha + 1.5)
    if m == 1:
        return Rule1D(np.zeros(1), np.array([mu0]), 1)
    k = np.arange(1, m, dtype=float)
    off = np.sqrt(k * (k + 2.0 * alpha)
                  / ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0)))
    nodes, vecs = eigh_tridiagonal(np.zeros(m), off)
    weights = mu0 * vecs[0] ** 2
    return Rule1D(nodes, weights, 2 * m - 1)


def circle_rule(M: int) -> Rule1D:
    """Equispaced rule on [0, 2*pi): exact for trig degree <= M-1."""
    if M < 1:
        raise ParameterError(f"node count must be positive, got {M}")
    nodes = TWO_PI * np.arange(M) / M
    weights = np.full(M, TWO_PI / M)
    return Rule1D(nodes, weights, M - 1)


@dataclass(frozen=True)
class SphereRule:
    """Positive rule on S^{d-1}, exact on polynomials up to exact_degree."""
    d: int
    angles: np.ndarray   # (R, d-1) spherical coordinates
    points: np.ndarray   # (R, d) cartesian nodes
    weights: np.ndarray  # (R,), positive, sums to 1
    exact_degree: int

    def __len__(self) -> int:
        return self.weights.shape[0]


def sphere_rule(d: int, N: int) -> SphereRule:
    """Product rule exact on all polynomials of degree 2N on S^{d-1}.

    Composes an equispaced rule in theta_1 with Gauss rules for the weight
    (1-t^2)^((ell-1)/2) in cos(theta_{ell+1}), matching the surface-measure
    factorization sin^{d-2}(theta_{d-1}) ... sin(theta_2).
    """
    if d < 2:
        raise ParameterError(f"sphere dimension d must be at least 2, got {d}")
    if N < 0:
        raise ParameterError(f"target degree must be nonnegative, got {N}")
    circ = circle_rule(2 * N + 1)
    axes_nodes = [circ.nodes]
    axes_weights = [circ.weights]
    for ell in range(1, d - 1):
        rule = gauss_symmetric_jacobi(N + 1, (ell - 1) / 2.0)
        axes_nodes.append(np.arccos(rule.nodes))
        axes_weights.append(rule.weights)
    mesh = np.meshgrid(*axes_nodes, indexing="ij")
    angles = np.stack([m.ravel() for m in mesh], axis=-1)
    w = axes_weights[0]
    for aw in axes_weights[1:]:
        w = np.multiply.outer(w, aw)
    weights = w.ravel()
    weights = weights / weights.sum()
    return SphereRule(d, angles, spherical_to_cartesian(angles), weights, 2 * N)


# ---------------------------------------------------------------------------
# rotation sections
# ---------------------------------------------------------------------------

def _givens(d: int, ell: int, theta: float) -> np.ndarray:
    """Planar rotation in the (x_ell, x_{ell+1}) plane sending
    e^{ell+1} -> sin(theta) e^ell + cos(theta) e^{ell+1}."""
    g = np.eye(d)
    c, s = math.cos(theta), math.sin(theta)
    g[ell - 1, ell - 1] = c
    g[ell, ell] = c
    g[ell - 1, ell] = s
    g[ell, ell - 1] = -s
    return g


def section_from_angles(theta: np.ndarray) -> np.ndarray:
    """Givens chain with g e^d = point(theta); the planar factors are applied
    from the polar angle inward so the chain reproduces the parameterization."""
    theta = np.asarray(theta, dtype=float)
    d = theta.shape[0] + 1
    g = np.eye(d)
    for ell in range(1, d):
        g = g @ _givens(d, ell, theta[ell - 1])
    return g


def section_rotation(eta) -> np.ndarray:
    """Deterministic g_eta in SO(d) with g_eta e^d = eta."""
    return section_from_angles(to_spherical(eta))


def embed_rotation(h: np.ndarray, d: int) -> np.ndarray:
    """Embed a rotation of R^m as the SO(d) element fixing e^{m+1}, ..., e^d."""
    h = np.asarray(h, dtype=float)
    m = h.shape[0]
    if m > d:
        raise ParameterError(f"cannot embed SO({m}) into SO({d})")
    g = np.eye(d)
    g[:m, :m] = h
    return g


def embed_subsphere_rotation(eta_prime) -> np.ndarray:
    """h in SO(d-1) < SO(d) with h e^{d-1} = (eta', 0), for eta' on S^{d-2}."""
    eta_prime = np.asarray(eta_prime, dtype=float)
    d = eta_prime.shape[0] + 1
    return embed_rotation(section_rotation(eta_prime), d)


def validate_rotation(g: np.ndarray, tol: float = 1e-12) -> None:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ParameterError(f"rotation must be a square matrix, got {g.shape}")
    err = np.max(np.abs(g @ g.T - np.eye(g.shape[0])))
    if err > tol:
        raise ParameterError(f"matrix is not orthogonal within {tol}: residual {err}")
    if abs(np.linalg.det(g) - 1.0) > max(tol, 1e-10):
        raise ParameterError("matrix has determinant != +1")


def random_rotation(d: int, rng) -> np.ndarray:
    """Haar-ish random element of SO(d) from a QR factorization."""
    a = rng.standard_normal((d, d))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


# ---------------------------------------------------------------------------
# rotation-group grids
# ---------------------------------------------------------------------------

VARIANTS = ("general", "steerable", "zonal", "so_d2_invariant", "steerable_so_d2")


@dataclass(frozen=True)
class RotationRule:
    """Weighted rotations discretizing integration over SO(d).

    class_degree N declares exactness for products of two class-N matrix
    functions; for the restricted variants that promise holds only against
    generating functions with the matching structure (steerability and/or
    SO(d-2)-invariance).
    """
    d: int
    rotations: np.ndarray  # (R, d, d)
    weights: np.ndarray    # (R,), positive, sums to 1
    class_degree: int
    variant: str
    steer_K: int | None = None

    def __len__(self) -> int:
        return self.weights.shape[0]


def _so2_rule(N: int) -> tuple[np.ndarray, np.ndarray]:
    circ = circle_rule(2 * N + 1)
    rots = np.empty((len(circ.nodes), 2, 2))
    c, s = np.cos(circ.nodes), np.sin(circ.nodes)
    rots[:, 0, 0] = c
    rots[:, 0, 1] = -s
    rots[:, 1, 0] = s
    rots[:, 1, 1] = c
    return rots, np.full(len(circ.nodes), 1.0 / len(circ.nodes))


def rotation_rule(d: int, N: int, variant: str = "general",
                  K: int | None = None, max_nodes: int | None = None) -> RotationRule:
    """Compose an SO(d) grid of class N from sphere rules.

    general          g_{eta_r} h_s with h_s from a recursive SO(d-1) grid,
                     ending at an equispaced SO(2) rule
    steerable        g_{eta_r} h_p with a single class-K SO(d-1) rule
    zonal            g_{eta_r} alone
    so_d2_invariant  g_{eta_r} h_{eta'_s} with eta'_s a sphere rule on S^{d-2}
                     of matching degree
    steerable_so_d2  as above with the S^{d-2} rule exact on degree 2K only
    """
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}")
    if variant in ("steerable", "steerable_so_d2") and K is None:
        raise ParameterError(f"variant {variant!r} requires the steerability order K")
    if d < 2:
        raise ParameterError(f"rotation group dimension must be >= 2, got {d}")
    cap = node_cap(max_nodes)
    if d == 2:
        rots, w = _so2_rule(N)
        return RotationRule(2, rots, w, N, "general")

    outer = sphere_rule(d, N)
    sections = np.stack([section_from_angles(th) for th in outer.angles])

    if variant == "general":
        inner_rule = rotation_rule(d - 1, N, "general", max_nodes=max_nodes)
        inner = np.stack([embed_rotation(h, d) for h in inner_rule.rotations])
        inner_w = inner_rule.weights
    elif variant == "steerable":
        inner_rule = rotation_rule(d - 1, K, "general", max_nodes=max_nodes)
        inner = np.stack([embed_rotation(h, d) for h in inner_rule.rotations])
        inner_w = inner_rule.weights
    elif variant == "zonal":
        inner = np.eye(d)[None, :, :]
        inner_w = np.ones(1)
    else:  # so_d2_invariant / steerable_so_d2
        sub_degree = N if variant == "so_d2_invariant" else K
        sub = sphere_rule(d - 1, sub_degree)
        inner = np.stack([embed_subsphere_rotation(p) for p in sub.points])
        inner_w = sub.weights

    total = len(outer) * inner.shape[0]
    if total > cap:
        raise CapacityError(
            f"rotation grid would hold {total} nodes, exceeding the cap {cap}; "
            f"raise --max-nodes or SPHEREFRAME_MAX_NODES to override")
    rotations = np.matmul(sections[:, None, :, :], inner[None, :, :, :])
    rotations = rotations.reshape(total, d, d)
    weights = (outer.weights[:, None] * inner_w[None, :]).reshape(total)
    return RotationRule(d, rotations, weights, N, variant, K)
