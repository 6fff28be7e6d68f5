"""Harmonic analysis on S^{d-1} in the explicit product basis.

Conventions used throughout the package:

* Spherical coordinates are stored as arrays [theta_1, ..., theta_{d-1}]
  with theta_1 in [0, 2*pi) and the remaining angles in [0, pi].  The
  parameterization is
      x_1 = sin(theta_{d-1}) ... sin(theta_2) sin(theta_1)
      x_2 = sin(theta_{d-1}) ... sin(theta_2) cos(theta_1)
      ...
      x_d = cos(theta_{d-1}),
  so theta_1 is recovered as atan2(x_1, x_2).
* A degree-n multi-index is a tuple (k_1, ..., k_{d-2}) of integers with
  n >= k_1 >= ... >= k_{d-3} >= |k_{d-2}|; only the last entry is signed.
* Coefficient tables are sparse dicts mapping (n, k) -> complex; iteration
  follows the lexicographic index-set order for reproducibility.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from . import _config
from .errors import DomainError, ExactnessError, IndexSetError, ParameterError
from .specfun import _validate_multi_index, gegenbauer_table, log_norm_A

TWO_PI = 2.0 * math.pi


def dim_harmonic(d: int, n: int) -> int:
    """dim of the degree-n harmonic space, (2n+d-2)(n+d-3)! / ((d-2)! n!)."""
    if d < 3:
        raise ParameterError(f"dimension must be at least 3, got d={d}")
    if n < 0:
        raise ParameterError(f"degree must be nonnegative, got {n}")
    num = (2 * n + d - 2) * math.factorial(n + d - 3)
    den = math.factorial(d - 2) * math.factorial(n)
    assert num % den == 0
    return num // den


@lru_cache(maxsize=4096)
def index_set(d: int, n: int) -> tuple:
    """Lexicographically ordered enumeration of all degree-n multi-indices."""
    if d < 3:
        raise ParameterError(f"dimension must be at least 3, got d={d}")
    out = []

    def descend(prefix, bound, remaining):
        if remaining == 1:
            for m in range(-bound, bound + 1):
                out.append(prefix + (m,))
        else:
            for v in range(bound + 1):
                descend(prefix + (v,), v, remaining - 1)

    descend((), n, d - 2)
    return tuple(out)


def in_index_set(d: int, n: int, k) -> bool:
    try:
        _validate_multi_index(d, n, k)
    except IndexSetError:
        return False
    return True


# ---------------------------------------------------------------------------
# coordinate conversions
# ---------------------------------------------------------------------------

def cartesian_to_spherical(x: np.ndarray) -> np.ndarray:
    """Batch conversion (..., d) -> (..., d-1); no norm validation.

    At a coordinate singularity (some partial radius 0) every undetermined
    lower angle comes out as 0, which makes round trips deterministic.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    theta = np.empty(x.shape[:-1] + (d - 1,), dtype=float)
    theta[..., 0] = np.mod(np.arctan2(x[..., 0], x[..., 1]), TWO_PI)
    t = np.hypot(x[..., 0], x[..., 1])
    for ell in range(2, d):
        theta[..., ell - 1] = np.arctan2(t, x[..., ell])
        t = np.hypot(t, x[..., ell])
    return theta


def spherical_to_cartesian(theta: np.ndarray) -> np.ndarray:
    """Batch conversion (..., d-1) -> (..., d)."""
    theta = np.asarray(theta, dtype=float)
    d = theta.shape[-1] + 1
    x = np.empty(theta.shape[:-1] + (d,), dtype=float)
    x[..., d - 1] = np.cos(theta[..., d - 2])
    s = np.sin(theta[..., d - 2])
    for ell in range(d - 2, 1, -1):
        x[..., ell] = s * np.cos(theta[..., ell - 1])
        s = s * np.sin(theta[..., ell - 1])
    if d >= 3:
        x[..., 1] = s * np.cos(theta[..., 0])
        x[..., 0] = s * np.sin(theta[..., 0])
    else:
        x[..., 0] = s
    return x


def to_spherical(x) -> np.ndarray:
    """Spherical coordinates of a single on-sphere point."""
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x)
    if abs(nrm - 1.0) > 1e-8:
        raise DomainError(f"point is not on the unit sphere: |x| = {nrm!r}")
    return cartesian_to_spherical(x)


def to_cartesian(theta) -> np.ndarray:
    return spherical_to_cartesian(np.asarray(theta, dtype=float))


# ---------------------------------------------------------------------------
# basis evaluation
# ---------------------------------------------------------------------------

def eval_harmonic(d: int, n: int, k, theta):
    """Evaluate the orthonormal harmonic Y_k^{d,n} at spherical points.

    theta has shape (d-1,) or (M, d-1); the result is a complex scalar or a
    complex array of length M.
    """
    k = _validate_multi_index(d, n, k)
    theta = np.asarray(theta, dtype=float)
    single = theta.ndim == 1
    pts = theta[None, :] if single else theta
    amp = math.exp(log_norm_A(d, n, k))
    chain = (n,) + k
    val = np.full(pts.shape[0], amp, dtype=complex)
    if k[-1] != 0:
        val = val * np.exp(1j * k[-1] * pts[:, 0])
    for j in range(d - 2):
        a = abs(chain[j + 1])
        lam = 0.5 * (d - j - 2) + a
        m = chain[j] - a
        ang = pts[:, d - 2 - j]
        factor = gegenbauer_table(lam, m, np.cos(ang))[m]
        if a:
            factor = factor * np.sin(ang) ** a
        val = val * factor
    if single:
        return complex(val[0])
    return val


def basis_matrix(d: int, n: int, theta: np.ndarray) -> np.ndarray:
    """All degree-n harmonics stacked: shape (dim H_n^d, M), index-set order."""
    theta = np.asarray(theta, dtype=float)
    kset = index_set(d, n)
    M = theta.shape[0]
    out = np.empty((len(kset), M), dtype=complex)
    # shared tables per level and sine-power order
    tables = []
    for j in range(d - 2):
        ang = theta[:, d - 2 - j]
        t, s = np.cos(ang), np.sin(ang)
        per_a = {}
        for a in range(n + 1):
            lam = 0.5 * (d - j - 2) + a
            tab = gegenbauer_table(lam, n - a, t)
            if a:
                tab = tab * (s ** a)[None, :]
            per_a[a] = tab
        tables.append(per_a)
    ecache = {0: None}
    theta1 = theta[:, 0]
    for idx, k in enumerate(kset):
        chain = (n,) + k
        row = np.full(M, math.exp(log_norm_A(d, n, k)))
        for j in range(d - 2):
            a = abs(chain[j + 1])
            row = row * tables[j][a][chain[j] - a]
        kl = k[-1]
        if kl not in ecache:
            ecache[kl] = np.exp(1j * kl * theta1)
        out[idx] = row if kl == 0 else row * ecache[kl]
    return out


def addition_kernel(d: int, n: int, s):
    """Reproducing kernel of the degree-n space: ((2n+d-2)/(d-2)) C_n^{(d-2)/2}(s)."""
    if d < 3:
        raise ParameterError(f"dimension must be at least 3, got d={d}")
    factor = (2 * n + d - 2) / (d - 2)
    table = gegenbauer_table(0.5 * (d - 2), n, s)
    value = factor * table[n]
    if np.ndim(s) == 0:
        return float(value)
    return value


# ---------------------------------------------------------------------------
# compiled sparse expansions
# ---------------------------------------------------------------------------

class ExpansionEvaluator:
    """Compiled form of a sparse coefficient table for repeated evaluation.

    Gegenbauer recurrences and sine powers are computed once per distinct
    (level, |k_{j+1}|) pair and shared across all indices with that suffix
    order, so the per-term work is a handful of fused vector products.
    Tables whose last index is identically zero do not depend on theta_1;
    those are evaluated on a reduced coordinate set with real arithmetic.
    """

    def __init__(self, d: int, coeffs: dict):
        self.d = d
        entries = []
        for (n, k), c in coeffs.items():
            c = complex(c)
            if c == 0.0:
                continue
            k = _validate_multi_index(d, n, k)
            entries.append((n, k, c))
        entries.sort(key=lambda e: (e[0], e[1]))
        self.degree = max((n for n, _, _ in entries), default=0)
        self.n_terms = len(entries)
        nlev = d - 2
        self._amp = np.array([math.exp(log_norm_A(d, n, k)) for n, k, _ in entries])
        self._coeff = np.array([c for _, _, c in entries], dtype=complex)
        self._klast = np.array([k[-1] for _, k, _ in entries], dtype=int) \
            if entries else np.zeros(0, dtype=int)
        self._a = [np.zeros(self.n_terms, dtype=int) for _ in range(nlev)]
        self._m = [np.zeros(self.n_terms, dtype=int) for _ in range(nlev)]
        self._level_specs = [dict() for _ in range(nlev)]  # a -> (lam, max m)
        for i, (n, k, _) in enumerate(entries):
            chain = (n,) + k
            for j in range(nlev):
                a = abs(chain[j + 1])
                m = chain[j] - a
                self._a[j][i] = a
                self._m[j][i] = m
                lam = 0.5 * (d - j - 2) + a
                prev = self._level_specs[j].get(a)
                self._level_specs[j][a] = (lam, m if prev is None else max(prev[1], m))
        self.theta1_free = bool(np.all(self._klast == 0))
        self.real_output = self.theta1_free and bool(
            np.allclose(self._coeff.imag, 0.0))
        self._coeff_real = self._coeff.real.copy() if self.real_output else None

    # -- core ---------------------------------------------------------------

    def _tables(self, cos_sin):
        tables = []
        for j, spec in enumerate(self._level_specs):
            t, s = cos_sin[j]
            per_a = {}
            spow = {0: None}
            for a in sorted(spec):
                if a and a not in spow:
                    p = s ** a
                    spow[a] = p
            for a, (lam, mmax) in spec.items():
                tab = gegenbauer_table(lam, mmax, t)
                if a:
                    tab = tab * spow[a][None, :]
                per_a[a] = tab
            tables.append(per_a)
        return tables

    def _eval_core(self, cos_sin, theta1):
        npts = cos_sin[0][0].shape[0] if cos_sin else theta1.shape[0]
        tables = self._tables(cos_sin)
        real = self.real_output
        acc = np.zeros(npts, dtype=float if real else complex)
        if self.n_terms == 0:
            return acc
        coeff = self._coeff_real if real else self._coeff
        ecache = {}
        if not self.theta1_free:
            for kl in np.unique(self._klast):
                if kl != 0:
                    ecache[int(kl)] = np.exp((1j * kl) * theta1)
        nlev = len(tables)
        amp = self._amp
        for i in range(self.n_terms):
            v = tables[0][self._a[0][i]][self._m[0][i]]
            for j in range(1, nlev):
                v = v * tables[j][self._a[j][i]][self._m[j][i]]
            kl = int(self._klast[i])
            if kl != 0:
                v = v * ecache[kl]
            acc += (coeff[i] * amp[i]) * v
        return acc

    # -- public entry points --------------------------------------------------

    def eval_angles(self, theta: np.ndarray, chunk: int = 16384) -> np.ndarray:
        """Evaluate at spherical points, shape (M, d-1) -> (M,)."""
        theta = np.asarray(theta, dtype=float)
        M = theta.shape[0]
        out = np.empty(M, dtype=float if self.real_output else complex)
        for lo in range(0, M, chunk):
            sl = slice(lo, min(lo + chunk, M))
            block = theta[sl]
            cos_sin = []
            for j in range(self.d - 2):
                ang = block[:, self.d - 2 - j]
                cos_sin.append((np.cos(ang), np.sin(ang)))
            theta1 = None if self.theta1_free else block[:, 0]
            out[sl] = self._eval_core(cos_sin, theta1)
        return out

    def eval_cartesian(self, x: np.ndarray, chunk: int = 16384) -> np.ndarray:
        return self.eval_angles(cartesian_to_spherical(np.asarray(x, float)), chunk)

    def _angles_from_tail(self, comps):
        """cos/sin pairs per level from the components (x_3, ..., x_d)."""
        d = self.d
        sq = np.clip(1.0 - np.einsum("ij,ij->i", comps, comps), 0.0, None)
        t = np.sqrt(sq)
        by_ell = {}
        for ell in range(2, d):
            xl = comps[:, ell - 2]
            t_next = np.hypot(t, xl)
            safe = np.where(t_next == 0.0, 1.0, t_next)
            cos_l = np.where(t_next == 0.0, 1.0, xl / safe)
            sin_l = np.where(t_next == 0.0, 0.0, t / safe)
            by_ell[ell] = (cos_l, sin_l)
            t = t_next
        return [by_ell[d - 1 - j] for j in range(d - 2)]

    def rotated_apply(self, rotations, points, reduce_fn, base_rotation=None,
                      max_block: int = 1 << 21, workers: int | None = None):
        """Evaluate the expansion at g^{-1} x over a rotation grid.

        For each block of rotations, values[r, p] = Psi(rot_r^{-1} x_p) is
        formed (composed with base_rotation when the table is stored
        pre-rotation) and handed to reduce_fn(values, rows) where rows is the
        block's slice into the grid; the per-block results are returned in
        grid order.  Blocks are independent, so they may run on a thread pool.
        """
        rotations = np.asarray(rotations, dtype=float)
        points = np.asarray(points, dtype=float)
        R, P = rotations.shape[0], points.shape[0]
        if base_rotation is not None:
            rotations = rotations @ np.asarray(base_rotation, dtype=float)
        rows = max(1, max_block // max(1, P))
        slices = [slice(lo, min(lo + rows, R)) for lo in range(0, R, rows)]

        def run(sl):
            g = rotations[sl]
            if self.theta1_free:
                comps = np.matmul(points[None, :, :], g[:, :, 2:])
                flat = comps.reshape(-1, self.d - 2)
                vals = self._eval_core(self._angles_from_tail(flat), None)
            else:
                moved = np.matmul(points[None, :, :], g)
                theta = cartesian_to_spherical(moved.reshape(-1, self.d))
                cos_sin = []
                for j in range(self.d - 2):
                    ang = theta[:, self.d - 2 - j]
                    cos_sin.append((np.cos(ang), np.sin(ang)))
                vals = self._eval_core(cos_sin, theta[:, 0])
            return reduce_fn(vals.reshape(sl.stop - sl.start, P), sl)

        nworkers = _config.get_workers() if workers is None else max(1, workers)
        if nworkers <= 1 or len(slices) <= 1:
            return [run(sl) for sl in slices]
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            return list(pool.map(run, slices))


def eval_expansion(d: int, coeffs: dict, theta) -> np.ndarray:
    """Evaluate sum_{n,k} c(n,k) Y_k^{d,n} at spherical points (M, d-1)."""
    theta = np.asarray(theta, dtype=float)
    single = theta.ndim == 1
    pts = theta[None, :] if single else theta
    values = ExpansionEvaluator(d, coeffs).eval_angles(pts)
    values = values.astype(complex) if values.dtype != complex else values
    if single:
        return complex(values[0])
    return values


# ---------------------------------------------------------------------------
# matrix functions of rotations (numeric oracle)
# ---------------------------------------------------------------------------

def matrix_function_numeric(d: int, n: int, k, m, g, rule) -> complex:
    """<T(g) Y_m, Y_k> by discrete quadrature; testing oracle only.

    The rule must be exact on polynomials of degree 2n since the integrand is
    a product of two degree-n harmonics.
    """
    if rule.exact_degree < 2 * n:
        raise ExactnessError(
            f"rule exact through degree {rule.exact_degree}, need {2 * n}")
    g = np.asarray(g, dtype=float)
    moved = rule.points @ g  # row i: g^{-1} eta_i
    y_m = eval_harmonic(d, n, m, cartesian_to_spherical(moved))
    y_k = eval_harmonic(d, n, k, rule.angles)
    return complex(np.sum(rule.weights * y_m * np.conj(y_k)))


def matrix_function_block(d: int, n: int, rotations, rule,
                          chunk: int = 512) -> np.ndarray:
    """All t_{k,m}^{d,n}(g) for a batch of rotations, shape (R, dim, dim)."""
    if rule.exact_degree < 2 * n:
        raise ExactnessError(
            f"rule exact through degree {rule.exact_degree}, need {2 * n}")
    rotations = np.asarray(rotations, dtype=float)
    R = rotations.shape[0]
    B = basis_matrix(d, n, rule.angles)          # (dim, nodes)
    Bw = np.conj(B) * rule.weights[None, :]
    dim = B.shape[0]
    out = np.empty((R, dim, dim), dtype=complex)
    nodes = rule.points
    for lo in range(0, R, chunk):
        sl = slice(lo, min(lo + chunk, R))
        moved = np.matmul(nodes[None, :, :], rotations[sl])   # (c, nodes, d)
        theta = cartesian_to_spherical(moved.reshape(-1, d))
        C = basis_matrix(d, n, theta).reshape(dim, sl.stop - lo, -1)
        out[sl] = np.einsum("kn,mcn->ckm", Bw, C)
    return out
