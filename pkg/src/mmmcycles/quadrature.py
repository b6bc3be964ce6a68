"""Numerical checks of the simplex integrals behind the cyclic set cocycle.

A simplex ``C_0 -> ... -> C_d`` of cyclic sets carries masses on the last
set: an element first reached at level ``j`` has mass ``t_j`` (``t_0 = 1``),
over the ordered simplex ``1 >= t_1 >= ... >= t_d >= 0``.  The weights
``w = mu / M`` are normalized masses, and the Euler form is
``-sum_{i<j} dw_i ^ dw_j`` with indices in the cyclic order of ``C_d``.
Integrating its k-th power over the simplex reproduces ``c_z^k``.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclic import CyclicSet, ZSimplex, c_z

GRID_TOL = 1e-6
MC_SIGMAS = 3.0
DEFAULT_SEED = 20240229
DEFAULT_SAMPLES = 10**7
DEFAULT_BATCH = 250_000
MAX_SIZE = 8


@dataclass(frozen=True)
class MassProfile:
    """Level sizes ``a_0 = |C_0|`` and ``a_j = |C_j| - |C_{j-1}|``."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(a) for a in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes:
            raise ValueError("empty mass profile")
        if sizes[0] < 1:
            raise ValueError("a_0 must be at least 1")
        if any(a < 0 for a in sizes):
            raise ValueError("sizes must be non-negative")

    @classmethod
    def from_simplex(cls, simplex: ZSimplex) -> "MassProfile":
        lens = [len(c) for c in simplex.objects]
        return cls((lens[0],) + tuple(b - a for a, b in zip(lens, lens[1:])))

    @property
    def dim(self) -> int:
        return len(self.sizes) - 1

    def total_mass(self, t: np.ndarray) -> np.ndarray:
        """``M_t = a_0 + sum_j a_j t_j`` for points ``t`` of shape ``(..., dim)``."""
        a = np.asarray(self.sizes[1:], dtype=float)
        return self.sizes[0] + t @ a

    def exact_integral(self) -> Fraction:
        """``1 / (d! a_0 (a_0 + a_1) ... (a_0 + ... + a_d))``."""
        denom = math.factorial(self.dim)
        partial = 0
        for a in self.sizes:
            partial += a
            denom *= partial
        return Fraction(1, denom)


@dataclass(frozen=True)
class QuadratureResult:
    """A numerical estimate with its error bound.

    For grids the error is the difference from the half-order rule; for
    Monte Carlo it is the standard error.  ``exact`` is the value compared
    against, and ``tolerance`` the allowed absolute error.
    """

    estimate: float
    error: float
    size: int
    method: str
    exact: Fraction | None = None
    seed: int | None = None
    tolerance: float | None = None

    def __post_init__(self):
        if not self.error >= 0:
            raise ValueError("error bound must be non-negative")

    @property
    def deviation(self) -> float | None:
        return None if self.exact is None else abs(self.estimate - float(self.exact))

    @property
    def z_score(self) -> float | None:
        if self.exact is None or self.method != "mc":
            return None
        if self.error == 0:
            return 0.0 if self.deviation == 0 else math.inf
        return self.deviation / self.error

    @property
    def passed(self) -> bool:
        if self.exact is None:
            return False
        if self.method == "mc":
            return self.z_score <= MC_SIGMAS
        return self.deviation <= (GRID_TOL if self.tolerance is None else self.tolerance)


# -- integration schemes --------------------------------------------------------------

def simplex_grid(dim: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on ``1 >= t_1 >= ... >= t_dim >= 0``.

    The cube is mapped to the ordered simplex by ``t_j = u_1 ... u_j`` with
    Jacobian ``prod_i u_i^(dim-i)``.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1) / 2
    w = w / 2
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    u = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.ones(len(u))
    for wg in np.meshgrid(*([w] * dim), indexing="ij"):
        weights *= wg.ravel()
    t = np.cumprod(u, axis=1)
    for i in range(dim - 1):
        weights *= u[:, i] ** (dim - 1 - i)
    return t, weights


def _grid_integrate(density, dim: int, order: int) -> tuple[float, float, int]:
    t, w = simplex_grid(dim, order)
    fine = float(np.dot(density(t), w))
    t2, w2 = simplex_grid(dim, max(order // 2, 1))
    coarse = float(np.dot(density(t2), w2))
    return fine, abs(fine - coarse), len(w)


def sorted_uniforms(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """Uniform points of ``1 >= t_1 >= ... >= t_dim >= 0``."""
    return -np.sort(-rng.random((n, dim)), axis=1)


def _mc_integrate(density, dim: int, samples: int, seed: int,
                  batch: int = DEFAULT_BATCH, workers: int = 1) -> tuple[float, float]:
    """Plain Monte Carlo; batch ``i`` draws from the ``i``-th spawned seed.

    The estimate depends on ``seed`` and ``batch`` but not on ``workers``.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    sizes = [batch] * (samples // batch)
    if samples % batch:
        sizes.append(samples % batch)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(i):
        rng = np.random.default_rng(seeds[i])
        f = density(sorted_uniforms(rng, sizes[i], dim))
        return float(f.sum()), float(np.dot(f, f))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    vol = 1.0 / math.factorial(dim)
    return vol * mean, vol * math.sqrt(var / samples)


def simplex_integral(k: int, profile: MassProfile, method: str = "grid",
                     order: int = 32, samples: int = 10**6,
                     seed: int = DEFAULT_SEED, workers: int = 1) -> QuadratureResult:
    """Integrate ``1 / M_t^(2k+1)`` over the ordered 2k-simplex."""
    dim = 2 * k
    if profile.dim != dim:
        raise ValueError(f"profile has {profile.dim + 1} sizes, expected {dim + 1}")
    if method == "grid" and not 1 <= k <= 2:
        raise ValueError("grid scheme supports k <= 2")
    if method == "mc" and not 1 <= k <= 3:
        raise ValueError("Monte Carlo supports k <= 3")

    def density(t):
        return profile.total_mass(t) ** -(dim + 1)

    exact = profile.exact_integral()
    if method == "grid":
        est, err, size = _grid_integrate(density, dim, order)
        return QuadratureResult(est, err, size, "grid", exact, tolerance=GRID_TOL)
    if method == "mc":
        est, err = _mc_integrate(density, dim, samples, seed, workers=workers)
        return QuadratureResult(est, err, samples, "mc", exact, seed=seed)
    raise ValueError(f"unknown method {method!r}")


# -- the Euler form on a simplex of cyclic sets ------------------------------------------

@dataclass(frozen=True)
class WeightData:
    """Levels of the elements of the last set, listed in its cyclic order."""

    elements: tuple[int, ...]
    levels: np.ndarray
    profile: MassProfile

    @classmethod
    def of(cls, simplex: ZSimplex, start: int | None = None) -> "WeightData":
        if not all(c.is_cyclic for c in simplex.objects):
            raise ValueError("weights are defined on simplices of cyclic sets")
        last = simplex.objects[-1]
        if len(last) > MAX_SIZE:
            raise ValueError(f"sets larger than {MAX_SIZE} are not supported")
        images = simplex.images()
        elems = tuple(last)
        if start is not None:
            i = elems.index(start)
            elems = elems[i:] + elems[:i]
        level = {}
        for j, img in enumerate(images):
            for x in img:
                level.setdefault(x, j)
        return cls(elems, np.array([level[x] for x in elems]),
                   MassProfile.from_simplex(simplex))

    def masses(self, t: np.ndarray) -> np.ndarray:
        full = np.concatenate([np.ones(t.shape[:-1] + (1,)), t], axis=-1)
        return full[..., self.levels]

    def weights(self, t: np.ndarray) -> np.ndarray:
        mu = self.masses(t)
        return mu / mu.sum(axis=-1, keepdims=True)

    def jacobian(self, t: np.ndarray) -> np.ndarray:
        """``dw_x / dt_j = [level(x) = j] / M - mu_x a_j / M^2``, shape ``(N, n, d)``."""
        d = self.profile.dim
        mu = self.masses(t)
        m = mu.sum(axis=-1)[:, None, None]
        a = np.asarray(self.profile.sizes[1:], dtype=float)
        onehot = (self.levels[:, None] == np.arange(1, d + 1)[None, :]).astype(float)
        return onehot[None] / m - mu[:, :, None] * a[None, None, :] / m ** 2


def euler_coefficients(jac: np.ndarray) -> np.ndarray:
    """``A_pq`` with ``omega = sum_{p<q} A_pq dt_p ^ dt_q``, as an antisymmetric array."""
    before = np.cumsum(jac, axis=1) - jac
    # sum_{i<j} (J_ip J_jq - J_iq J_jp) = sum_j (P_p(j) J_jq - P_q(j) J_jp)
    s = np.matmul(np.swapaxes(before, 1, 2), jac)
    return -(s - np.swapaxes(s, 1, 2))


def pfaffian(a: np.ndarray) -> np.ndarray:
    """Pfaffian of a stack of antisymmetric 2x2 or 4x4 matrices."""
    d = a.shape[-1]
    if d == 2:
        return a[:, 0, 1]
    if d == 4:
        return (a[:, 0, 1] * a[:, 2, 3] - a[:, 0, 2] * a[:, 1, 3]
                + a[:, 0, 3] * a[:, 1, 2])
    raise ValueError("pfaffian implemented for dimension 2 and 4")


def power_density(data: WeightData, t: np.ndarray) -> np.ndarray:
    """Coefficient of ``dt_1 ^ ... ^ dt_2k`` in ``omega^k``, namely ``k! Pf(A)``."""
    a = euler_coefficients(data.jacobian(t))
    k = a.shape[-1] // 2
    return math.factorial(k) * pfaffian(a)


def minor_density(data: WeightData, t: np.ndarray) -> np.ndarray:
    """The same coefficient as ``(-1)^k k! sum_{i_1<...<i_2k} det J[i_1..i_2k]``."""
    jac = data.jacobian(t)
    d = jac.shape[-1]
    k = d // 2
    total = np.zeros(len(t))
    for rows in itertools.combinations(range(jac.shape[1]), d):
        total += np.linalg.det(jac[:, list(rows), :])
    return (-1) ** k * math.factorial(k) * total


def _check_simplex(simplex: ZSimplex, k: int):
    if simplex.dim != 2 * k:
        raise ValueError(f"expected a {2 * k}-simplex, got dimension {simplex.dim}")
    sizes = [len(c) for c in simplex.objects]
    if any(b < a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("malformed simplex: sizes decrease")


def euler_2form(simplex: ZSimplex, order: int = 32) -> QuadratureResult:
    """Integrate the pulled-back Euler form over a 2-simplex against ``c_z^1``."""
    _check_simplex(simplex, 1)
    data = WeightData.of(simplex)
    est, err, size = _grid_integrate(lambda t: power_density(data, t), 2, order)
    return QuadratureResult(est, err, size, "grid", c_z(simplex, 1), tolerance=GRID_TOL)


def power_form(simplex: ZSimplex, k: int = 2, samples: int = DEFAULT_SAMPLES,
               seed: int = DEFAULT_SEED, workers: int = 1) -> QuadratureResult:
    """Monte Carlo integral of ``omega^k`` over a 2k-simplex against ``c_z^k``."""
    if k != 2:
        raise ValueError("power_form is implemented for k = 2")
    _check_simplex(simplex, k)
    data = WeightData.of(simplex)
    est, err = _mc_integrate(lambda t: power_density(data, t), 2 * k, samples, seed,
                             workers=workers)
    return QuadratureResult(est, err, samples, "mc", c_z(simplex, k), seed=seed)


def weight_sum_deviation(simplex: ZSimplex, t: np.ndarray) -> float:
    """Largest ``|sum_x w_x - 1|`` over the sample points."""
    return float(np.max(np.abs(WeightData.of(simplex).weights(t).sum(axis=-1) - 1)))


def random_cyclic_simplex(rng, dim: int, max_size: int = MAX_SIZE,
                          strict: bool = True) -> ZSimplex:
    """Random simplex of cyclic sets, sizes strictly increasing when ``strict``."""
    if strict:
        sizes = sorted(rng.sample(range(1, max_size + 1), dim + 1))
    else:
        sizes = sorted(rng.randint(1, max_size) for _ in range(dim + 1))
    order = list(range(sizes[-1]))
    rng.shuffle(order)
    # ``order`` is the circle C_d; level j adds a random subset of it
    levels = [0] * sizes[0] + sum(([j] * (b - a) for j, (a, b)
                                   in enumerate(zip(sizes, sizes[1:]), 1)), [])
    rng.shuffle(levels)
    objects = []
    for j in range(dim + 1):
        objects.append(CyclicSet([x for x, lv in zip(order, levels) if lv <= j]))
    return ZSimplex.chain(*objects)
