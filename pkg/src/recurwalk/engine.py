"""Exact and floating-point n-step distributions of a walk started at 0.

Exact distributions hold integer numerators over the implicit denominator
``D**n`` in a dense object array spanning the support's bounding box, which is
always ``n`` times the law's bounding box. Float distributions use float64
arrays and drop far tails beyond a Hoeffding window so that large ``n`` stays
tractable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from ._kronecker import convolve_grids
from .errors import DenominatorMismatch, ExactCapExceeded, ZeroSecondMoment
from .lattice import LatticePoint, ORIGIN, PointLike, StepLaw, mean

DEFAULT_EXACT_CAP = 512

# Per-step bound on the probability mass discarded by the float window.
FLOAT_TAIL_EPS = 1e-16


def _point_grid_dot(a: np.ndarray, a0: Tuple[int, int],
                    b: np.ndarray, b0: Tuple[int, int]):
    """sum_x a(x) * b(-x) for grids with lower-left corners ``a0`` and ``b0``.

    This is the origin coefficient of the convolution a * b.
    """
    # b reflected: b'(x) = b(-x), occupying [-(b0 + shape - 1), -b0].
    br = b[::-1, ::-1]
    br0 = (-(b0[0] + b.shape[0] - 1), -(b0[1] + b.shape[1] - 1))
    x_lo, y_lo = max(a0[0], br0[0]), max(a0[1], br0[1])
    x_hi = min(a0[0] + a.shape[0], br0[0] + br.shape[0])
    y_hi = min(a0[1] + a.shape[1], br0[1] + br.shape[1])
    if x_lo >= x_hi or y_lo >= y_hi:
        return 0
    sa = a[x_lo - a0[0]:x_hi - a0[0], y_lo - a0[1]:y_hi - a0[1]]
    sb = br[x_lo - br0[0]:x_hi - br0[0], y_lo - br0[1]:y_hi - br0[1]]
    return (sa * sb).sum()


@dataclass(frozen=True, eq=False)
class ExactDist:
    """Law of S_n: ``grid[i, j]`` is the numerator of P[S_n = corner + (i, j)].

    The denominator is ``law_denominator ** n``. Treat instances as immutable;
    the grid is flagged read-only.
    """

    n: int
    law_denominator: int
    grid: np.ndarray
    corner: Tuple[int, int]

    def __post_init__(self):
        self.grid.setflags(write=False)

    @property
    def denominator(self) -> int:
        return self.law_denominator ** self.n

    def total(self) -> int:
        return int(self.grid.sum())

    def numerator(self, p: PointLike) -> int:
        i, j = p[0] - self.corner[0], p[1] - self.corner[1]
        if 0 <= i < self.grid.shape[0] and 0 <= j < self.grid.shape[1]:
            return int(self.grid[i, j])
        return 0

    def probability(self, p: PointLike) -> Fraction:
        return Fraction(self.numerator(p), self.denominator)

    def items(self) -> Iterator[Tuple[LatticePoint, int]]:
        """Nonzero (point, numerator) pairs in row-major order."""
        x0, y0 = self.corner
        for i, j in zip(*np.nonzero(self.grid)):
            yield LatticePoint(x0 + int(i), y0 + int(j)), int(self.grid[i, j])

    @property
    def mass(self) -> Dict[LatticePoint, int]:
        return dict(self.items())

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """Integer x and y coordinate arrays matching the grid."""
        xs = np.arange(self.corner[0], self.corner[0] + self.grid.shape[0], dtype=np.int64)
        ys = np.arange(self.corner[1], self.corner[1] + self.grid.shape[1], dtype=np.int64)
        return np.meshgrid(xs, ys, indexing="ij")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactDist):
            return NotImplemented
        return (self.n == other.n and self.law_denominator == other.law_denominator
                and self.mass == other.mass)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class FloatDist:
    """Law of S_n in double precision, same layout as :class:`ExactDist`."""

    n: int
    grid: np.ndarray
    corner: Tuple[int, int]

    def __post_init__(self):
        self.grid.setflags(write=False)

    def total(self) -> float:
        return math.fsum(self.grid.ravel())

    def probability(self, p: PointLike) -> float:
        i, j = p[0] - self.corner[0], p[1] - self.corner[1]
        if 0 <= i < self.grid.shape[0] and 0 <= j < self.grid.shape[1]:
            return float(self.grid[i, j])
        return 0.0

    @property
    def mass(self) -> Dict[LatticePoint, float]:
        x0, y0 = self.corner
        return {LatticePoint(x0 + int(i), y0 + int(j)): float(self.grid[i, j])
                for i, j in zip(*np.nonzero(self.grid))}


@dataclass(frozen=True)
class SeriesRow:
    """One row of the return-probability series.

    ``p_return`` is exact for the exact backend and ``None`` for the float
    backend, which only fills ``p_float``.
    """

    n: int
    p_return: Optional[Fraction]
    p_float: float
    partial_sum: float


# -- construction ------------------------------------------------------------

def dirac_dist(law_denominator: int) -> ExactDist:
    return ExactDist(0, law_denominator, np.array([[1]], dtype=object), (0, 0))


def _weight_groups(law: StepLaw) -> Dict[int, List[LatticePoint]]:
    groups: Dict[int, List[LatticePoint]] = {}
    for p, w in law.atoms:
        groups.setdefault(w, []).append(p)
    return groups


def step(dist: ExactDist, law: StepLaw) -> ExactDist:
    """Distribution of S_{n+1} = S_n + X."""
    if dist.law_denominator != law.denominator:
        raise DenominatorMismatch(
            f"distribution uses D={dist.law_denominator}, law has D={law.denominator}")
    xmin, xmax, ymin, ymax = law.bounding_box()
    h, w = dist.grid.shape
    new = np.zeros((h + xmax - xmin, w + ymax - ymin), dtype=object)
    for weight, points in _weight_groups(law).items():
        src = dist.grid if weight == 1 else dist.grid * weight
        for p in points:
            i, j = p.x - xmin, p.y - ymin
            new[i:i + h, j:j + w] += src
    corner = (dist.corner[0] + xmin, dist.corner[1] + ymin)
    return ExactDist(dist.n + 1, law.denominator, new, corner)


def convolve_dists(a: ExactDist, b: ExactDist) -> ExactDist:
    """Law of S_n + S'_m for independent walks with the same law denominator."""
    if a.law_denominator != b.law_denominator:
        raise DenominatorMismatch("cannot convolve distributions of different laws")
    grid = convolve_grids(a.grid, b.grid)
    corner = (a.corner[0] + b.corner[0], a.corner[1] + b.corner[1])
    return ExactDist(a.n + b.n, a.law_denominator, grid, corner)


def self_convolve(dist: ExactDist) -> ExactDist:
    """Distribution at 2n from the distribution at n."""
    return convolve_dists(dist, dist)


def law_dist(law: StepLaw) -> ExactDist:
    return step(dirac_dist(law.denominator), law)


def iter_exact(law: StepLaw, n_max: int, cap: int = DEFAULT_EXACT_CAP) -> Iterator[ExactDist]:
    """Yield the exact distributions for n = 0, 1, ..., n_max by stepping."""
    _check_exact(n_max, cap)
    dist = dirac_dist(law.denominator)
    yield dist
    for _ in range(n_max):
        dist = step(dist, law)
        yield dist


def _check_exact(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError(f"step count must be non-negative, got {n}")
    if n > cap:
        raise ExactCapExceeded(
            f"n={n} exceeds the exact cap {cap}; use the float backend or raise the cap")


def exact_power(law: StepLaw, n: int, cap: int = DEFAULT_EXACT_CAP) -> ExactDist:
    """Exact law of S_n by binary doubling over the bits of n."""
    _check_exact(n, cap)
    result = dirac_dist(law.denominator)
    base = law_dist(law)
    while n:
        if n & 1:
            result = base if result.n == 0 else convolve_dists(result, base)
        n >>= 1
        if n:
            base = self_convolve(base)
    return result


# -- float backend -----------------------------------------------------------

def _float_window(law: StepLaw, n: int) -> Tuple[int, int, int]:
    """Centre (cx, cy) and half-width of the box keeping all but a negligible tail.

    Hoeffding: each coordinate of S_n - E S_n exceeds t with probability at most
    2 exp(-2 t^2 / (n * span^2)), span being the coordinate range of one step.
    """
    xmin, xmax, ymin, ymax = law.bounding_box()
    span = max(xmax - xmin, ymax - ymin, 1)
    t = span * math.sqrt(n * math.log(4.0 / FLOAT_TAIL_EPS) / 2.0)
    mx, my = mean(law)
    return round(n * mx), round(n * my), math.ceil(t) + span


def float_step(dist: FloatDist, law: StepLaw, truncate: bool = True) -> FloatDist:
    xmin, xmax, ymin, ymax = law.bounding_box()
    h, w = dist.grid.shape
    new = np.zeros((h + xmax - xmin, w + ymax - ymin))
    for weight, points in _weight_groups(law).items():
        src = dist.grid * (weight / law.denominator)
        for p in points:
            i, j = p.x - xmin, p.y - ymin
            new[i:i + h, j:j + w] += src
    x0, y0 = dist.corner[0] + xmin, dist.corner[1] + ymin
    n = dist.n + 1
    if truncate:
        cx, cy, half = _float_window(law, n)
        lo_i, hi_i = max(0, cx - half - x0), min(new.shape[0], cx + half + 1 - x0)
        lo_j, hi_j = max(0, cy - half - y0), min(new.shape[1], cy + half + 1 - y0)
        if (lo_i, hi_i, lo_j, hi_j) != (0, new.shape[0], 0, new.shape[1]):
            new = np.ascontiguousarray(new[lo_i:hi_i, lo_j:hi_j])
            x0, y0 = x0 + lo_i, y0 + lo_j
    return FloatDist(n, new, (x0, y0))


def iter_float(law: StepLaw, n_max: int) -> Iterator[FloatDist]:
    if n_max < 0:
        raise ValueError(f"step count must be non-negative, got {n_max}")
    dist = FloatDist(0, np.ones((1, 1)), (0, 0))
    yield dist
    for _ in range(n_max):
        dist = float_step(dist, law)
        yield dist


def distribution_at(law: StepLaw, n: int, backend: str = "exact",
                    cap: int = DEFAULT_EXACT_CAP) -> Union[ExactDist, FloatDist]:
    """n-step distribution; exact queries use binary doubling."""
    if backend == "exact":
        return exact_power(law, n, cap)
    if backend == "float":
        for dist in iter_float(law, n):
            pass
        return dist
    raise ValueError(f"unknown backend {backend!r}")


# -- scalar functionals ------------------------------------------------------

def origin_convolution(a, b):
    """Numerator of P[S_n + S'_m = 0] from the two distributions, without
    forming the full convolution."""
    return _point_grid_dot(a.grid, a.corner, b.grid, b.corner)


def sum_of_squares(dist: ExactDist) -> int:
    """sum_x mass(x)^2, numerator over D**(2n)."""
    return int((dist.grid * dist.grid).sum())


def return_prob(law: StepLaw, n: int, cap: int = DEFAULT_EXACT_CAP) -> Fraction:
    """Exact P[S_n = 0]."""
    return exact_power(law, n, cap).probability(ORIGIN)


def return_series(law: StepLaw, n_max: int, backend: str = "exact",
                  cap: int = DEFAULT_EXACT_CAP) -> List[SeriesRow]:
    """Rows n = 0..n_max of P[S_n = 0] and the cumulative partial sums.

    Only the distributions up to ceil(n_max / 2) are stepped; with
    a = floor(n/2), b = ceil(n/2), P[S_n = 0] = sum_x P[S_a = x] P[S_b = -x].
    """
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    half = (n_max + 1) // 2
    if backend == "exact":
        _check_exact(n_max, cap)
        dists = iter_exact(law, half, cap)
    elif backend == "float":
        dists = iter_float(law, half)
    else:
        raise ValueError(f"unknown backend {backend!r}")

    values = []
    prev = None
    for dist in dists:
        if prev is not None:
            values.append(origin_convolution(prev, dist))  # n = 2k - 1
        values.append(origin_convolution(dist, dist))      # n = 2k
        prev = dist
    values = values[:n_max + 1]

    rows = []
    if backend == "exact":
        D = law.denominator
        acc = 0
        for n, num in enumerate(values):
            num = int(num)
            acc = acc * D + num  # exact partial sum over D**n
            den = D ** n
            rows.append(SeriesRow(n, Fraction(num, den), _ratio_float(num, den),
                                  _ratio_float(acc, den)))
    else:
        acc = _Neumaier()
        for n, p in enumerate(values):
            p = float(p)
            acc.add(p)
            rows.append(SeriesRow(n, None, p, acc.value))
    return rows


def _ratio_float(num: int, den: int) -> float:
    return float(Fraction(num, den))


class _Neumaier:
    """Compensated running sum."""

    def __init__(self):
        self.total = 0.0
        self.comp = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.comp


def second_moment_of_dist(dist: ExactDist) -> Fraction:
    """E|S_n|^2 exactly."""
    xs, ys = dist.coordinates()
    norm2 = (xs * xs + ys * ys).astype(object)
    return Fraction(int((dist.grid * norm2).sum()), dist.denominator)


def ball_points(n: int, m2: Fraction) -> List[LatticePoint]:
    """Lattice points x with |x|^2 < 2 n m2, in lexicographic (x, y) order."""
    if n < 1:
        raise ValueError(f"ball index must be >= 1, got {n}")
    m2 = Fraction(m2)
    if m2 <= 0:
        raise ZeroSecondMoment("E|X|^2 = 0: the walk is degenerate and B_n is undefined")
    bound = 2 * n * m2.numerator  # |x|^2 * den < bound
    den = m2.denominator
    r = math.isqrt(bound // den) + 1
    return [LatticePoint(x, y)
            for x in range(-r, r + 1) for y in range(-r, r + 1)
            if (x * x + y * y) * den < bound]


def mass_in_ball(dist: ExactDist, ball) -> Fraction:
    """P[S_n in ball] exactly."""
    return Fraction(sum(dist.numerator(p) for p in ball), dist.denominator)


# -- report rendering ----------------------------------------------------------

SERIES_FIELDS = ("n", "p_return_num", "p_return_den", "p_return", "partial_sum")


def decimal17(value: Union[Fraction, float]) -> str:
    """Decimal rendering with 17 significant digits."""
    if isinstance(value, Fraction):
        if value == 0:
            return "0"
        with localcontext() as ctx:
            ctx.prec = 17
            return format(Decimal(value.numerator) / Decimal(value.denominator), ".17g")
    return format(value, ".17g")


def series_record(row: SeriesRow) -> dict:
    exact = row.p_return
    return {
        "n": row.n,
        "p_return_num": "" if exact is None else str(exact.numerator),
        "p_return_den": "" if exact is None else str(exact.denominator),
        "p_return": decimal17(exact) if exact is not None else decimal17(row.p_float),
        "partial_sum": decimal17(row.partial_sum),
    }
