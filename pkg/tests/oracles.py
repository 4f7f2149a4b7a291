"""Independent reference computations used by the test-suite.

Nothing here calls the convolution engine: distributions come from explicit
enumeration of increment sequences, balls from a direct scan of the disk.
"""
from collections import Counter
from fractions import Fraction
from itertools import product

import numpy as np


def paths_distribution(law, n):
    """Exact numerators over D**n by walking every sequence with itertools."""
    atoms = list(law.atoms)
    out = Counter()
    for seq in product(atoms, repeat=n):
        x = sum(p.x for p, _ in seq)
        y = sum(p.y for p, _ in seq)
        w = 1
        for _, wp in seq:
            w *= wp
        out[(x, y)] += w
    return dict(out)


def enumerate_distribution(law, n, chunk=1 << 20):
    """Vectorised enumeration of all len(law)**n increment sequences.

    Sequence s picks atom (s // A**k) % A at step k; every sequence is
    visited individually. Counts are accumulated in float64, so the total
    D**n must stay below 2**53 for the result to be exact.
    """
    assert law.denominator ** n < 2 ** 53
    A = len(law)
    ax = np.array([p.x for p, _ in law.atoms], dtype=np.int64)
    ay = np.array([p.y for p, _ in law.atoms], dtype=np.int64)
    aw = np.array([w for _, w in law.atoms], dtype=np.int64)
    r = max(law.radius, 1) * max(n, 1)
    side = 2 * r + 1
    acc = np.zeros(side * side)
    total = A ** n
    for start in range(0, total, chunk):
        s = np.arange(start, min(start + chunk, total), dtype=np.int64)
        x = np.zeros_like(s)
        y = np.zeros_like(s)
        w = np.ones_like(s)
        for _ in range(n):
            d = s % A
            s //= A
            x += ax[d]
            y += ay[d]
            w *= aw[d]
        acc += np.bincount((x + r) * side + (y + r), weights=w, minlength=side * side)
    out = {}
    for k in np.nonzero(acc)[0]:
        out[(int(k) // side - r, int(k) % side - r)] = int(acc[k])
    return out


def disk_count(bound):
    """Number of lattice points with x^2 + y^2 < bound (bound a Fraction)."""
    bound = Fraction(bound)
    r = 0
    while r * r < bound:
        r += 1
    return sum(1 for x in range(-r, r + 1) for y in range(-r, r + 1) if x * x + y * y < bound)
