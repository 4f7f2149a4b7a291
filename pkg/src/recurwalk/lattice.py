"""Points of Z^2 and finitely supported step laws with exact integer weights.

A step law is a map ``point -> weight`` with positive integer weights summing
to a common denominator ``D``; the probability of an atom is ``weight / D``.
Weights are never reduced, so convolution stays pure integer arithmetic.
Moments are returned as :class:`fractions.Fraction` in lowest terms.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Mapping, NamedTuple, Tuple, Union

from .errors import (
    DuplicateAtom,
    EmptySupport,
    MalformedLawFile,
    NonPositiveDenominator,
    NonPositiveWeight,
    WeightSumMismatch,
)

# Exact rational moment; Fraction already keeps lowest terms with den > 0.
RationalMoment = Fraction


class LatticePoint(NamedTuple):
    x: int
    y: int

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(-self.x, -self.y)

    def __add__(self, other) -> "LatticePoint":  # type: ignore[override]
        return LatticePoint(self.x + other[0], self.y + other[1])

    def norm2(self) -> int:
        """Squared euclidean norm x^2 + y^2."""
        return self.x * self.x + self.y * self.y


ORIGIN = LatticePoint(0, 0)

PointLike = Union[LatticePoint, Tuple[int, int]]


@dataclass(frozen=True)
class StepLaw:
    """Law of one increment: atoms with integer weights over ``denominator``.

    Build instances with :func:`validate_law`; the constructor trusts its
    arguments. ``atoms`` is kept as a sorted tuple so that two equal laws
    compare and hash equal.
    """

    denominator: int
    atoms: Tuple[Tuple[LatticePoint, int], ...]

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Tuple[LatticePoint, int]]:
        return iter(self.atoms)

    def weights(self) -> dict:
        return dict(self.atoms)

    def weight(self, p: PointLike) -> int:
        return self.weights().get(LatticePoint(*p), 0)

    def probability(self, p: PointLike) -> Fraction:
        return Fraction(self.weight(p), self.denominator)

    @property
    def support(self) -> Tuple[LatticePoint, ...]:
        return tuple(p for p, _ in self.atoms)

    @property
    def radius(self) -> int:
        return max(max(abs(p.x), abs(p.y)) for p, _ in self.atoms)

    def bounding_box(self) -> Tuple[int, int, int, int]:
        """(xmin, xmax, ymin, ymax) over the support."""
        xs = [p.x for p, _ in self.atoms]
        ys = [p.y for p, _ in self.atoms]
        return min(xs), max(xs), min(ys), max(ys)


def _check_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedLawFile(f"{name} must be an integer, got {value!r}")
    return value


def validate_law(atoms: Union[Mapping[PointLike, int], Iterable[Tuple[PointLike, int]]],
                 denominator: int) -> StepLaw:
    """Check raw atoms and denominator and return a canonical :class:`StepLaw`."""
    denominator = _check_int(denominator, "denominator")
    if denominator <= 0:
        raise NonPositiveDenominator(f"denominator must be positive, got {denominator}")
    items = atoms.items() if isinstance(atoms, Mapping) else atoms
    table = {}
    for p, w in items:
        point = LatticePoint(_check_int(p[0], "dx"), _check_int(p[1], "dy"))
        w = _check_int(w, "weight")
        if point in table:
            raise DuplicateAtom(f"atom {tuple(point)} given twice")
        if w <= 0:
            raise NonPositiveWeight(f"atom {tuple(point)} has weight {w}")
        table[point] = w
    if not table:
        raise EmptySupport("step law has no atoms")
    total = sum(table.values())
    if total != denominator:
        raise WeightSumMismatch(f"weights sum to {total}, denominator is {denominator}")
    return StepLaw(denominator, tuple(sorted(table.items())))


def dirac(point: PointLike = ORIGIN) -> StepLaw:
    return validate_law({point: 1}, 1)


def is_symmetric(law: StepLaw) -> bool:
    """True iff w(p) == w(-p) for every atom, i.e. X and -X have the same law."""
    w = law.weights()
    return all(w.get(-p, 0) == wp for p, wp in w.items())


def reflect(law: StepLaw) -> StepLaw:
    """Law of -X."""
    return StepLaw(law.denominator, tuple(sorted((-p, w) for p, w in law.atoms)))


def convolve_laws(a: StepLaw, b: StepLaw) -> StepLaw:
    """Law of X + Y for independent X ~ a, Y ~ b (denominator D_a * D_b)."""
    out: dict = defaultdict(int)
    for p, wp in a.atoms:
        for q, wq in b.atoms:
            out[p + q] += wp * wq
    return validate_law(out, a.denominator * b.denominator)


def difference_law(law: StepLaw) -> StepLaw:
    """Increment law of S1 - S2 for two i.i.d. walks driven by ``law``."""
    return convolve_laws(law, reflect(law))


def mean(law: StepLaw) -> Tuple[Fraction, Fraction]:
    sx = sum(w * p.x for p, w in law.atoms)
    sy = sum(w * p.y for p, w in law.atoms)
    return Fraction(sx, law.denominator), Fraction(sy, law.denominator)


def second_moment(law: StepLaw) -> Fraction:
    """E|X|^2 as an exact fraction."""
    return Fraction(sum(w * p.norm2() for p, w in law.atoms), law.denominator)


# -- law files -------------------------------------------------------------

def law_from_json(data) -> StepLaw:
    """Parse the decoded JSON object ``{"denominator": D, "atoms": [...]}``."""
    if not isinstance(data, dict):
        raise MalformedLawFile("top-level value must be an object")
    for field in ("denominator", "atoms"):
        if field not in data:
            raise MalformedLawFile(f"missing field '{field}'")
    if not isinstance(data["atoms"], list):
        raise MalformedLawFile("field 'atoms' must be a list")
    items = []
    for i, entry in enumerate(data["atoms"]):
        if not isinstance(entry, dict):
            raise MalformedLawFile(f"atoms[{i}] must be an object")
        for field in ("dx", "dy", "weight"):
            if field not in entry:
                raise MalformedLawFile(f"atoms[{i}] is missing field '{field}'")
        items.append(((_check_int(entry["dx"], f"atoms[{i}].dx"),
                       _check_int(entry["dy"], f"atoms[{i}].dy")),
                      _check_int(entry["weight"], f"atoms[{i}].weight")))
    return validate_law(items, _check_int(data["denominator"], "denominator"))


def law_to_json(law: StepLaw) -> dict:
    return {
        "denominator": law.denominator,
        "atoms": [{"dx": p.x, "dy": p.y, "weight": w} for p, w in law.atoms],
    }


def load_law(path: Union[str, Path]) -> StepLaw:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedLawFile(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedLawFile(f"{path}: invalid JSON ({exc.msg})") from exc
    return law_from_json(data)


def dump_law(law: StepLaw, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(law_to_json(law), indent=2) + "\n", encoding="utf-8")
