from typing import Dict, Iterable, List, NamedTuple, Sequence, Tuple
from functools import lru_cache
import itertools
import re

from src.core.error_handler import DimensionMismatchError, UnsupportedDimensionError

Vector = Tuple[int, ...]

# Overflow guard for translation coordinates; pipeline values stay far below it.
COORDINATE_LIMIT = 2 ** 62


class SignedPermutation(NamedTuple):
    """Linear part of a grid automorphism.

    Entry k of ``images`` is a signed 1-based index: ``images[k-1] = +-j``
    means the basis vector e_k is sent to +-e_j.
    """
    images: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.images)

    def apply(self, v: Sequence[int]) -> Vector:
        """Row-vector action v·w."""
        out = [0] * len(self.images)
        for k, s in enumerate(self.images):
            if s > 0:
                out[s - 1] = v[k]
            else:
                out[-s - 1] = -v[k]
        return tuple(out)

    def then(self, other: "SignedPermutation") -> "SignedPermutation":
        """Product under right action: first self, then other."""
        imgs = other.images
        return SignedPermutation(tuple(
            imgs[s - 1] if s > 0 else -imgs[-s - 1] for s in self.images
        ))

    def inverse(self) -> "SignedPermutation":
        out = [0] * len(self.images)
        for k, s in enumerate(self.images):
            if s > 0:
                out[s - 1] = k + 1
            else:
                out[-s - 1] = -(k + 1)
        return SignedPermutation(tuple(out))

    def is_identity(self) -> bool:
        return all(s == k + 1 for k, s in enumerate(self.images))

    def to_text(self) -> str:
        return "[" + ",".join(str(s) for s in self.images) + "]"

    @classmethod
    def identity(cls, dim: int) -> "SignedPermutation":
        return cls(tuple(range(1, dim + 1)))

    @classmethod
    def validated(cls, images: Sequence[int]) -> "SignedPermutation":
        images = tuple(int(s) for s in images)
        if sorted(abs(s) for s in images) != list(range(1, len(images) + 1)):
            raise ValueError(f"Not a signed permutation: {images}")
        return cls(images)


class GridAutomorphism(NamedTuple):
    """Affine automorphism v -> v·point + trans of the grid.

    Tuple ordering is the canonical total order: point images first, then
    the translation vector.
    """
    point: SignedPermutation
    trans: Vector

    @property
    def dim(self) -> int:
        return len(self.trans)

    def act(self, v: Sequence[int]) -> Vector:
        if len(v) != len(self.trans):
            raise DimensionMismatchError(f"Vertex {tuple(v)} has wrong dimension for {self.to_text()}")
        moved = self.point.apply(v)
        return tuple(a + b for a, b in zip(moved, self.trans))

    def then(self, other: "GridAutomorphism") -> "GridAutomorphism":
        """Right-action product: act(self.then(h), v) == act(h, act(self, v))."""
        moved = other.point.apply(self.trans)
        trans = tuple(a + b for a, b in zip(moved, other.trans))
        return GridAutomorphism(self.point.then(other.point), trans)

    def inverse(self) -> "GridAutomorphism":
        inv = self.point.inverse()
        return GridAutomorphism(inv, tuple(-c for c in inv.apply(self.trans)))

    def conjugate_by(self, a: "GridAutomorphism") -> "GridAutomorphism":
        """a^-1 · self · a."""
        return a.inverse().then(self).then(a)

    def is_identity(self) -> bool:
        return self.point.is_identity() and not any(self.trans)

    def fixes_origin(self) -> bool:
        return not any(self.trans)

    def to_text(self) -> str:
        return self.point.to_text() + ";[" + ",".join(str(t) for t in self.trans) + "]"

    @classmethod
    def identity(cls, dim: int) -> "GridAutomorphism":
        return cls(SignedPermutation.identity(dim), (0,) * dim)

    @classmethod
    def translation(cls, vector: Sequence[int]) -> "GridAutomorphism":
        vector = tuple(vector)
        return cls(SignedPermutation.identity(len(vector)), vector)

    @classmethod
    def linear(cls, images: Sequence[int]) -> "GridAutomorphism":
        return cls(SignedPermutation.validated(images), (0,) * len(images))


def compose(g: GridAutomorphism, h: GridAutomorphism) -> GridAutomorphism:
    """Product gh: apply g first, then h."""
    if g.dim != h.dim:
        raise DimensionMismatchError(f"Cannot compose automorphisms of dimensions {g.dim} and {h.dim}")
    result = g.then(h)
    if any(abs(c) > COORDINATE_LIMIT for c in result.trans):
        raise OverflowError(f"Translation out of range in {result.to_text()}")
    return result


def invert(g: GridAutomorphism) -> GridAutomorphism:
    return g.inverse()


def act(g: GridAutomorphism, v: Sequence[int]) -> Vector:
    return g.act(v)


def check_dimension(dim: int, max_dimension: int = 3) -> None:
    if not 1 <= dim <= max_dimension:
        raise UnsupportedDimensionError(f"Dimension {dim} outside 1..{max_dimension}")


@lru_cache(maxsize=None)
def _hyperoctahedral(dim: int) -> Tuple[SignedPermutation, ...]:
    elements = []
    for perm in itertools.permutations(range(1, dim + 1)):
        for signs in itertools.product((1, -1), repeat=dim):
            elements.append(SignedPermutation(tuple(s * p for s, p in zip(signs, perm))))
    return tuple(sorted(elements))


def hyperoctahedral(dim: int, max_dimension: int = 3) -> Tuple[SignedPermutation, ...]:
    """All 2^d·d! signed permutations in canonical order."""
    check_dimension(dim, max_dimension)
    return _hyperoctahedral(dim)


def unit_vectors(dim: int) -> Tuple[Vector, ...]:
    """Signed directions in the order +e1, -e1, +e2, -e2, ..."""
    out = []
    for k in range(dim):
        for sign in (1, -1):
            v = [0] * dim
            v[k] = sign
            out.append(tuple(v))
    return tuple(out)


def is_unit_vector(v: Sequence[int]) -> bool:
    return sum(abs(c) for c in v) == 1


# Generators of Aut(Λ³) by their customary names.
NAMED_GENERATORS: Dict[str, GridAutomorphism] = {
    "r_x": GridAutomorphism.linear((1, 3, -2)),
    "r_y": GridAutomorphism.linear((-3, 2, 1)),
    "r_z": GridAutomorphism.linear((-2, 1, 3)),
    "m_x": GridAutomorphism.linear((-1, 2, 3)),
    "m_y": GridAutomorphism.linear((1, -2, 3)),
    "m_z": GridAutomorphism.linear((1, 2, -3)),
    "i": GridAutomorphism.linear((-1, -2, -3)),
    "t_x": GridAutomorphism.translation((1, 0, 0)),
    "t_y": GridAutomorphism.translation((0, 1, 0)),
    "t_z": GridAutomorphism.translation((0, 0, 1)),
}

_WORD_TOKEN = re.compile(r"\s*(r_x|r_y|r_z|m_x|m_y|m_z|t_x|t_y|t_z|i|1)(?:\^\{?(-?\d+)\}?)?")


def named_generator(name: str) -> GridAutomorphism:
    try:
        return NAMED_GENERATORS[name]
    except KeyError:
        raise ValueError(f"Unknown generator name: {name}") from None


def power(g: GridAutomorphism, n: int) -> GridAutomorphism:
    base = g if n >= 0 else g.inverse()
    result = GridAutomorphism.identity(g.dim)
    for _ in range(abs(n)):
        result = result.then(base)
    return result


def parse_word(word: str) -> GridAutomorphism:
    """Evaluate a generator word such as ``r_z^2 r_x`` left to right."""
    result = GridAutomorphism.identity(3)
    pos = 0
    word = word.strip()
    while pos < len(word):
        match = _WORD_TOKEN.match(word, pos)
        if not match:
            raise ValueError(f"Cannot parse generator word {word!r} at position {pos}")
        name, exponent = match.group(1), match.group(2)
        if name != "1":
            result = result.then(power(named_generator(name), int(exponent) if exponent else 1))
        pos = match.end()
    return result


def parse_automorphism(text: str) -> GridAutomorphism:
    """Parse ``[s1,...,sd];[t1,...,td]``."""
    try:
        point_text, trans_text = text.strip().split(";")
        images = _parse_int_list(point_text)
        trans = _parse_int_list(trans_text)
    except ValueError as e:
        raise ValueError(f"Malformed automorphism {text!r}: {e}") from None
    if len(images) != len(trans):
        raise ValueError(f"Malformed automorphism {text!r}: dimension mismatch")
    return GridAutomorphism(SignedPermutation.validated(images), tuple(trans))


def _parse_int_list(text: str) -> List[int]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"expected bracketed list, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return []
    return [int(part) for part in body.split(",")]


def parse_vector(text: str) -> Vector:
    return tuple(_parse_int_list(text))


def format_vector(v: Iterable[int]) -> str:
    return "[" + ",".join(str(c) for c in v) + "]"
