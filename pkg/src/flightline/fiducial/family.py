"""Square fiducial tag families with guaranteed rotated Hamming distance.

A codeword is the row-major bit layout of a g x g data grid (LSB = cell (0,0)),
so a 90-degree physical rotation of the printed tag is a fixed permutation of
bit positions. A family guarantees that every pair of codewords, including all
rotations, differs in at least ``min_hamming`` bits, and that no codeword is
within ``min_hamming`` of a rotation of itself.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from ..errors import FamilyGenerationError, ValidationError

# materialize + shuffle below this space size; stream an affine permutation above
_SHUFFLE_LIMIT_BITS = 20


def _grid_side(code_bits: int) -> int:
    g = math.isqrt(code_bits)
    if g * g != code_bits:
        raise ValidationError(f"code_bits must be a perfect square (g x g data grid), got {code_bits}")
    return g


def rotate90(code: int, grid_side: int) -> int:
    """Rotate a codeword's g x g bit grid 90 degrees clockwise."""
    g = grid_side
    out = 0
    for r in range(g):
        for c in range(g):
            src = (g - 1 - c) * g + r
            if (code >> src) & 1:
                out |= 1 << (r * g + c)
    return out


def rotations(code: int, grid_side: int) -> tuple[int, int, int, int]:
    r1 = rotate90(code, grid_side)
    r2 = rotate90(r1, grid_side)
    r3 = rotate90(r2, grid_side)
    return (code, r1, r2, r3)


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()


@dataclass(frozen=True)
class TagFamily:
    """A codebook of tag bit patterns.

    ``bits_per_width`` counts the cells spanning the printed tag width,
    border included; it feeds the detection-distance formula, not the
    codeword layout (which uses the data grid side sqrt(code_bits)).
    """

    name: str
    code_bits: int
    bits_per_width: int
    min_hamming: int
    codewords: tuple[int, ...]

    def __post_init__(self) -> None:
        _grid_side(self.code_bits)
        if self.bits_per_width <= 0:
            raise ValidationError(f"bits_per_width must be positive: {self.bits_per_width}")
        if self.min_hamming < 1:
            raise ValidationError(f"min_hamming must be >= 1: {self.min_hamming}")
        limit = 1 << self.code_bits
        for cw in self.codewords:
            if not 0 <= cw < limit:
                raise ValidationError(f"codeword {cw:#x} does not fit in {self.code_bits} bits")

    @property
    def grid_side(self) -> int:
        return _grid_side(self.code_bits)

    def __len__(self) -> int:
        return len(self.codewords)


def _candidate_stream(code_bits: int, seed: int) -> Iterator[int]:
    """Seeded pseudorandom permutation of the whole codeword space."""
    space = 1 << code_bits
    rng = random.Random(seed)
    if code_bits <= _SHUFFLE_LIMIT_BITS:
        order = list(range(space))
        rng.shuffle(order)
        yield from order
    else:
        # affine bijection j -> (a*j + b) mod 2^n with odd a
        a = rng.randrange(1, space, 2)
        b = rng.randrange(space)
        for j in range(space):
            yield (a * j + b) % space


def _accepts(candidate: int, accepted_rotations: list[tuple[int, int, int, int]],
             grid_side: int, min_hamming: int) -> bool:
    for rot in rotations(candidate, grid_side)[1:]:
        if hamming(candidate, rot) < min_hamming:
            return False
    for rots in accepted_rotations:
        for rot in rots:
            if hamming(candidate, rot) < min_hamming:
                return False
    return True


def generate_family(
    code_bits: int,
    bits_per_width: int,
    min_hamming: int,
    max_codewords: int,
    seed: int = 0,
    name: str | None = None,
) -> TagFamily:
    """Greedy lexicode scan over a seeded permutation of the codeword space.

    A candidate joins the family iff its Hamming distance to every accepted
    codeword, to every 90-degree rotation of every accepted codeword, and to
    its own nontrivial rotations is >= min_hamming.
    """
    g = _grid_side(code_bits)
    if min_hamming < 1:
        raise ValidationError(f"min_hamming must be >= 1: {min_hamming}")
    if max_codewords < 1:
        raise ValidationError(f"max_codewords must be >= 1: {max_codewords}")
    accepted: list[int] = []
    accepted_rotations: list[tuple[int, int, int, int]] = []
    for candidate in _candidate_stream(code_bits, seed):
        if _accepts(candidate, accepted_rotations, g, min_hamming):
            accepted.append(candidate)
            accepted_rotations.append(rotations(candidate, g))
            if len(accepted) >= max_codewords:
                break
    if not accepted:
        raise FamilyGenerationError(
            f"no codeword satisfies code_bits={code_bits}, min_hamming={min_hamming}"
        )
    if name is None:
        name = f"sim{code_bits}h{min_hamming}"
    return TagFamily(name, code_bits, bits_per_width, min_hamming, tuple(accepted))


def verify_family(family: TagFamily) -> int:
    """Exhaustive check of the rotated pairwise distance guarantee.

    Recomputes every rotation from scratch and returns the minimum distance
    found over all codeword pairs (rotations included) and over each
    codeword's own nontrivial rotations. Raises if the guarantee is broken.
    """
    g = family.grid_side
    best = family.code_bits + 1
    words = family.codewords
    for i, a in enumerate(words):
        for rot in rotations(a, g)[1:]:
            best = min(best, hamming(a, rot))
        for b in words[i + 1:]:
            for rot in rotations(b, g):
                best = min(best, hamming(a, rot))
    if best < family.min_hamming:
        raise ValidationError(
            f"family {family.name} violates its guarantee: min rotated distance {best} < {family.min_hamming}"
        )
    return best


def save_family(family: TagFamily, path: str | Path) -> None:
    """Write the export format: a key=value header then one hex codeword per line."""
    lines = [
        f"family={family.name} code_bits={family.code_bits} "
        f"bits_per_width={family.bits_per_width} min_hamming={family.min_hamming}"
    ]
    width = (family.code_bits + 3) // 4
    lines.extend(f"0x{cw:0{width}x}" for cw in family.codewords)
    Path(path).write_text("\n".join(lines) + "\n")


def load_family(path: str | Path) -> TagFamily:
    text = Path(path).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty family file")
    header: dict[str, str] = {}
    for tok in lines[0].split():
        if "=" not in tok:
            raise ValidationError(f"{path}: malformed header token {tok!r}")
        k, v = tok.split("=", 1)
        header[k] = v
    try:
        return TagFamily(
            name=header["family"],
            code_bits=int(header["code_bits"]),
            bits_per_width=int(header["bits_per_width"]),
            min_hamming=int(header["min_hamming"]),
            codewords=tuple(int(ln, 16) for ln in lines[1:]),
        )
    except KeyError as exc:
        raise ValidationError(f"{path}: header missing {exc}") from exc
