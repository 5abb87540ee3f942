"""Blade combinatorics on bit masks.

A basis k-form e^{i1} ^ ... ^ e^{ik} with strictly increasing 1-based
indices is stored as an integer mask (bit i-1 set for index i). All the
sign bookkeeping for wedges and slot insertions lives here, so every
higher module agrees on conventions:

  insert_first: fill the first argument slot, sign (-1)^(bits below i)
  insert_last:  fill the last argument slot, (-1)^(deg-1) * insert_first
"""

from __future__ import annotations


def mask_of_indices(indices) -> int:
    mask = 0
    prev = 0
    for i in indices:
        i = int(i)
        if i <= prev:
            raise ValueError("blade indices must be strictly increasing and >= 1")
        mask |= 1 << (i - 1)
        prev = i
    return mask


def indices_of_mask(mask: int):
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def blade_degree(mask: int) -> int:
    return mask.bit_count()


def insert_first_mask(i: int, mask: int):
    """Contract e_i into the first slot: returns (sign, reduced mask)."""
    bit = 1 << (i - 1)
    if not mask & bit:
        return 0, 0
    below = (mask & (bit - 1)).bit_count()
    return (-1) ** below, mask & ~bit


def insert_last_mask(mask: int, i: int):
    """Contract e_i into the last slot: returns (sign, reduced mask)."""
    s, m = insert_first_mask(i, mask)
    if s == 0:
        return 0, 0
    if (mask.bit_count() - 1) % 2:
        s = -s
    return s, m


def wedge_masks(a: int, b: int):
    """Concatenate blades: returns (sign, union mask), sign 0 on overlap."""
    if a & b:
        return 0, 0
    inversions = 0
    bb = b
    i = 0
    while bb:
        if bb & 1:
            inversions += (a >> (i + 1)).bit_count()
        bb >>= 1
        i += 1
    return (-1) ** inversions, a | b


def sort_indices_sign(indices):
    """Sign of the permutation sorting indices ascending; 0 on repeats."""
    idx = list(indices)
    sign = 1
    for u in range(len(idx)):
        for v in range(u + 1, len(idx)):
            if idx[u] == idx[v]:
                return 0, ()
            if idx[u] > idx[v]:
                idx[u], idx[v] = idx[v], idx[u]
                sign = -sign
    return sign, tuple(idx)


def complement_mask(mask: int, dim: int) -> int:
    return ((1 << dim) - 1) & ~mask


def all_masks(dim: int):
    return range(1 << dim)


def masks_of_degree(dim: int, k: int):
    return [m for m in range(1 << dim) if m.bit_count() == k]


class Blade:
    """A basis form on R^dim: strictly increasing 1-based indices."""

    __slots__ = ("dim", "mask")

    def __init__(self, dim: int, indices=()):
        self.dim = dim
        if isinstance(indices, int):
            mask = indices
        else:
            mask = mask_of_indices(indices)
        if mask >> dim:
            raise ValueError("blade index exceeds dimension")
        self.mask = mask

    @property
    def indices(self):
        return indices_of_mask(self.mask)

    @property
    def degree(self) -> int:
        return blade_degree(self.mask)

    def wedge(self, other: "Blade"):
        """Returns (sign, Blade); sign 0 means the product vanishes."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        s, m = wedge_masks(self.mask, other.mask)
        return s, Blade(self.dim, m)

    def __eq__(self, other):
        return (isinstance(other, Blade) and self.dim == other.dim
                and self.mask == other.mask)

    def __hash__(self):
        return hash((self.dim, self.mask))

    def __str__(self):
        if not self.mask:
            return "1"
        return "^".join(f"e{i}" for i in self.indices)

    __repr__ = __str__


def blade_str(mask: int, letter: str = "e") -> str:
    if not mask:
        return "1"
    return "^".join(f"{letter}{i}" for i in indices_of_mask(mask))
