"""Ring geometry, coupling weights and Hamiltonian matrices.

The system is a ring of N spins 1/2 with an isotropic pair coupling that
falls off as the inverse chord distance to the power ``alpha``.  Basis
states are the products of local sigma^z eigenstates, encoded as N-bit
integers: bit (j-1) of the index is 1 when site j is "up" (+), so site 1
sits at the least significant bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

INFINITY = math.inf

# Dense 2^N matrices; above this the memory cost is no longer sensible.
MAX_SITES_DEFAULT = 14


class RingSizeError(ValueError):
    """Site count exceeds the configured dense-matrix cap."""


class Variant(enum.Enum):
    """Which Hamiltonian matrix to build.

    STANDARD is the plain pair-coupling sum, SHIFTED subtracts the
    constant that makes the fully symmetric states have energy zero,
    FERROMAGNETIC is the negation of STANDARD.
    """

    STANDARD = "standard"
    SHIFTED = "shifted"
    FERROMAGNETIC = "ferromagnetic"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown variant {text!r}; expected one of "
                             f"{[v.value for v in cls]}") from None


@dataclass(frozen=True)
class RingSpec:
    """A physical instance: site count, range exponent and variant.

    ``alpha`` may be ``math.inf``, which selects the nearest-neighbor
    coupling rule (weight 1 at ring separation 1, zero otherwise);
    ``alpha = 0`` couples every pair with weight 1.
    """

    n_sites: int
    alpha: float
    variant: Variant = Variant.STANDARD
    max_sites: int = MAX_SITES_DEFAULT

    def __post_init__(self):
        if not isinstance(self.n_sites, (int, np.integer)) or self.n_sites < 2:
            raise ValueError(f"n_sites must be an integer >= 2, got {self.n_sites!r}")
        if self.n_sites > self.max_sites:
            raise RingSizeError(
                f"n_sites={self.n_sites} exceeds the cap of {self.max_sites} "
                f"(dense matrices scale as 4^N)")
        a = float(self.alpha)
        if math.isnan(a) or a < 0:
            raise ValueError(f"alpha must be a non-negative real or inf, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        if not isinstance(self.variant, Variant):
            raise ValueError(f"variant must be a Variant, got {self.variant!r}")

    @property
    def dimension(self) -> int:
        return 2 ** self.n_sites


def chord_distance(n_sites: int, separation: int) -> float:
    """Distance between two ring sites ``separation`` steps apart.

    Measured along the chord of the circumscribing circle and normalized
    so that nearest neighbors are at distance exactly 1.  Separations
    above n_sites//2 are reflected (the distance depends on the ring
    separation min(d, N-d) only).
    """
    if n_sites < 2:
        raise ValueError("n_sites must be >= 2")
    if not 1 <= separation <= n_sites - 1:
        raise ValueError(f"separation must be in 1..{n_sites - 1}, got {separation}")
    d = min(separation, n_sites - separation)
    if d == 1:
        return 1.0
    return math.sin(math.pi * d / n_sites) / math.sin(math.pi / n_sites)


def coupling_weight(n_sites: int, separation: int, alpha: float) -> float:
    """Pair coupling (1/r)^alpha for the given ring separation."""
    d = min(separation, n_sites - separation)
    if math.isinf(alpha):
        return 1.0 if d == 1 else 0.0
    return chord_distance(n_sites, d) ** (-alpha)


@dataclass(frozen=True)
class CouplingTable:
    """All pair weights of a ring, keyed by the site pair (j, k), j < k."""

    n_sites: int
    alpha: float
    weights: dict = field(repr=False)

    @property
    def distinct_distances(self) -> int:
        return self.n_sites // 2

    @property
    def total_weight(self) -> float:
        return float(sum(self.weights.values()))


def coupling_table(n_sites: int, alpha: float) -> CouplingTable:
    weights = {}
    for j in range(1, n_sites + 1):
        for k in range(j + 1, n_sites + 1):
            weights[(j, k)] = coupling_weight(n_sites, k - j, alpha)
    return CouplingTable(n_sites=n_sites, alpha=float(alpha), weights=weights)


def popcounts(n_sites: int) -> np.ndarray:
    """Number of set bits for every basis index 0 .. 2^N - 1."""
    counts = np.zeros(1, dtype=np.int64)
    for _ in range(n_sites):
        counts = np.concatenate([counts, counts + 1])
    return counts


def _pair_terms(spec: RingSpec):
    """Yield (bit_j, bit_k, weight) for every coupled pair, fixed order."""
    table = coupling_table(spec.n_sites, spec.alpha)
    for (j, k), w in sorted(table.weights.items()):
        if w != 0.0:
            yield j - 1, k - 1, w


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense symmetric matrix of one ring Hamiltonian in the product basis."""

    spec: RingSpec
    matrix: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def total_weight(self) -> float:
        table = coupling_table(self.spec.n_sites, self.spec.alpha)
        return table.total_weight


def _add_pair(matrix: np.ndarray, states: np.ndarray, positions: np.ndarray | None,
              bj: int, bk: int, w: float, variant: Variant):
    """Accumulate one coupled pair into ``matrix`` over the given basis states.

    ``positions`` maps basis integers to row indices (identity when None).
    The entries follow from the swap decomposition of the coupling: aligned
    pairs contribute +w (0 for SHIFTED) on the diagonal, anti-aligned pairs
    -w (-w/2) plus 2w (w/2) on the partner obtained by swapping the bits.
    """
    bits_j = (states >> bj) & 1
    bits_k = (states >> bk) & 1
    aligned = bits_j == bits_k
    anti = ~aligned
    rows = np.arange(states.size)
    if variant is Variant.SHIFTED:
        d_aligned, d_anti, off = 0.0, -0.5 * w, 0.5 * w
    else:
        d_aligned, d_anti, off = w, -w, 2.0 * w
    matrix[rows[aligned], rows[aligned]] += d_aligned
    matrix[rows[anti], rows[anti]] += d_anti
    partners = states[anti] ^ ((1 << bj) | (1 << bk))
    cols = partners if positions is None else positions[partners]
    matrix[rows[anti], cols] += off


def build_hamiltonian(spec: RingSpec) -> HamiltonianMatrix:
    """Dense 2^N x 2^N matrix of the requested variant.

    Entries are generated from the integer swap structure times the pair
    weights, so the matrix is exactly symmetric and exactly block-diagonal
    over total-magnetization sectors.
    """
    dim = spec.dimension
    states = np.arange(dim, dtype=np.int64)
    matrix = np.zeros((dim, dim))
    build_variant = Variant.SHIFTED if spec.variant is Variant.SHIFTED else Variant.STANDARD
    for bj, bk, w in _pair_terms(spec):
        _add_pair(matrix, states, None, bj, bk, w, build_variant)
    if spec.variant is Variant.FERROMAGNETIC:
        np.negative(matrix, out=matrix)
    matrix.setflags(write=False)
    return HamiltonianMatrix(spec=spec, matrix=matrix)


@dataclass(frozen=True)
class SectorBlock:
    """One total-magnetization block of the Hamiltonian."""

    sector: int                       # number of up spins
    states: np.ndarray = field(repr=False)   # basis integers, ascending
    block: np.ndarray = field(repr=False)    # dense symmetric matrix


def sector_states(n_sites: int) -> list[np.ndarray]:
    """Basis integers of each magnetization sector, ascending within a sector."""
    pops = popcounts(n_sites)
    all_states = np.arange(2 ** n_sites, dtype=np.int64)
    return [all_states[pops == s] for s in range(n_sites + 1)]


def build_sector_blocks(spec: RingSpec) -> list[SectorBlock]:
    """The magnetization blocks of the Hamiltonian, sector 0 .. N.

    The direct sum of the blocks is the full matrix conjugated by the
    permutation that sorts the basis by up-spin count; block sizes are the
    binomial coefficients C(N, s).
    """
    blocks = []
    positions = np.empty(spec.dimension, dtype=np.int64)
    build_variant = Variant.SHIFTED if spec.variant is Variant.SHIFTED else Variant.STANDARD
    terms = list(_pair_terms(spec))
    for s, states in enumerate(sector_states(spec.n_sites)):
        positions[states] = np.arange(states.size)
        block = np.zeros((states.size, states.size))
        for bj, bk, w in terms:
            _add_pair(block, states, positions, bj, bk, w, build_variant)
        if spec.variant is Variant.FERROMAGNETIC:
            np.negative(block, out=block)
        block.setflags(write=False)
        blocks.append(SectorBlock(sector=s, states=states, block=block))
    return blocks


def top_eigenspace_basis(n_sites: int) -> np.ndarray:
    """Orthonormal basis of the permutation-symmetric subspace, as columns.

    Column s is the normalized uniform superposition of all basis states
    with exactly s up spins.  These N+1 vectors are annihilated by the
    SHIFTED Hamiltonian for every alpha, and their span does not depend
    on alpha.
    """
    dim = 2 ** n_sites
    basis = np.zeros((dim, n_sites + 1))
    for s, states in enumerate(sector_states(n_sites)):
        basis[states, s] = 1.0 / math.sqrt(states.size)
    basis.setflags(write=False)
    return basis


def translation_permutation(n_sites: int) -> np.ndarray:
    """Basis permutation of the cyclic site shift j -> j+1."""
    states = np.arange(2 ** n_sites, dtype=np.int64)
    top = (states >> (n_sites - 1)) & 1
    return ((states << 1) & (2 ** n_sites - 1)) | top


def spin_flip_permutation(n_sites: int) -> np.ndarray:
    """Basis permutation of the global up/down exchange (bit complement)."""
    states = np.arange(2 ** n_sites, dtype=np.int64)
    return (2 ** n_sites - 1) - states
