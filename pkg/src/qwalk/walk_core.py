"""Exact dense linear algebra for the walk: states, coins, shift, steps.

Basis convention, used everywhere in the package: the product basis vector
with coin value ``k`` (0-based) at vertex ``j`` sits at flat index
``k * N + j``.  Equivalently, a state's amplitudes reshape to a ``(d, N)``
array whose column ``j`` is the coin vector at vertex ``j``.  One step of
the walk applies a per-vertex coin unitary and then the coin-conditioned
vertex permutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .graph_model import WalkSpec

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class WalkState:
    """Unit complex amplitude vector over the d*N product basis."""

    d: int
    n: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != self.d * self.n:
            raise DimensionMismatchError(
                f"state has {amps.size} amplitudes, expected d*n = {self.d * self.n}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} is not 1 within {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    def table(self) -> np.ndarray:
        """Amplitudes as a (d, n) array; column j is the coin vector at j."""
        return self.amps.reshape(self.d, self.n)


@dataclass(frozen=True, eq=False)
class CoinOp:
    """One d x d unitary per vertex; blocks has shape (n, d, d).

    Blocks carrying representation noise (e.g. rounded on a JSON round
    trip) are snapped to their nearest unitary, so repeated steps cannot
    walk a state's norm out of tolerance.  Blocks beyond the tolerance are
    rejected.
    """

    blocks: np.ndarray

    def __post_init__(self):
        blocks = np.asarray(self.blocks, dtype=np.complex128)
        if blocks.ndim != 3 or blocks.shape[1] != blocks.shape[2]:
            raise DimensionMismatchError(f"blocks must be (n, d, d), got {blocks.shape}")
        eye = np.eye(blocks.shape[1])
        polished = None
        for j, q in enumerate(blocks):
            err = np.abs(q.conj().T @ q - eye).max()
            if err > UNITARY_TOL:
                raise ValueError(f"coin block at vertex {j} is not unitary (err {err:.2e})")
            if err > 1e-14:  # nearest unitary: polar factor via SVD
                u, _, vh = np.linalg.svd(q)
                if polished is None:
                    polished = blocks.copy()
                polished[j] = u @ vh
        if polished is not None:
            blocks = polished
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def d(self) -> int:
        return self.blocks.shape[1]

    @classmethod
    def identity(cls, d: int, n: int) -> "CoinOp":
        return cls(np.broadcast_to(np.eye(d, dtype=np.complex128), (n, d, d)).copy())

    @classmethod
    def from_blocks(cls, d: int, n: int, mapping: dict) -> "CoinOp":
        """Identity coin everywhere except the vertices listed in mapping."""
        blocks = np.broadcast_to(np.eye(d, dtype=np.complex128), (n, d, d)).copy()
        for j, q in mapping.items():
            blocks[j] = np.asarray(q, dtype=np.complex128)
        return cls(blocks)


@dataclass(frozen=True, eq=False)
class ShiftOp:
    """The coin-conditioned vertex permutation as a flat index map."""

    d: int
    n: int
    flat: np.ndarray  # image of each flat basis index

    def matrix(self) -> np.ndarray:
        """Dense 0/1 permutation matrix of size d*n."""
        size = self.d * self.n
        m = np.zeros((size, size), dtype=np.int64)
        m[self.flat, np.arange(size)] = 1
        return m


def shift_matrix(spec: WalkSpec) -> ShiftOp:
    """Block form of the shift: the k-th diagonal block is the matrix of P_k."""
    flat = np.concatenate([i * spec.n + p.map for i, p in enumerate(spec.perms)])
    flat.setflags(write=False)
    return ShiftOp(d=spec.d, n=spec.n, flat=flat)


def shift_order(spec: WalkSpec) -> int:
    """Least r >= 1 with the shift's r-th power equal to the identity."""
    return math.lcm(*(p.order() for p in spec.perms))


def coin_matrix(coin: CoinOp) -> np.ndarray:
    """Dense d*n x d*n matrix of a coin operation (block per vertex)."""
    d, n = coin.d, coin.n
    m = np.zeros((d * n, d * n), dtype=np.complex128)
    for j in range(n):
        rows = j + n * np.arange(d)
        m[np.ix_(rows, rows)] = coin.blocks[j]
    return m


def basis_state(spec: WalkSpec, coin: int, vertex: int) -> WalkState:
    """The product basis state with coin value ``coin`` (0-based) at ``vertex``."""
    amps = np.zeros(spec.d * spec.n, dtype=np.complex128)
    amps[coin * spec.n + vertex] = 1.0
    return WalkState(spec.d, spec.n, amps)


def state_from_vector(spec: WalkSpec, vec) -> WalkState:
    return WalkState(spec.d, spec.n, np.asarray(vec, dtype=np.complex128))


def _check_dims(state: WalkState, coin: CoinOp, spec: WalkSpec):
    if state.d != spec.d or state.n != spec.n:
        raise DimensionMismatchError(
            f"state is {state.d}x{state.n}, walk is {spec.d}x{spec.n}"
        )
    if coin.d != spec.d or coin.n != spec.n:
        raise DimensionMismatchError(
            f"coin is {coin.d}x{coin.n}, walk is {spec.d}x{spec.n}"
        )


def step(state: WalkState, coin: CoinOp, spec: WalkSpec) -> WalkState:
    """One step: coin blocks act per vertex, then the shift permutes vertices.

    Never materializes the d*n x d*n operators.
    """
    _check_dims(state, coin, spec)
    psi = state.table()
    mixed = np.einsum("jki,ij->kj", coin.blocks, psi)
    out = np.empty_like(mixed)
    for i, p in enumerate(spec.perms):
        out[i, p.map] = mixed[i]
    return WalkState(spec.d, spec.n, out.reshape(-1))


def apply_sequence(state: WalkState, seq, spec: WalkSpec) -> WalkState:
    """Fold ``step`` over an iterable of coin operations, first entry first."""
    for coin in seq:
        state = step(state, coin, spec)
    return state


def position_probabilities(state: WalkState) -> np.ndarray:
    """Per-vertex probabilities: coin degrees of freedom traced out."""
    return (np.abs(state.table()) ** 2).sum(axis=0)


def state_fidelity(a: WalkState, b: WalkState) -> float:
    """|<a|b>|; the global phase is quotiented out."""
    return float(abs(np.vdot(a.amps, b.amps)))
