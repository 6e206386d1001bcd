"""Numerical generation of the walk's dynamical operator algebra.

The admissible generators are elementary skew-Hermitian matrices supported
on the joint-orbit pattern; repeatedly bracketing them and tracking the real
span yields the algebra's dimension, which the structure report predicts
from the reduced-connectivity components alone.  Skew-Hermitian matrices of
side s are vectorized into R^(s^2): imaginary diagonal, then real and
imaginary parts of the upper triangle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .controllability import analyze, joint_orbit
from .errors import CapExceededError, ToleranceDegenerateError
from .graph_model import WalkSpec

DEFAULT_TOL = 1e-9
DEFAULT_DIM_CAP = 24
_ZERO_NORM = 1e-14


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """Elementary skew-Hermitian generators on the admissible support.

    ``positions[i]`` is the ``((l, r), (m, s))`` position pair of ``mats[i]``
    with 1-based coin labels; diagonal generators repeat their position.
    """

    mats: list
    positions: list
    side: int


@dataclass(frozen=True)
class LieClosureResult:
    dim: int
    predicted: int | None
    match: bool | None
    iterations: int
    block_diagonal_ok: bool | None = None


def generator_basis(spec: WalkSpec) -> GeneratorBasis:
    """Build the elementary generating set.

    One imaginary diagonal generator per basis position, then for every
    admissible unordered off-diagonal position pair two generators
    (E_ab - E_ba and i(E_ab + E_ba)).  A position pair ((l, r), (m, s)) with
    l != m is admissible iff (r, s) lies in the (l, m) joint orbit; within a
    single coin block only the diagonal is admissible, so no off-diagonal
    generator arises there.
    """
    d, n = spec.d, spec.n
    side = d * n
    orbits = {
        (l, m): joint_orbit(spec, l, m).pairs
        for l in range(1, d + 1)
        for m in range(l + 1, d + 1)
    }
    mats, positions = [], []
    for a in range(side):
        g = np.zeros((side, side), dtype=np.complex128)
        g[a, a] = 1j
        l, r = divmod(a, n)
        mats.append(g)
        positions.append(((l + 1, r), (l + 1, r)))
    for a in range(side):
        l, r = divmod(a, n)
        for b in range(a + 1, side):
            m, s = divmod(b, n)
            if l == m:
                continue
            if (r, s) not in orbits[(l + 1, m + 1)]:
                continue
            real = np.zeros((side, side), dtype=np.complex128)
            real[a, b] = 1.0
            real[b, a] = -1.0
            imag = np.zeros((side, side), dtype=np.complex128)
            imag[a, b] = 1j
            imag[b, a] = 1j
            mats.extend([real, imag])
            positions.extend([((l + 1, r), (m + 1, s))] * 2)
    return GeneratorBasis(mats=mats, positions=positions, side=side)


def _vectorize(mat: np.ndarray, iu) -> np.ndarray:
    return np.concatenate([mat.diagonal().imag, mat[iu].real, mat[iu].imag])


def _devectorize(vec: np.ndarray, side: int, iu) -> np.ndarray:
    k = iu[0].size
    upper = np.zeros((side, side), dtype=np.complex128)
    upper[iu] = vec[side:side + k] + 1j * vec[side + k:]
    mat = upper - upper.conj().T
    mat[np.diag_indices(side)] = 1j * vec[:side]
    return mat


class _SpanBuilder:
    """Orthonormal real basis of the running span, with rank guards."""

    def __init__(self, side: int, tol: float):
        self.side = side
        self.tol = tol
        self.iu = np.triu_indices(side, 1)
        self.rows = np.zeros((0, side * side))
        self.mats: list[np.ndarray] = []

    @property
    def dim(self) -> int:
        return len(self.mats)

    def offer(self, mat: np.ndarray) -> bool:
        """Project a candidate against the span; extend the basis when the
        residual clears the tolerance.  Two projection passes keep the basis
        orthonormal; residuals within a factor 10 of the threshold abort."""
        vec = _vectorize(mat, self.iu)
        pre = float(np.linalg.norm(vec))
        if pre < _ZERO_NORM:
            return False
        for _ in range(2):
            vec = vec - self.rows.T @ (self.rows @ vec)
        residual = float(np.linalg.norm(vec))
        threshold = self.tol * pre
        if threshold / 10.0 <= residual <= threshold * 10.0:
            raise ToleranceDegenerateError(
                f"residual {residual:.3e} within a factor 10 of threshold "
                f"{threshold:.3e}; rank decision ambiguous"
            )
        if residual <= threshold:
            return False
        row = vec / residual
        self.rows = np.vstack([self.rows, row])
        self.mats.append(_devectorize(row, self.side, self.iu))
        return True


def lie_closure_dim(basis: GeneratorBasis, tol: float = DEFAULT_TOL) -> LieClosureResult:
    """Dimension of the smallest bracket-closed real span of the generators.

    Deterministic: generators seed the span in their given order, then each
    round brackets the newest elements against the whole basis oldest-first
    until nothing new appears.  Stops early at the full dimension
    (side^2), beyond which the span cannot grow.
    """
    dim, iterations, _ = _closure(basis, tol)
    return LieClosureResult(dim=dim, predicted=None, match=None, iterations=iterations)


def _closure(basis: GeneratorBasis, tol: float):
    if not basis.mats:
        raise ValueError("empty generator basis")
    side = basis.side
    full = side * side
    span = _SpanBuilder(side, tol)
    frontier = []
    for mat in basis.mats:
        if span.offer(mat):
            frontier.append(span.dim - 1)
    iterations = 0
    while frontier and span.dim < full:
        iterations += 1
        new: list[int] = []
        for f in frontier:
            if span.dim >= full:
                break
            fm = span.mats[f]
            for b in range(span.dim):
                if b == f:
                    continue
                bm = span.mats[b]
                if span.offer(fm @ bm - bm @ fm):
                    new.append(span.dim - 1)
                if span.dim >= full:
                    break
        frontier = new
    return span.dim, iterations, span.mats


def verify_structure(
    spec: WalkSpec,
    cap: int = DEFAULT_DIM_CAP,
    tol: float = DEFAULT_TOL,
) -> LieClosureResult:
    """Compute the closure dimension and compare it with the prediction.

    Also checks the block structure: with basis indices reordered by
    reduced-connectivity component, every closure element must be
    block-diagonal (off-block magnitude below 1e-9).
    """
    side = spec.d * spec.n
    if side > cap:
        raise CapExceededError(f"d*n = {side} exceeds cap {cap}")
    report = analyze(spec)
    dim, iterations, mats = _closure(generator_basis(spec), tol)

    order = []
    for comp in report.components:
        for l in range(spec.d):
            order.extend(l * spec.n + r for r in comp)
    order = np.asarray(order)
    block_of = np.empty(side, dtype=np.int64)
    pos = 0
    for ci, comp in enumerate(report.components):
        width = spec.d * len(comp)
        block_of[pos:pos + width] = ci
        pos += width
    off_block = block_of[:, None] != block_of[None, :]
    worst = 0.0
    for mat in mats:
        reordered = mat[np.ix_(order, order)]
        worst = max(worst, float(np.abs(reordered[off_block]).max(initial=0.0)))
    block_ok = worst < 1e-9

    return LieClosureResult(
        dim=dim,
        predicted=report.predicted_lie_dim,
        match=dim == report.predicted_lie_dim,
        iterations=iterations,
        block_diagonal_ok=block_ok,
    )
