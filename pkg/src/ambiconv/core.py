"""Dense vectors and matrices, linear convolution, and the lifted operator.

The lifted operator maps an ``m x n`` matrix to the length ``m+n-1`` vector
of its anti-diagonal sums; on a rank-one matrix ``outer(x, y)`` it reproduces
the linear convolution ``convolve(x, y)``.  Everything here is pure and
operates on immutable float64 arrays; integer-valued inputs stay exact
because all values remain far below 2**53.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._kernels import convolve_raw, lift_raw


@dataclass(frozen=True)
class ToleranceProfile:
    """Scale-aware comparison tolerances.

    Every approximate comparison in the library uses the threshold
    ``abs_tol + rel_tol * scale`` where ``scale`` is the largest absolute
    entry among the operands.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")

    def threshold(self, *operands) -> float:
        scale = 0.0
        for op in operands:
            arr = np.asarray(op, dtype=float)
            if arr.size:
                scale = max(scale, float(np.max(np.abs(arr))))
        return self.abs_tol + self.rel_tol * scale


DEFAULT_TOL = ToleranceProfile()


def as_signal(x) -> np.ndarray:
    """Validate and return a signal as an immutable 1-D float64 array."""
    arr = np.array(x, dtype=float, copy=True)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"signal must be 1-D with length >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal entries must be finite")
    arr.flags.writeable = False
    return arr


def as_matrix(w) -> np.ndarray:
    """Validate and return a matrix as an immutable 2-D float64 array."""
    arr = np.array(w, dtype=float, copy=True)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"matrix must be 2-D with m, n >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    arr.flags.writeable = False
    return arr


def convolve(x, y) -> np.ndarray:
    """Linear convolution of two signals, output length m+n-1.

    Bilinear and commutative; exact on integer-valued inputs.
    """
    xs = as_signal(x)
    ys = as_signal(y)
    out = convolve_raw(xs, ys)
    out.flags.writeable = False
    return out


def outer(x, y) -> np.ndarray:
    """Rank-one lift of a signal pair: W(k,l) = x(k) * y(l)."""
    w = np.outer(as_signal(x), as_signal(y))
    w.flags.writeable = False
    return w


def lift_apply(w) -> np.ndarray:
    """Anti-diagonal sums of a matrix: z(j) = sum of W(k,l) over k+l = j+1.

    Satisfies ``lift_apply(outer(x, y)) == convolve(x, y)``.
    """
    ws = as_matrix(w)
    out = lift_raw(ws)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class LiftedConvOp:
    """The linear operator on m x n matrices that sums along anti-diagonals."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("operator dimensions must be >= 1")

    @property
    def output_len(self) -> int:
        return self.m + self.n - 1

    def apply(self, w) -> np.ndarray:
        ws = as_matrix(w)
        if ws.shape != (self.m, self.n):
            raise ValueError(
                f"matrix shape {ws.shape} does not match operator ({self.m}, {self.n})"
            )
        return lift_apply(ws)

    def basis(self) -> list[np.ndarray]:
        return hankel_basis(self.m, self.n)


def hankel_basis(m: int, n: int) -> list[np.ndarray]:
    """The m+n-1 Hankel indicator matrices decomposing the lifted operator.

    Element j (0-based) has ones exactly on the j-th anti-diagonal, so
    ``lift_apply(W)[j] == <basis[j], W>`` (trace inner product) and the
    supports are pairwise disjoint.
    """
    if m < 1 or n < 1:
        raise ValueError("dimensions must be >= 1")
    rows = np.arange(m)[:, None]
    cols = np.arange(n)[None, :]
    basis = []
    for j in range(m + n - 1):
        s = (rows + cols == j).astype(float)
        s.flags.writeable = False
        basis.append(s)
    return basis


def antidiagonal_shift(wp) -> tuple[np.ndarray, np.ndarray]:
    """Embed a matrix in the top-right and bottom-left corner blocks.

    Both outputs carry the same entries along each anti-diagonal, so their
    anti-diagonal sums agree exactly (pure re-indexing, no arithmetic):
    ``lift_apply(w1) == lift_apply(w2) == (0, lift_apply(wp), 0)``.
    """
    ws = as_matrix(wp)
    mp, np_ = ws.shape
    w1 = np.zeros((mp + 1, np_ + 1))
    w1[:mp, 1:] = ws
    w2 = np.zeros((mp + 1, np_ + 1))
    w2[1:, :np_] = ws
    w1.flags.writeable = False
    w2.flags.writeable = False
    return w1, w2


def rank_estimate(w, tol: ToleranceProfile | None = None) -> int:
    """Numerical rank via column-pivoted QR.

    Counts pivots of the triangular factor whose magnitude exceeds the
    tol-scaled threshold; exact on modest integer-valued matrices.
    """
    ws = as_matrix(w)
    tol = tol or DEFAULT_TOL
    if not ws.any():
        return 0
    r = scipy.linalg.qr(ws, mode="r", pivoting=True)[0]
    pivots = np.abs(np.diag(r))
    return int(np.count_nonzero(pivots > tol.threshold(ws)))


# --- JSON wire formats -----------------------------------------------------
#
# Signals:  {"len": d, "entries": [...]}
# Matrices: {"m": m, "n": n, "entries": [[row], ...]}


def signal_to_json(x) -> dict:
    xs = as_signal(x)
    return {"len": int(xs.size), "entries": [float(v) for v in xs]}


def signal_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "entries" not in obj or "len" not in obj:
        raise ValueError('signal JSON must be {"len": d, "entries": [...]}')
    x = as_signal(obj["entries"])
    if int(obj["len"]) != x.size:
        raise ValueError(f'signal JSON "len" {obj["len"]} != entry count {x.size}')
    return x


def matrix_to_json(w) -> dict:
    ws = as_matrix(w)
    return {
        "m": int(ws.shape[0]),
        "n": int(ws.shape[1]),
        "entries": [[float(v) for v in row] for row in ws],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or not {"m", "n", "entries"} <= set(obj):
        raise ValueError('matrix JSON must be {"m": m, "n": n, "entries": [[...], ...]}')
    w = as_matrix(obj["entries"])
    if (int(obj["m"]), int(obj["n"])) != w.shape:
        raise ValueError(
            f'matrix JSON dims ({obj["m"]}, {obj["n"]}) != entry shape {w.shape}'
        )
    return w
