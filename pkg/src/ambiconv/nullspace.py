"""Constructors, membership test, and structural classifier for the
rank-two kernel of the lifted convolution operator.

Three families are constructed explicitly:

* ``n0_element``  -- the bordered-product family (two shifted copies of a
  rank-one block with opposite signs),
* ``n2_lift`` / ``n2_generate`` -- the dimension-recursive family that embeds
  a lower-dimensional kernel element into the top-right and bottom-left
  corner blocks,
* ``m2_element`` -- the skew-symmetric square exception family whose corner
  entries vanish.

``classify`` runs the converse factorization: given a kernel element with a
nonzero corner it recovers a certificate of the generating family and
reports the refactorization residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

from .core import (
    DEFAULT_TOL,
    ToleranceProfile,
    antidiagonal_shift,
    as_matrix,
    as_signal,
    lift_apply,
    rank_estimate,
)


# --- certificates ------------------------------------------------------------


@dataclass(frozen=True)
class N0Certificate:
    """Parameters (u, v) of a bordered-product kernel element."""

    kind: ClassVar[str] = "n0"
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class N2Certificate:
    """Corner-block factors plus the certificate of the inner residual.

    The residual ``u1 v1^T + u2 v2^T`` must itself be a (nonzero) element of
    the rank-two kernel one dimension down.
    """

    kind: ClassVar[str] = "n2"
    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    inner: "NullspaceCertificate"


@dataclass(frozen=True)
class M2Certificate:
    """Parameters (u, lambda) of the skew-symmetric square exception family."""

    kind: ClassVar[str] = "m2"
    u: np.ndarray
    lam: float


@dataclass(frozen=True)
class RawCertificate:
    """Kernel membership without a parametric factorization (both corner
    entries vanish)."""

    kind: ClassVar[str] = "raw"


NullspaceCertificate = Union[N0Certificate, N2Certificate, M2Certificate, RawCertificate]


@dataclass(frozen=True)
class ClassifiedElement:
    matrix: np.ndarray
    certificate: NullspaceCertificate
    refactorization_residual: float


def certificate_to_json(cert: NullspaceCertificate) -> dict:
    if isinstance(cert, N0Certificate):
        return {"kind": "n0", "u": list(map(float, cert.u)), "v": list(map(float, cert.v))}
    if isinstance(cert, N2Certificate):
        return {
            "kind": "n2",
            "u1": list(map(float, cert.u1)),
            "u2": list(map(float, cert.u2)),
            "v1": list(map(float, cert.v1)),
            "v2": list(map(float, cert.v2)),
            "inner": certificate_to_json(cert.inner),
        }
    if isinstance(cert, M2Certificate):
        return {"kind": "m2", "u": list(map(float, cert.u)), "lambda": float(cert.lam)}
    if isinstance(cert, RawCertificate):
        return {"kind": "raw"}
    raise TypeError(f"not a certificate: {cert!r}")


def certificate_from_json(obj) -> NullspaceCertificate:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError('certificate JSON must carry a "kind" discriminator')
    kind = obj["kind"]
    if kind == "n0":
        return N0Certificate(u=as_signal(obj["u"]), v=as_signal(obj["v"]))
    if kind == "n2":
        return N2Certificate(
            u1=as_signal(obj["u1"]),
            u2=as_signal(obj["u2"]),
            v1=as_signal(obj["v1"]),
            v2=as_signal(obj["v2"]),
            inner=certificate_from_json(obj["inner"]),
        )
    if kind == "m2":
        return M2Certificate(u=as_signal(obj["u"]), lam=float(obj["lambda"]))
    if kind == "raw":
        return RawCertificate()
    raise ValueError(f"unknown certificate kind: {kind!r}")


def certificate_to_matrix(cert: NullspaceCertificate) -> np.ndarray:
    """Rebuild the matrix a certificate describes (raw certificates carry
    no parameters and cannot be rebuilt)."""
    if isinstance(cert, N0Certificate):
        return n0_element(cert.u, cert.v)
    if isinstance(cert, N2Certificate):
        return _corner_embed(np.outer(cert.u1, cert.v1), np.outer(cert.u2, cert.v2))
    if isinstance(cert, M2Certificate):
        return m2_element(cert.u, cert.lam)
    raise ValueError("raw certificates have no parametric reconstruction")


# --- constructors ------------------------------------------------------------


def n0_element(u, v) -> np.ndarray:
    """Bordered-product kernel element Q(k,l) = u(k) v(l-1) - u(k-1) v(l).

    Out-of-range indices read as zero.  The matrix is the difference of the
    two corner embeddings of ``outer(u, v)``, so its anti-diagonal sums
    cancel pairwise (exactly for integer-valued inputs) and its rank is at
    most two.
    """
    top, bottom = antidiagonal_shift(np.outer(as_signal(u), as_signal(v)))
    q = top - bottom
    q.flags.writeable = False
    return q


def _corner_embed(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Top-right embedding of ``a`` plus bottom-left embedding of ``b``."""
    if a.shape != b.shape:
        raise ValueError(f"block shapes differ: {a.shape} vs {b.shape}")
    mp, np_ = a.shape
    y = np.zeros((mp + 1, np_ + 1))
    y[:mp, 1:] = a
    y[1:, :np_] += b
    y.flags.writeable = False
    return y


def n2_lift(u1, u2, v1, v2, tol: ToleranceProfile | None = None) -> np.ndarray:
    """Embed u1 v1^T top-right and u2 v2^T bottom-left, one dimension up.

    Requires the inner residual ``u1 v1^T + u2 v2^T`` to lie in the kernel
    one dimension down (checked against the anti-diagonal sums within
    ``rel_tol`` of its scale).
    """
    tol = tol or DEFAULT_TOL
    u1s, u2s = as_signal(u1), as_signal(u2)
    v1s, v2s = as_signal(v1), as_signal(v2)
    if u1s.size != u2s.size or v1s.size != v2s.size:
        raise ValueError("factor lengths must agree pairwise")
    inner = np.outer(u1s, v1s) + np.outer(u2s, v2s)
    image = lift_apply(inner)
    bound = tol.rel_tol * float(np.max(np.abs(inner))) if inner.any() else 0.0
    if np.max(np.abs(image)) > bound:
        raise ValueError(
            "inner residual u1 v1^T + u2 v2^T is not in the lower-dimensional "
            f"kernel (|image| = {np.max(np.abs(image)):.3e} > {bound:.3e})"
        )
    return _corner_embed(np.outer(u1s, v1s), np.outer(u2s, v2s))


def _pow2_rebalance(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Power-of-two rescaling is exact in binary floating point, so the outer
    # product u v^T is preserved bit for bit while scales stay bounded.
    peak = float(np.max(np.abs(u)))
    if peak == 0.0:
        return u, v
    s = 2.0 ** round(np.log2(peak))
    return u / s, v * s


def _draw_vector(rng: np.random.Generator, size: int, attempts: int = 64) -> np.ndarray:
    for _ in range(attempts):
        vec = rng.uniform(-1.0, 1.0, size)
        if np.max(np.abs(vec)) >= 0.3:
            return vec
    raise RuntimeError(f"no usable random vector after {attempts} draws")


def _draw_mixing(rng: np.random.Generator, attempts: int = 64) -> np.ndarray:
    for _ in range(attempts):
        a = rng.uniform(-1.0, 1.0, (2, 2))
        if abs(np.linalg.det(a)) >= 0.2:
            return a
    raise RuntimeError(f"no invertible mixing matrix after {attempts} draws")


def _transpose_certificate(cert: NullspaceCertificate) -> NullspaceCertificate:
    # n0(u, v)^T = n0(v, -u); corner embeddings swap under transposition.
    if isinstance(cert, N0Certificate):
        return N0Certificate(u=cert.v, v=as_signal(-np.asarray(cert.u)))
    if isinstance(cert, N2Certificate):
        return N2Certificate(
            u1=cert.v2,
            u2=cert.v1,
            v1=cert.u2,
            v2=cert.u1,
            inner=_transpose_certificate(cert.inner),
        )
    return cert


def n2_generate(
    m: int, n: int, seed: int, tol: ToleranceProfile | None = None
) -> tuple[np.ndarray, NullspaceCertificate]:
    """Seeded random element of the dimension-recursive kernel family.

    Starts from a random bordered-product element in dimensions
    ``(2, n-m+2)`` and applies a random invertible 2x2 mixing followed by the
    corner-block embedding, ``m-2`` times (assuming ``n >= m``; the other
    orientation is handled by transposition).  Returns the matrix together
    with the fully nested certificate.  ``m == 2`` requests recursion depth
    zero and yields a plain bordered-product element.
    """
    if m < 2 or n < 2:
        raise ValueError("dimensions must be >= 2")
    if m > n:
        mat, cert = n2_generate(n, m, seed, tol)
        mat_t = mat.T.copy()
        mat_t.flags.writeable = False
        return mat_t, _transpose_certificate(cert)

    rng = np.random.default_rng(seed)
    for _ in range(64):
        matrix, cert = _n2_generate_once(m, n, rng)
        corner = max(abs(matrix[m - 1, 0]), abs(matrix[0, n - 1]))
        if corner > 1e-6 * np.max(np.abs(matrix)):
            return matrix, cert
    raise RuntimeError("no generated element with a usable corner entry after 64 draws")


def _n2_generate_once(
    m: int, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, NullspaceCertificate]:
    u0 = _draw_vector(rng, 1)
    v0 = _draw_vector(rng, n - m + 1)
    cert: NullspaceCertificate = N0Certificate(u=as_signal(u0), v=as_signal(v0))
    c1, c2 = np.append(u0, 0.0), np.insert(-u0, 0, 0.0)
    r1, r2 = np.insert(v0, 0, 0.0), np.append(v0, 0.0)
    for _ in range(m - 2):
        a = _draw_mixing(rng)
        cols = np.column_stack([c1, c2]) @ a
        rows = np.linalg.solve(a, np.vstack([r1, r2]))
        u1, v1 = _pow2_rebalance(cols[:, 0], rows[0])
        u2, v2 = _pow2_rebalance(cols[:, 1], rows[1])
        cert = N2Certificate(
            u1=as_signal(u1), u2=as_signal(u2), v1=as_signal(v1), v2=as_signal(v2), inner=cert
        )
        c1, c2 = np.append(u1, 0.0), np.insert(u2, 0, 0.0)
        r1, r2 = np.insert(v1, 0, 0.0), np.append(v2, 0.0)
    matrix = np.outer(c1, r1) + np.outer(c2, r2)
    matrix.flags.writeable = False
    return matrix, cert


def m2_element(u, lam: float) -> np.ndarray:
    """Skew-symmetric square kernel element with vanishing corner entries.

    Row/column 1 carry ``-u``/``u``; row/column n carry ``-lam*u``/``lam*u``.
    Skew-symmetry makes every anti-diagonal sum cancel exactly; the rank is
    exactly two for nonzero ``u`` and ``lam``.
    """
    us = as_signal(u)
    if not us.any():
        raise ValueError("u must be nonzero")
    lam = float(lam)
    if lam == 0.0:
        raise ValueError("lambda must be nonzero")
    n = us.size + 2
    x = np.zeros((n, n))
    x[0, 1 : n - 1] = -us
    x[1 : n - 1, 0] = us
    x[1 : n - 1, n - 1] = lam * us
    x[n - 1, 1 : n - 1] = -lam * us
    x.flags.writeable = False
    return x


# --- kernel basis and membership ---------------------------------------------


def kernel_basis(m: int, n: int) -> list[np.ndarray]:
    """Basis of the full (rank-unconstrained) kernel of the lifted operator.

    Elimination on the ``(m+n-1) x (mn)`` coefficient matrix is closed-form
    because the constraint rows have pairwise disjoint supports: within each
    anti-diagonal the first cell is the pivot, and every further cell yields
    one basis element (+1 on the cell, -1 on the pivot).  Exactly
    ``mn - (m+n-1)`` elements; empty for ``m == 1`` or ``n == 1``.
    """
    if m < 1 or n < 1:
        raise ValueError("dimensions must be >= 1")
    basis = []
    for j in range(m + n - 1):
        cells = [(k, j - k) for k in range(max(0, j - n + 1), min(m - 1, j) + 1)]
        pivot = cells[0]
        for cell in cells[1:]:
            q = np.zeros((m, n))
            q[cell] = 1.0
            q[pivot] = -1.0
            q.flags.writeable = False
            basis.append(q)
    return basis


def is_in_rank2_nullspace(w, tol: ToleranceProfile | None = None) -> bool:
    """True iff rank <= 2 and the anti-diagonal sums vanish at tol scale."""
    ws = as_matrix(w)
    tol = tol or DEFAULT_TOL
    if rank_estimate(ws, tol) > 2:
        return False
    return float(np.max(np.abs(lift_apply(ws)))) <= tol.threshold(ws)


# --- structural classifier ---------------------------------------------------


def classify(w, tol: ToleranceProfile | None = None) -> ClassifiedElement:
    """Recover a generating certificate for a rank-two kernel element.

    Follows the converse factorization: a kernel element with a nonzero
    bottom-left (or, symmetrically, top-right) corner splits into corner
    embeddings of two rank-one blocks; the classification is ``n0`` when the
    inner residual vanishes, ``n2`` when it is a nonzero element of the
    lower-dimensional kernel, and ``raw`` when both corner entries vanish
    (the exception set, which the factorization does not cover).
    """
    ws = as_matrix(w)
    tol = tol or DEFAULT_TOL
    if not ws.any():
        raise ValueError("cannot classify the zero matrix")
    if not is_in_rank2_nullspace(ws, tol):
        raise ValueError("matrix is not in the rank-two kernel at this tolerance")
    cert = _classify_cert(ws, tol)
    if isinstance(cert, RawCertificate):
        residual = 0.0
    else:
        residual = float(np.max(np.abs(ws - certificate_to_matrix(cert))))
    return ClassifiedElement(matrix=ws, certificate=cert, refactorization_residual=residual)


def _classify_cert(w: np.ndarray, tol: ToleranceProfile) -> NullspaceCertificate:
    m, n = w.shape
    thresh = tol.threshold(w)

    # Two-row (two-column) elements always factor as bordered products:
    # row 1 is (0, v) and row 2 is (-v, 0), regardless of corner entries.
    if m == 2:
        return N0Certificate(u=as_signal([1.0]), v=as_signal(w[0, 1:]))
    if n == 2:
        return _transpose_certificate(_classify_cert(np.ascontiguousarray(w.T), tol))

    corner_bl = abs(w[m - 1, 0])
    corner_tr = abs(w[0, n - 1])
    if corner_bl <= thresh and corner_tr <= thresh:
        return RawCertificate()
    if corner_bl <= thresh:
        return _transpose_certificate(_classify_cert(np.ascontiguousarray(w.T), tol))

    # Zero first row: strip it, classify one dimension down, re-pad u.
    if np.max(np.abs(w[0])) <= thresh:
        return _pad_first_u(_classify_cert(w[1:], tol))

    u2 = w[1:, 0]
    j0 = None
    for j in range(1, n):
        pair = np.column_stack([w[:, 0], w[:, j]])
        if np.linalg.svd(pair, compute_uv=False)[-1] > thresh:
            j0 = j
            break
    if j0 is None:
        raise ValueError("no independent column pair: matrix is numerically rank one")

    if abs(w[m - 1, j0]) <= thresh:
        u1 = w[: m - 1, j0].copy()
    else:
        alpha = w[m - 1, 0] / w[m - 1, j0]
        u1 = alpha * w[: m - 1, j0] - w[: m - 1, 0]

    # Columns of W live in span{(u1, 0), (0, u2)}; solve for the row factors.
    basis = np.zeros((m, 2))
    basis[: m - 1, 0] = u1
    basis[1:, 1] = u2
    coeffs = np.linalg.lstsq(basis, w, rcond=None)[0]
    v1 = coeffs[0, 1:]  # leading entry of the first row factor is structurally 0
    v2 = coeffs[1, : n - 1]  # trailing entry of the second row factor likewise

    inner = np.outer(u1, v1) + np.outer(u2, v2)
    if float(np.max(np.abs(inner))) <= thresh:
        return N0Certificate(u=as_signal(u1), v=as_signal(v1))
    return N2Certificate(
        u1=as_signal(u1),
        u2=as_signal(u2),
        v1=as_signal(v1),
        v2=as_signal(v2),
        inner=_classify_cert(inner, tol),
    )


def _pad_first_u(cert: NullspaceCertificate) -> NullspaceCertificate:
    if isinstance(cert, N0Certificate):
        return N0Certificate(u=as_signal(np.insert(cert.u, 0, 0.0)), v=cert.v)
    if isinstance(cert, N2Certificate):
        return N2Certificate(
            u1=as_signal(np.insert(cert.u1, 0, 0.0)),
            u2=as_signal(np.insert(cert.u2, 0, 0.0)),
            v1=cert.v1,
            v2=cert.v2,
            inner=_pad_first_u(cert.inner),
        )
    return cert
