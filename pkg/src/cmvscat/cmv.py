"""Banded unitary matrix of the shift in the defect-vector basis.

Basis indexing: 2n holds the diagonal defect vector of level 2n, 2n+1
the off-diagonal one of level 2n+1. The matrix factors as U = L M with
L (resp. M) block diagonal over index pairs (j, j+1) for odd (resp.
even) j, each block the rotation

    Theta_j = [[alpha_j, rho_j], [rho_j, -conj(alpha_j)]].

A window [-W, W] keeps the blocks that meet the window; the two blocks
straddling the edges are either compressed (`zero-tail`, exact
compression of the infinite matrix with vanishing tail coefficients) or
given |alpha| = 1 so the finite block decouples and is exactly unitary
(`decoupled`).
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DomainError, InputError, SolverError

BANDWIDTH = 2
BOUNDARY_TAGS = ("zero-tail", "decoupled")


def basis_label(index):
    """Defect-vector label of a basis index.

    Even index 2n holds the pair-K vector at offsets (n, n), odd index
    2n+1 the pair-Ktilde vector at offsets (n+1, n). Returns
    (kind, n, m) with kind in {"K", "Ktilde"}.
    """
    n, parity = divmod(index, 2)
    if parity == 0:
        return ("K", n, n)
    return ("Ktilde", n + 1, n)


@dataclass
class CmvMatrix:
    """Pentadiagonal window of the shift operator.

    `bands` is LAPACK band storage: bands[BANDWIDTH + i - j, j] = U[i, j]
    for |i - j| <= BANDWIDTH; array positions map to basis indices by
    pos = index + window.
    """

    window: int
    boundary: str
    bands: np.ndarray
    seq: object = field(repr=False, default=None)

    @property
    def dim(self):
        return 2 * self.window + 1

    def pos(self, basis_index):
        p = basis_index + self.window
        if not 0 <= p < self.dim:
            raise InputError(f"basis index {basis_index} outside window")
        return p

    def basis_vector(self, basis_index):
        v = np.zeros(self.dim, dtype=complex)
        v[self.pos(basis_index)] = 1.0
        return v

    def dense(self):
        D = self.dim
        out = np.zeros((D, D), dtype=complex)
        for off in range(-BANDWIDTH, BANDWIDTH + 1):
            js = np.arange(max(0, -off), D - max(0, off))
            out[js + off, js] = self.bands[BANDWIDTH + off, js]
        return out

    def entry(self, i, j):
        if abs(i - j) > BANDWIDTH:
            return 0j
        return complex(self.bands[BANDWIDTH + self.pos(i) - self.pos(j), self.pos(j)])


def _theta(alpha):
    rho = np.sqrt(1.0 - abs(alpha) ** 2)
    return np.array([[alpha, rho], [rho, -np.conj(alpha)]], dtype=complex)


def build_cmv(seq, W, boundary="zero-tail"):
    """Assemble the windowed matrix from a Verblunsky sequence.

    Parameters
    ----------
    seq : VerblunskySequence
        Coefficients; levels outside its window count as zero.
    W : int
        Basis window half-width; indices -W..W.
    boundary : str
        "zero-tail" or "decoupled" edge policy.

    Returns
    -------
    CmvMatrix
    """
    if boundary not in BOUNDARY_TAGS:
        raise InputError(f"boundary must be one of {BOUNDARY_TAGS}, got {boundary!r}")
    if W < 2:
        raise InputError(f"window must be at least 2, got {W}")
    D = 2 * W + 1

    def alpha_at(j):
        if boundary == "decoupled" and j in (-W - 1, W):
            return 1.0
        a = seq.alpha(j)
        if abs(a) >= 1.0:
            raise DomainError(f"|alpha_{j}| = {abs(a):.6g} >= 1")
        return a

    L = np.zeros((D, D), dtype=complex)
    M = np.zeros((D, D), dtype=complex)
    for j in range(-W - 1, W + 1):
        target = L if j % 2 else M
        th = _theta(alpha_at(j))
        rows = [j + W, j + 1 + W]  # positions of basis indices (j, j+1)
        inside = [r for r in (0, 1) if 0 <= rows[r] < D]
        sub = np.ix_([rows[r] for r in inside], [rows[r] for r in inside])
        target[sub] = th[np.ix_(inside, inside)]
    U = L @ M
    bands = np.zeros((2 * BANDWIDTH + 1, D), dtype=complex)
    for off in range(-BANDWIDTH, BANDWIDTH + 1):
        js = np.arange(max(0, -off), D - max(0, off))
        bands[BANDWIDTH + off, js] = U[js + off, js]
    return CmvMatrix(W, boundary, bands, seq)


def apply(U, v):
    """Banded matrix-vector product U v."""
    v = np.asarray(v, dtype=complex)
    D = U.dim
    if v.shape != (D,):
        raise InputError(f"vector length {v.shape} does not match window dim {D}")
    y = np.zeros(D, dtype=complex)
    for off in range(-BANDWIDTH, BANDWIDTH + 1):
        js = np.arange(max(0, -off), D - max(0, off))
        y[js + off] += U.bands[BANDWIDTH + off, js] * v[js]
    return y


def apply_adjoint(U, v):
    """Banded matrix-vector product U* v."""
    v = np.asarray(v, dtype=complex)
    D = U.dim
    if v.shape != (D,):
        raise InputError(f"vector length {v.shape} does not match window dim {D}")
    y = np.zeros(D, dtype=complex)
    for off in range(-BANDWIDTH, BANDWIDTH + 1):
        js = np.arange(max(0, -off), D - max(0, off))
        # U*[j, j+off'] with off' = -off: conj of the U band
        y[js] += np.conj(U.bands[BANDWIDTH + off, js]) * v[js + off]
    return y


def _shifted_bands(U, z, mode):
    """Band storage of I - z U* (star) or I - conj(z) U (plain)."""
    D = U.dim
    ab = np.zeros((2 * BANDWIDTH + 1, D), dtype=complex)
    ab[BANDWIDTH, :] = 1.0
    for off in range(-BANDWIDTH, BANDWIDTH + 1):
        js = np.arange(max(0, -off), D - max(0, off))
        if mode == "star":
            # (U*)[i, i+off] = conj(U[i+off, i]): flip the band
            ab[BANDWIDTH - off, js + off] -= z * np.conj(U.bands[BANDWIDTH + off, js])
        else:
            ab[BANDWIDTH + off, js] -= np.conj(z) * U.bands[BANDWIDTH + off, js]
    return ab


def _band_matvec(ab, v):
    D = v.shape[0]
    y = np.zeros(D, dtype=complex)
    for off in range(-BANDWIDTH, BANDWIDTH + 1):
        js = np.arange(max(0, -off), D - max(0, off))
        y[js + off] += ab[BANDWIDTH + off, js] * v[js]
    return y


def resolvent_solve(U, z, v, mode="star"):
    """Solve (I - z U*) x = v or (I - conj(z) U) x = v by banded LU.

    Parameters
    ----------
    U : CmvMatrix
    z : complex
        Point with |z| <= 1 - 1e-6.
    v : array
        Right-hand side over the window.
    mode : str
        "star" or "plain".

    Returns
    -------
    array
        Solution, with residual verified below 1e-10 * ||v||.
    """
    z = complex(z)
    if abs(z) > 1.0 - 1e-6:
        raise DomainError(f"|z| = {abs(z):.8f} too close to the unit circle")
    if mode not in ("star", "plain"):
        raise InputError(f"mode must be 'star' or 'plain', got {mode!r}")
    v = np.asarray(v, dtype=complex)
    ab = _shifted_bands(U, z, mode)
    x = sla.solve_banded((BANDWIDTH, BANDWIDTH), ab, v)
    res = float(np.linalg.norm(_band_matvec(ab, x) - v))
    vn = float(np.linalg.norm(v))
    if res > 1e-10 * max(vn, 1e-300):
        raise SolverError(
            f"resolvent residual {res:.3e} exceeds 1e-10 * ||v|| = {1e-10 * vn:.3e}"
        )
    return x


def unitarity_defect(U):
    """Max-norm of U*U - I over the policy's interior indices.

    Under zero-tail the outermost two column pairs at each edge are the
    known compression artifact and are excluded.
    """
    D = U.dim
    E = U.dense()
    E = E.conj().T @ E - np.eye(D)
    if U.boundary == "zero-tail":
        skip = 4
        E = E[skip : D - skip, skip : D - skip]
    return float(np.max(np.abs(E))) if E.size else 0.0


def dump_entries(U):
    """Nonzero entries as (row_index, col_index, value) triplets."""
    out = []
    D = U.dim
    for off in range(-BANDWIDTH, BANDWIDTH + 1):
        js = np.arange(max(0, -off), D - max(0, off))
        vals = U.bands[BANDWIDTH + off, js]
        for j, val in zip(js, vals):
            if val != 0:
                out.append((int(j + off - U.window), int(j - U.window), complex(val)))
    out.sort(key=lambda t: (t[0], t[1]))
    return out
