"""Finite sections of the weighted two-component space attached to R.

The space is spanned by two generator families,

    analytic      g'_k  = [1; R] t^k,
    anti-analytic g''_l = [Rbar; 1] tbar^l,

which are orthonormal within each family; the only coupling is the
cross Gram <g'_k, g''_l> = c_{-(k+l)}, a Hankel form in the Fourier
coefficients c_j of R. Everything here works in generator coordinates
over a finite index window, and the defect vectors come out of plain
Hermitian positive-definite solves against that Gram.

Gram orientation used throughout: G[a, b] = <s_b, s_a>, so that for
coordinate vectors u, v the inner product <u, v> is v^H G u.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg.lapack import zpocon

from .circle import LaurentSeries, synthesize, szego_check
from .errors import (
    ConditioningError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    InputError,
    ResolutionError,
)

COND_CAP = 1e12
DEGENERACY_FLOOR = 1e-12


@dataclass(frozen=True)
class GeneratorFrame:
    """Index window of a finite section at offsets (n, m) with N members per family.

    Analytic indices run n..n+N-1, anti-analytic m+1..m+N. Frames at
    (n, m) and (n+1, m) share all generators except g'_n.
    """

    n: int
    m: int
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise InputError(f"section size must be positive, got {self.N}")

    @property
    def analytic_indices(self):
        return np.arange(self.n, self.n + self.N)

    @property
    def antianalytic_indices(self):
        return np.arange(self.m + 1, self.m + self.N + 1)

    @property
    def level(self):
        return self.n + self.m


@dataclass
class LrElement:
    """Element in generator coordinates: sum x_k g'_k + sum y_l g''_l."""

    frame: GeneratorFrame
    x: np.ndarray
    y: np.ndarray
    scattering: object

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=complex)
        self.y = np.asarray(self.y, dtype=complex)
        if self.x.shape != (self.frame.N,) or self.y.shape != (self.frame.N,):
            raise InputError("coordinate lengths must equal the frame size")

    def coords(self):
        return np.concatenate([self.x, self.y])

    def __mul__(self, scalar):
        return LrElement(self.frame, self.x * scalar, self.y * scalar, self.scattering)

    __rmul__ = __mul__

    def __add__(self, other):
        return _combine(self, other, 1.0)

    def __sub__(self, other):
        return _combine(self, other, -1.0)

    def norm(self):
        return float(np.sqrt(max(inner_product(self, self).real, 0.0)))


def generator(R, kind, index, frame):
    """Unit coordinate element g'_index or g''_index over the given frame."""
    x = np.zeros(frame.N, dtype=complex)
    y = np.zeros(frame.N, dtype=complex)
    if kind == "analytic":
        offset = index - frame.n
        if not 0 <= offset < frame.N:
            raise InputError(f"analytic index {index} not in frame {frame}")
        x[offset] = 1.0
    elif kind == "antianalytic":
        offset = index - frame.m - 1
        if not 0 <= offset < frame.N:
            raise InputError(f"anti-analytic index {index} not in frame {frame}")
        y[offset] = 1.0
    else:
        raise InputError(f"unknown generator kind {kind!r}")
    return LrElement(frame, x, y, R)


def _cross_from_coeffs(R, ks, ls):
    # cross[i, j] = c_{-(ks[i] + ls[j])}; Hankel in i + j by construction
    smin = int(ks[0] + ls[0])
    smax = int(ks[-1] + ls[-1])
    carr = R.coeff_range(-smax, -smin)  # indices -smax .. -smin
    s = ks[:, None] + ls[None, :]
    return carr[smax - s]


@dataclass
class GramBlocks:
    """Cross block of the frame Gram; the diagonal blocks are identity."""

    frame: GeneratorFrame
    cross: np.ndarray
    cross_norm: float

    def entry(self, k, l):
        return complex(
            self.cross[k - self.frame.n, l - self.frame.m - 1]
        )


def gram_matrix(R, frame):
    """Assemble the Hankel cross block for a frame.

    Requires the Szego check to pass and the needed coefficient indices
    to be resolved. The full Gram [[I, cross-bar], [cross-T, I]] has
    smallest eigenvalue 1 - ||cross|| >= 1 - sup|R|; a cross norm above
    1 would contradict contractivity and raises.
    """
    if not szego_check(R).passes:
        raise DomainError("scattering function fails the Szego condition on the grid")
    cross = _cross_from_coeffs(R, frame.analytic_indices, frame.antianalytic_indices)
    norm = float(np.linalg.norm(cross, 2))
    if norm > 1.0 + 1e-10:
        raise ResolutionError(
            f"cross block norm {norm:.6g} exceeds 1; coefficients are aliased, "
            "increase the grid size M"
        )
    return GramBlocks(frame, cross, norm)


def _full_gram(R, ks, ls):
    # G[a, b] = <s_b, s_a> over the ordered set [g'_{ks}, g''_{ls}]
    cross = _cross_from_coeffs(R, ks, ls)
    na, nb = len(ks), len(ls)
    G = np.eye(na + nb, dtype=complex)
    G[:na, na:] = np.conj(cross)
    G[na:, :na] = cross.T
    return G


def frame_gram(R, frame):
    return _full_gram(R, frame.analytic_indices, frame.antianalytic_indices)


def _hull_frame(a, b):
    n = min(a.n, b.n)
    m = min(a.m, b.m)
    k_hi = max(a.n + a.N - 1, b.n + b.N - 1)
    l_hi = max(a.m + a.N, b.m + b.N)
    return GeneratorFrame(n, m, max(k_hi - n + 1, l_hi - m))


def embed(u, frame):
    """Re-express u over a containing frame (zero padding on new generators)."""
    src = u.frame
    if (
        frame.n > src.n
        or frame.n + frame.N < src.n + src.N
        or frame.m > src.m
        or frame.m + frame.N < src.m + src.N
    ):
        raise InputError(f"frame {frame} does not contain {src}")
    x = np.zeros(frame.N, dtype=complex)
    y = np.zeros(frame.N, dtype=complex)
    x[src.n - frame.n : src.n - frame.n + src.N] = u.x
    y[src.m - frame.m : src.m - frame.m + src.N] = u.y
    return LrElement(frame, x, y, u.scattering)


def _combine(u, v, sign):
    if u.scattering is not v.scattering:
        raise InputError("elements belong to different scattering functions")
    if u.frame == v.frame:
        return LrElement(u.frame, u.x + sign * v.x, u.y + sign * v.y, u.scattering)
    hull = _hull_frame(u.frame, v.frame)
    ue, ve = embed(u, hull), embed(v, hull)
    return LrElement(hull, ue.x + sign * ve.x, ue.y + sign * ve.y, u.scattering)


def inner_product(u, v):
    """Weighted inner product <u, v>, rebasing to a common frame if needed."""
    if u.scattering is not v.scattering:
        raise InputError("elements belong to different scattering functions")
    if u.frame != v.frame:
        hull = _hull_frame(u.frame, v.frame)
        u, v = embed(u, hull), embed(v, hull)
    G = frame_gram(u.scattering, u.frame)
    return complex(np.conj(v.coords()) @ (G @ u.coords()))


def shift(u, p):
    """Exact action of multiplication by t^p: g'_k -> g'_{k+p}, g''_l -> g''_{l-p}."""
    f = u.frame
    return LrElement(
        GeneratorFrame(f.n + p, f.m - p, f.N), u.x.copy(), u.y.copy(), u.scattering
    )


def evaluate(u, grid):
    """Sample the two component functions of u on a grid.

    Components are (sum x_k t^k + Rbar sum y_l tbar^l,
                    R sum x_k t^k + sum y_l tbar^l).
    """
    f = u.frame
    lo = min(int(f.analytic_indices[0]), -int(f.antianalytic_indices[-1]))
    hi = max(int(f.analytic_indices[-1]), -int(f.antianalytic_indices[0]))
    if lo < grid.coeff_lo or hi > grid.coeff_hi:
        raise ResolutionError(
            f"frame monomial indices [{lo}, {hi}] alias on a grid of size {grid.size}"
        )
    Rs = u.scattering.on_grid(grid)
    ana = synthesize(LaurentSeries(f.n, u.x), grid)
    anti = synthesize(LaurentSeries(-(f.m + f.N), u.y[::-1]), grid)
    comp1 = ana + np.conj(Rs) * anti
    comp2 = Rs * ana + anti
    return comp1, comp2


@dataclass
class DefectPair:
    """Unit vectors spanning the two one-dimensional defect gaps at (n, m).

    K spans the gap obtained by dropping g'_n, Ktilde the one obtained
    by dropping g''_{m+1}; both are normalized so the inner product with
    the dropped generator is the positive residual norm. The two
    residuals agree in exact arithmetic; `a0` is the K-side value.
    """

    K: LrElement
    Ktilde: LrElement
    a0: float
    a0_tilde: float
    cond: float

    @property
    def frame(self):
        return self.K.frame


def _project_out(G, drop):
    dim = G.shape[0]
    keep = np.arange(dim) != drop
    GS = G[np.ix_(keep, keep)]
    b = G[keep, drop]
    try:
        cf = sla.cho_factor(GS, lower=True)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"sub-Gram not positive definite: {exc}") from exc
    anorm = float(np.max(np.sum(np.abs(GS), axis=0)))
    rcond, info = zpocon(cf[0], anorm, uplo="L")
    cond = float(1.0 / max(rcond, 1e-300)) if info == 0 else np.inf
    if cond > COND_CAP:
        raise ConditioningError(
            f"Gram condition estimate {cond:.3e} exceeds cap {COND_CAP:.0e}; "
            "the margin of R is too small for this section"
        )
    xs = sla.cho_solve(cf, b)
    res2 = 1.0 - float(np.real(np.conj(xs) @ b))
    if res2 < DEGENERACY_FLOOR**2:
        raise DegeneracyError(
            "defect residual below 1e-12; impossible under the Szego condition, "
            "the input data is inconsistent"
        )
    a0 = float(np.sqrt(res2))
    coords = np.zeros(dim, dtype=complex)
    coords[drop] = 1.0
    coords[keep] = -xs
    return coords / a0, a0, cond


def defect_pair(R, n, m, N):
    """Defect vectors of the finite section at (n, m) with N generators per family.

    Parameters
    ----------
    R : ScatteringFunction
    n, m : int
        Subspace offsets; the level is n + m.
    N : int
        Section size.

    Returns
    -------
    DefectPair
        Unit vectors with <K, g'_n> = a0 > 0 and <Ktilde, g''_{m+1}> > 0,
        orthogonal to every other generator of their reduced frames.
    """
    frame = GeneratorFrame(n, m, N)
    gram_matrix(R, frame)  # validates Szego, resolution, contractivity
    G = frame_gram(R, frame)
    ck, a0, cond_k = _project_out(G, 0)
    ct, a0t, cond_t = _project_out(G, N)
    K = LrElement(frame, ck[:N], ck[N:], R)
    Kt = LrElement(frame, ct[:N], ct[N:], R)
    return DefectPair(K, Kt, a0, a0t, max(cond_k, cond_t))


def converged_defect_pair(R, n, m, start=32, cap=512, tol=1e-9):
    """Defect pair with a section-doubling convergence certificate.

    Doubles N until the coordinates of both defect vectors change by
    less than `tol` between consecutive sizes; returns the larger
    section's pair. No convergence within the cap raises.
    """
    N = start
    delta = np.inf
    prev = defect_pair(R, n, m, N)
    while 2 * N <= cap:
        cur = defect_pair(R, n, m, 2 * N)
        delta = _pair_delta(prev, cur)
        if delta < tol:
            return cur
        prev, N = cur, 2 * N
    raise ConvergenceError(
        f"defect pair at (n, m) = ({n}, {m}) did not converge by section size "
        f"{cap} (last change {delta:.3e} > {tol:.1e})"
    )


def _pair_delta(a, b):
    big = b.frame
    da = embed(a.K, big).coords() - b.K.coords()
    db = embed(a.Ktilde, big).coords() - b.Ktilde.coords()
    return float(max(np.max(np.abs(da)), np.max(np.abs(db))))
