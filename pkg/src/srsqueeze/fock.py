"""Truncated Fock-space oracle: dense operator matrices and state vectors.

Everything here is a brute-force check on the closed forms elsewhere in the
package: ladder matrices for the reference mode, displacement and squeeze
operators built both by matrix exponential (slow, generic) and by their
normal-ordered factorizations (fast, exact triangular/diagonal entries), and
the saturating state |state(u0, z)> = D(u0) S(z) |0>.

All identities on a truncated space hold only on an upper-left block; the
callers assert on blocks whose columns have converged well inside the box,
where truncation backflow is exponentially suppressed for the
Gaussian-type states used here.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .params import Constants, Labels, Moments, lambda0

DEFAULT_TAIL_BOUND = 1e-10

_TAIL_WINDOW = 8


class BadDim(ValueError):
    """Fock truncation dimension too small."""


class NotHermitian(ValueError):
    """Operator expected to be Hermitian is not, beyond tolerance."""


class TruncationWarning(UserWarning):
    """State has non-negligible weight in the top Fock levels."""


class OpTag(enum.Enum):
    A = "a"
    ADAG = "adag"
    Q = "Q"
    P = "P"
    K0 = "K0"
    KPLUS = "K+"
    KMINUS = "K-"
    DISPLACEMENT = "D"
    SQUEEZE = "S"
    GENERIC = "generic"


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense complex matrix on the truncated basis {|0>, ..., |N-1>}.

    Rows index the bra <m|, columns the ket |n>.
    """

    dim: int
    entries: np.ndarray
    tag: OpTag = OpTag.GENERIC

    def dagger(self) -> "FockOperator":
        swap = {OpTag.A: OpTag.ADAG, OpTag.ADAG: OpTag.A,
                OpTag.KPLUS: OpTag.KMINUS, OpTag.KMINUS: OpTag.KPLUS}
        return FockOperator(self.dim, self.entries.conj().T.copy(),
                            swap.get(self.tag, self.tag))

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            return FockOperator(self.dim, self.entries @ other.entries)
        return self.entries @ np.asarray(other)


@dataclass(frozen=True, eq=False)
class FockVector:
    """Complex amplitude vector with a tail-mass convergence diagnostic.

    tail_mass is the probability weight in the top 8 levels; it bounds how
    much the truncation can corrupt identities involving this state.
    """

    dim: int
    amps: np.ndarray
    tail_mass: float

    @classmethod
    def from_amps(cls, amps: np.ndarray) -> "FockVector":
        amps = np.asarray(amps, dtype=complex)
        tail = float(np.sum(np.abs(amps[-_TAIL_WINDOW:]) ** 2))
        return cls(dim=amps.shape[0], amps=amps, tail_mass=tail)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def _check_dim(dim: int) -> None:
    if dim < 2:
        raise BadDim(f"Fock dimension must be >= 2, got {dim}")


def _lgfact(n: int) -> np.ndarray:
    """ln(k!) for k = 0..n."""
    return gammaln(np.arange(n + 1, dtype=float) + 1.0)


def ladder(dim: int) -> tuple[FockOperator, FockOperator]:
    """Annihilation and creation matrices: a[n-1, n] = sqrt(n)."""
    _check_dim(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    return (FockOperator(dim, a, OpTag.A),
            FockOperator(dim, a.conj().T.copy(), OpTag.ADAG))


def number(dim: int) -> FockOperator:
    _check_dim(dim)
    return FockOperator(dim, np.diag(np.arange(dim, dtype=complex)))


def position(dim: int, c: Constants = Constants()) -> FockOperator:
    """Q = ell0 (a + a^dag)/sqrt(2)."""
    a, adag = ladder(dim)
    q = c.ell0 * (a.entries + adag.entries) / math.sqrt(2.0)
    return FockOperator(dim, q, OpTag.Q)


def momentum(dim: int, c: Constants = Constants()) -> FockOperator:
    """P = -i hbar (a - a^dag)/(ell0 sqrt(2))."""
    a, adag = ladder(dim)
    p = -1j * c.hbar * (a.entries - adag.entries) / (c.ell0 * math.sqrt(2.0))
    return FockOperator(dim, p, OpTag.P)


def su11_generators(dim: int) -> tuple[FockOperator, FockOperator, FockOperator]:
    """K0 = (a^dag a + 1/2)/2, K+ = a^dag^2/2, K- = a^2/2."""
    a, adag = ladder(dim)
    k0 = np.diag((np.arange(dim) + 0.5) / 2.0).astype(complex)
    return (FockOperator(dim, k0, OpTag.K0),
            FockOperator(dim, adag.entries @ adag.entries / 2.0, OpTag.KPLUS),
            FockOperator(dim, a.entries @ a.entries / 2.0, OpTag.KMINUS))


def basis_state(dim: int, n: int) -> FockVector:
    _check_dim(dim)
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return FockVector.from_amps(amps)


def _exp_adag2_lower(half: complex, dim: int, dtype=complex) -> np.ndarray:
    """exp(half a^dag^2): entries [n+2k, n] = half^k sqrt((n+2k)!/n!)/k!.

    Built by the multiplicative recurrence along k so each entry carries
    only O(sqrt(k)) rounding steps; with dtype=np.clongdouble the entries
    are accurate enough that the huge cancelling sums in the factored
    squeeze product still leave ~1e-12 in the result.
    """
    out = np.eye(dim, dtype=dtype)
    if half == 0:
        return out
    real_t = np.longdouble if dtype == np.clongdouble else float
    vals = np.ones(dim, dtype=dtype)  # vals[n] at current k
    hh = dtype(half)
    for kk in range(1, (dim - 1) // 2 + 1):
        n = np.arange(dim - 2 * kk)
        step = np.sqrt(((n + 2 * kk - 1) * (n + 2 * kk)).astype(real_t))
        vals = vals[:dim - 2 * kk] * hh * step / real_t(kk)
        out[n + 2 * kk, n] = vals
    return out


def _exp_neg_i_tridiag(diag: np.ndarray, offdiag: np.ndarray) -> np.ndarray:
    """exp(-i H) for Hermitian tridiagonal H with complex off-diagonal.

    A diagonal gauge makes the off-diagonal real, then the real symmetric
    tridiagonal eigenproblem gives a machine-accurate unitary.
    """
    n = diag.shape[0]
    gauge = np.ones(n, dtype=complex)
    absoff = np.abs(offdiag)
    for k in range(n - 1):
        ph = offdiag[k] / absoff[k] if absoff[k] > 0 else 1.0
        gauge[k + 1] = gauge[k] * ph
    w, v = eigh_tridiagonal(diag.real, absoff)
    core = (v * np.exp(-1j * w)) @ v.T
    return (gauge[:, None] * core) * gauge.conj()[None, :]


def _displacement_inner_dim(u0: complex, dim: int) -> int:
    mag = abs(u0)
    return dim + math.ceil(4.0 * mag * math.sqrt(dim) + mag * mag) + 32


def _squeeze_inner_dim(z: complex, dim: int) -> int:
    r = abs(z)
    return math.ceil(dim * (math.cosh(2 * r) + 1.5 * math.sinh(2 * r))) + 32


def displacement(u0: complex, dim: int) -> FockOperator:
    """D(u0) = e^{-|u0|^2/2} e^{u0 a^dag} e^{-conj(u0) a} in closed form.

    The normal-ordered product collapses, entry by entry, to a single finite
    sum: an associated Laguerre polynomial in |u0|^2 times a log-scaled
    prefactor.  Evaluating that sum through the Laguerre recurrence (one
    sweep per diagonal, vectorized across diagonals) avoids the huge
    cancelling intermediates the raw triangular-matrix product produces at
    large (m, n).  Unitary on the upper-left block where columns have
    converged within the truncation.
    """
    _check_dim(dim)
    u0 = complex(u0)
    if u0 == 0:
        return FockOperator(dim, np.eye(dim, dtype=complex), OpTag.DISPLACEMENT)
    x = abs(u0) ** 2
    # laguerre[k, n] = L_n^{(k)}(x) for all diagonals k at once
    lag = np.zeros((dim, dim))
    kvec = np.arange(dim, dtype=float)
    lag[:, 0] = 1.0
    if dim > 1:
        lag[:, 1] = 1.0 + kvec - x
    for n in range(1, dim - 1):
        lag[:, n + 1] = ((2 * n + 1 + kvec - x) * lag[:, n]
                         - (n + kvec) * lag[:, n - 1]) / (n + 1)
    lg = _lgfact(dim - 1)
    phase = u0 / abs(u0)
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        n = np.arange(dim - k)
        mag = np.exp(-0.5 * x + k * math.log(abs(u0))
                     + 0.5 * (lg[n] - lg[n + k])) * lag[k, :dim - k]
        out[n + k, n] = phase**k * mag
        if k:
            out[n, n + k] = (-np.conj(phase))**k * mag
    return FockOperator(dim, out, OpTag.DISPLACEMENT)


def displacement_exp(u0: complex, dim: int, inner_dim: int | None = None) -> FockOperator:
    """Oracle path: matrix exponential of u0 a^dag - conj(u0) a.

    Evaluated by eigendecomposition of the (tridiagonal, anti-Hermitian)
    generator on an enlarged space so that every returned entry has
    converged, then restricted to dim x dim.
    """
    _check_dim(dim)
    u0 = complex(u0)
    inner = inner_dim or _displacement_inner_dim(u0, dim)
    # i (u0 a^dag - conj(u0) a) is Hermitian tridiagonal
    off = 1j * u0 * np.sqrt(np.arange(1, inner, dtype=float))
    full = _exp_neg_i_tridiag(np.zeros(inner), off)
    return FockOperator(dim, full[:dim, :dim].copy(), OpTag.DISPLACEMENT)


def squeeze_exp(z: complex, dim: int, inner_dim: int | None = None) -> FockOperator:
    """Oracle path: matrix exponential of (z a^dag^2 - conj(z) a^2)/2.

    The generator splits over even/odd parity into Hermitian tridiagonal
    blocks; each is diagonalized exactly on an enlarged space (so the
    returned block is free of truncation backflow), then restricted.
    """
    _check_dim(dim)
    z = complex(z)
    if z == 0:
        return FockOperator(dim, np.eye(dim, dtype=complex), OpTag.SQUEEZE)
    inner = inner_dim or _squeeze_inner_dim(z, dim)
    full = np.zeros((inner, inner), dtype=complex)
    n = np.arange(inner, dtype=float)
    coupling = 0.5j * z * np.sqrt((n + 1) * (n + 2))  # i G at [n+2, n]
    for parity in (0, 1):
        levels = np.arange(parity, inner, 2)
        off = coupling[levels[:-1]]
        block = _exp_neg_i_tridiag(np.zeros(levels.size), off)
        full[np.ix_(levels, levels)] = block
    return FockOperator(dim, full[:dim, :dim].copy(), OpTag.SQUEEZE)


def _squeezed_vacuum_column(z: complex, dim: int) -> np.ndarray:
    """S(z)|0> amplitudes: (cosh r)^{-1/2} (zeta/2)^k sqrt((2k)!)/k! at level 2k."""
    z = complex(z)
    r = abs(z)
    v = np.zeros(dim, dtype=complex)
    if r == 0:
        v[0] = 1.0
        return v
    zeta = (z / r) * math.tanh(r)
    lg = _lgfact(dim - 1)
    kmax = (dim - 1) // 2
    k = np.arange(kmax + 1)
    logs = k * np.log(zeta / 2.0) + 0.5 * lg[2 * k] - gammaln(k + 1.0)
    v[2 * k] = np.exp(logs - 0.5 * math.log(math.cosh(r)))
    return v


def squeeze_factored(z: complex, dim: int) -> FockOperator:
    """S(z) as exp(zeta a^dag^2/2) exp(ln(1-|zeta|^2)(a^dag a + 1/2)/2) exp(-conj(zeta) a^2/2).

    zeta = e^{i theta} tanh r.  The product entries are truncation-exact for
    all (m, n) < dim (the left factor only lowers, the right only raises);
    the two matrix products run in extended precision because the factors
    have large entries that cancel at large (m, n).
    """
    _check_dim(dim)
    z = complex(z)
    r = abs(z)
    if r == 0:
        return FockOperator(dim, np.eye(dim, dtype=complex), OpTag.SQUEEZE)
    zeta = (z / r) * math.tanh(r)
    ld = np.clongdouble
    lower = _exp_adag2_lower(np.clongdouble(zeta / 2.0), dim, dtype=ld)
    # exp(-conj(zeta) a^2/2) = exp(-zeta a^dag^2/2)^dagger
    upper = _exp_adag2_lower(np.clongdouble(-zeta / 2.0), dim, dtype=ld).conj().T
    mid = np.exp(np.clongdouble(math.log1p(-math.tanh(r) ** 2))
                 * (np.arange(dim) + 0.5) / 2.0)
    prod = (lower * mid[None, :]) @ upper
    return FockOperator(dim, np.asarray(prod, dtype=complex), OpTag.SQUEEZE)


def squeeze_factored_reversed(z: complex, dim: int) -> FockOperator:
    """Dual-order factorization exp(-conj(zeta) a^2/2) e^{-gamma K0} exp(zeta a^dag^2/2).

    Equal to squeeze_factored(z, dim) as an operator identity; evaluated
    independently for the dual-factorization check.
    """
    _check_dim(dim)
    z = complex(z)
    r = abs(z)
    if r == 0:
        return FockOperator(dim, np.eye(dim, dtype=complex), OpTag.SQUEEZE)
    zeta = (z / r) * math.tanh(r)
    ld = np.clongdouble
    lower = _exp_adag2_lower(np.clongdouble(zeta / 2.0), dim, dtype=ld)
    upper = _exp_adag2_lower(np.clongdouble(-zeta / 2.0), dim, dtype=ld).conj().T
    mid = np.exp(-np.clongdouble(math.log1p(-math.tanh(r) ** 2))
                 * (np.arange(dim) + 0.5) / 2.0)
    prod = (upper * mid[None, :]) @ lower
    return FockOperator(dim, np.asarray(prod, dtype=complex), OpTag.SQUEEZE)


def squeezed_annihilator(z: complex, dim: int) -> FockOperator:
    """a(z) = cosh(r) a - e^{i theta} sinh(r) a^dag (Bogoliubov transform)."""
    _check_dim(dim)
    z = complex(z)
    r = abs(z)
    a, adag = ladder(dim)
    if r == 0:
        return FockOperator(dim, a.entries.copy(), OpTag.GENERIC)
    phase = z / r
    return FockOperator(
        dim, math.cosh(r) * a.entries - phase * math.sinh(r) * adag.entries)


def saturating_state(
    labels: Labels,
    c: Constants = Constants(),
    dim: int = 128,
    tail_bound: float = DEFAULT_TAIL_BOUND,
) -> FockVector:
    """|state> = D(u0) S(z) |0> on the truncated basis.

    Warns with TruncationWarning when the top-level weight exceeds
    tail_bound; identities checked against this state are then unreliable.
    """
    _check_dim(dim)
    v = _squeezed_vacuum_column(labels.z, dim)
    amps = displacement(labels.u0, dim).entries @ v
    state = FockVector.from_amps(amps)
    if state.tail_mass > tail_bound:
        warnings.warn(
            f"tail mass {state.tail_mass:.3e} exceeds {tail_bound:.3e} "
            f"at dim={dim}; increase the truncation",
            TruncationWarning,
            stacklevel=2,
        )
    return state


def saturating_state_batch(
    u0s: np.ndarray,
    z: complex,
    c: Constants = Constants(),
    dim: int = 128,
    out_dim: int | None = None,
    chunk: int = 512,
) -> np.ndarray:
    """Amplitudes <m|D(u0) S(z)|0> for many u0 at fixed z.

    Returns an (out_dim, len(u0s)) array.  Same construction as
    saturating_state, reorganized into per-chunk matrix products so that
    quadratures over the u0 plane stay cheap.  All intermediates are scaled
    (coherent-amplitude columns, sqrt-factorial balancing) so no entry
    overflows even at far-tail quadrature nodes.
    """
    _check_dim(dim)
    u0s = np.asarray(u0s, dtype=complex).ravel()
    if out_dim is None:
        out_dim = dim
    if not 1 <= out_dim <= dim:
        raise BadDim(f"out_dim must lie in [1, {dim}], got {out_dim}")
    v = _squeezed_vacuum_column(z, dim)

    lg = _lgfact(dim - 1)
    n_idx = np.arange(dim)[:, None]
    k_idx = np.arange(dim)[None, :]
    s_idx = n_idx + k_idx
    valid = s_idx < dim
    s_clip = np.minimum(s_idx, dim - 1)
    # A[n, k] = sqrt((n+k)! / (n! k!)) v[n+k]   (binomial-balanced, no overflow)
    amat = np.where(
        valid,
        np.exp(0.5 * (lg[s_clip] - lg[n_idx] - lg[k_idx])) * v[s_clip],
        0.0,
    ).astype(complex)

    sqrt_fact = np.exp(0.5 * lg[:out_dim])

    out = np.empty((out_dim, u0s.size), dtype=complex)
    for lo in range(0, u0s.size, chunk):
        ub = u0s[lo:lo + chunk]
        nb = ub.size
        # P[k, b] = e^{-|u|^2/2} (-conj(u))^k / sqrt(k!)  via cumulative product
        steps = np.empty((dim, nb), dtype=complex)
        steps[0] = np.exp(-0.5 * np.abs(ub) ** 2)
        steps[1:] = (-np.conj(ub))[None, :] / np.sqrt(
            np.arange(1, dim, dtype=float))[:, None]
        pmat = np.cumprod(steps, axis=0)
        w = amat @ pmat  # e^{-|u|^2/2} (e^{-conj(u) a} v)_n
        w *= np.exp(-0.5 * lg[:dim])[:, None]
        # g[j, b] = u^j / j!
        gsteps = np.empty((out_dim, nb), dtype=complex)
        gsteps[0] = 1.0
        if out_dim > 1:
            gsteps[1:] = ub[None, :] / np.arange(1, out_dim, dtype=float)[:, None]
        g = np.cumprod(gsteps, axis=0)
        for m in range(out_dim):
            out[m, lo:lo + nb] = sqrt_fact[m] * np.einsum(
                "jb,jb->b", g[m::-1], w[:m + 1])
    return out


def expectations(state: FockVector, c: Constants = Constants()) -> Moments:
    """Moments of a state from matrix quadratic forms of Q and P."""
    if state.tail_mass > DEFAULT_TAIL_BOUND:
        warnings.warn(
            f"computing moments of a state with tail mass {state.tail_mass:.3e}",
            TruncationWarning,
            stacklevel=2,
        )
    psi = state.amps
    nrm2 = float(np.vdot(psi, psi).real)
    qpsi = position(state.dim, c).entries @ psi
    ppsi = momentum(state.dim, c).entries @ psi
    q0 = float(np.vdot(psi, qpsi).real) / nrm2
    p0 = float(np.vdot(psi, ppsi).real) / nrm2
    qbar = qpsi - q0 * psi
    pbar = ppsi - p0 * psi
    dq2 = float(np.vdot(qbar, qbar).real) / nrm2
    dp2 = float(np.vdot(pbar, pbar).real) / nrm2
    corr = 2.0 * float(np.vdot(qbar, pbar).real) / nrm2
    return Moments(q0=q0, p0=p0, dq=math.sqrt(dq2), dp=math.sqrt(dp2), corr=corr)


def defining_residual(
    state: FockVector,
    m: Moments,
    c: Constants = Constants(),
) -> float:
    """Norm of [(Q - q0) - lambda0 (P - p0)] |state>.

    Zero (up to truncation) exactly when the state saturates the SR bound
    with the given moments.
    """
    lam = lambda0(m, c)
    psi = state.amps
    qpsi = position(state.dim, c).entries @ psi - m.q0 * psi
    ppsi = momentum(state.dim, c).entries @ psi - m.p0 * psi
    return float(np.linalg.norm(qpsi - lam * ppsi))


@dataclass(frozen=True)
class SrUrResult:
    """Both sides of the Schrodinger-Robertson inequality for one state."""

    lhs: float
    rhs_comm: float
    rhs_anticomm: float
    slack: float
    lambda0: complex


def sr_ur_check(
    A: FockOperator,
    B: FockOperator,
    state: FockVector,
    herm_tol: float = 1e-12,
) -> SrUrResult:
    """Evaluate (dA)^2 (dB)^2 >= <(-i)[A,B]>^2/4 + <{Abar,Bbar}>^2/4.

    Raises NotHermitian unless A and B are Hermitian to herm_tol.  The
    returned slack is lhs - rhs and is >= 0 for every normalized state,
    vanishing exactly on saturating states.
    """
    for name, op in (("A", A), ("B", B)):
        dev = np.max(np.abs(op.entries - op.entries.conj().T))
        if dev > herm_tol * max(1.0, float(np.max(np.abs(op.entries)))):
            raise NotHermitian(f"operator {name} deviates from Hermitian by {dev:.3e}")
    psi = state.amps
    nrm2 = float(np.vdot(psi, psi).real)
    apsi = A.entries @ psi
    bpsi = B.entries @ psi
    a0 = float(np.vdot(psi, apsi).real) / nrm2
    b0 = float(np.vdot(psi, bpsi).real) / nrm2
    abar = apsi - a0 * psi
    bbar = bpsi - b0 * psi
    var_a = float(np.vdot(abar, abar).real) / nrm2
    var_b = float(np.vdot(bbar, bbar).real) / nrm2
    cross = complex(np.vdot(abar, bbar)) / nrm2  # <Abar Bbar>
    comm = 2.0 * cross.imag       # <(-i)[A, B]>
    anti = 2.0 * cross.real       # <{Abar, Bbar}>
    lhs = var_a * var_b
    rhs_comm = 0.25 * comm**2
    rhs_anticomm = 0.25 * anti**2
    lam = (0.5 * anti - 0.5j * comm) / var_b
    return SrUrResult(lhs=lhs, rhs_comm=rhs_comm, rhs_anticomm=rhs_anticomm,
                      slack=lhs - rhs_comm - rhs_anticomm, lambda0=lam)


def top_block_norm(mat: np.ndarray, k: int) -> float:
    """Spectral norm of the upper-left k x k block."""
    return float(np.linalg.norm(mat[:k, :k], 2))
