"""Closed-form overlap kernels and diagonal-kernel representations.

The overlap of two saturating states factors into a prefactor
(cosh r2 cosh r1)^{-1/2} (1 - conj(zeta2) zeta1)^{-1/2}, a symplectic phase
e^{-(u2 conj(u1) - conj(u2) u1)/2}, and a Gaussian in the label difference.
All three are assembled in log space and exponentiated once, so moduli
never overflow and phases stay coherent.  Since |zeta| < 1 forces
Re(1 - conj(zeta2) zeta1) > 0, the principal square-root branch is
continuous on the whole domain.

Diagonal kernels: a normal-ordered polynomial in the squeezed-frame mode
has diagonal expectation sum c[j,k] wbar^j w^k with w = u0(z); applying
e^{-d_w d_wbar} (a finite sum on polynomials) yields the scalar symbol that
reproduces the operator as a weighted integral of state projectors.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bch import DomainError
from .params import Constants
from . import quadrature as quadmod


class DegreeTooHigh(ValueError):
    """Polynomial degree above the configured kernel limit."""


@dataclass(frozen=True)
class OverlapParts:
    prefactor: complex
    symplectic_phase: complex
    gaussian: complex


@dataclass(frozen=True)
class OverlapResult:
    """Overlap value with its factorization; value = product of parts."""

    value: complex
    modulus: float
    phase: float
    parts: OverlapParts


def _zeta(z: complex) -> complex:
    z = complex(z)
    r = abs(z)
    return 0j if r == 0 else (z / r) * math.tanh(r)


def _result(logpre: complex, sym: complex, gauss: complex) -> OverlapResult:
    value = cmath.exp(logpre + sym + gauss)
    return OverlapResult(
        value=value,
        modulus=abs(value),
        phase=cmath.phase(value),
        parts=OverlapParts(prefactor=cmath.exp(logpre),
                           symplectic_phase=cmath.exp(sym),
                           gaussian=cmath.exp(gauss)),
    )


def coherent_overlap(u2: complex, u1: complex) -> OverlapResult:
    """<state(u2, 0)|state(u1, 0)> = e^{-(u2 conj(u1) - conj(u2) u1)/2} e^{-|u2-u1|^2/2}."""
    u2, u1 = complex(u2), complex(u1)
    sym = -0.5 * (u2 * u1.conjugate() - u2.conjugate() * u1)
    return _result(0j, sym, -0.5 * abs(u2 - u1) ** 2)


def squeezed_overlap(z2: complex, u2: complex,
                     z1: complex, u1: complex) -> OverlapResult:
    """General overlap <state(u2, z2)|state(u1, z1)>.

    value = (cosh r2 cosh r1)^{-1/2} (1 - conj(zeta2) zeta1)^{-1/2}
            e^{-(u2 conj(u1) - conj(u2) u1)/2} e^{-G/4}
    with the quadratic form
        G/2 = conj(d - zeta2 conj(d)) (d - zeta1 conj(d)) / (1 - conj(zeta2) zeta1),
        d = u2 - u1.
    """
    u2, u1 = complex(u2), complex(u1)
    zeta2, zeta1 = _zeta(z2), _zeta(z1)
    logpre = (-0.5 * (math.log(math.cosh(abs(complex(z2))))
                      + math.log(math.cosh(abs(complex(z1)))))
              - 0.5 * cmath.log(1.0 - zeta2.conjugate() * zeta1))
    sym = -0.5 * (u2 * u1.conjugate() - u2.conjugate() * u1)
    d = u2 - u1
    ghalf = ((d - zeta2 * d.conjugate()).conjugate()
             * (d - zeta1 * d.conjugate())
             / (1.0 - zeta2.conjugate() * zeta1))
    return _result(logpre, sym, -0.5 * ghalf)


def squeezed_overlap_qp(z2: complex, qp2: tuple[float, float],
                        z1: complex, qp1: tuple[float, float],
                        c: Constants = Constants()) -> OverlapResult:
    """Same overlap from physical centers (q, p) instead of labels u.

    The symplectic phase becomes e^{i(q2 p1 - q1 p2)/(2 hbar)} and the
    Gaussian quadratic form is expressed in (q2-q1, p2-p1).
    """
    q2, p2 = qp2
    q1, p1 = qp1
    zeta2, zeta1 = _zeta(z2), _zeta(z1)
    den = 1.0 - zeta2.conjugate() * zeta1
    logpre = (-0.5 * (math.log(math.cosh(abs(complex(z2))))
                      + math.log(math.cosh(abs(complex(z1)))))
              - 0.5 * cmath.log(den))
    sym = 0.5j * (q2 * p1 - q1 * p2) / c.hbar
    dq = (q2 - q1) / c.ell0
    dp = c.ell0 * (p2 - p1) / c.hbar
    g = ((1 - zeta2.conjugate()) * (1 - zeta1) * dq * dq
         - 2j * (zeta2.conjugate() - zeta1) * dq * dp
         + (1 + zeta2.conjugate()) * (1 + zeta1) * dp * dp) / den
    return _result(logpre, sym, -0.25 * g)


def overlap_values(z2: complex, u2, z1: complex, u1) -> np.ndarray:
    """Vectorized squeezed_overlap values over arrays of labels u2, u1."""
    u2 = np.asarray(u2, dtype=complex)
    u1 = np.asarray(u1, dtype=complex)
    zeta2, zeta1 = _zeta(z2), _zeta(z1)
    logpre = (-0.5 * (math.log(math.cosh(abs(complex(z2))))
                      + math.log(math.cosh(abs(complex(z1)))))
              - 0.5 * cmath.log(1.0 - zeta2.conjugate() * zeta1))
    sym = -0.5 * (u2 * np.conj(u1) - np.conj(u2) * u1)
    d = u2 - u1
    ghalf = (np.conj(d - zeta2 * np.conj(d)) * (d - zeta1 * np.conj(d))
             / (1.0 - zeta2.conjugate() * zeta1))
    return np.exp(logpre + sym - 0.5 * ghalf)


def general_matrix_element(zeta2: complex, u: complex, zeta1: complex) -> complex:
    """<0| e^{conj(zeta2) a^2/2} D(u) e^{zeta1 a^dag^2/2} |0>.

    Equals (1 - conj(zeta2) zeta1)^{-1/2}
    exp(-conj(u - zeta2 conj(u)) (u - zeta1 conj(u)) / (2 (1 - conj(zeta2) zeta1))).
    """
    zeta2, zeta1, u = complex(zeta2), complex(zeta1), complex(u)
    if abs(zeta2) >= 1 or abs(zeta1) >= 1:
        raise DomainError(
            f"matrix element requires |zeta| < 1, got |{zeta2}|, |{zeta1}|")
    den = 1.0 - zeta2.conjugate() * zeta1
    expo = -(u - zeta2 * u.conjugate()).conjugate() * (u - zeta1 * u.conjugate()) \
        / (2.0 * den)
    return cmath.exp(-0.5 * cmath.log(den) + expo)


@dataclass(frozen=True)
class CompositionResult:
    phase: complex
    shifted: complex


def displacement_composition(u2: complex, u1: complex) -> CompositionResult:
    """D^dag(u2) D(u1) = phase * D(shifted), with unit-modulus phase."""
    u2, u1 = complex(u2), complex(u1)
    return CompositionResult(
        phase=cmath.exp(-0.5 * (u2 * u1.conjugate() - u2.conjugate() * u1)),
        shifted=u1 - u2,
    )


def reproducing_compose(z2: complex, u2: complex, z1: complex, u1: complex,
                        z3: complex,
                        spec: quadmod.QuadratureSpec | None = None) -> complex:
    """Compose two kernels through the fixed-z3 resolution of identity.

    Integrates K(2;3) K(3;1) over the intermediate label u3 with measure
    du3 dubar3 / pi; by overcompleteness at fixed z3 the result equals the
    direct overlap K(2;1).  Raises QuadratureNotConverged when the
    order-doubled estimates disagree.
    """
    if spec is None:
        mid = 0.5 * (complex(u2) + complex(u1))
        width = math.exp(max(abs(complex(z2)), abs(complex(z1)), abs(complex(z3))))
        spec = quadmod.QuadratureSpec(
            quadmod.QuadKind.TENSOR_GAUSS_HERMITE_2D, 60,
            center=(mid.real, mid.imag), scale=(width, width), rel_tol=1e-7)

    def kernel_product(u3):
        return overlap_values(z2, u2, z3, u3) * overlap_values(z3, u3, z1, u1)

    report = quadmod.integrate_plane(spec=spec, f_batch=kernel_product)
    return report.value


class PolySymbol:
    """Complex polynomial in (w, wbar) with w = u0(z), as a dense table.

    coeffs[j, k] multiplies w^j wbar^k.  Used for diagonal expectations and
    kernels of polynomial observables; degrees stay single-digit.
    """

    def __init__(self, coeffs):
        arr = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        self.coeffs = arr

    @classmethod
    def from_dict(cls, entries: dict[tuple[int, int], complex]) -> "PolySymbol":
        if not entries:
            return cls(np.zeros((1, 1)))
        jmax = max(j for j, _ in entries)
        kmax = max(k for _, k in entries)
        arr = np.zeros((jmax + 1, kmax + 1), dtype=complex)
        for (j, k), val in entries.items():
            arr[j, k] = val
        return cls(arr)

    @property
    def degree(self) -> int:
        nz = np.argwhere(np.abs(self.coeffs) > 0)
        return int(max(nz.sum(axis=1))) if nz.size else 0

    def trim(self) -> "PolySymbol":
        arr = self.coeffs
        while arr.shape[0] > 1 and not np.any(arr[-1]):
            arr = arr[:-1]
        while arr.shape[1] > 1 and not np.any(arr[:, -1]):
            arr = arr[:, :-1]
        return PolySymbol(arr)

    def __add__(self, other: "PolySymbol") -> "PolySymbol":
        a, b = self.coeffs, other.coeffs
        out = np.zeros((max(a.shape[0], b.shape[0]),
                        max(a.shape[1], b.shape[1])), dtype=complex)
        out[:a.shape[0], :a.shape[1]] += a
        out[:b.shape[0], :b.shape[1]] += b
        return PolySymbol(out)

    def __mul__(self, other):
        if np.isscalar(other):
            return PolySymbol(self.coeffs * other)
        from scipy.signal import convolve2d

        return PolySymbol(convolve2d(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def mixed_derivative(self) -> "PolySymbol":
        """d_w d_wbar applied once."""
        a = self.coeffs
        if a.shape[0] < 2 or a.shape[1] < 2:
            return PolySymbol(np.zeros((1, 1)))
        j = np.arange(1, a.shape[0])[:, None]
        k = np.arange(1, a.shape[1])[None, :]
        return PolySymbol(a[1:, 1:] * j * k)

    def heat_transform(self) -> "PolySymbol":
        """e^{-d_w d_wbar} as the finite sum over polynomial degree."""
        out = PolySymbol(self.coeffs.copy())
        term = PolySymbol(self.coeffs.copy())
        sign = 1.0
        fact = 1.0
        for m in range(1, max(self.coeffs.shape)):
            term = term.mixed_derivative()
            if not np.any(term.coeffs):
                break
            sign = -sign
            fact *= m
            out = out + term * (sign / fact)
        return out.trim()

    def evaluate(self, w, wbar=None):
        w = np.asarray(w, dtype=complex)
        wbar = np.conj(w) if wbar is None else np.asarray(wbar, dtype=complex)
        out = np.zeros_like(w)
        for j in range(self.coeffs.shape[0]):
            for k in range(self.coeffs.shape[1]):
                cjk = self.coeffs[j, k]
                if cjk != 0:
                    out = out + cjk * w**j * wbar**k
        return out

    def substitute_linear(self, a: complex, b: complex,
                          cc: complex, d: complex) -> "PolySymbol":
        """Coefficients after w -> a w' + b wbar', wbar -> cc w' + d wbar'."""
        one = PolySymbol(np.ones((1, 1)))
        wnew = PolySymbol(np.array([[0, 0], [1, 0]], dtype=complex)) * a \
            + PolySymbol(np.array([[0, 1], [0, 0]], dtype=complex)) * b
        wbnew = PolySymbol(np.array([[0, 0], [1, 0]], dtype=complex)) * cc \
            + PolySymbol(np.array([[0, 1], [0, 0]], dtype=complex)) * d
        out = PolySymbol(np.zeros((1, 1)))
        for j in range(self.coeffs.shape[0]):
            for k in range(self.coeffs.shape[1]):
                cjk = self.coeffs[j, k]
                if cjk == 0:
                    continue
                term = one * cjk
                for _ in range(j):
                    term = term * wnew
                for _ in range(k):
                    term = term * wbnew
                out = out + term
        return out.trim()

    def max_abs_diff(self, other: "PolySymbol") -> float:
        diff = self + other * (-1.0)
        return float(np.max(np.abs(diff.coeffs)))


class NormalOrderedOp:
    """Operator polynomial sum c[j,k] A^dag^j A^k for one abstract mode.

    Products re-normal-order through
        A^k A^dag^j = sum_i i! C(k,i) C(j,i) A^dag^{j-i} A^{k-i}.
    """

    def __init__(self, coeffs):
        self.coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))

    @classmethod
    def identity(cls) -> "NormalOrderedOp":
        return cls(np.ones((1, 1)))

    @classmethod
    def linear(cls, c_adag: complex, c_a: complex,
               c_id: complex = 0.0) -> "NormalOrderedOp":
        arr = np.zeros((2, 2), dtype=complex)
        arr[0, 0] = c_id
        arr[1, 0] = c_adag
        arr[0, 1] = c_a
        return cls(arr)

    def __add__(self, other: "NormalOrderedOp") -> "NormalOrderedOp":
        a, b = self.coeffs, other.coeffs
        out = np.zeros((max(a.shape[0], b.shape[0]),
                        max(a.shape[1], b.shape[1])), dtype=complex)
        out[:a.shape[0], :a.shape[1]] += a
        out[:b.shape[0], :b.shape[1]] += b
        return NormalOrderedOp(out)

    def scale(self, s: complex) -> "NormalOrderedOp":
        return NormalOrderedOp(self.coeffs * s)

    def __mul__(self, other: "NormalOrderedOp") -> "NormalOrderedOp":
        a, b = self.coeffs, other.coeffs
        jmax = a.shape[0] + b.shape[0] - 1
        kmax = a.shape[1] + b.shape[1] - 1
        out = np.zeros((jmax, kmax), dtype=complex)
        for j1 in range(a.shape[0]):
            for k1 in range(a.shape[1]):
                c1 = a[j1, k1]
                if c1 == 0:
                    continue
                for j2 in range(b.shape[0]):
                    for k2 in range(b.shape[1]):
                        c2 = b[j2, k2]
                        if c2 == 0:
                            continue
                        for i in range(min(k1, j2) + 1):
                            w = (math.factorial(i) * math.comb(k1, i)
                                 * math.comb(j2, i))
                            out[j1 + j2 - i, k1 + k2 - i] += c1 * c2 * w
        return NormalOrderedOp(out)

    def to_matrix(self, a_entries: np.ndarray) -> np.ndarray:
        """Dense matrix given the mode's annihilator matrix."""
        dim = a_entries.shape[0]
        adag = a_entries.conj().T
        out = np.zeros((dim, dim), dtype=complex)
        apow = [np.eye(dim, dtype=complex)]
        dpow = [np.eye(dim, dtype=complex)]
        for _ in range(self.coeffs.shape[1] - 1):
            apow.append(apow[-1] @ a_entries)
        for _ in range(self.coeffs.shape[0] - 1):
            dpow.append(dpow[-1] @ adag)
        for j in range(self.coeffs.shape[0]):
            for k in range(self.coeffs.shape[1]):
                if self.coeffs[j, k] != 0:
                    out += self.coeffs[j, k] * (dpow[j] @ apow[k])
        return out

    def diagonal_symbol(self) -> PolySymbol:
        """<state| . |state> for the mode's eigenstate: A^dag^j A^k -> wbar^j w^k."""
        return PolySymbol(self.coeffs.T.copy()).trim()


def quadrature_observable(name: str, z: complex,
                          c: Constants = Constants()) -> NormalOrderedOp:
    """Q, P and their quadratics, normal-ordered in the z-frame mode a(z).

    Uses the inverse Bogoliubov relations
        Q/ell0      = [(ch + conj(s)) a(z) + (ch + s) a(z)^dag]/sqrt(2),
        ell0 P/hbar = i[(ch - s) a(z)^dag - (ch - conj(s)) a(z)]/sqrt(2),
    with ch = cosh r, s = e^{i theta} sinh r.
    """
    z = complex(z)
    r = abs(z)
    ch = math.cosh(r)
    s = (z / r) * math.sinh(r) if r else 0j
    sq2 = math.sqrt(2.0)
    q_op = NormalOrderedOp.linear((ch + s) * c.ell0 / sq2,
                                  (ch + s.conjugate()) * c.ell0 / sq2)
    p_op = NormalOrderedOp.linear(1j * (ch - s) * c.hbar / (c.ell0 * sq2),
                                  -1j * (ch - s.conjugate()) * c.hbar / (c.ell0 * sq2))
    table = {
        "I": lambda: NormalOrderedOp.identity(),
        "N": lambda: NormalOrderedOp.linear(0, 0) + NormalOrderedOp(
            np.array([[0, 0], [0, 1]], dtype=complex)),
        "Q": lambda: q_op,
        "P": lambda: p_op,
        "Q2": lambda: q_op * q_op,
        "P2": lambda: p_op * p_op,
        "QP": lambda: q_op * p_op + p_op * q_op,
    }
    if name not in table:
        raise ValueError(f"unknown observable {name!r}; choose from {sorted(table)}")
    return table[name]()


def diagonal_kernel(op: NormalOrderedOp, z: complex,
                    max_degree: int = 8) -> PolySymbol:
    """Scalar symbol reproducing op as an integral of state projectors.

    op is normal-ordered in the z-frame mode; its diagonal expectation is a
    polynomial in (w, wbar) = (u0(z), conj(u0(z))), and the kernel is
    e^{-d_w d_wbar} applied to it, a finite sum for polynomials.
    """
    sym = op.diagonal_symbol()
    if sym.degree > max_degree:
        raise DegreeTooHigh(
            f"diagonal symbol degree {sym.degree} exceeds limit {max_degree}")
    return sym.heat_transform()
