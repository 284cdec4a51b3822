"""Eigenvalue and order computations for homology actions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import flint
import numpy as np

from . import graphs
from .graphs import Cover, GraphMap, homology_basis

RADIUS_SLACK = 1e-8
DK_RESIDUAL = 1e-10
DK_MAX_ITER = 5000


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class OrderVerdict:
    tag: str                 # "finite" or "infinite"
    order: int | None = None
    reason: str | None = None
    factors: tuple = ()      # (coefficient list, multiplicity), low degree first
    radius: float | None = None
    charpoly: tuple = field(default=(), repr=False)

    @property
    def infinite(self) -> bool:
        return self.tag == "infinite"

    def to_json(self):
        return {"tag": self.tag, "order": self.order, "reason": self.reason,
                "factors": [[list(c), m] for c, m in self.factors], "radius": self.radius,
                "charpoly": list(self.charpoly)}


def _as_fmpz(M) -> flint.fmpz_mat:
    M = np.asarray(M, dtype=object)
    return flint.fmpz_mat([[int(x) for x in row] for row in M])


def charpoly(M) -> tuple:
    """Integer characteristic polynomial, coefficients from the constant term up."""
    if np.asarray(M).size == 0:
        return (1,)
    return tuple(int(c) for c in _as_fmpz(M).charpoly().coeffs())


def homology_action(cover: Cover, phi0: GraphMap) -> np.ndarray:
    """Action of a lifted self-map on H_1 of the cover's total graph."""
    return graphs.homology_action(phi0, homology_basis(cover.total))


def _mat_pow_is_identity(M: flint.fmpz_mat, k: int) -> bool:
    n = M.nrows()
    P = flint.fmpz_mat(n, n)
    for i in range(n):
        P[i, i] = 1
    B, e = M, k
    while e:
        if e & 1:
            P = P * B
        e >>= 1
        if e:
            B = B * B
    return P.is_one()


def integer_order(M) -> OrderVerdict:
    """Exact decision of whether an integer matrix has finite order."""
    A = np.asarray(M, dtype=object)
    n = A.shape[0]
    if n == 0:
        return OrderVerdict("finite", 1)
    F = _as_fmpz(A)
    cp = F.charpoly()
    _, facs = cp.factor()
    factors = tuple((tuple(int(c) for c in f.coeffs()), int(m)) for f, m in facs)
    coeffs = tuple(int(c) for c in cp.coeffs())
    indices = []
    for f, _m in facs:
        idx = f.is_cyclotomic()
        if not idx:
            rho = max(abs(complex(z)) for z, _ in f.complex_roots())
            return OrderVerdict("infinite", None, "non-cyclotomic factor", factors, rho, coeffs)
        indices.append(int(idx))
    mp = F.minpoly()
    if mp.gcd(mp.derivative()).degree() > 0:
        return OrderVerdict("infinite", None, "non-semisimple cyclotomic part", factors, 1.0, coeffs)
    L = math.lcm(*indices)
    if not _mat_pow_is_identity(F, L):  # pragma: no cover - guaranteed by the minpoly test
        raise AssertionError("squarefree cyclotomic minimal polynomial but M^L != I")
    order = min(d for d in _divisors(L) if _mat_pow_is_identity(F, d))
    return OrderVerdict("finite", order, None, factors, 1.0, coeffs)


def _divisors(n):
    return sorted({d for i in range(1, math.isqrt(n) + 1) if n % i == 0 for d in (i, n // i)})


def hessenberg_charpoly(M) -> np.ndarray:
    """Characteristic polynomial of a complex matrix (highest degree first)."""
    H = np.array(M, dtype=complex)
    n = H.shape[0]
    if n == 0:
        return np.array([1.0 + 0j])
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
    # p_k(x) = (x - h_kk) p_{k-1} - sum_{i<k} h_ik prod_{j=i+1..k} h_{j,j-1} p_{i-1}
    polys = [np.array([1.0 + 0j])]
    for k in range(n):
        p = np.convolve(polys[k], np.array([1.0, -H[k, k]]))
        prod = 1.0 + 0j
        for i in range(k - 1, -1, -1):
            prod *= H[i + 1, i]
            term = H[i, k] * prod * polys[i]
            p[-len(term):] -= term
        polys.append(p)
    return polys[n]


def durand_kerner(coeffs, tol: float = DK_RESIDUAL, max_iter: int = DK_MAX_ITER) -> np.ndarray:
    """All roots of a polynomial given highest degree first."""
    a = np.array(coeffs, dtype=complex)
    nz = np.nonzero(np.abs(a) > 0)[0]
    a = a[nz[0]:]
    deg = len(a) - 1
    if deg < 1:
        return np.array([], dtype=complex)
    a = a / a[0]
    zeros = 0
    while deg - zeros > 0 and a[deg - zeros] == 0:
        zeros += 1
    b = a[: deg - zeros + 1]
    d = len(b) - 1
    roots = np.zeros(zeros, dtype=complex)
    if d:
        bound = 1 + np.max(np.abs(b[1:]))
        z = (0.4 + 0.9j) ** np.arange(d) * min(bound, 1e6) * 0.5 + 1e-3
        scale = lambda x: np.polyval(np.abs(b), np.abs(x))  # noqa: E731
        for _ in range(max_iter):
            pz = np.polyval(b, z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            den = np.prod(diff, axis=1)
            step = pz / den
            z = z - step
            res = np.max(np.abs(np.polyval(b, z)) / scale(z))
            if res < tol and np.max(np.abs(step) / (1 + np.abs(z))) < 1e-12:
                break
        else:
            res = np.max(np.abs(np.polyval(b, z)) / scale(z))
            if res >= tol:
                raise ConvergenceError(f"Durand-Kerner residual {res:.3e} after {max_iter} steps")
        roots = np.concatenate([roots, z])
    return roots


def _cauchy_bound(coeffs) -> float:
    a = np.array(coeffs, dtype=complex)
    a = a[np.nonzero(np.abs(a) > 0)[0][0]:]
    return 1 + float(np.max(np.abs(a[1:] / a[0]))) if len(a) > 1 else 0.0


def integer_spectral_radius(M) -> float:
    """Spectral radius of an integer matrix, root-finding per irreducible factor."""
    A = np.asarray(M, dtype=object)
    if A.shape[0] == 0:
        return 0.0
    _, facs = _as_fmpz(A).charpoly().factor()
    best = 0.0
    for f, _m in facs:
        c = [float(x) for x in reversed(f.coeffs())]
        if len(c) > 1:
            best = max(best, float(np.max(np.abs(durand_kerner(c)))))
    return best


def complex_spectral_radius(M, slack: float = RADIUS_SLACK) -> float:
    A = np.asarray(M)
    if A.size == 0:
        return 0.0
    if A.dtype == object or np.issubdtype(A.dtype, np.integer):
        return integer_spectral_radius(A)
    if np.all(np.abs(A.imag if np.iscomplexobj(A) else 0) == 0) and np.all(A.real == np.round(A.real)):
        return integer_spectral_radius(np.round(A.real).astype(np.int64).astype(object))
    coeffs = hessenberg_charpoly(A)
    roots = durand_kerner(coeffs)
    rho = float(np.max(np.abs(roots))) if len(roots) else 0.0
    if rho > _cauchy_bound(coeffs) + slack:  # pragma: no cover - sanity guard
        raise ConvergenceError("root outside the Cauchy bound")
    return rho


@dataclass(frozen=True)
class ChainHomologyReport:
    chain_radius: float
    homology_radius: float
    ok: bool


def chain_vs_homology_check(phi: GraphMap, tol: float = 1e-6) -> ChainHomologyReport:
    """Compare spectral radii of the signed edge-chain action and the H_1 action."""
    C = graphs.chain_action(phi)
    H = graphs.homology_action(phi, homology_basis(phi.domain))
    rc = integer_spectral_radius(C)
    rh = integer_spectral_radius(H)
    ok = rh >= rc - tol if rc > 1 + tol else True
    return ChainHomologyReport(rc, rh, ok)
