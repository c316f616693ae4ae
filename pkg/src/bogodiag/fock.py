"""Brute-force Fock-space oracle: explicit ladder matrices and dense spectra.

The oracle builds the creation operators ``a_i`` and annihilation operators
``a_i^+`` as explicit matrices, assembles any quadratic form as a matrix, and
diagonalizes it directly.  It knows nothing about the closed-form machinery
in :mod:`bogodiag.spectral` and serves as its independent ground truth.

Fermions live on the exact 2^n-dimensional space with a Jordan-Wigner style
sign-string construction (integer matrices, anticommutators exact).  Bosons
live on a per-mode truncated space of dimension (cutoff+1)^n; the commutator
[a_i^+, a_j] = delta_ij holds exactly below the top occupation rung.  Basis
vectors are indexed by occupation numbers, mode 0 most significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ResourceLimitError
from .forms import BogoliubovTransform, QuadraticForm, StandardForm, Statistics

#: Largest fermionic Fock dimension the oracle will build (2^12).
FERMION_DIM_GUARD = 4096

#: Default guard on the truncated bosonic Fock dimension (cutoff+1)^n.
BOSON_DIM_GUARD = 200_000

#: Above this dimension eigenvalue prefixes switch from dense to Lanczos.
DENSE_EIG_LIMIT = 1200

Matrix = Union[np.ndarray, sp.csr_matrix]

_CREATE = np.array([[0, 0], [1, 0]], dtype=np.int64)
_SIGN = np.array([[1, 0], [0, -1]], dtype=np.int64)
_EYE2 = np.eye(2, dtype=np.int64)


def _kron_chain(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


@dataclass(frozen=True)
class FermionFockRep:
    """Ladder matrices on the exact fermionic Fock space of n modes."""

    n: int

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def a(self, i: int) -> np.ndarray:
        """Creation operator for mode i, sign strings over lower modes."""
        mats = [_SIGN] * i + [_CREATE] + [_EYE2] * (self.n - i - 1)
        return _kron_chain(mats)

    def a_dag(self, i: int) -> np.ndarray:
        """Annihilation operator for mode i (kills the vacuum)."""
        return self.a(i).T

    def occupations(self) -> np.ndarray:
        """Total occupation of each basis vector (popcount of its index)."""
        idx = np.arange(self.dim)
        occ = np.zeros(self.dim, dtype=np.int64)
        for bit in range(self.n):
            occ += (idx >> bit) & 1
        return occ


@dataclass(frozen=True)
class BosonFockRep:
    """Sparse ladder matrices on the truncated bosonic Fock space."""

    n: int
    cutoff: int

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.n

    def _mode_ladder(self) -> sp.csr_matrix:
        amp = np.sqrt(np.arange(1.0, self.cutoff + 1.0))
        return sp.diags(amp, -1, format="csr")

    def a(self, i: int) -> sp.csr_matrix:
        """Creation operator for mode i (matrix elements sqrt(m+1))."""
        d = self.cutoff + 1
        eye = sp.identity(d, format="csr")
        mats = [eye] * self.n
        mats[i] = self._mode_ladder()
        out = mats[0]
        for m in mats[1:]:
            out = sp.kron(out, m, format="csr")
        return out

    def a_dag(self, i: int) -> sp.csr_matrix:
        return self.a(i).T.tocsr()

    def occupations(self) -> np.ndarray:
        """Total occupation of each basis vector (base cutoff+1 digit sum)."""
        base = self.cutoff + 1
        idx = np.arange(self.dim)
        occ = np.zeros(self.dim, dtype=np.int64)
        for _ in range(self.n):
            occ += idx % base
            idx = idx // base
        return occ


def build_fermion_rep(n: int, n_max: int = 12) -> FermionFockRep:
    """Exact fermionic representation; guarded at dimension 2^n_max."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > n_max or 2 ** n > FERMION_DIM_GUARD:
        raise ResourceLimitError(f"fermionic Fock dimension 2^{n} exceeds the guard")
    return FermionFockRep(n=n)


def build_boson_rep(n: int, cutoff: int, dim_guard: int = BOSON_DIM_GUARD) -> BosonFockRep:
    """Truncated bosonic representation; guarded at (cutoff+1)^n <= dim_guard."""
    if n < 1 or cutoff < 1:
        raise ValueError("n and cutoff must be at least 1")
    dim = (cutoff + 1) ** n
    if dim > dim_guard:
        raise ResourceLimitError(
            f"bosonic Fock dimension {dim} = ({cutoff}+1)^{n} exceeds the guard {dim_guard}"
        )
    return BosonFockRep(n=n, cutoff=cutoff)


def _pairwise_sum_dense(coeff: np.ndarray, left: list, right: list) -> np.ndarray:
    # sum_ij coeff_ij left_i @ right_j via one batched contraction
    lstack = np.stack(left).astype(float)
    rstack = np.stack(right).astype(float)
    mixed = np.tensordot(coeff, rstack, axes=(1, 0))
    return np.einsum("ikl,ilm->km", lstack, mixed, optimize=True)


def _pairwise_sum_sparse(coeff: np.ndarray, left: list, right: list, dim: int) -> sp.csr_matrix:
    out = sp.csr_matrix((dim, dim))
    n = coeff.shape[0]
    for i in range(n):
        for j in range(n):
            if coeff[i, j] != 0.0:
                out = out + coeff[i, j] * (left[i] @ right[j])
    return out


def build_hamiltonian(form: QuadraticForm, rep) -> Matrix:
    """Assemble the quadratic form as an explicit (symmetric) matrix.

    Transposing Y = sum U_ij a_i^+ a_j^+ yields the -/+ U_ij a_i a_j block
    and transposing X = sum V_ij a_i a_j^+ its mirror, so
    H = Y + Y^t + X + X^t + const is symmetric exactly by construction.
    Fermionic output is dense, bosonic output is sparse CSR.
    """
    if form.statistics is not _rep_statistics(rep):
        raise ValueError("statistics of form and representation differ")
    if form.n != rep.n:
        raise ValueError(f"mode count mismatch: form has {form.n}, rep has {rep.n}")
    n = form.n
    a_ops = [rep.a(i) for i in range(n)]
    adag_ops = [rep.a_dag(i) for i in range(n)]
    if isinstance(rep, FermionFockRep):
        a_f = [m.astype(float) for m in a_ops]
        adag_f = [m.astype(float) for m in adag_ops]
        y = _pairwise_sum_dense(form.U, adag_f, adag_f)
        x = _pairwise_sum_dense(form.V, a_f, adag_f)
        return y + y.T + x + x.T + form.const * np.eye(rep.dim)
    y = _pairwise_sum_sparse(form.U, adag_ops, adag_ops, rep.dim)
    x = _pairwise_sum_sparse(form.V, a_ops, adag_ops, rep.dim)
    return (y + y.T + x + x.T + form.const * sp.identity(rep.dim, format="csr")).tocsr()


def build_standard_hamiltonian(std: StandardForm, rep) -> Matrix:
    """Assemble a normal form as a matrix from its (T, R) or C coefficients."""
    if std.statistics is not _rep_statistics(rep):
        raise ValueError("statistics of form and representation differ")
    if std.n != rep.n:
        raise ValueError(f"mode count mismatch: form has {std.n}, rep has {rep.n}")
    n = std.n
    if std.statistics is Statistics.FERMION:
        xs = [(rep.a(i) + rep.a_dag(i)).astype(float) for i in range(n)]
        zs = [(rep.a_dag(i) - rep.a(i)).astype(float) for i in range(n)]
        h = _pairwise_sum_dense(std.C, xs, zs)
        return h + std.k0 * np.eye(rep.dim)
    xs = [rep.a(i) + rep.a_dag(i) for i in range(n)]
    ys = [rep.a(i) - rep.a_dag(i) for i in range(n)]
    h = _pairwise_sum_sparse(std.T, xs, xs, rep.dim)
    h = h + _pairwise_sum_sparse(std.R, ys, ys, rep.dim)
    return (h + std.k0 * sp.identity(rep.dim, format="csr")).tocsr()


def _rep_statistics(rep) -> Statistics:
    if isinstance(rep, FermionFockRep):
        return Statistics.FERMION
    if isinstance(rep, BosonFockRep):
        return Statistics.BOSON
    raise TypeError(f"not a Fock representation: {type(rep)!r}")


def exact_spectrum(matrix: Matrix, sym_tol: float = 1e-10,
                   dense_limit: int = 8192) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix (dense eigensolve)."""
    if sp.issparse(matrix):
        if matrix.shape[0] > dense_limit:
            raise ResourceLimitError(
                f"dimension {matrix.shape[0]} too large for a dense eigensolve; "
                "use truncation_stable_spectrum or lowest_eigenvalues"
            )
        matrix = matrix.toarray()
    dev = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    if dev > sym_tol:
        raise ValueError(f"matrix is not symmetric (deviation {dev:.3e})")
    return np.linalg.eigvalsh((matrix + matrix.T) / 2.0)


def lowest_eigenvalues(matrix: Matrix, k: int, dense_limit: int = DENSE_EIG_LIMIT) -> np.ndarray:
    """The k smallest eigenvalues, by dense solve or deterministic Lanczos."""
    dim = matrix.shape[0]
    k = min(k, dim)
    if not sp.issparse(matrix) or dim <= dense_limit or k >= dim - 1:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=float)
        return np.linalg.eigvalsh((dense + dense.T) / 2.0)[:k]
    v0 = np.full(dim, 1.0 / np.sqrt(dim))
    ncv = min(dim - 1, max(4 * k, 40))
    vals = spla.eigsh(matrix, k=k, which="SA", v0=v0, ncv=ncv,
                      maxiter=100 * dim, tol=1e-12, return_eigenvectors=False)
    return np.sort(vals)


def parity_sectors(rep: FermionFockRep) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal 0/1 projectors onto even and odd total occupation."""
    if not isinstance(rep, FermionFockRep):
        raise ValueError("parity sectors are defined for fermionic representations only")
    occ = rep.occupations()
    even = np.diag((occ % 2 == 0).astype(np.int64))
    odd = np.diag((occ % 2 == 1).astype(np.int64))
    return even, odd


def sector_spectra(hamiltonian: np.ndarray, rep: FermionFockRep) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues of H restricted to the even and odd sectors.

    H commutes with the occupation parity (every quadratic term changes the
    particle number by 0 or 2), so restricting is an exact block split.
    """
    occ = rep.occupations()
    even_idx = np.flatnonzero(occ % 2 == 0)
    odd_idx = np.flatnonzero(occ % 2 == 1)
    h = np.asarray(hamiltonian, dtype=float)
    even = np.linalg.eigvalsh(h[np.ix_(even_idx, even_idx)])
    odd = np.linalg.eigvalsh(h[np.ix_(odd_idx, odd_idx)])
    return even, odd


@dataclass(frozen=True)
class TruncationResult:
    """Stable eigenvalue prefix from a cutoff-doubling comparison."""

    values: tuple
    requested: int
    warning: Optional[str] = None

    @property
    def stable_count(self) -> int:
        return len(self.values)


def truncation_stable_spectrum(form: QuadraticForm, cutoff: int, k: int, tol: float,
                               dim_guard: int = BOSON_DIM_GUARD) -> TruncationResult:
    """The k smallest oracle eigenvalues that survive doubling the cutoff.

    Eigenvalues are computed at `cutoff` and `2*cutoff`; the returned prefix
    holds where both agree within `tol` (values taken from the finer basis).
    A shorter-than-k prefix carries a warning instead of failing.
    """
    if form.statistics is not Statistics.BOSON:
        raise ValueError("truncation control applies to bosonic forms only")
    if k == 0:
        return TruncationResult(values=(), requested=0)
    rep_lo = build_boson_rep(form.n, cutoff, dim_guard)
    rep_hi = build_boson_rep(form.n, 2 * cutoff, dim_guard)
    lo = lowest_eigenvalues(build_hamiltonian(form, rep_lo), k)
    hi = lowest_eigenvalues(build_hamiltonian(form, rep_hi), k)
    m = min(len(lo), len(hi))
    stable = 0
    while stable < m and abs(lo[stable] - hi[stable]) <= tol:
        stable += 1
    warning = None
    if stable < k:
        warning = (
            f"only {stable} of {k} eigenvalues are stable under cutoff doubling "
            f"({cutoff} vs {2 * cutoff}); the spectrum may be continuous or unbounded below"
        )
    return TruncationResult(values=tuple(float(v) for v in hi[:stable]),
                            requested=k, warning=warning)


def bogoliubov_mode_operators(rep, b: BogoliubovTransform) -> list:
    """Matrices of the transformed modes (b_k, b_k^+) on the original space.

    Realizes the transform semantics of :func:`bogodiag.forms.apply_transform`:
    building the transformed normal form with these operators reproduces the
    original operator matrix (exactly for fermions, below the truncation rungs
    for bosons).
    """
    n = rep.n
    if _rep_statistics(rep) is not b.statistics or n != b.n:
        raise ValueError("representation and transform are incompatible")
    if b.statistics is Statistics.FERMION:
        xs = [(rep.a(i) + rep.a_dag(i)).astype(float) for i in range(n)]
        zs = [(rep.a_dag(i) - rep.a(i)).astype(float) for i in range(n)]
        op, om = b.o_plus, b.o_minus
        out = []
        for kk in range(n):
            xk = sum(op[kk, i] * xs[i] for i in range(n))
            zk = sum(om[i, kk] * zs[i] for i in range(n))
            out.append(((xk - zk) / 2.0, (xk + zk) / 2.0))
        return out
    s = b.s
    s_inv = np.linalg.inv(s)
    xs = [rep.a(i) + rep.a_dag(i) for i in range(n)]
    ys = [rep.a(i) - rep.a_dag(i) for i in range(n)]
    out = []
    for kk in range(n):
        xk = sum(s_inv[i, kk] * xs[i] for i in range(n))
        yk = sum(s[kk, i] * ys[i] for i in range(n))
        out.append(((xk + yk) / 2.0, (xk - yk) / 2.0))
    return out
