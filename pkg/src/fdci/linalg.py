"""Banded matrix storage and direct solvers.

Every scheme in this package produces a square matrix with a small fixed
bandwidth (tridiagonal systems from three-point stencils, pentadiagonal
Gram matrices from their normal equations).  Storage follows the classic
band layout: one dense row per diagonal, ``bands[ku + i - j, j] = A[i, j]``,
so a matrix of dimension n with lower bandwidth kl and upper bandwidth ku
occupies a (kl + ku + 1) x n rectangle.

Solvers are direct and pivot-free: the systems assembled by the models are
diagonally dominant or near-dominant, so a vanishing pivot is treated as an
input error rather than something to recover from.  A dense fallback
(``dense_solve``) exists for small systems and serves as the oracle in the
test suite; the production paths never go through it for tridiagonal work.
"""

import numpy as np

__all__ = [
    "BandedMatrix",
    "BandedCholeskyFactor",
    "SingularMatrixError",
    "NotPositiveDefiniteError",
    "band_matvec",
    "thomas_solve",
    "banded_cholesky",
    "gram_factor",
    "normal_equations",
    "solve_lower_banded",
    "solve_upper_banded",
    "banded_solve",
    "dense_solve",
]

DENSE_FALLBACK_MAX_N = 64


class SingularMatrixError(np.linalg.LinAlgError):
    """A direct solver hit a zero (or numerically zero) pivot."""


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    """Cholesky factorization found a non-positive pivot."""


class BandedMatrix:
    """Square matrix stored by diagonals.

    Parameters
    ----------
    n : int
        Dimension (n >= 1).
    kl, ku : int
        Lower / upper bandwidth (number of sub-/super-diagonals).
    bands : ndarray, shape (kl + ku + 1, n)
        Band storage, ``bands[ku + i - j, j] = A[i, j]``.  Slots that do
        not correspond to a matrix entry must be zero.
    """

    __slots__ = ("n", "kl", "ku", "bands")

    def __init__(self, n: int, kl: int, ku: int, bands: np.ndarray):
        if n < 1:
            raise ValueError(f"BandedMatrix: n must be >= 1, got {n}")
        if kl < 0 or ku < 0:
            raise ValueError(f"BandedMatrix: bandwidths must be >= 0, got kl={kl}, ku={ku}")
        if kl + ku + 1 > 2 * n - 1:
            raise ValueError(f"BandedMatrix: kl+ku+1={kl + ku + 1} exceeds 2n-1={2 * n - 1}")
        bands = np.asarray(bands, dtype=float)
        if bands.shape != (kl + ku + 1, n):
            raise ValueError(
                f"BandedMatrix: bands must have shape {(kl + ku + 1, n)}, got {bands.shape}"
            )
        self.n = n
        self.kl = kl
        self.ku = ku
        self.bands = bands

    @classmethod
    def zeros(cls, n: int, kl: int, ku: int) -> "BandedMatrix":
        return cls(n, kl, ku, np.zeros((kl + ku + 1, n)))

    @classmethod
    def identity(cls, n: int, kl: int = 0, ku: int = 0) -> "BandedMatrix":
        out = cls.zeros(n, kl, ku)
        out.bands[ku, :] = 1.0
        return out

    @classmethod
    def from_diagonal(cls, diag: np.ndarray) -> "BandedMatrix":
        diag = np.asarray(diag, dtype=float)
        return cls(diag.size, 0, 0, diag.reshape(1, -1).copy())

    @classmethod
    def tridiagonal(cls, sub: np.ndarray, diag: np.ndarray, sup: np.ndarray) -> "BandedMatrix":
        """Build from the three diagonals; sub/sup have length n - 1.

        A single-row system degenerates to a diagonal matrix (the storage
        cannot carry off-diagonals when n = 1).
        """
        diag = np.asarray(diag, dtype=float)
        sub = np.asarray(sub, dtype=float)
        sup = np.asarray(sup, dtype=float)
        n = diag.size
        if n < 1 or sub.size != n - 1 or sup.size != n - 1:
            raise ValueError("tridiagonal: need len(diag)=n, len(sub)=len(sup)=n-1")
        if n == 1:
            return cls.from_diagonal(diag)
        out = cls.zeros(n, 1, 1)
        out.bands[0, 1:] = sup
        out.bands[1, :] = diag
        out.bands[2, :-1] = sub
        return out

    @classmethod
    def from_dense(cls, dense: np.ndarray, kl: int, ku: int) -> "BandedMatrix":
        dense = np.asarray(dense, dtype=float)
        n = dense.shape[0]
        if dense.shape != (n, n):
            raise ValueError("from_dense: matrix must be square")
        out = cls.zeros(n, kl, ku)
        for d in range(-kl, ku + 1):
            j0 = max(0, d)
            j1 = n + min(0, d)
            out.bands[ku - d, j0:j1] = np.diagonal(dense, offset=d)
        outside = dense.copy()
        for d in range(-kl, ku + 1):
            idx = np.arange(max(0, d), n + min(0, d))
            outside[idx - d, idx] = 0.0
        if np.any(outside != 0.0):
            raise ValueError("from_dense: entries outside the stated bandwidth are nonzero")
        return out

    def entry(self, i: int, j: int) -> float:
        """A[i, j]; zero outside the band by construction."""
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"entry({i}, {j}) out of range for n={self.n}")
        if j - i > self.ku or i - j > self.kl:
            return 0.0
        return float(self.bands[self.ku + i - j, j])

    def diagonal(self, offset: int = 0) -> np.ndarray:
        """The diagonal A[i, i+offset] as a contiguous vector."""
        if offset > self.ku or -offset > self.kl:
            return np.zeros(max(self.n - abs(offset), 0))
        j0 = max(0, offset)
        j1 = self.n + min(0, offset)
        return self.bands[self.ku - offset, j0:j1].copy()

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for d in range(-self.kl, self.ku + 1):
            j = np.arange(max(0, d), self.n + min(0, d))
            out[j - d, j] = self.bands[self.ku - d, j]
        return out

    def scaled(self, c: float) -> "BandedMatrix":
        return BandedMatrix(self.n, self.kl, self.ku, self.bands * c)

    def with_bandwidth(self, kl: int, ku: int) -> "BandedMatrix":
        """Copy with (weakly larger) bandwidths; new bands are zero."""
        if kl < self.kl or ku < self.ku:
            raise ValueError("with_bandwidth: bandwidths can only grow")
        out = BandedMatrix.zeros(self.n, kl, ku)
        out.bands[ku - self.ku:ku + self.kl + 1, :] = self.bands
        return out

    def __repr__(self) -> str:
        return f"BandedMatrix(n={self.n}, kl={self.kl}, ku={self.ku})"


class BandedCholeskyFactor:
    """Lower-triangular banded factor L with L @ L.T equal to the input.

    ``bands[r, j] = L[j + r, j]`` for r = 0..kl, i.e. row 0 holds the
    diagonal of L and row r its r-th sub-diagonal.
    """

    __slots__ = ("n", "kl", "bands")

    def __init__(self, n: int, kl: int, bands: np.ndarray):
        bands = np.asarray(bands, dtype=float)
        if bands.shape != (kl + 1, n):
            raise ValueError(f"BandedCholeskyFactor: bands must have shape {(kl + 1, n)}")
        self.n = n
        self.kl = kl
        self.bands = bands

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for r in range(self.kl + 1):
            j = np.arange(0, self.n - r)
            out[j + r, j] = self.bands[r, :self.n - r]
        return out

    def __repr__(self) -> str:
        return f"BandedCholeskyFactor(n={self.n}, kl={self.kl})"


def band_matvec(A: BandedMatrix, v: np.ndarray) -> np.ndarray:
    """A @ v touching only the stored bands."""
    v = np.asarray(v, dtype=float)
    if v.shape != (A.n,):
        raise ValueError(f"band_matvec: v has shape {v.shape}, expected ({A.n},)")
    y = np.zeros(A.n)
    for d in range(-A.kl, A.ku + 1):
        # diagonal d contributes A[i, i+d] * v[i+d] for valid i
        i0 = max(0, -d)
        i1 = A.n - max(0, d)
        j = np.arange(i0, i1) + d
        y[i0:i1] += A.bands[A.ku - d, j] * v[j]
    return y


def thomas_solve(A: BandedMatrix, b: np.ndarray) -> np.ndarray:
    """Solve the tridiagonal system A x = b by forward elimination.

    No pivoting: the systems this package assembles are diagonally
    dominant or near-dominant.  A pivot below 1e-14 times the row scale
    raises :class:`SingularMatrixError` naming the offending row.
    """
    if A.kl > 1 or A.ku > 1:
        raise ValueError(f"thomas_solve: matrix must be tridiagonal (kl, ku <= 1), got kl={A.kl}, ku={A.ku}")
    b = np.asarray(b, dtype=float)
    n = A.n
    if b.shape != (n,):
        raise ValueError(f"thomas_solve: b has shape {b.shape}, expected ({n},)")

    # plain-float lists: the sweeps are sequential, and list arithmetic is
    # far cheaper than per-element ndarray indexing for the long time loops
    diag = A.diagonal(0).tolist()
    sup = A.diagonal(1).tolist()   # sup[i] = A[i, i+1]
    sub = A.diagonal(-1).tolist()  # sub[i] = A[i+1, i]
    rhs = b.tolist()

    cp = [0.0] * n
    xp = [0.0] * n
    scale = max(abs(diag[0]), abs(sup[0]) if n > 1 else 0.0, 1e-300)
    if abs(diag[0]) < 1e-14 * scale:
        raise SingularMatrixError("thomas_solve: zero pivot at row 0")
    cp[0] = sup[0] / diag[0] if n > 1 else 0.0
    xp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        a_i = sub[i - 1]
        denom = diag[i] - a_i * cp[i - 1]
        scale = max(abs(a_i), abs(diag[i]), abs(sup[i]) if i < n - 1 else 0.0, 1e-300)
        if abs(denom) < 1e-14 * scale:
            raise SingularMatrixError(f"thomas_solve: zero pivot at row {i}")
        if i < n - 1:
            cp[i] = sup[i] / denom
        xp[i] = (rhs[i] - a_i * xp[i - 1]) / denom

    x = [0.0] * n
    x[n - 1] = xp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = xp[i] - cp[i] * x[i + 1]
    return np.array(x)


def normal_equations(X: BandedMatrix) -> BandedMatrix:
    """X.T @ X as a banded matrix of bandwidth kl + ku per side.

    The upper diagonals are computed once and mirrored into the lower
    storage, so the result is symmetric bit-for-bit.
    """
    n, kl, ku = X.n, X.kl, X.ku
    w = min(kl + ku, n - 1)
    out = BandedMatrix.zeros(n, w, w)
    # (X^T X)[i, i+d] = sum_k X[k, i] X[k, i+d]; split the sum by the pair
    # of X-diagonals (a, b) with a - b = d, where X[k, j] sits on diagonal
    # a = k - j in [-ku, kl].
    for d in range(0, w + 1):
        acc = np.zeros(n - d)
        i = np.arange(0, n - d)
        for a in range(-ku, kl + 1):
            bdiag = a - d
            if bdiag < -ku or bdiag > kl:
                continue
            k = i + a
            valid = (k >= 0) & (k < n)
            if not np.any(valid):
                continue
            iv = i[valid]
            kv = k[valid]
            acc[iv] += X.bands[ku + a, iv] * X.bands[ku + bdiag, iv + d]
        out.bands[w - d, d:] = acc
        if d > 0:
            out.bands[w + d, :n - d] = acc
    return out


def banded_cholesky(S: BandedMatrix) -> BandedCholeskyFactor:
    """Factor a symmetric positive definite band matrix as L @ L.T.

    Symmetry is validated to 1e-12 (relative to the largest entry); a
    non-positive pivot raises :class:`NotPositiveDefiniteError` with the
    failing index.
    """
    if S.kl != S.ku:
        raise ValueError("banded_cholesky: matrix must have kl == ku")
    n, w = S.n, S.kl
    scale = float(np.max(np.abs(S.bands))) or 1.0
    for d in range(1, w + 1):
        upper = S.bands[w - d, d:]
        lower = S.bands[w + d, :n - d]
        if np.max(np.abs(upper - lower), initial=0.0) > 1e-12 * scale:
            raise ValueError("banded_cholesky: matrix is not symmetric to 1e-12")

    L = np.zeros((w + 1, n))
    col = S.bands  # alias for readability; col[w + r, j] = S[j + r, j]
    for j in range(n):
        back = min(w, j)
        s = 0.0
        for k in range(j - back, j):
            s += L[j - k, k] * L[j - k, k]
        pivot = col[w, j] - s
        if pivot <= 0.0:
            raise NotPositiveDefiniteError(f"banded_cholesky: non-positive pivot at index {j}")
        ljj = pivot ** 0.5
        L[0, j] = ljj
        for r in range(1, min(w, n - 1 - j) + 1):
            i = j + r
            s = 0.0
            for k in range(max(i - w, 0), j):
                s += L[i - k, k] * L[j - k, k]
            L[r, j] = (col[w + r, j] - s) / ljj
    return BandedCholeskyFactor(n, w, L)


def gram_factor(X: BandedMatrix) -> BandedCholeskyFactor:
    """Lower factor L with L @ L.T = X.T @ X, computed without forming X.T X.

    Givens QR of X gives X = Q R with R upper-banded and a nonnegative
    diagonal, so R.T is the Cholesky factor of the Gram matrix while only
    paying X's condition number instead of its square.  This is the factor
    the posterior sampler uses: clustered grids produce Jacobian rows many
    orders of magnitude apart, for which factoring the explicit normal
    equations fails in double precision.

    Supports diagonal and tridiagonal X (everything the models assemble).
    Raises :class:`SingularMatrixError` if X is numerically rank deficient.
    """
    n = X.n
    if X.kl == 0 and X.ku == 0:
        d = np.abs(X.bands[0])
        bad = d < 1e-300
        if np.any(bad):
            raise SingularMatrixError(f"gram_factor: zero column at index {int(np.argmax(bad))}")
        return BandedCholeskyFactor(n, 0, d.reshape(1, -1).copy())
    if X.kl > 1 or X.ku > 1:
        raise ValueError(f"gram_factor: bandwidths kl={X.kl}, ku={X.ku} not supported (max 1)")
    T = X if (X.kl == 1 and X.ku == 1) else X.with_bandwidth(1, 1)
    sup = T.bands[0]   # sup[j] = X[j-1, j]
    diag = T.bands[1]
    sub = T.bands[2]   # sub[j] = X[j+1, j]

    # rolling Givens sweep: `row` holds the active row j over columns j..j+2
    R = np.zeros((3, n))  # R[r, j] = R_dense[j, j+r]
    row = [diag[0], sup[1] if n > 1 else 0.0, 0.0]
    for j in range(n - 1):
        nxt = [sub[j], diag[j + 1], sup[j + 2] if j + 2 < n else 0.0]
        r = (row[0] * row[0] + nxt[0] * nxt[0]) ** 0.5
        if r < 1e-300:
            raise SingularMatrixError(f"gram_factor: zero pivot at column {j}")
        c, s = row[0] / r, nxt[0] / r
        R[0, j] = r
        R[1, j] = c * row[1] + s * nxt[1]
        R[2, j] = c * row[2] + s * nxt[2]
        row = [-s * row[1] + c * nxt[1], -s * row[2] + c * nxt[2], 0.0]
    if abs(row[0]) < 1e-300:
        raise SingularMatrixError(f"gram_factor: zero pivot at column {n - 1}")
    R[0, n - 1] = abs(row[0])
    # L = R^T: L[j+r, j] = R[r, j]
    w = min(2, n - 1)
    return BandedCholeskyFactor(n, w, R[:w + 1])


def solve_lower_banded(L: BandedCholeskyFactor, b: np.ndarray) -> np.ndarray:
    """Forward substitution L x = b; b may be a vector or an (n, k) matrix."""
    b = np.asarray(b, dtype=float)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    n = L.n
    if b.shape[0] != n:
        raise ValueError(f"solve_lower_banded: rhs has {b.shape[0]} rows, expected {n}")
    x = np.empty_like(b)
    bands = L.bands
    for i in range(n):
        acc = b[i].copy()
        for r in range(1, min(L.kl, i) + 1):
            acc -= bands[r, i - r] * x[i - r]
        x[i] = acc / bands[0, i]
    return x[:, 0] if squeeze else x


def solve_upper_banded(L: BandedCholeskyFactor, b: np.ndarray) -> np.ndarray:
    """Back substitution L.T x = b; b may be a vector or an (n, k) matrix."""
    b = np.asarray(b, dtype=float)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    n = L.n
    if b.shape[0] != n:
        raise ValueError(f"solve_upper_banded: rhs has {b.shape[0]} rows, expected {n}")
    x = np.empty_like(b)
    bands = L.bands
    for i in range(n - 1, -1, -1):
        acc = b[i].copy()
        for r in range(1, min(L.kl, n - 1 - i) + 1):
            # L.T[i, i+r] = L[i+r, i]
            acc -= bands[r, i] * x[i + r]
        x[i] = acc / bands[0, i]
    return x[:, 0] if squeeze else x


def dense_solve(A: BandedMatrix, b: np.ndarray) -> np.ndarray:
    """Small-system fallback via a dense solve (test oracle; off the main path)."""
    if A.n > DENSE_FALLBACK_MAX_N:
        raise ValueError(f"dense_solve: n={A.n} exceeds the fallback limit {DENSE_FALLBACK_MAX_N}")
    return np.linalg.solve(A.to_dense(), np.asarray(b, dtype=float))


def banded_solve(A: BandedMatrix, b: np.ndarray) -> np.ndarray:
    """Solve A x = b choosing a direct path from the bandwidth.

    Diagonal and tridiagonal systems (everything the models assemble) are
    handled natively; anything wider falls back to the dense solver.
    """
    if A.kl == 0 and A.ku == 0:
        b = np.asarray(b, dtype=float)
        if b.shape != (A.n,):
            raise ValueError(f"banded_solve: b has shape {b.shape}, expected ({A.n},)")
        d = A.bands[0]
        bad = np.abs(d) < 1e-14 * max(float(np.max(np.abs(d))), 1e-300)
        if np.any(bad):
            raise SingularMatrixError(f"banded_solve: zero pivot at row {int(np.argmax(bad))}")
        return b / d
    if A.kl <= 1 and A.ku <= 1:
        return thomas_solve(A if (A.kl == 1 and A.ku == 1) else A.with_bandwidth(1, 1), b)
    return dense_solve(A, b)
