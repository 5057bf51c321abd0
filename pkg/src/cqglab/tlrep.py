"""Representation category of the free orthogonal quantum group, numerically.

Irreducibles are labelled by nonnegative integers.  The carrier of label n
is realized inside the n-th tensor power of C^N as the range of the n-th
Jones-Wenzl projector; fusion isometries are built from nested-cup
insertions compressed by the embedding isometries.  Everything downstream
(dual coproduct blocks, derivation symbols) is expressed through these
matrices, so the whole category is pinned by this module's conventions:

* embeddings come from pivoted QR of the projector, hence are real;
* each fusion isometry has its first sizeable coordinate made real
  positive, which makes the fusion unitaries reproducible;
* projectors, embeddings and fusion unitaries are cached in memory and,
  when a cache directory is configured, on disk as .npy files (NumPy's
  versioned binary array container) under a format-version prefix.
"""

from __future__ import annotations

import os
import tempfile
import threading

import numpy as np
import scipy.linalg

from .errors import EnvelopeError, InternalConsistencyError, StructureError

CACHE_FORMAT = "v1"
DEFAULT_ENVELOPE = 8192
_PHASE_CUTOFF = 1e-9


def chebyshev_dims(N: int, nmax: int) -> list[int]:
    """d_0 = 1, d_1 = N, d_{n+1} = N d_n - d_{n-1}, as exact integers."""
    if N < 2:
        raise StructureError(f"need N >= 2, got {N}")
    dims = [1, N]
    for _ in range(nmax - 1):
        dims.append(N * dims[-1] - dims[-2])
    return dims[:nmax + 1]


def dim(N: int, n: int) -> int:
    if n < 0:
        raise StructureError(f"label must be nonnegative, got {n}")
    return chebyshev_dims(N, max(n, 1))[n]


def fusion_range(beta: int, gamma: int) -> list[int]:
    """Labels appearing in beta (x) gamma: |beta-gamma|, ..., beta+gamma step 2."""
    return list(range(abs(beta - gamma), beta + gamma + 1, 2))


def cup_vector(N: int, m: int) -> np.ndarray:
    """Nested cups pairing slot k with slot 2m+1-k, as a vector in (C^N)^(2m)."""
    vec = np.ones(1)
    for _ in range(m):
        out = np.zeros(N * vec.size * N)
        for j in range(N):
            ej = np.zeros(N)
            ej[j] = 1.0
            out += np.kron(ej, np.kron(vec, ej))
        vec = out
    return vec


def rotation_matrix(N: int, t: float) -> np.ndarray:
    """Rotation by t in the (1,2) coordinate plane, identity elsewhere."""
    R = np.eye(N)
    R[0, 0] = np.cos(t)
    R[0, 1] = -np.sin(t)
    R[1, 0] = np.sin(t)
    R[1, 1] = np.cos(t)
    return R


class IrrepCategory:
    """Dimensions, projectors, embeddings and fusion data for one N.

    All getters are cached; pure computations may run concurrently, disk
    writes are atomic (tmp file + rename) and serialized per instance.
    """

    def __init__(self, N: int, envelope: int = DEFAULT_ENVELOPE,
                 cache_dir: str | None = None):
        if N < 2:
            raise StructureError(f"need N >= 2, got {N}")
        self.N = int(N)
        self.envelope = int(envelope)
        self.cache_dir = cache_dir
        self.cache_hits = 0
        self._jw: dict[int, np.ndarray] = {}
        self._embed: dict[int, np.ndarray] = {}
        self._fusion: dict[tuple[int, int], np.ndarray] = {}
        self._selfdual: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()
        if cache_dir:
            os.makedirs(cache_dir, exist_ok=True)

    # -- envelope and dimensions -------------------------------------------

    def check_envelope(self, exponent: int) -> None:
        size = self.N ** exponent
        if size > self.envelope:
            raise EnvelopeError(
                f"N^{exponent} = {size} exceeds the envelope {self.envelope}",
                size=size, envelope=self.envelope)

    def dim(self, n: int) -> int:
        return dim(self.N, n)

    def dims_upto(self, nmax: int) -> list[int]:
        return chebyshev_dims(self.N, nmax)

    # -- disk cache ----------------------------------------------------------

    def _cache_path(self, kind: str, *key: int) -> str | None:
        if not self.cache_dir:
            return None
        tag = "_".join(str(k) for k in key)
        return os.path.join(self.cache_dir, f"{CACHE_FORMAT}_{kind}_N{self.N}_{tag}.npy")

    def _cache_load(self, path: str | None) -> np.ndarray | None:
        if path and os.path.exists(path):
            self.cache_hits += 1
            return np.load(path)
        return None

    def _cache_store(self, path: str | None, arr: np.ndarray) -> None:
        if not path:
            return
        with self._lock:
            fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".npy")
            try:
                with os.fdopen(fd, "wb") as fh:
                    np.save(fh, arr.astype(np.complex128))
                os.replace(tmp, path)
            finally:
                if os.path.exists(tmp):
                    os.remove(tmp)

    # -- Jones-Wenzl projectors and embeddings --------------------------------

    def jones_wenzl(self, n: int) -> np.ndarray:
        """Orthogonal projector of rank d_n on (C^N)^(x n), by the Wenzl recursion."""
        if n < 0:
            raise StructureError(f"label must be nonnegative, got {n}")
        if n in self._jw:
            return self._jw[n]
        self.check_envelope(n)
        path = self._cache_path("jw", n)
        cached = self._cache_load(path)
        if cached is not None:
            self._jw[n] = cached.real
            return self._jw[n]
        N = self.N
        d = self.dims_upto(max(n, 1))
        cup = cup_vector(N, 1)
        cupcap = np.outer(cup, cup)          # unnormalized: square = N * itself
        ps = [np.ones((1, 1)), np.eye(N)]
        for k in range(1, n):
            pk = ps[k]
            pk_ext = np.kron(pk, np.eye(N))
            cap_k = np.kron(np.eye(pk_ext.shape[0] // (N * N)), cupcap)
            ps.append(pk_ext - (d[k - 1] / d[k]) * (pk_ext @ cap_k @ pk_ext))
        proj = ps[n] if n >= 1 else ps[0]
        self._jw[n] = proj
        self._cache_store(path, proj)
        return proj

    def embedding(self, n: int) -> np.ndarray:
        """Isometry W_n: C^{d_n} -> (C^N)^(x n) spanning the projector range.

        Extracted by pivoted QR of the projector columns; the pivot order is
        deterministic, so embeddings are reproducible across runs.
        """
        if n in self._embed:
            return self._embed[n]
        path = self._cache_path("embed", n)
        cached = self._cache_load(path)
        if cached is not None:
            self._embed[n] = cached.real
            return self._embed[n]
        proj = self.jones_wenzl(n)
        q, _, _ = scipy.linalg.qr(proj, pivoting=True)
        W = q[:, :self.dim(n)]
        self._embed[n] = W
        self._cache_store(path, W)
        return W

    def rotation_rep(self, n: int, t: float) -> np.ndarray:
        """Restriction of rotation^(x n) to the carrier of label n."""
        if n == 0:
            return np.ones((1, 1))
        R = rotation_matrix(self.N, t)
        M = R
        for _ in range(n - 1):
            M = np.kron(M, R)
        W = self.embedding(n)
        return W.T @ M @ W

    # -- fusion ----------------------------------------------------------------

    def fusion_isometry(self, beta: int, gamma: int, alpha: int) -> np.ndarray:
        """Isometry C^{d_alpha} -> C^{d_beta} (x) C^{d_gamma} intertwining the fusion.

        Built as the compression of a nested-cup insertion; the morphism
        space is one-dimensional, so after normalization the result is
        canonical up to the fixed phase convention.
        """
        if alpha not in fusion_range(beta, gamma):
            raise StructureError(
                f"label {alpha} does not occur in {beta} (x) {gamma}")
        self.check_envelope(beta + gamma)
        N = self.N
        m = (beta + gamma - alpha) // 2
        cup = cup_vector(N, m).reshape(-1, 1)
        insert = np.kron(np.eye(N ** (beta - m)), np.kron(cup, np.eye(N ** (gamma - m))))
        Wb, Wg, Wa = self.embedding(beta), self.embedding(gamma), self.embedding(alpha)
        T0 = np.kron(Wb, Wg).T @ (insert @ Wa)
        norm2 = float(np.trace(T0.T.conj() @ T0).real) / self.dim(alpha)
        if norm2 < 1e-24:
            raise InternalConsistencyError(
                f"fusion morphism ({beta},{gamma})->{alpha} is numerically zero")
        T = T0 / np.sqrt(norm2)
        flat = T.reshape(-1)
        pivot = np.nonzero(np.abs(flat) > _PHASE_CUTOFF * np.abs(flat).max())[0][0]
        phase = flat[pivot] / abs(flat[pivot])
        T = T / phase
        gram = T.T.conj() @ T
        if np.abs(gram - np.eye(self.dim(alpha))).max() > 1e-8:
            raise InternalConsistencyError(
                f"fusion morphism ({beta},{gamma})->{alpha} failed to normalize "
                "to an isometry; projector cache is inconsistent")
        return T

    def fusion_unitary(self, beta: int, gamma: int) -> np.ndarray:
        """Block unitary with the fusion isometries as columns, ascending labels."""
        key = (beta, gamma)
        if key in self._fusion:
            return self._fusion[key]
        path = self._cache_path("fusion", beta, gamma)
        cached = self._cache_load(path)
        if cached is not None:
            self._fusion[key] = cached.real
            return self._fusion[key]
        V = np.hstack([self.fusion_isometry(beta, gamma, a)
                       for a in fusion_range(beta, gamma)])
        self._fusion[key] = V
        self._cache_store(path, V)
        return V

    def fusion_column(self, beta: int, gamma: int, alpha: int) -> np.ndarray:
        """Columns of the fusion unitary belonging to one label."""
        V = self.fusion_unitary(beta, gamma)
        offset = 0
        for a in fusion_range(beta, gamma):
            width = self.dim(a)
            if a == alpha:
                return V[:, offset:offset + width]
            offset += width
        raise StructureError(f"label {alpha} does not occur in {beta} (x) {gamma}")

    # -- self-duality -----------------------------------------------------------

    def selfdual_matrix(self, n: int) -> np.ndarray:
        """Symmetric orthogonal J_n with invariant vector of n (x) n = J_n / sqrt(d_n).

        J_0 = J_1 = identity.  For higher labels the pivoted-QR basis is not
        the canonical self-dual basis, and J_n is exactly the basis defect:
        the dual antipode on block n is X |-> J_n^* X^t J_n.
        """
        if n in self._selfdual:
            return self._selfdual[n]
        if n == 0:
            J = np.ones((1, 1))
        else:
            iso = self.fusion_isometry(n, n, 0)
            J = np.sqrt(self.dim(n)) * iso.reshape(self.dim(n), self.dim(n))
            sym = np.abs(J - J.T).max()
            unit = np.abs(J @ J.T.conj() - np.eye(self.dim(n))).max()
            if max(sym, unit) > 1e-8:
                raise InternalConsistencyError(
                    f"self-duality matrix at label {n} is not symmetric-orthogonal "
                    f"(sym {sym:.2e}, unit {unit:.2e})")
        self._selfdual[n] = J
        return J

    def conjugation(self, max_label: int) -> "Conjugation":
        from .blocks import Conjugation
        return Conjugation(
            label_map={n: n for n in range(max_label + 1)},
            matrices={n: self.selfdual_matrix(n) for n in range(max_label + 1)})


def diagonal_dft_unitary(N: int) -> np.ndarray:
    """N^2 x N^2 unitary: identity on the off-diagonal pairs e_j (x) e_k, the
    Z_N Fourier matrix on the diagonal pairs e_j (x) e_j.

    Entry at row (j,k), column (l,m), 1-based:
    (1 - delta_jk) delta_jl delta_km + delta_jk delta_lm exp(2 pi i j l / N) / sqrt(N).
    Its last column is the normalized invariant vector of C^N (x) C^N.
    """
    if N < 2:
        raise StructureError(f"need N >= 2, got {N}")
    U = np.zeros((N * N, N * N), dtype=complex)
    for j in range(1, N + 1):
        for k in range(1, N + 1):
            row = (j - 1) * N + (k - 1)
            if j != k:
                U[row, row] = 1.0
            else:
                for l in range(1, N + 1):
                    col = (l - 1) * N + (l - 1)
                    U[row, col] = np.exp(2j * np.pi * j * l / N) / np.sqrt(N)
    return U


def compare_decompositions(cat: IrrepCategory, tol: float = 1e-10) -> dict:
    """Align the explicit N^2 x N^2 unitary with the fusion unitary of (1,1).

    Both decompose the same product, so after permuting the explicit
    unitary's columns into ascending-label order the product
    V(1,1)^* U P must be block diagonal with unitary blocks of sizes
    (1, d_2); representatives are only fixed up to this block freedom.
    """
    N = cat.N
    U = diagonal_dft_unitary(N)
    nn = N * N
    perm = np.zeros((nn, nn))
    perm[nn - 1, 0] = 1.0                  # invariant-vector column first
    for i in range(nn - 1):
        perm[i, i + 1] = 1.0
    V = cat.fusion_unitary(1, 1)
    W = V.T.conj() @ U @ perm
    d2 = cat.dim(2)
    off_mass = float(np.sqrt(np.linalg.norm(W[0, 1:]) ** 2
                             + np.linalg.norm(W[1:, 0]) ** 2))
    trivial_block = complex(W[0, 0])
    big_block = W[1:, 1:]
    big_unitarity = float(np.abs(big_block @ big_block.conj().T - np.eye(d2)).max())
    return {
        "off_block_mass": off_mass,
        "trivial_block_modulus_defect": abs(abs(trivial_block) - 1.0),
        "block_unitarity": big_unitarity,
        "pass": off_mass < tol and big_unitarity < tol
                and abs(abs(trivial_block) - 1.0) < tol,
    }
