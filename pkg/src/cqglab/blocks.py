"""Finitely supported block families on the dual side.

A block element is a family of complex matrices indexed by irreducible
labels; it models a finitely supported element of the dual of the quantum
group.  The single normalization source for every norm and product here is
the duality pairing <matrix coefficient, matrix unit> = delta delta delta
with respect to the left Haar weight

    weight(X) = sum_a d_a Tr(Q_a X_a),

so Kac mode (Q = 1, d = n) and the formula-level non-Kac mode share one
code path wherever possible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import StructureError, TruncationError
from .tlrep import IrrepCategory, fusion_range

ZERO_CUTOFF = 1e-14


class BlockElement:
    """Immutable-by-convention map label -> complex square matrix.

    Zero matrices are pruned on construction so the support is exactly the
    set of labels carrying a nonzero block.
    """

    def __init__(self, blocks: dict[int, np.ndarray]):
        cleaned = {}
        for label, mat in blocks.items():
            arr = np.asarray(mat, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise StructureError(f"block at label {label} is not square: {arr.shape}")
            if np.abs(arr).max() > ZERO_CUTOFF:
                cleaned[int(label)] = arr
        self.blocks = cleaned

    @property
    def support(self) -> list[int]:
        return sorted(self.blocks)

    def block(self, label: int, size: int | None = None) -> np.ndarray:
        if label in self.blocks:
            return self.blocks[label]
        if size is None:
            raise KeyError(label)
        return np.zeros((size, size), dtype=complex)

    def __getitem__(self, label: int) -> np.ndarray:
        return self.blocks[label]

    def __contains__(self, label: int) -> bool:
        return label in self.blocks

    def scaled(self, factor: complex) -> "BlockElement":
        return BlockElement({a: factor * m for a, m in self.blocks.items()})

    def __add__(self, other: "BlockElement") -> "BlockElement":
        out = {a: m.copy() for a, m in self.blocks.items()}
        for a, m in other.blocks.items():
            out[a] = out.get(a, 0) + m
        return BlockElement(out)

    def __sub__(self, other: "BlockElement") -> "BlockElement":
        return self + other.scaled(-1.0)

    def max_abs_diff(self, other: "BlockElement") -> float:
        labels = set(self.blocks) | set(other.blocks)
        worst = 0.0
        for a in labels:
            x = self.blocks.get(a)
            y = other.blocks.get(a)
            if x is None:
                worst = max(worst, float(np.abs(y).max()))
            elif y is None:
                worst = max(worst, float(np.abs(x).max()))
            else:
                worst = max(worst, float(np.abs(x - y).max()))
        return worst

    @staticmethod
    def matrix_unit(label: int, i: int, j: int, size: int) -> "BlockElement":
        m = np.zeros((size, size), dtype=complex)
        m[i, j] = 1.0
        return BlockElement({label: m})

    @staticmethod
    def unit() -> "BlockElement":
        return BlockElement({0: np.ones((1, 1), dtype=complex)})


@dataclass(frozen=True)
class QData:
    """Per-label (n_a, d_a, diagonal Q_a) with Tr Q_a = Tr Q_a^{-1} = d_a."""

    entries: dict = field(default_factory=dict)   # label -> (n, d, q diag vector)

    def n(self, label: int) -> int:
        return self.entries[label][0]

    def d(self, label: int) -> float:
        return self.entries[label][1]

    def q(self, label: int) -> np.ndarray:
        return np.asarray(self.entries[label][2], dtype=float)

    def labels(self) -> list[int]:
        return sorted(self.entries)

    def trace_condition_residual(self) -> float:
        worst = 0.0
        for label, (n, d, q) in self.entries.items():
            q = np.asarray(q, dtype=float)
            if len(q) != n:
                raise StructureError(f"Q diagonal at label {label} has length "
                                     f"{len(q)}, expected {n}")
            if np.any(q <= 0):
                raise StructureError(f"Q at label {label} is not positive")
            worst = max(worst, abs(q.sum() - d), abs((1.0 / q).sum() - d))
        return worst

    def fusion_sum_residual(self) -> float:
        """Quantum dimensions must be multiplicative over the fusion rules."""
        labels = self.labels()
        worst = 0.0
        for b in labels:
            for g in labels:
                rng = fusion_range(b, g)
                if any(a not in self.entries for a in rng):
                    continue
                worst = max(worst, abs(sum(self.d(a) for a in rng) - self.d(b) * self.d(g)))
        return worst

    @staticmethod
    def kac(dims: dict[int, int]) -> "QData":
        return QData({a: (n, float(n), np.ones(n)) for a, n in dims.items()})

    @staticmethod
    def geometric(q: float, max_label: int) -> "QData":
        """Synthetic non-Kac data: SU_q(2)-type quantum integers, n_a = a + 1,
        Q_a = diag(q^a, q^{a-2}, ..., q^{-a})."""
        if q <= 0 or q == 1.0:
            raise StructureError("need 0 < q != 1")
        entries = {}
        for a in range(max_label + 1):
            diag = np.array([q ** (a - 2 * k) for k in range(a + 1)])
            d = float(diag.sum())
            entries[a] = (a + 1, d, diag)
        return QData(entries)


def kac_qdata_for(cat: IrrepCategory, max_label: int) -> QData:
    return QData.kac({a: cat.dim(a) for a in range(max_label + 1)})


def _qdata_for(X: BlockElement, q: QData | None) -> QData:
    if q is not None:
        return q
    # Kac fallback: read n_a off the stored block sizes
    return QData.kac({a: X.blocks[a].shape[0] for a in X.support})


# -- weight, norms, pairing ---------------------------------------------------

def haar_weight(X: BlockElement, q: QData | None = None) -> complex:
    """weight(X) = sum_a d_a Tr(Q_a X_a)."""
    q = _qdata_for(X, q)
    total = 0.0 + 0.0j
    for a in X.support:
        total += q.d(a) * np.trace(np.diag(q.q(a)) @ X[a])
    return complex(total)


def fourier_algebra_norm(X: BlockElement, q: QData | None = None) -> float:
    """sum_a d_a * trace-norm of X_a Q_a."""
    q = _qdata_for(X, q)
    total = 0.0
    for a in X.support:
        total += q.d(a) * float(np.linalg.svd(X[a] @ np.diag(q.q(a)),
                                              compute_uv=False).sum())
    return total


def adelta_norm(X: BlockElement, q: QData | None = None) -> float:
    """Deformed Fourier norm: sum_a d_a^{3/2} ||X_a Q_a^{1/2}||_HS.

    In Kac mode (Q = 1, d = n) this is sum_a n_a^{3/2} ||X_a||_HS.
    """
    q = _qdata_for(X, q)
    total = 0.0
    for a in X.support:
        total += q.d(a) ** 1.5 * float(
            np.linalg.norm(X[a] @ np.diag(np.sqrt(q.q(a))), "fro"))
    return total


def adelta_dual_norm(X: BlockElement, q: QData | None = None) -> float:
    """Dual norm: sup_a d_a^{-1/2} ||Q_a^{1/2} X_a||_HS."""
    q = _qdata_for(X, q)
    best = 0.0
    for a in X.support:
        best = max(best, q.d(a) ** -0.5 * float(
            np.linalg.norm(np.diag(np.sqrt(q.q(a))) @ X[a], "fro")))
    return best


def pairing(X: BlockElement, Y: BlockElement, q: QData | None = None) -> complex:
    """<X . weight, Y> = sum_a d_a Tr(Q_a Y_a X_a)."""
    q = _qdata_for(X, q)
    total = 0.0 + 0.0j
    for a in X.support:
        if a in Y:
            total += q.d(a) * np.trace(np.diag(q.q(a)) @ Y[a] @ X[a])
    return complex(total)


# -- dual antipode ------------------------------------------------------------

@dataclass(frozen=True)
class Conjugation:
    """Conjugation data: label map a -> a-bar plus optional basis matrices.

    For self-conjugate labels in a canonical basis the matrices are the
    identity and the antipode is the plain blockwise transpose; a basis
    that is not canonically self-dual contributes a symmetric unitary per
    label and the antipode becomes X |-> J^* X^t J.
    """

    label_map: dict
    matrices: dict | None = None

    def conjugate_label(self, a: int) -> int:
        if a not in self.label_map:
            raise StructureError(f"no conjugate configured for label {a}")
        return self.label_map[a]

    def matrix(self, a: int, size: int) -> np.ndarray:
        if self.matrices is None or a not in self.matrices:
            return np.eye(size)
        return self.matrices[a]


def identity_conjugation(labels) -> Conjugation:
    return Conjugation(label_map={a: a for a in labels})


def dual_antipode(X: BlockElement, conj: Conjugation | None = None) -> BlockElement:
    """Antipode of the dual: blockwise transpose with label conjugation.

    With conjugation matrices J configured the block at a-bar is
    J_a^* X_a^t J_a; the involutivity S^2 = id holds because each J is
    symmetric.
    """
    if conj is None:
        conj = identity_conjugation(X.support)
    out = {}
    for a in X.support:
        abar = conj.conjugate_label(a)
        J = conj.matrix(a, X[a].shape[0])
        out[abar] = J.conj().T @ X[a].T @ J
    return BlockElement(out)


# -- dual coproduct blocks ------------------------------------------------------

def coproduct_block(X: BlockElement, beta: int, gamma: int,
                    cat: IrrepCategory) -> np.ndarray:
    """(beta, gamma) block of the dual coproduct:
    V(beta,gamma) (directsum_{a in beta x gamma} X_a) V(beta,gamma)^*."""
    V = cat.fusion_unitary(beta, gamma)
    diag = np.zeros((V.shape[0], V.shape[0]), dtype=complex)
    offset = 0
    for a in fusion_range(beta, gamma):
        width = cat.dim(a)
        if a in X:
            diag[offset:offset + width, offset:offset + width] = X[a]
        offset += width
    return V @ diag @ V.conj().T


def coproduct_of_matrix_unit(alpha: int, i: int, j: int, beta: int, gamma: int,
                             cat: IrrepCategory) -> np.ndarray:
    """(beta, gamma) block of the coproduct of one matrix unit: the outer
    product of fusion-unitary columns (alpha, i) and (alpha, j); zero when
    alpha does not occur in beta (x) gamma."""
    size = cat.dim(beta) * cat.dim(gamma)
    if alpha not in fusion_range(beta, gamma):
        return np.zeros((size, size), dtype=complex)
    cols = cat.fusion_column(beta, gamma, alpha)
    return np.outer(cols[:, i], cols[:, j].conj())


# -- the deformed Fourier product ----------------------------------------------

def fusion_closure(support_x, support_y) -> set[int]:
    out: set[int] = set()
    for b in support_x:
        for g in support_y:
            out.update(fusion_range(b, g))
    return out


def adelta_product(X: BlockElement, Y: BlockElement, cat: IrrepCategory,
                   max_label: int | None = None) -> BlockElement:
    """Convolution-type product recovered through the duality.

    Z_a = sum_{b, g} (n_b n_g / n_a) V_a(b,g)^* (X_b (x) Y_g) V_a(b,g),
    summed over the supports.  If a configured bound would drop a label
    inside the fusion closure the call fails loudly instead of truncating.
    """
    closure = fusion_closure(X.support, Y.support)
    if max_label is not None and closure and max(closure) > max_label:
        raise TruncationError(
            f"product support reaches label {max(closure)} > bound {max_label}; "
            "raise the bound instead of truncating silently")
    out = {a: np.zeros((cat.dim(a), cat.dim(a)), dtype=complex) for a in closure}
    for b in X.support:
        for g in Y.support:
            kron = np.kron(X[b], Y[g])
            weight = cat.dim(b) * cat.dim(g)
            for a in fusion_range(b, g):
                cols = cat.fusion_column(b, g, a)
                out[a] += (weight / cat.dim(a)) * (cols.conj().T @ kron @ cols)
    return BlockElement(out)


def twisted_convolution_adjoint(alpha: int, i: int, j: int, n_alpha: int,
                                conj: Conjugation | None = None):
    """Preadjoint tensor of the twisted convolution on one matrix unit:
    (1/n_a) sum_r e^a_{ir} (x) e^{a-bar}_{jr}, returned as
    (alpha, alpha-bar, matrix in M_n (x) M_n)."""
    if conj is None:
        conj = identity_conjugation([alpha])
    abar = conj.conjugate_label(alpha)
    out = np.zeros((n_alpha * n_alpha, n_alpha * n_alpha), dtype=complex)
    for r in range(n_alpha):
        left = np.zeros((n_alpha, n_alpha))
        left[i, r] = 1.0
        right = np.zeros((n_alpha, n_alpha))
        right[j, r] = 1.0
        out += np.kron(left, right)
    return alpha, abar, out / n_alpha


def tensor_unit_coefficient(tensor: np.ndarray, n1: int, n2: int,
                            k: int, l: int, p: int, q: int) -> complex:
    """Coefficient of e_{kl} (x) e_{pq} in a two-leg tensor stored as a
    Kronecker matrix; under the duality this is the pairing with
    u_{kl} (x) u_{pq}."""
    t4 = tensor.reshape(n1, n2, n1, n2)
    return complex(t4[k, p, l, q])


# -- file format ---------------------------------------------------------------

def block_to_dict(X: BlockElement) -> dict:
    return {
        "labels": X.support,
        "blocks": {str(a): [[[float(v.real), float(v.imag)] for v in row]
                            for row in X[a]] for a in X.support},
    }


def block_from_dict(data: dict) -> BlockElement:
    try:
        blocks = {}
        for key, rows in data["blocks"].items():
            arr = np.asarray(rows, dtype=float)
            blocks[int(key)] = arr[..., 0] + 1j * arr[..., 1]
        return BlockElement(blocks)
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise StructureError(f"bad block-element document: {exc}") from exc


def save_block(X: BlockElement, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(block_to_dict(X), fh)
        fh.write("\n")


def load_block(path: str) -> BlockElement:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}: not valid JSON ({exc})") from exc
    return block_from_dict(data)
