"""Finite-dimensional CQG algebras given by dense structure constants.

An algebra of dimension ``dim`` is stored through the tensors

* ``mult[i, j, k]``:    b_i b_j = sum_k mult[i, j, k] b_k
* ``comult[i, j, k]``:  coproduct(b_k) = sum_{i,j} comult[i, j, k] b_i (x) b_j
* ``unit``, ``counit``: coefficient vectors
* ``antipode[i, j]``:   S(b_i) = sum_j antipode[i, j] b_j
* ``star[i, j]``:       (b_i)^* = sum_j star[i, j] b_j

Elements are complex coefficient vectors; the involution of a general
element conjugates the coefficients before applying the star matrix.
Everything is pure-functional: no operation mutates its inputs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import NotCQGError, StructureError
from .report import Check, Report

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class FiniteQuantumGroup:
    dim: int
    mult: np.ndarray
    comult: np.ndarray
    unit: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray
    star: np.ndarray
    name: str = "unnamed"

    def __post_init__(self):
        n = self.dim
        shapes = {
            "mult": (n, n, n),
            "comult": (n, n, n),
            "unit": (n,),
            "counit": (n,),
            "antipode": (n, n),
            "star": (n, n),
        }
        for attr, want in shapes.items():
            arr = np.asarray(getattr(self, attr), dtype=complex)
            if arr.shape != want:
                raise StructureError(
                    f"{self.name}: tensor '{attr}' has shape {arr.shape}, expected {want}")
            object.__setattr__(self, attr, arr)

    # -- element arithmetic -------------------------------------------------

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("ijk,i,j->k", self.mult, x, y)

    def star_of(self, x: np.ndarray) -> np.ndarray:
        # conjugate-linear: conjugate coefficients, then apply the star matrix
        return self.star.T @ np.conj(x)

    def antipode_of(self, x: np.ndarray) -> np.ndarray:
        return self.antipode.T @ x

    def coproduct_of(self, x: np.ndarray) -> np.ndarray:
        """Coefficient vector of the coproduct in the flattened product basis."""
        return np.einsum("ijk,k->ij", self.comult, x).reshape(-1)

    def basis_vector(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[i] = 1.0
        return e


@dataclass(frozen=True)
class Functional:
    """Linear functional stored by its values on the basis elements."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))

    def __call__(self, x: np.ndarray) -> complex:
        return complex(np.dot(self.coeffs, x))

    @property
    def dim(self) -> int:
        return len(self.coeffs)


def gram_matrix(G: FiniteQuantumGroup, phi: Functional) -> np.ndarray:
    """Matrix [phi(b_i^* b_j)]; positive semidefinite iff phi is positive."""
    return np.einsum("il,ljk,k->ij", G.star, G.mult, phi.coeffs)


def state_positivity(G: FiniteQuantumGroup, phi: Functional) -> tuple[float, float]:
    """(hermiticity residual, smallest eigenvalue) of the Gram matrix."""
    gram = gram_matrix(G, phi)
    herm = float(np.abs(gram - gram.conj().T).max())
    eigs = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
    return herm, float(eigs.min())


def is_state(G: FiniteQuantumGroup, phi: Functional, tol: float = DEFAULT_TOL) -> bool:
    herm, mineig = state_positivity(G, phi)
    unital = abs(phi(G.unit) - 1.0)
    return herm < tol and mineig > -tol and unital < tol


# -- axiom verification -----------------------------------------------------

def verify_hopf(G: FiniteQuantumGroup, tol: float = DEFAULT_TOL) -> Report:
    """Check every Hopf *-algebra axiom; one keyed residual per law."""
    m, c = G.mult, G.comult
    u, eps = G.unit, G.counit
    S, star = G.antipode, G.star
    eye = np.eye(G.dim)

    report = Report(metadata={"algebra": G.name, "dim": G.dim})

    def add(name, law, residual):
        report.add(Check(name, law, float(residual), tol))

    add("associativity", "(ab)c = a(bc)",
        np.abs(np.einsum("ijk,klr->ijlr", m, m)
               - np.einsum("jlk,ikr->ijlr", m, m)).max())
    add("unit_law", "1a = a1 = a",
        max(np.abs(np.einsum("i,ijk->jk", u, m) - eye).max(),
            np.abs(np.einsum("j,ijk->ik", u, m) - eye).max()))
    add("coassociativity", "(coproduct x id)coproduct = (id x coproduct)coproduct",
        np.abs(np.einsum("pkr,qsk->pqsr", c, c)
               - np.einsum("ksr,pqk->pqsr", c, c)).max())
    add("counit_law", "(id x counit)coproduct = (counit x id)coproduct = id",
        max(np.abs(np.einsum("ijk,j->ik", c, eps) - eye).max(),
            np.abs(np.einsum("ijk,i->jk", c, eps) - eye).max()))
    eps_one = np.einsum("k,r->kr", eps, u)
    add("antipode_law", "m(S x id)coproduct = counit(.)1 = m(id x S)coproduct",
        max(np.abs(np.einsum("ijk,ip,pjr->kr", c, S, m) - eps_one).max(),
            np.abs(np.einsum("ijk,jp,ipr->kr", c, S, m) - eps_one).max()))
    add("star_involutive", "(a*)* = a",
        np.abs(np.conj(star) @ star - eye).max())
    add("star_antihom", "(ab)* = b*a*",
        np.abs(np.einsum("ijk,kl->ijl", np.conj(m), star)
               - np.einsum("jp,iq,pql->ijl", star, star, m)).max())
    add("coproduct_multiplicative", "coproduct(ab) = coproduct(a)coproduct(b)",
        np.abs(np.einsum("ijk,pqk->ijpq", m, c)
               - np.einsum("rsi,tuj,rtp,suq->ijpq", c, c, m, m)).max())
    add("coproduct_unital", "coproduct(1) = 1 x 1",
        np.abs(np.einsum("ijk,k->ij", c, u) - np.outer(u, u)).max())
    add("coproduct_star", "coproduct(a*) = coproduct(a)^(* x *)",
        np.abs(np.einsum("ik,pqk->ipq", star, c)
               - np.einsum("pqi,pr,qs->irs", np.conj(c), star, star)).max())
    add("counit_multiplicative", "counit(ab) = counit(a)counit(b)",
        max(np.abs(np.einsum("ijk,k->ij", m, eps) - np.outer(eps, eps)).max(),
            abs(np.dot(eps, u) - 1.0)))
    return report


# -- Haar state -------------------------------------------------------------

def _invariance_system(G: FiniteQuantumGroup) -> np.ndarray:
    """Rows of the homogeneous bi-invariance system in the unknown h."""
    n, c, u = G.dim, G.comult, G.unit
    # (h x id)coproduct(b_k) = h_k 1   and   (id x h)coproduct(b_k) = h_k 1
    left = np.einsum("ijk->kji", c).reshape(n * n, n).copy()    # row (k,j): coeff of h_i
    right = np.einsum("ijk->kij", c).reshape(n * n, n).copy()   # row (k,i): coeff of h_j
    for k in range(n):
        for j in range(n):
            left[k * n + j, k] -= u[j]
            right[k * n + j, k] -= u[j]
    return np.vstack([left, right])


def haar_state(G: FiniteQuantumGroup, tol: float = DEFAULT_TOL,
               require_state: bool = True) -> Functional:
    """Solve the stacked invariance system plus the normalization row.

    Uniqueness is asserted through the rank of the homogeneous part
    (its nullspace must be exactly one-dimensional), not assumed.
    """
    hom = _invariance_system(G)
    A = np.vstack([hom, G.unit[None, :]])
    b = np.zeros(A.shape[0], dtype=complex)
    b[-1] = 1.0
    h, *_ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.linalg.norm(A @ h - b))
    if residual > tol:
        raise NotCQGError(
            f"{G.name}: bi-invariance system has no normalized solution "
            f"(residual {residual:.3e})")
    svals = np.linalg.svd(hom, compute_uv=False)
    scale = max(svals[0], 1.0)
    nullity = int(np.sum(svals < tol * scale))
    if nullity != 1:
        raise NotCQGError(
            f"{G.name}: invariant functional is not unique (nullity {nullity})")
    phi = Functional(h)
    if require_state:
        herm, mineig = state_positivity(G, phi)
        if herm > tol or mineig <= tol:
            raise NotCQGError(
                f"{G.name}: invariant functional is not a faithful state "
                f"(hermiticity {herm:.3e}, min Gram eigenvalue {mineig:.3e})")
    return phi


def haar_invariance_residual(G: FiniteQuantumGroup, h: Functional) -> float:
    hom = _invariance_system(G)
    return float(max(np.abs(hom @ h.coeffs).max(), abs(h(G.unit) - 1.0)))


# -- convolution ------------------------------------------------------------

def convolve(G: FiniteQuantumGroup, omega: Functional, phi: Functional) -> Functional:
    """(omega * phi)(b_k) = sum_{i,j} comult[i,j,k] omega(b_i) phi(b_j)."""
    return Functional(np.einsum("ijk,i,j->k", G.comult, omega.coeffs, phi.coeffs))


def convolve_elements(G: FiniteQuantumGroup, a: np.ndarray, b: np.ndarray,
                      h: Functional | None = None) -> np.ndarray:
    """a * b = h(S(b_(1)) a) b_(2), expanded through the comultiplication."""
    if h is None:
        h = haar_state(G)
    # w_p = h(S(b_p) a)
    w = np.einsum("pr,rik,k,i->p", G.antipode, G.mult, h.coeffs, a)
    return np.einsum("pqj,j,p->q", G.comult, b, w)


def is_kac(G: FiniteQuantumGroup, tol: float = DEFAULT_TOL,
           h: Functional | None = None) -> bool:
    """True iff the Haar state is a trace: h(b_i b_j) = h(b_j b_i)."""
    if h is None:
        h = haar_state(G)
    hm = np.einsum("ijk,k->ij", G.mult, h.coeffs)
    return float(np.abs(hm - hm.T).max()) < tol


# -- product with the co-opposite copy --------------------------------------

def tensor_with_cop(G: FiniteQuantumGroup) -> FiniteQuantumGroup:
    """The algebra G (x) G^cop: componentwise product, coproduct with the
    second leg reversed, antipode S (x) S^{-1}."""
    n = G.dim
    mult2 = np.einsum("ikp,jlq->ijklpq", G.mult, G.mult).reshape(n * n, n * n, n * n)
    comult2 = np.einsum("ikp,ljq->ijklpq", G.comult, G.comult).reshape(n * n, n * n, n * n)
    s_inv = np.linalg.inv(G.antipode)
    return FiniteQuantumGroup(
        dim=n * n,
        mult=mult2,
        comult=comult2,
        unit=np.kron(G.unit, G.unit),
        counit=np.kron(G.counit, G.counit),
        antipode=np.kron(G.antipode, s_inv),
        star=np.kron(G.star, G.star),
        name=f"{G.name} x {G.name}^cop",
    )


# -- file format ------------------------------------------------------------

def _encode(arr: np.ndarray):
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [_encode(sub) for sub in arr]


def _decode(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise StructureError("expected innermost [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def to_dict(G: FiniteQuantumGroup) -> dict:
    return {
        "name": G.name,
        "dim": G.dim,
        "mult": _encode(G.mult),
        "comult": _encode(G.comult),
        "unit": _encode(G.unit),
        "counit": _encode(G.counit),
        "antipode": _encode(G.antipode),
        "star": _encode(G.star),
    }


def from_dict(data: dict) -> FiniteQuantumGroup:
    try:
        return FiniteQuantumGroup(
            dim=int(data["dim"]),
            mult=_decode(data["mult"]),
            comult=_decode(data["comult"]),
            unit=_decode(data["unit"]),
            counit=_decode(data["counit"]),
            antipode=_decode(data["antipode"]),
            star=_decode(data["star"]),
            name=str(data.get("name", "unnamed")),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise StructureError(f"bad structure-constant document: {exc}") from exc


def save(G: FiniteQuantumGroup, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(to_dict(G), fh)
        fh.write("\n")


def load(path: str) -> FiniteQuantumGroup:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}: not valid JSON ({exc})") from exc
    return from_dict(data)
