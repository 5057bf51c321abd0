"""Structure constants of F(G) and C[G] built from group multiplication tables.

These generators are the oracle for the bundled data files: the files in
``cqglab/data`` are written by :func:`write_bundled` and the test suite
regenerates them from the tables and compares bit-exactly.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

from . import hopf
from .errors import StructureError
from .hopf import FiniteQuantumGroup

BUNDLED = ("f_z2", "f_z4", "f_s3", "c_s3")


def cyclic_table(n: int) -> np.ndarray:
    return np.array([[(i + j) % n for j in range(n)] for i in range(n)], dtype=int)


def symmetric_table(n: int) -> np.ndarray:
    """Cayley table of S_n acting by composition, (p q)(k) = p(q(k))."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    table = np.zeros((size, size), dtype=int)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[q[k]] for k in range(n))]
    return table


def _identity_and_inverses(table: np.ndarray) -> tuple[int, np.ndarray]:
    size = table.shape[0]
    ident = None
    for e in range(size):
        if all(table[e, j] == j and table[j, e] == j for j in range(size)):
            ident = e
            break
    if ident is None:
        raise StructureError("multiplication table has no identity")
    inv = np.zeros(size, dtype=int)
    for i in range(size):
        matches = np.nonzero(table[i] == ident)[0]
        if len(matches) != 1:
            raise StructureError("multiplication table is not a group table")
        inv[i] = matches[0]
    return ident, inv


def function_algebra(table: np.ndarray, name: str) -> FiniteQuantumGroup:
    """F(G): pointwise product on point masses, coproduct dual to the group law."""
    size = table.shape[0]
    ident, inv = _identity_and_inverses(table)
    mult = np.zeros((size, size, size), dtype=complex)
    comult = np.zeros((size, size, size), dtype=complex)
    for i in range(size):
        mult[i, i, i] = 1.0
    for a in range(size):
        for b in range(size):
            comult[a, b, table[a, b]] += 1.0
    counit = np.zeros(size, dtype=complex)
    counit[ident] = 1.0
    antipode = np.zeros((size, size), dtype=complex)
    antipode[np.arange(size), inv] = 1.0
    return FiniteQuantumGroup(
        dim=size, mult=mult, comult=comult,
        unit=np.ones(size, dtype=complex), counit=counit,
        antipode=antipode, star=np.eye(size, dtype=complex), name=name)


def group_algebra(table: np.ndarray, name: str) -> FiniteQuantumGroup:
    """C[G]: group product on delta generators, which are group-like."""
    size = table.shape[0]
    ident, inv = _identity_and_inverses(table)
    mult = np.zeros((size, size, size), dtype=complex)
    comult = np.zeros((size, size, size), dtype=complex)
    for i in range(size):
        for j in range(size):
            mult[i, j, table[i, j]] = 1.0
        comult[i, i, i] = 1.0
    unit = np.zeros(size, dtype=complex)
    unit[ident] = 1.0
    antipode = np.zeros((size, size), dtype=complex)
    antipode[np.arange(size), inv] = 1.0
    return FiniteQuantumGroup(
        dim=size, mult=mult, comult=comult,
        unit=unit, counit=np.ones(size, dtype=complex),
        antipode=antipode, star=antipode.copy(), name=name)


def build_bundled(key: str) -> FiniteQuantumGroup:
    if key == "f_z2":
        return function_algebra(cyclic_table(2), "F(Z2)")
    if key == "f_z4":
        return function_algebra(cyclic_table(4), "F(Z4)")
    if key == "f_s3":
        return function_algebra(symmetric_table(3), "F(S3)")
    if key == "c_s3":
        return group_algebra(symmetric_table(3), "C[S3]")
    raise KeyError(key)


def data_dir() -> str:
    return os.path.join(os.path.dirname(__file__), "data")


def bundled_path(key: str) -> str:
    if key not in BUNDLED:
        raise KeyError(f"unknown bundled algebra {key!r}; have {BUNDLED}")
    return os.path.join(data_dir(), key + ".json")


def load_bundled(key: str) -> FiniteQuantumGroup:
    return hopf.load(bundled_path(key))


def write_bundled(target_dir: str | None = None) -> list[str]:
    """Regenerate the bundled structure-constant files from the group tables."""
    target_dir = target_dir or data_dir()
    os.makedirs(target_dir, exist_ok=True)
    written = []
    for key in BUNDLED:
        path = os.path.join(target_dir, key + ".json")
        hopf.save(build_bundled(key), path)
        written.append(path)
    return written
