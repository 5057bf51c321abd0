"""Structure-constant algebras: axioms, Haar states, convolution."""

import itertools
import json

import numpy as np
import pytest

from cqglab import groups, hopf
from cqglab.errors import NotCQGError, StructureError
from cqglab.hopf import Functional, convolve, convolve_elements, haar_state, is_kac


def test_axioms_pass_on_all_bundled(bundled):
    for key, G in bundled.items():
        report = hopf.verify_hopf(G)
        assert report.passed, f"{key}: {[c.name for c in report.failures()]}"


def test_axioms_exact_on_rational_data(bundled):
    # the bundled structure constants are 0/1 matrices; residuals are exactly 0
    report = hopf.verify_hopf(bundled["f_z2"])
    assert all(c.residual == 0.0 for c in report.checks.values())


def test_s3_structure_constants_against_sympy_oracle():
    # independent route to the S3 Cayley table (sympy composes permutations)
    from sympy.combinatorics import Permutation
    perms = list(itertools.permutations(range(3)))
    table = np.zeros((6, 6), dtype=int)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # sympy's a*b applies a first, so q*p realizes (p q)(k) = p(q(k))
            comp = Permutation(list(q)) * Permutation(list(p))
            table[i, j] = perms.index(tuple(comp(k) for k in range(3)))
    assert np.array_equal(table, groups.symmetric_table(3))
    regenerated = groups.group_algebra(table, "C[S3]")
    shipped = groups.load_bundled("c_s3")
    assert np.array_equal(regenerated.mult, shipped.mult)
    assert np.array_equal(regenerated.antipode, shipped.antipode)


def test_broken_antipode_fails_only_antipode_law(bundled):
    G = bundled["f_z2"]
    broken = hopf.FiniteQuantumGroup(
        dim=G.dim, mult=G.mult, comult=G.comult, unit=G.unit,
        counit=G.counit, antipode=np.zeros((2, 2)), star=G.star,
        name="F(Z2) broken")
    report = hopf.verify_hopf(broken)
    assert not report.passed
    assert [c.name for c in report.failures()] == ["antipode_law"]


def test_shape_mismatch_names_offending_tensor():
    with pytest.raises(StructureError, match="mult"):
        hopf.FiniteQuantumGroup(
            dim=2, mult=np.zeros((2, 2)), comult=np.zeros((2, 2, 2)),
            unit=np.zeros(2), counit=np.zeros(2),
            antipode=np.eye(2), star=np.eye(2))


def test_haar_closed_forms(bundled):
    h = haar_state(bundled["f_z4"])
    np.testing.assert_allclose(h.coeffs, np.full(4, 0.25), atol=1e-12)
    h = haar_state(bundled["f_s3"])
    np.testing.assert_allclose(h.coeffs, np.full(6, 1 / 6), atol=1e-12)
    h = haar_state(bundled["c_s3"])
    expected = np.zeros(6)
    expected[0] = 1.0           # basis order starts at the identity permutation
    np.testing.assert_allclose(h.coeffs, expected, atol=1e-12)


def test_haar_uniqueness_rank_check(bundled):
    # perturbing the solution in any direction violates an invariance equation
    G = bundled["f_z4"]
    h = haar_state(G)
    system = hopf._invariance_system(G)
    for k in range(G.dim):
        perturbed = h.coeffs + 1e-3 * np.eye(G.dim)[k]
        assert np.abs(system @ perturbed).max() > 1e-5


def test_not_cqg_error_when_no_invariant_state(bundled):
    G = bundled["f_z2"]
    hollow = hopf.FiniteQuantumGroup(
        dim=2, mult=G.mult, comult=np.zeros((2, 2, 2)), unit=G.unit,
        counit=G.counit, antipode=G.antipode, star=G.star, name="hollow")
    with pytest.raises(NotCQGError):
        haar_state(hollow)


def test_convolution_counit_is_unit(bundled):
    G = bundled["f_s3"]
    rng = np.random.default_rng(0)
    phi = Functional(rng.normal(size=6) + 1j * rng.normal(size=6))
    eps = Functional(G.counit)
    np.testing.assert_allclose(convolve(G, eps, phi).coeffs, phi.coeffs, atol=1e-12)
    np.testing.assert_allclose(convolve(G, phi, eps).coeffs, phi.coeffs, atol=1e-12)


def test_haar_is_idempotent_functional(bundled):
    G = bundled["f_z2"]
    h = haar_state(G)
    np.testing.assert_allclose(convolve(G, h, h).coeffs, h.coeffs, atol=1e-12)


def test_point_evaluations_convolve_by_group_law(bundled):
    # delta_1 * delta_1 = delta_2 on F(Z4); oracle: direct double loop
    G = bundled["f_z4"]
    table = groups.cyclic_table(4)
    d1 = Functional(np.eye(4)[1])
    conv = convolve(G, d1, d1)
    oracle = np.zeros(4)
    for a in range(4):
        for b in range(4):
            if a == 1 and b == 1:
                oracle[table[a, b]] += 1.0
    np.testing.assert_allclose(conv.coeffs, oracle, atol=1e-12)
    np.testing.assert_allclose(conv.coeffs, np.eye(4)[2], atol=1e-12)


def test_element_convolution_against_unit(bundled):
    G = bundled["f_s3"]
    h = haar_state(G)
    rng = np.random.default_rng(1)
    a = rng.normal(size=6) + 1j * rng.normal(size=6)
    out = convolve_elements(G, a, G.unit, h=h)
    np.testing.assert_allclose(out, h(a) * G.unit, atol=1e-12)


def test_element_convolution_matches_classical_convolution(bundled):
    # on F(G) the convolution is the |G|^-1-normalized classical one
    G = bundled["f_s3"]
    table = groups.symmetric_table(3)
    h = haar_state(G)
    rng = np.random.default_rng(2)
    f1 = rng.normal(size=6) + 1j * rng.normal(size=6)
    f2 = rng.normal(size=6) + 1j * rng.normal(size=6)
    oracle = np.zeros(6, dtype=complex)
    for x in range(6):
        for y in range(6):
            oracle[table[x, y]] += f1[x] * f2[y] / 6
    np.testing.assert_allclose(convolve_elements(G, f1, f2, h=h), oracle, atol=1e-12)


def test_element_convolution_table_on_group_algebra_z2():
    # by hand from the 2x2 structure constants: lambda_i * lambda_j = delta_ij lambda_j
    G = groups.group_algebra(groups.cyclic_table(2), "C[Z2]")
    h = haar_state(G)
    e = [G.basis_vector(0), G.basis_vector(1)]
    for i in range(2):
        for j in range(2):
            expected = e[j] if i == j else np.zeros(2)
            np.testing.assert_allclose(
                convolve_elements(G, e[i], e[j], h=h), expected, atol=1e-12)


def test_kac_and_involutive_antipode(bundled):
    for key, G in bundled.items():
        assert is_kac(G), key  # finite quantum groups are Kac
        np.testing.assert_allclose(G.antipode @ G.antipode, np.eye(G.dim),
                                   atol=1e-12)


def test_star_is_conjugate_linear(bundled):
    G = bundled["c_s3"]
    rng = np.random.default_rng(3)
    a = rng.normal(size=6) + 1j * rng.normal(size=6)
    lam = 0.7 - 1.3j
    np.testing.assert_allclose(G.star_of(lam * a), np.conj(lam) * G.star_of(a),
                               atol=1e-12)


def test_tensor_with_cop(bundled):
    G = bundled["f_z2"]
    GG = hopf.tensor_with_cop(G)
    assert GG.dim == G.dim ** 2
    np.testing.assert_allclose(GG.counit, np.kron(G.counit, G.counit), atol=1e-12)
    assert hopf.verify_hopf(GG).passed
    h = haar_state(G)
    h2 = haar_state(GG)
    np.testing.assert_allclose(h2.coeffs, np.kron(h.coeffs, h.coeffs), atol=1e-10)


def test_file_round_trip_is_bit_exact(tmp_path, bundled):
    G = bundled["c_s3"]
    path = tmp_path / "c_s3.json"
    hopf.save(G, str(path))
    back = hopf.load(str(path))
    for attr in ("mult", "comult", "unit", "counit", "antipode", "star"):
        assert np.array_equal(getattr(G, attr), getattr(back, attr)), attr
    # and the serialized form itself is stable
    hopf.save(back, str(tmp_path / "again.json"))
    assert (tmp_path / "c_s3.json").read_bytes() == (tmp_path / "again.json").read_bytes()


def test_bundled_files_match_generator(tmp_path):
    groups.write_bundled(str(tmp_path))
    for key in groups.BUNDLED:
        shipped = open(groups.bundled_path(key), "rb").read()
        regenerated = open(tmp_path / f"{key}.json", "rb").read()
        assert shipped == regenerated, key


def test_malformed_json_raises_structure_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(StructureError):
        hopf.load(str(path))
    path.write_text(json.dumps({"dim": 2}))
    with pytest.raises(StructureError):
        hopf.load(str(path))
