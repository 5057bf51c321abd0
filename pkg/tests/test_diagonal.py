"""Diagonal idempotent state, conditional expectation, induced convolution."""

import numpy as np
import pytest

from cqglab import diagonal as diag
from cqglab import groups, hopf
from cqglab.errors import KacRequiredError
from cqglab.hopf import Functional, convolve, haar_state


@pytest.fixture(scope="module")
def contexts(bundled):
    return {key: diag.diagonal_state(G) for key, G in bundled.items()}


def test_state_values_on_f_z2(contexts):
    # classical formula: integral of f1 f2 over the group, after transporting
    # the second leg through the antipode; on Z2 this is (1/2)[x == y]
    ctx = contexts["f_z2"]
    vals = ctx.state.coeffs.reshape(2, 2)
    np.testing.assert_allclose(vals, np.eye(2) / 2, atol=1e-12)


def test_state_agrees_with_classical_integral(contexts):
    # state(f1 (x) f2~) = (1/|G|) sum_g f1(g) f2(g^{-1}) for function algebras
    ctx = contexts["f_s3"]
    table = groups.symmetric_table(3)
    _, inv = groups._identity_and_inverses(table)
    expected = np.zeros((6, 6))
    for x in range(6):
        expected[x, inv[x]] = 1 / 6
    np.testing.assert_allclose(ctx.state.coeffs.reshape(6, 6), expected, atol=1e-12)


def test_state_is_unital(contexts):
    for key, ctx in contexts.items():
        assert abs(ctx.state(ctx.product.unit) - 1.0) < 1e-12, key


def test_state_idempotent_and_positive(contexts):
    for key, ctx in contexts.items():
        assert diag.idempotence_residual(ctx) < 1e-10, key
        herm, mineig = hopf.state_positivity(ctx.product, ctx.state)
        assert herm < 1e-10 and mineig > -1e-10, key


def test_idempotence_via_independent_convolution(contexts):
    ctx = contexts["c_s3"]
    conv = convolve(ctx.product, ctx.state, ctx.state)
    assert np.abs(conv.coeffs - ctx.state.coeffs).max() < 1e-10


def test_non_kac_input_is_refused(bundled, monkeypatch):
    monkeypatch.setattr(diag, "is_kac", lambda G, tol=1e-10, h=None: False)
    with pytest.raises(KacRequiredError, match="Kac type required"):
        diag.diagonal_state(bundled["f_z2"])


def test_expectation_unital_idempotent(contexts):
    ctx = contexts["f_s3"]
    E = diag.expectation_matrix(ctx)
    P = ctx.product
    np.testing.assert_allclose(E @ P.unit, P.unit, atol=1e-12)
    # basis sweep
    assert np.abs(E @ E - E).max() < 1e-10


def test_expectation_haar_preserving(contexts):
    for key, ctx in contexts.items():
        h2 = np.kron(ctx.haar.coeffs, ctx.haar.coeffs)
        E = diag.expectation_matrix(ctx)
        assert np.abs(h2 @ E - h2).max() < 1e-10, key


def test_expectation_matches_classical_diagonal_averaging(contexts):
    # after identifying the cop leg with a plain leg, E is the averaging
    # (f1 x f2)(g1, g2) -> integral f1(g1 r) f2(g2 r) dr; brute-force oracle
    ctx = contexts["f_z2"]
    table = groups.cyclic_table(2)
    E = diag.expectation_matrix(ctx)
    check = diag.antipode_transport(ctx.G)
    to_plain = np.kron(np.eye(2), np.linalg.inv(check))
    from_plain = np.kron(np.eye(2), check)
    classical = diag.classical_diagonal_average(table)
    np.testing.assert_allclose(to_plain @ E @ from_plain, classical, atol=1e-12)


def test_expectation_positive(contexts):
    report = diag.expectation_checks(contexts["c_s3"], seed=11)
    assert report.checks["expectation_positive"].passed


def test_embedding_unit_and_rank(contexts):
    ctx = contexts["f_s3"]
    one = diag.diagonal_embedding(ctx, ctx.G.unit)
    np.testing.assert_allclose(one, np.kron(ctx.G.unit, ctx.G.unit), atol=1e-12)
    emb = diag.embedding_matrix(ctx)
    assert np.linalg.matrix_rank(emb, tol=1e-9) == 6


def test_embedding_multiplicative(contexts):
    ctx = contexts["c_s3"]
    rng = np.random.default_rng(4)
    a = rng.normal(size=6) + 1j * rng.normal(size=6)
    b = rng.normal(size=6) + 1j * rng.normal(size=6)
    lhs = diag.diagonal_embedding(ctx, ctx.G.mul(a, b))
    rhs = ctx.product.mul(diag.diagonal_embedding(ctx, a),
                          diag.diagonal_embedding(ctx, b))
    assert np.abs(lhs - rhs).max() < 1e-10


def test_range_equality_all_bundled(contexts):
    for key, ctx in contexts.items():
        report = diag.check_range_equality(ctx)
        assert report.passed, (key, [c.name for c in report.failures()])
        assert report.checks["principal_angles"].residual < 1e-8


def test_range_equality_ranks_f_z2(contexts):
    ctx = contexts["f_z2"]
    assert np.linalg.matrix_rank(diag.embedding_matrix(ctx), tol=1e-9) == 2
    assert np.linalg.matrix_rank(diag.expectation_matrix(ctx), tol=1e-9) == 2


def test_induced_convolution_with_unit(contexts):
    ctx = contexts["f_s3"]
    rng = np.random.default_rng(5)
    a = rng.normal(size=6) + 1j * rng.normal(size=6)
    out = diag.induced_convolution(ctx, a, ctx.G.unit)
    np.testing.assert_allclose(out, ctx.haar(a) * ctx.G.unit, atol=1e-10)


def test_induced_convolution_matches_direct_convolution(contexts):
    for key in ("f_s3", "c_s3"):
        assert diag.gamma_vs_convolution_residual(contexts[key]) < 1e-10, key


def test_classical_twisted_convolution_cross_check(contexts):
    # untangling the cop leg turns the induced map into f1 * f2-check,
    # i.e. (f1, f2) -> integral f1(g1) f2(g^-1 g1) dg1; brute-force oracle
    ctx = contexts["f_z4"]
    table = groups.cyclic_table(4)
    check = diag.antipode_transport(ctx.G)     # second leg: f |-> (S f)~
    rng = np.random.default_rng(6)
    f1 = rng.normal(size=4) + 1j * rng.normal(size=4)
    f2 = rng.normal(size=4) + 1j * rng.normal(size=4)
    via_ctx = diag.induced_convolution(ctx, f1, np.linalg.inv(check) @ check @ f1 * 0 + check @ f2)
    oracle = diag.classical_twisted_convolution(table, f1, f2)
    np.testing.assert_allclose(via_ctx, oracle, atol=1e-10)


def test_idempotent_to_expectation_counit(bundled):
    G = bundled["f_z4"]
    report = diag.idempotent_to_expectation(G, Functional(G.counit))
    assert report.passed
    assert report.metadata["range_rank"] == 4    # E = id


def test_idempotent_to_expectation_haar(bundled):
    G = bundled["f_z4"]
    report = diag.idempotent_to_expectation(G, haar_state(G))
    assert report.passed
    assert report.metadata["range_rank"] == 1    # E = h(.)1


def test_idempotent_to_expectation_subgroup_coset_averaging(bundled):
    # uniform state on Z2 inside Z4: range = functions constant on cosets
    G = bundled["f_z4"]
    phi = Functional(np.array([0.5, 0.0, 0.5, 0.0]))
    report = diag.idempotent_to_expectation(G, phi)
    assert report.passed
    assert report.metadata["range_rank"] == 2
    # oracle: brute-force averaging over the subgroup {0, 2}
    E = np.einsum("ijk,j->ik", G.comult, phi.coeffs)
    oracle = np.zeros((4, 4))
    for g in range(4):
        for s in (0, 2):
            oracle[g, (g + s) % 4] += 0.5
    np.testing.assert_allclose(E, oracle.T @ np.eye(4), atol=1e-12)


def test_idempotent_to_expectation_rejects_non_idempotent(bundled):
    G = bundled["f_z4"]
    phi = Functional(np.array([0.25, 0.5, 0.25, 0.0]))   # a state, not idempotent
    report = diag.idempotent_to_expectation(G, phi)
    assert not report.checks["phi_idempotent"].passed
    assert "skipped" in report.metadata["note"]
    assert set(report.checks) == {"phi_idempotent"}


def test_traciality_dichotomy(contexts):
    assert diag.traciality_defect(contexts["f_s3"]) < 1e-10
    assert diag.traciality_defect(contexts["f_z4"]) < 1e-10
    assert diag.traciality_defect(contexts["c_s3"]) > 1e-3
