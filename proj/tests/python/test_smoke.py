import math

import _pcanoise as pca


def xor_flip(eps):
    return pca.compose_pca(pca.build_zoo("xor"), pca.flip(eps))


def test_certify_verdicts():
    cert = pca.certify(xor_flip(0.4))
    assert cert.ergodic
    assert math.isclose(cert.p_question, 0.2)
    assert math.isclose(cert.bound, 2 / 3)
    assert not pca.certify(xor_flip(0.05)).ergodic


def test_simulate_reproducible():
    phi = xor_flip(0.3)
    x0 = pca.Configuration(pca.Alphabet.binary(), [32], [0] * 32)
    a = pca.simulate(phi, x0, 10, seed=5)
    b = pca.simulate(phi, x0, 10, seed=5)
    assert a == b
    assert len(a) == 11
    assert any(any(row) for row in a[1:])


def test_cftp_marginal():
    phi = xor_flip(0.4)
    ones = 0
    n = 2000
    for s in range(n):
        pattern, _ = pca.cftp_sample(phi, [0], seed=s)
        ones += pattern
    assert abs(ones / n - 0.5) < 3 * math.sqrt(0.25 / n)


def test_exact_chain_oracle():
    phi = xor_flip(0.3)
    P = pca.exact_transition_matrix(phi, 4)
    pi = pca.stationary_distribution(P, 16)
    assert math.isclose(sum(pi), 1.0, abs_tol=1e-9)
    # parity defect of the uniform vector: l1 distance is (1-2e)^L
    l1 = sum(abs(sum(P[a * 16 + b] for a in range(16)) - 1) / 16 for b in range(16))
    assert math.isclose(l1, 0.4**4, abs_tol=1e-10)


def test_spectral_and_percolation():
    phi = xor_flip(0.1)
    rho = pca.contraction_coefficient(phi, "fourier")
    assert math.isclose(rho, 0.8)
    assert pca.single_index_seminorm(0.1, 0.1, 2, "fourier") == (
        0.8**2
    )
    assert pca.percolation_survival(0.0, [0, 1], 50, 100, 1) == 0.0
    assert pca.percolation_survival(1.0, [0, 1], 50, 100, 1) == 1.0


def test_invariant_search():
    val, m_final, k, checked = pca.approximate_invariant(
        xor_flip(0.45), [0], [1], 2
    )
    assert abs(val - 0.5) <= 0.5
    assert checked > 0
