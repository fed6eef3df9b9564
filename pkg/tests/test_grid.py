import numpy as np

from coneweyl.grid import grid_for, laplace_eigs, sh_index


def test_weights_sum_to_full_solid_angle():
    g = grid_for(24)
    assert abs(g.weights.sum() - 4 * np.pi) < 1e-12 * 4 * np.pi


def test_quadrature_exact_on_harmonic_products():
    # analysis of a synthesized band-limited section must return the input,
    # which is the statement that products of harmonics up to combined
    # degree 2*lmax integrate exactly
    g = grid_for(20)
    rng = np.random.default_rng(1)
    c = rng.normal(size=441) + 1j * rng.normal(size=441)
    back = g.analysis(g.synthesis(c))
    assert np.max(np.abs(back - c)) < 1e-12 * np.max(np.abs(c))


def test_parseval_between_grid_and_coefficients():
    g = grid_for(16)
    rng = np.random.default_rng(2)
    a = rng.normal(size=289) + 1j * rng.normal(size=289)
    b = rng.normal(size=289) + 1j * rng.normal(size=289)
    quad = g.inner(g.synthesis(a), g.synthesis(b))
    assert abs(quad - np.vdot(a, b)) < 1e-12 * abs(np.vdot(a, b))


def test_synthesis_grad_matches_finite_differences():
    g = grid_for(10)
    rng = np.random.default_rng(3)
    c = rng.normal(size=121) + 1j * rng.normal(size=121)
    val, dth, dph = g.synthesis_grad(c)
    h = 1e-6
    from coneweyl import kernels

    ct = np.repeat(g.costheta, g.n_phi)
    ph = np.tile(g.phi, g.n_theta)
    th = np.arccos(ct)
    fd_th = (
        kernels.scatter_eval(c, 10, np.cos(th + h), ph)
        - kernels.scatter_eval(c, 10, np.cos(th - h), ph)
    ) / (2 * h)
    assert np.max(np.abs(fd_th.reshape(dth.shape) - dth)) < 1e-5
    fd_ph = (
        kernels.scatter_eval(c, 10, ct, ph + h) - kernels.scatter_eval(c, 10, ct, ph - h)
    ) / (2 * h)
    fd_ph = fd_ph.reshape(dph.shape) / np.sin(np.arccos(g.costheta))[:, None]
    assert np.max(np.abs(fd_ph - dph)) < 1e-5


def test_laplace_eigs_layout():
    eig = laplace_eigs(3)
    assert eig[sh_index(0, 0)] == 0.0
    assert eig[sh_index(1, -1)] == 2.0
    assert eig[sh_index(3, 2)] == 12.0
