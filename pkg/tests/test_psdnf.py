"""Tests for subspace geometry and PSD normal forms."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from models.config import GenConfig
from models.errors import (
    InvalidInputError,
    KernelNotSymplecticError,
    NotCommutingError,
    NotPositiveSemidefiniteError,
    NotSymplecticSubspaceError,
)
from models.linalg import SubspaceBasis
from services.instancegen import random_commuting_family, random_psd_with_spectrum
from services.matcore import standard_j, symplectic_residual
from services.psdnf import (
    check_normal_form,
    darboux_basis,
    hamilton_action_check,
    is_symplectic_subspace,
    psd_normal_form_family,
    symplectic_complement,
    symplectic_gram,
)
from services.simdiag import simdiag_pd_family


def _e(dim, *idx):
    return SubspaceBasis(np.eye(dim)[:, list(idx)])


class TestSubspaces:

    def test_gram_of_plane(self):
        assert_array_equal(symplectic_gram(_e(2, 0, 1)), [[0.0, 1.0], [-1.0, 0.0]])

    def test_gram_of_line(self):
        assert_array_equal(symplectic_gram(_e(2, 0)), [[0.0]])

    def test_lagrangian_pair(self):
        assert_array_equal(symplectic_gram(_e(4, 0, 2)), np.zeros((2, 2)))
        assert not is_symplectic_subspace(_e(4, 0, 2))

    def test_symplectic_checks(self, cfg):
        assert is_symplectic_subspace(SubspaceBasis.empty(4), cfg)
        assert is_symplectic_subspace(_e(4, 0, 1), cfg)
        assert not is_symplectic_subspace(_e(4, 0), cfg)

    def test_complement_of_mode_plane(self):
        W = symplectic_complement(_e(4, 0, 1))
        assert W.dim == 2
        P = W.projector()
        assert_allclose(P, np.diag([0.0, 0.0, 1.0, 1.0]), atol=1e-12)

    def test_complement_of_line_contains_it(self):
        W = symplectic_complement(_e(4, 0))
        assert W.dim == 3
        assert_allclose(W.projector() @ np.eye(4)[:, 0], np.eye(4)[:, 0], atol=1e-12)

    def test_complement_of_empty_is_whole_space(self):
        assert symplectic_complement(SubspaceBasis.empty(6)).dim == 6

    @pytest.mark.parametrize("seed", range(5))
    def test_complement_dimension_identity(self, seed):
        rng = np.random.default_rng(seed)
        for k in range(1, 6):
            W = SubspaceBasis(rng.standard_normal((6, k)))
            assert symplectic_complement(W).dim == 6 - k


class TestDarboux:

    @pytest.mark.parametrize("seed", range(5))
    def test_random_subspace(self, seed):
        rng = np.random.default_rng(seed)
        W = SubspaceBasis(rng.standard_normal((8, 4)))
        P = darboux_basis(W)
        assert_allclose(P.T @ standard_j(4).J @ P, standard_j(2).J, atol=1e-10)
        # same span
        assert_allclose(W.projector() @ P, P, atol=1e-10)

    def test_whole_space(self):
        P = darboux_basis(SubspaceBasis.full(4))
        assert symplectic_residual(P) <= 1e-12

    def test_empty(self):
        assert darboux_basis(SubspaceBasis.empty(4)).shape == (4, 0)

    def test_degenerate_subspace(self):
        with pytest.raises(NotSymplecticSubspaceError):
            darboux_basis(_e(4, 0, 2))

    def test_odd_subspace(self):
        with pytest.raises(NotSymplecticSubspaceError):
            darboux_basis(_e(4, 0, 1, 2))


class TestNormalForm:

    def test_single_pd_matrix(self, a_2x2):
        nf = psd_normal_form_family([a_2x2])
        assert nf.k == 1
        assert nf.kernel_dim == 0
        assert_allclose(nf.spectra[0], [1.0], rtol=1e-10)

    def test_psd_with_symplectic_kernel(self):
        A = random_psd_with_spectrum(GenConfig(seed=4, n=2), [2.0, 0.0])
        nf = psd_normal_form_family([A])
        assert nf.k == 1
        assert nf.kernel_dim == 2
        assert_allclose(nf.spectra[0], [2.0, 0.0], rtol=1e-8, atol=0)
        assert nf.spectra[0][1] == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_planted_family(self, seed):
        spectra = [[1.0, 0.0, 3.0], [2.0, 0.0, 0.0], [0.5, 0.0, 4.0]]
        family = random_commuting_family(GenConfig(seed=seed, n=3), spectra)
        nf = psd_normal_form_family(family)
        assert nf.k == 2
        assert nf.kernel_dim == 2
        assert nf.k + nf.kernel_dim // 2 == nf.n
        assert_allclose(nf.spectra[0], [1.0, 3.0, 0.0], rtol=1e-8, atol=1e-10)
        assert_allclose(nf.spectra[1], [2.0, 0.0, 0.0], rtol=1e-8, atol=1e-10)
        assert_allclose(nf.spectra[2], [0.5, 4.0, 0.0], rtol=1e-8, atol=1e-10)
        assert symplectic_residual(nf.S) <= 1e-8

    def test_singular_first_member_uses_sum_metric(self):
        spectra = [[0.0, 2.0], [1.0, 1.0]]
        family = random_commuting_family(GenConfig(seed=1, n=2), spectra)
        nf = psd_normal_form_family(family)
        assert nf.k == 2
        assert_allclose(np.sort(nf.spectra[0]), [0.0, 2.0], atol=1e-10)
        assert_allclose(nf.spectra[1], [1.0, 1.0], rtol=1e-8)

    def test_pd_family_matches_simdiag(self):
        spectra = [[1.0, 2.0, 3.0], [4.0, 1.0, 2.0]]
        family = random_commuting_family(GenConfig(seed=12, n=3), spectra)
        nf = psd_normal_form_family(family)
        sd = simdiag_pd_family(family)
        assert nf.k == 3
        assert nf.kernel_dim == 0
        for got, want in zip(nf.spectra, sd.spectra):
            assert_allclose(got, want, rtol=1e-9)

    def test_members_match_their_diagonal(self):
        family = random_commuting_family(GenConfig(seed=6, n=2), [[1.0, 0.0], [3.0, 0.0]])
        nf = psd_normal_form_family(family)
        for i, A in enumerate(family):
            scale = np.linalg.norm(A)
            assert np.linalg.norm(nf.S.T @ A @ nf.S - nf.diagonal(i)) <= 1e-8 * scale
        report = check_normal_form(family, nf)
        assert set(report.residuals) == {"symplectic", "diagonalization[0]", "diagonalization[1]"}
        assert report.passed

    def test_zero_family(self):
        nf = psd_normal_form_family([np.zeros((4, 4))])
        assert nf.k == 0
        assert nf.kernel_dim == 4
        assert_array_equal(nf.spectra[0], [0.0, 0.0])

    def test_non_commuting_psd_pair_rejected(self, rank_one_forms):
        with pytest.raises(NotCommutingError) as exc:
            psd_normal_form_family(list(rank_one_forms))
        assert_allclose(exc.value.details["bracket_gram"], [[0.0, 2.0], [2.0, 0.0]])

    def test_single_rank_one_form_rejected(self, rank_one_forms):
        with pytest.raises(KernelNotSymplecticError) as exc:
            psd_normal_form_family([rank_one_forms[0]])
        assert exc.value.details["matrix"] == 0
        assert exc.value.hypothesis == "symplectic kernel"

    def test_indefinite_rejected(self):
        with pytest.raises(NotPositiveSemidefiniteError):
            psd_normal_form_family([np.diag([1.0, -1.0])])


class TestHamiltonAction:

    def test_planted_family(self):
        spectra = [[1.0, 0.0, 3.0], [2.0, 0.0, 5.0]]
        family = random_commuting_family(GenConfig(seed=8, n=3), spectra)
        nf = psd_normal_form_family(family)
        for i, A in enumerate(family):
            assert hamilton_action_check(A, nf, i).passed

    def test_member_checked_against_its_own_spectrum(self):
        spectra = [[1.0, 0.0, 3.0], [2.0, 0.0, 5.0]]
        family = random_commuting_family(GenConfig(seed=8, n=3), spectra)
        nf = psd_normal_form_family(family)
        assert not hamilton_action_check(family[1], nf, 0).passed
        assert not hamilton_action_check(family[0], nf, 1).passed

    def test_index_out_of_range(self, a_2x2):
        nf = psd_normal_form_family([a_2x2])
        with pytest.raises(InvalidInputError):
            hamilton_action_check(a_2x2, nf, 1)

    def test_wrong_spectrum_fails(self):
        spectra = [[1.0, 2.0], [3.0, 7.0]]
        family = random_commuting_family(GenConfig(seed=8, n=2), spectra)
        nf = psd_normal_form_family(family)
        assert not hamilton_action_check(family[1], nf, index=0).passed
