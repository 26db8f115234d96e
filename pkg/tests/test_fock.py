import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from macrolens import (
    Ensemble,
    FockVector,
    coherent_state,
    displace,
    fock_state,
    from_amplitudes,
    moments,
    pad_to_cutoff,
    quadrature_stats,
    squeezed_vacuum,
    subtract_photons,
    superpose,
)
from macrolens.errors import (
    DegenerateSubtractionError,
    DegenerateSuperpositionError,
    InvalidArgumentError,
    UnsupportedRangeError,
)


def squeeze_matrix(r, dim, antisqueeze_x=False):
    """Reference squeeze operator by direct matrix exponentiation."""
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    gen = 0.5 * r * (a @ a - a.conj().T @ a.conj().T)
    if antisqueeze_x:
        gen = -gen
    return expm(gen)


class TestCoherentState:
    def test_vacuum_identity(self):
        v = coherent_state(0)
        assert v.amplitudes[0] == 1.0
        assert np.all(v.amplitudes[1:] == 0)

    def test_mean_photon_number(self):
        # <n> = |alpha|^2, cross-checked by direct summation
        v = coherent_state(1.5)
        n = np.arange(v.cutoff)
        direct = np.sum(n * np.abs(v.amplitudes) ** 2)
        assert moments(v).mean_n == pytest.approx(2.25, abs=1e-8)
        assert direct == pytest.approx(2.25, abs=1e-8)

    def test_tail_control(self):
        # Poisson tail bound: brute-force partial sums must confirm the
        # reported tail mass
        v = coherent_state(3)
        assert v.cutoff >= 40
        assert v.tail_mass < 1e-12
        from scipy.stats import poisson

        assert 1.0 - poisson.cdf(v.cutoff - 1, 9.0) == pytest.approx(
            v.tail_mass, abs=1e-13
        )

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidArgumentError):
            coherent_state(float("nan"))
        with pytest.raises(InvalidArgumentError):
            coherent_state(complex(float("inf"), 0))

    def test_rejects_bad_tolerance(self):
        with pytest.raises(InvalidArgumentError):
            coherent_state(1.0, tail_tolerance=1e-3)

    @given(st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False))
    @settings(max_examples=40, deadline=None)
    def test_normalized_and_poissonian(self, alpha):
        v = coherent_state(alpha)
        assert abs(v.norm() - 1.0) < 1e-10
        assert moments(v).mean_n == pytest.approx(abs(alpha) ** 2, abs=1e-8)


class TestSqueezedVacuum:
    def test_identity_squeeze(self):
        v = squeezed_vacuum(0.0)
        assert v.amplitudes[0] == 1.0

    def test_variances(self):
        m = moments(squeezed_vacuum(1.0))
        assert m.var_x == pytest.approx(math.exp(-2) / 2, abs=1e-6)
        assert m.var_p == pytest.approx(math.exp(2) / 2, abs=1e-6)

    def test_even_parity(self):
        v = squeezed_vacuum(1.0)
        assert np.all(v.amplitudes[1::2] == 0)

    def test_matches_matrix_exponential(self):
        v = squeezed_vacuum(0.8)
        s = squeeze_matrix(0.8, v.cutoff)
        oracle = from_amplitudes(s[:, 0])
        assert v.fidelity(oracle) > 1 - 1e-10

    def test_range_guard(self):
        with pytest.raises(UnsupportedRangeError):
            squeezed_vacuum(3.2)


class TestFockState:
    def test_vacuum(self):
        v = fock_state(0, 4)
        assert v.amplitudes[0] == 1.0

    def test_single_photon_moments(self):
        m = moments(fock_state(1, 4))
        assert m.mean_n == pytest.approx(1.0, abs=1e-12)
        assert m.var_x == pytest.approx(1.5, abs=1e-12)
        assert m.var_p == pytest.approx(1.5, abs=1e-12)
        assert m.mean_a == 0

    def test_out_of_bounds(self):
        with pytest.raises(InvalidArgumentError):
            fock_state(5, 3)


class TestSubtractPhotons:
    def test_single_photon(self):
        out, factor = subtract_photons(fock_state(1, 4), 1)
        assert out.fidelity(fock_state(0, 4)) == pytest.approx(1.0, abs=1e-12)
        assert factor == pytest.approx(1.0, abs=1e-12)

    def test_squeezed_subtraction_oracle(self):
        # a S(r)|0> is proportional to S(r)|1>; check against the matrix form
        sv = squeezed_vacuum(1.0)
        out, _ = subtract_photons(sv, 1)
        s = squeeze_matrix(1.0, sv.cutoff)
        oracle = from_amplitudes(s[:, 1])
        assert out.fidelity(oracle) > 1 - 1e-8

    def test_vacuum_is_degenerate(self):
        with pytest.raises(DegenerateSubtractionError):
            subtract_photons(fock_state(0, 4), 1)

    def test_rejects_nonpositive_m(self):
        with pytest.raises(InvalidArgumentError):
            subtract_photons(fock_state(1, 4), 0)


class TestDisplace:
    def test_vacuum_gives_coherent(self):
        d = displace(fock_state(0, 4), 1.5 + 0.5j)
        assert d.fidelity(coherent_state(1.5 + 0.5j)) > 1 - 1e-10

    def test_displaced_single_photon(self):
        # ladder algebra: D^dag a D = a + alpha
        alpha = 1.0 + 0.5j
        m = moments(displace(fock_state(1, 4), alpha))
        assert m.mean_n == pytest.approx(1 + abs(alpha) ** 2, abs=1e-8)
        assert m.mean_a == pytest.approx(alpha, abs=1e-8)

    def test_identity(self):
        s = coherent_state(0.7)
        assert displace(s, 0) is s

    @pytest.mark.parametrize("alpha", [0.5, -1.2, 2.0 + 1.0j, 3.0j])
    def test_unitarity_and_inverse(self, alpha):
        s = squeezed_vacuum(0.5)
        d = displace(s, alpha)
        assert abs(d.norm() - 1.0) < 1e-8
        back = displace(d, -alpha)
        assert back.fidelity(s) > 1 - 1e-8


class TestSuperpose:
    def test_destructive_cancellation(self):
        v = fock_state(0, 4)
        with pytest.raises(DegenerateSuperpositionError):
            superpose(v, v, -1)

    def test_small_odd_cat_is_single_photon(self):
        cat = superpose(coherent_state(0.01), coherent_state(-0.01), -1)
        assert cat.fidelity(fock_state(1, cat.cutoff)) > 0.9999

    def test_equal_weights(self):
        out = superpose(fock_state(0, 4), fock_state(1, 4), +1)
        assert out.amplitudes[0] == pytest.approx(1 / math.sqrt(2))
        assert out.amplitudes[1] == pytest.approx(1 / math.sqrt(2))

    def test_bad_sign(self):
        with pytest.raises(InvalidArgumentError):
            superpose(fock_state(0, 4), fock_state(1, 4), 2)


class TestMoments:
    def test_vacuum(self):
        m = moments(fock_state(0, 4))
        assert m.mean_n == 0
        assert m.var_x == pytest.approx(0.5)
        assert m.var_p == pytest.approx(0.5)

    def test_coherent_convention(self):
        # <x> = sqrt(2) Re(alpha) under this quadrature convention
        m = moments(coherent_state(2.0))
        assert m.mean_x == pytest.approx(2 * math.sqrt(2), abs=1e-8)
        assert m.var_x == pytest.approx(0.5, abs=1e-8)

    @pytest.mark.parametrize(
        "state",
        [
            coherent_state(1.3 + 0.4j),
            squeezed_vacuum(0.9),
            fock_state(3, 8),
            superpose(coherent_state(1.5), coherent_state(-1.5), -1),
        ],
    )
    def test_consistency_and_uncertainty(self, state):
        m = moments(state)
        recomposed = (m.mean_x**2 + m.mean_p**2 + m.var_x + m.var_p - 1) / 2
        assert m.mean_n == pytest.approx(recomposed, abs=1e-8)
        assert m.var_x * m.var_p >= 0.25 - 1e-9

    def test_quadrature_rotation(self):
        alpha = 1.0 + 1.0j
        s = coherent_state(alpha)
        mean0, var0 = quadrature_stats(s, 0.0)
        mean90, var90 = quadrature_stats(s, math.pi / 2)
        assert mean0 == pytest.approx(math.sqrt(2), abs=1e-8)
        assert mean90 == pytest.approx(math.sqrt(2), abs=1e-8)
        assert var0 == pytest.approx(0.5, abs=1e-8)
        assert var90 == pytest.approx(0.5, abs=1e-8)


class TestPadAndTypes:
    def test_pad_vacuum(self):
        v = pad_to_cutoff(FockVector(np.array([1.0 + 0j])), 8)
        assert v.cutoff == 8
        assert v.norm() == pytest.approx(1.0)

    def test_pad_noop(self):
        v = fock_state(1, 4)
        assert pad_to_cutoff(v, 4) is v

    def test_pad_shrink_rejected(self):
        with pytest.raises(InvalidArgumentError):
            pad_to_cutoff(fock_state(1, 10), 5)

    def test_unnormalized_rejected(self):
        with pytest.raises(InvalidArgumentError):
            FockVector(np.array([1.0, 1.0], dtype=complex))

    def test_ensemble_weight_validation(self):
        v = fock_state(0, 4)
        with pytest.raises(InvalidArgumentError):
            Ensemble(((0.6, v), (0.6, v)))
        ens = Ensemble(((0.5, v), (0.5, fock_state(1, 6))))
        padded = ens.padded_components()
        assert all(s.cutoff == 6 for _, s in padded)
