import numpy as np
import pytest

from sizecon.hamiltonians import (
    FcidumpError,
    FermionHamiltonian,
    TaperingError,
    determinant_expectation,
    h1q_parameters,
    h2_fcidump,
    jordan_wigner,
    matrix_to_pauli_sum,
    parse_fcidump,
    spin_orbital_hamiltonian,
    taper,
    to_fermion,
)
from sizecon.molecule import mo_integrals
from sizecon.pauli import PauliString, PauliSum

from oracles import pauli_decompose


@pytest.fixture(scope="module")
def fermion(system, rhf):
    return to_fermion(system, rhf)


@pytest.fixture(scope="module")
def h4(fermion):
    return jordan_wigner(fermion)


class TestToFermion:
    def test_hf_expectation_equals_scf_energy(self, fermion, rhf):
        assert determinant_expectation(fermion, (0, 1)) == pytest.approx(
            rhf.e_hf, abs=1e-10
        )

    def test_constant_is_nuclear_repulsion(self, fermion, system):
        assert fermion.constant == system.nuclear_repulsion

    def test_spin_violating_one_body_terms_absent(self, fermion):
        for (p, q), coeff in fermion.one_body.items():
            if p % 2 != q % 2:
                assert coeff == 0.0

    def test_one_body_hermitian(self, fermion):
        for (p, q), coeff in fermion.one_body.items():
            assert fermion.one_body.get((q, p), 0.0) == pytest.approx(coeff, abs=1e-14)

    def test_two_body_count_matches_spin_expansion(self, system, rhf, fermion):
        # independent combinatorial count: every nonzero spatial (pq|rs)
        # spawns spin-orbital keys (p sig, r tau, s tau, q sig); merged sums
        # below threshold drop out
        _, eri = mo_integrals(system, rhf)
        expected: dict[tuple[int, int, int, int], float] = {}
        for p in range(2):
            for q in range(2):
                for r in range(2):
                    for s in range(2):
                        if abs(eri[p, q, r, s]) < 1e-14:
                            continue
                        for sig in (0, 1):
                            for tau in (0, 1):
                                key = (2 * p + sig, 2 * r + tau, 2 * s + tau, 2 * q + sig)
                                expected[key] = expected.get(key, 0.0) + 0.5 * eri[p, q, r, s]
        expected = {k: v for k, v in expected.items() if abs(v) > 1e-14}
        assert set(fermion.two_body) == set(expected)
        for key, value in expected.items():
            assert fermion.two_body[key] == pytest.approx(value, abs=1e-14)

    def test_index_validation(self):
        with pytest.raises(ValueError, match="out of range"):
            FermionHamiltonian(0.0, {(0, 4): 1.0}, {}, n_spin_orbitals=4)


class TestJordanWigner:
    def test_number_operator_identity(self):
        h = FermionHamiltonian(0.0, {(0, 0): 1.0}, {}, n_spin_orbitals=2)
        out = jordan_wigner(h)
        assert out.coefficient(PauliString("II")) == pytest.approx(0.5)
        assert out.coefficient(PauliString("ZI")) == pytest.approx(-0.5)
        assert len(out.sorted_strings()) == 1

    def test_hopping_term(self):
        # a+_0 a_1 + a+_1 a_0 -> (XX + YY)/2
        h = FermionHamiltonian(0.0, {(0, 1): 1.0, (1, 0): 1.0}, {}, n_spin_orbitals=2)
        out = jordan_wigner(h)
        assert out.coefficient(PauliString("XX")) == pytest.approx(0.5)
        assert out.coefficient(PauliString("YY")) == pytest.approx(0.5)

    def test_ground_state_matches_ci_oracle(self, h4, ci_oracle):
        ground = np.linalg.eigvalsh(h4.to_matrix())[0]
        assert ground == pytest.approx(ci_oracle.e_fci, abs=1e-10)

    def test_term_count_against_dense_expansion(self, h4):
        # independent expansion oracle: project the dense matrix on all strings
        coeffs = pauli_decompose(h4.to_matrix(), 4)
        nonzero = {s for s, c in coeffs.items() if abs(c) > 1e-12 and s != "IIII"}
        assert nonzero == {s.letters for s in h4.sorted_strings()}
        assert len(nonzero) <= 15

    def test_hf_basis_state_expectation(self, h4, rhf):
        mat = h4.to_matrix()
        assert mat[0b1100, 0b1100].real == pytest.approx(rhf.e_hf, abs=1e-10)

    def test_hermitian_matrix(self, h4):
        mat = h4.to_matrix()
        assert np.allclose(mat, mat.conj().T, atol=1e-14)

    def test_all_coefficients_real(self, h4):
        for _, coeff in h4:
            assert isinstance(coeff, float)


class TestTaper:
    def test_spectral_agreement(self, bundle):
        g4 = np.linalg.eigvalsh(bundle.h4.to_matrix())[0]
        g2 = np.linalg.eigvalsh(bundle.h2q.to_matrix())[0]
        g1 = np.linalg.eigvalsh(bundle.h1q.to_matrix())[0]
        assert g2 == pytest.approx(g4, abs=1e-10)
        assert g1 == pytest.approx(g4, abs=1e-10)

    def test_variational_chain(self, bundle, rhf):
        ground = np.linalg.eigvalsh(bundle.h4.to_matrix())[0]
        assert rhf.e_hf >= ground

    def test_h1q_matches_ci_matrix_elements(self, bundle, ci_oracle):
        g0, g1, g2 = h1q_parameters(bundle.h1q)
        assert g0 + g1 == pytest.approx(ci_oracle.e_hf, abs=1e-10)
        assert g0 - g1 == pytest.approx(ci_oracle.e_double, abs=1e-10)
        assert g2 == pytest.approx(ci_oracle.hf_double_coupling, abs=1e-10)

    def test_rejects_wrong_width(self, bundle):
        with pytest.raises(TaperingError, match="width"):
            taper(bundle.h1q)

    def test_rejects_sector_breaking_hamiltonian(self, bundle):
        broken = bundle.h4 + PauliSum({PauliString("XIII"): 0.1})
        with pytest.raises(TaperingError, match="not closed"):
            taper(broken)

    def test_matrix_to_pauli_round_trip(self, bundle):
        mat = bundle.h2q.to_matrix()
        back = matrix_to_pauli_sum(mat.real, 2)
        for s, c in bundle.h2q:
            assert back.coefficient(s) == pytest.approx(c, abs=1e-12)


class TestFcidump:
    def test_constant_only_file(self):
        text = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n -1.5 0 0 0 0\n"
        h = parse_fcidump(text)
        assert h.constant == -1.5
        assert not h.one_body
        assert not h.two_body

    def test_round_trip_ground_energy(self, system, rhf, h4):
        text = h2_fcidump(system, rhf)
        reparsed = parse_fcidump(text)
        h4_again = jordan_wigner(reparsed)
        g_orig = np.linalg.eigvalsh(h4.to_matrix())[0]
        g_back = np.linalg.eigvalsh(h4_again.to_matrix())[0]
        assert g_back == pytest.approx(g_orig, abs=1e-10)

    def test_norb_one_parses_but_taper_rejects(self):
        text = "&FCI NORB=1,NELEC=2,MS2=0,\n&END\n 0.5 1 1 1 1\n -1.0 1 1 0 0\n 0.3 0 0 0 0\n"
        h = parse_fcidump(text)
        assert h.n_spin_orbitals == 2
        with pytest.raises(TaperingError):
            taper(jordan_wigner(h))

    def test_missing_header_key(self):
        with pytest.raises(FcidumpError, match="NORB"):
            parse_fcidump("&FCI NELEC=2,MS2=0,\n&END\n")

    def test_missing_terminator(self):
        with pytest.raises(FcidumpError, match="terminator"):
            parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,\n 1.0 1 1 0 0\n")

    def test_non_numeric_field_reports_line(self):
        text = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0 1 x 0 0\n"
        with pytest.raises(FcidumpError, match="line 3"):
            parse_fcidump(text)

    def test_out_of_range_index_reports_line(self):
        text = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0 1 1 0 0\n 1.0 3 1 0 0\n"
        with pytest.raises(FcidumpError, match="line 4"):
            parse_fcidump(text)

    def test_bad_field_count(self):
        text = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0 1 1 0\n"
        with pytest.raises(FcidumpError, match="5 fields"):
            parse_fcidump(text)

    def test_write_contains_header_keys(self, system, rhf):
        text = h2_fcidump(system, rhf)
        head = text.splitlines()[0]
        assert "NORB=2" in head
        assert "NELEC=2" in head
        assert "MS2=0" in head

    def test_spatial_expansion_consistency(self):
        # hand-built one-orbital system: H = h11 n + (11|11)/2 * 2 n_up n_dn
        h1 = np.array([[-1.0]])
        eri = np.full((1, 1, 1, 1), 0.6)
        h = spin_orbital_hamiltonian(0.2, h1, eri)
        assert determinant_expectation(h, (0,)) == pytest.approx(0.2 - 1.0)
        assert determinant_expectation(h, (0, 1)) == pytest.approx(0.2 - 2.0 + 0.6)
