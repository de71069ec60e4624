"""Second-quantized Hamiltonians, qubit mappings, and symmetry reduction.

Spin-orbital convention (fixed for the whole package): spatial orbital ``p``
with spin ``s`` (0 = up, 1 = down) is spin orbital ``2*p + s``. For H2 the
order is therefore (sigma_g up, sigma_g down, sigma_u up, sigma_u down) and
the mean-field reference occupies spin orbitals 0 and 1, i.e. the qubit
basis state ``|1100>`` after the Jordan-Wigner mapping (qubit p hosts spin
orbital p; bitstrings read qubit 0 leftmost).

``two_body[(p, q, r, s)]`` is the coefficient of ``a+_p a+_q a_r a_s`` with
the conventional 1/2 from the Coulomb operator already folded in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .molecule import MolecularSystem, RhfSolution, mo_integrals
from .pauli import LETTERS, PauliString, PauliSum, identity_string, multiply

HF_OCCUPATION = (0, 1)

# Computational basis states (qubit 0 = most significant bit) spanning the
# number- and spin-conserving sector that holds the H2 ground state.
SECTOR_STATES_2Q = (0b1100, 0b1001, 0b0110, 0b0011)   # HF, two singles, double
SECTOR_STATES_1Q = (0b1100, 0b0011)                   # HF, double

TAPER_TOL = 1e-10


class TaperingError(RuntimeError):
    """Symmetry-sector projection failed its closure or spectrum check."""


class FcidumpError(ValueError):
    """Malformed FCIDUMP input."""


@dataclass
class FermionHamiltonian:
    """Number-conserving second-quantized Hamiltonian over spin orbitals."""

    constant: float
    one_body: dict[tuple[int, int], float]
    two_body: dict[tuple[int, int, int, int], float]
    n_spin_orbitals: int

    def __post_init__(self) -> None:
        for p, q in self.one_body:
            if not (0 <= p < self.n_spin_orbitals and 0 <= q < self.n_spin_orbitals):
                raise ValueError(f"one-body index ({p},{q}) out of range")
        for idx in self.two_body:
            if any(not 0 <= i < self.n_spin_orbitals for i in idx):
                raise ValueError(f"two-body index {idx} out of range")


def spin_orbital_hamiltonian(
    constant: float, h1: np.ndarray, eri: np.ndarray
) -> FermionHamiltonian:
    """Expand spatial-orbital integrals (chemist (pq|rs)) to spin orbitals."""
    norb = h1.shape[0]
    one_body: dict[tuple[int, int], float] = {}
    two_body: dict[tuple[int, int, int, int], float] = {}
    for p in range(norb):
        for q in range(norb):
            if abs(h1[p, q]) < 1e-14:
                continue
            for s in range(2):
                one_body[(2 * p + s, 2 * q + s)] = float(h1[p, q])
    for p in range(norb):
        for q in range(norb):
            for r in range(norb):
                for s in range(norb):
                    val = eri[p, q, r, s]
                    if abs(val) < 1e-14:
                        continue
                    for sig in range(2):
                        for tau in range(2):
                            key = (2 * p + sig, 2 * r + tau, 2 * s + tau, 2 * q + sig)
                            two_body[key] = two_body.get(key, 0.0) + 0.5 * float(val)
    two_body = {k: v for k, v in two_body.items() if abs(v) > 1e-14}
    return FermionHamiltonian(
        constant=float(constant),
        one_body=one_body,
        two_body=two_body,
        n_spin_orbitals=2 * norb,
    )


def to_fermion(system: MolecularSystem, rhf: RhfSolution) -> FermionHamiltonian:
    """MO-basis second-quantized Hamiltonian; constant = nuclear repulsion."""
    h_mo, eri_mo = mo_integrals(system, rhf)
    return spin_orbital_hamiltonian(system.nuclear_repulsion, h_mo, eri_mo)


def determinant_expectation(h: FermionHamiltonian, occupied: Iterable[int]) -> float:
    """<D|H|D> for the Slater determinant occupying the given spin orbitals."""
    occ = set(occupied)
    value = h.constant
    for (p, q), c in h.one_body.items():
        if p == q and p in occ:
            value += c
    for (p, q, r, s), c in h.two_body.items():
        if p in occ and q in occ and p != q:
            if (p, q) == (s, r):
                value += c
            if (p, q) == (r, s):
                value -= c
    return value


def _ladder(p: int, n: int, creation: bool) -> dict[PauliString, complex]:
    """Jordan-Wigner image of a_p / a+_p as a two-term Pauli expansion."""
    z_head = "Z" * p
    tail = "I" * (n - p - 1)
    x_part = PauliString(z_head + "X" + tail)
    y_part = PauliString(z_head + "Y" + tail)
    y_coeff = -0.5j if creation else 0.5j
    return {x_part: 0.5, y_part: y_coeff}


def _op_product(
    factors: list[dict[PauliString, complex]]
) -> dict[PauliString, complex]:
    result = factors[0]
    for factor in factors[1:]:
        acc: dict[PauliString, complex] = {}
        for sa, ca in result.items():
            for sb, cb in factor.items():
                phase, prod = multiply(sa, sb)
                acc[prod] = acc.get(prod, 0.0) + ca * cb * phase
        result = acc
    return result


def jordan_wigner(h: FermionHamiltonian) -> PauliSum:
    """Map to qubits, one per spin orbital; output has real coefficients.

    Imaginary residue above 1e-12 signals a non-Hermitian input and raises.
    """
    n = h.n_spin_orbitals
    total: dict[PauliString, complex] = {identity_string(n): complex(h.constant)}

    def accumulate(ops: dict[PauliString, complex], coeff: float) -> None:
        for s, c in ops.items():
            total[s] = total.get(s, 0.0) + coeff * c

    for (p, q), coeff in h.one_body.items():
        accumulate(_op_product([_ladder(p, n, True), _ladder(q, n, False)]), coeff)
    for (p, q, r, s), coeff in h.two_body.items():
        accumulate(
            _op_product(
                [
                    _ladder(p, n, True),
                    _ladder(q, n, True),
                    _ladder(r, n, False),
                    _ladder(s, n, False),
                ]
            ),
            coeff,
        )

    worst_imag = max((abs(c.imag) for c in total.values()), default=0.0)
    if worst_imag > 1e-12:
        raise ValueError(f"non-Hermitian input: imaginary Pauli weight {worst_imag:.3e}")
    return PauliSum({s: c.real for s, c in total.items()}, width=n)


def matrix_to_pauli_sum(mat: np.ndarray, width: int) -> PauliSum:
    """Expand a Hermitian 2^w x 2^w matrix over the Pauli basis."""
    dim = 2**width
    if mat.shape != (dim, dim):
        raise ValueError(f"matrix shape {mat.shape} does not match width {width}")
    terms: dict[PauliString, float] = {}
    for letters in _all_strings(width):
        s = PauliString(letters)
        coeff = np.trace(s.to_matrix() @ mat) / dim
        if abs(coeff.imag) > 1e-12:
            raise ValueError(f"non-Hermitian matrix: complex weight on {letters}")
        terms[s] = coeff.real
    return PauliSum(terms, width=width)


def _all_strings(width: int) -> Iterable[str]:
    if width == 0:
        yield ""
        return
    for head in LETTERS:
        for tail in _all_strings(width - 1):
            yield head + tail


def _project(mat: np.ndarray, states: tuple[int, ...]) -> np.ndarray:
    idx = np.asarray(states)
    keep = np.zeros(mat.shape[0], dtype=bool)
    keep[idx] = True
    coupling = np.abs(mat[np.ix_(keep, ~keep)]).max() if (~keep).any() else 0.0
    if coupling > TAPER_TOL:
        raise TaperingError(
            f"sector {states} not closed under the Hamiltonian "
            f"(coupling {coupling:.3e}); wrong input Hamiltonian?"
        )
    return mat[np.ix_(idx, idx)]


def taper(h4: PauliSum) -> tuple[PauliSum, PauliSum]:
    """Reduce the 4-qubit H2 Hamiltonian to 2- and 1-qubit representations.

    Projection onto the explicitly enumerated symmetry sectors: the 2-qubit
    operator covers {HF, both Sz-conserving singles, double} with code words
    |00>, |01>, |10>, |11> in that order; the 1-qubit operator covers
    {HF, double} as |0>, |1> and has the form g0*I + g1*Z + g2*X. Both
    reproduce the ground eigenvalue of the input exactly.
    """
    if h4.width != 4:
        raise TaperingError(f"expected a 4-qubit Hamiltonian, got width {h4.width}")
    mat = h4.to_matrix()
    if np.abs(mat.imag).max() > 1e-12:
        raise TaperingError("input Hamiltonian has an imaginary matrix part")
    mat = mat.real

    h2q = matrix_to_pauli_sum(_project(mat, SECTOR_STATES_2Q), 2)
    h1q = matrix_to_pauli_sum(_project(mat, SECTOR_STATES_1Q), 1)

    ground4 = np.linalg.eigvalsh(mat)[0]
    for reduced in (h2q, h1q):
        ground_r = np.linalg.eigvalsh(reduced.to_matrix())[0]
        if abs(ground_r - ground4) > TAPER_TOL:
            raise TaperingError(
                f"tapered ground {ground_r:.12f} != full ground {ground4:.12f}"
            )
    return h2q, h1q


def h1q_parameters(h1q: PauliSum) -> tuple[float, float, float]:
    """(g0, g1, g2) of a single-qubit operator g0*I + g1*Z + g2*X."""
    if h1q.width != 1:
        raise ValueError(f"expected width 1, got {h1q.width}")
    y = h1q.coefficient(PauliString("Y"))
    if abs(y) > 1e-12:
        raise ValueError(f"unexpected Y component {y:.3e}")
    return (
        h1q.coefficient(PauliString("I")),
        h1q.coefficient(PauliString("Z")),
        h1q.coefficient(PauliString("X")),
    )


# ---------------------------------------------------------------------------
# FCIDUMP ingestion and emission (spatial orbitals, chemist notation).
# ---------------------------------------------------------------------------

_HEADER_KEY = re.compile(r"(NORB|NELEC|MS2)\s*=\s*(-?\d+)", re.IGNORECASE)


def parse_fcidump(text: str) -> FermionHamiltonian:
    """Read an FCIDUMP stream into the internal spin-orbital convention.

    The header must define NORB, NELEC and MS2; data lines are
    ``value i j k l`` with 1-based chemist indices, ``i j 0 0`` for one-body
    terms and ``0 0 0 0`` for the core/nuclear constant. Eight-fold
    permutational symmetry is applied to every two-electron line.
    """
    lines = text.splitlines()
    header_lines: list[str] = []
    body_start = None
    for i, line in enumerate(lines):
        header_lines.append(line)
        if "&END" in line.upper() or line.strip() == "/":
            body_start = i + 1
            break
    if body_start is None:
        raise FcidumpError("missing &END/ terminator in FCIDUMP header")
    header = " ".join(header_lines)
    keys = {m.group(1).upper(): int(m.group(2)) for m in _HEADER_KEY.finditer(header)}
    for required in ("NORB", "NELEC", "MS2"):
        if required not in keys:
            raise FcidumpError(f"header missing {required}")
    norb = keys["NORB"]
    if norb < 1:
        raise FcidumpError(f"NORB must be positive, got {norb}")

    constant = 0.0
    h1 = np.zeros((norb, norb))
    eri = np.zeros((norb, norb, norb, norb))
    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 5:
            raise FcidumpError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        try:
            value = float(fields[0])
            i, j, k, l = (int(f) for f in fields[1:])
        except ValueError as exc:
            raise FcidumpError(f"line {lineno}: non-numeric field in {line!r}") from exc
        if (i, j, k, l) == (0, 0, 0, 0):
            constant = value
            continue
        if any(not 0 <= idx <= norb for idx in (i, j, k, l)):
            raise FcidumpError(f"line {lineno}: index out of range 1..{norb}")
        if k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"line {lineno}: one-body line with zero index")
            h1[i - 1, j - 1] = value
            h1[j - 1, i - 1] = value
            continue
        if 0 in (i, j, k, l):
            raise FcidumpError(f"line {lineno}: mixed zero/non-zero indices")
        p, q, r, s = i - 1, j - 1, k - 1, l - 1
        for a, b, c, d in (
            (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
            (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
        ):
            eri[a, b, c, d] = value
    return spin_orbital_hamiltonian(constant, h1, eri)


def write_fcidump(
    constant: float, h1: np.ndarray, eri: np.ndarray, n_electrons: int, ms2: int = 0
) -> str:
    """Serialize spatial-orbital integrals to FCIDUMP text (unique terms only)."""
    norb = h1.shape[0]
    out = [
        f"&FCI NORB={norb},NELEC={n_electrons},MS2={ms2},",
        " ORBSYM=" + "1," * norb,
        " ISYM=1,",
        "&END",
    ]

    def fmt(value: float, i: int, j: int, k: int, l: int) -> str:
        return f"{value: .16e} {i:3d} {j:3d} {k:3d} {l:3d}"

    seen = set()
    for p in range(norb):
        for q in range(p + 1):
            for r in range(norb):
                for s in range(r + 1):
                    if (p, q) < (r, s):
                        continue
                    key = (p, q, r, s)
                    if key in seen or abs(eri[p, q, r, s]) < 1e-14:
                        continue
                    seen.add(key)
                    out.append(fmt(eri[p, q, r, s], p + 1, q + 1, r + 1, s + 1))
    for p in range(norb):
        for q in range(p + 1):
            if abs(h1[p, q]) >= 1e-14:
                out.append(fmt(h1[p, q], p + 1, q + 1, 0, 0))
    out.append(fmt(constant, 0, 0, 0, 0))
    return "\n".join(out) + "\n"


def h2_fcidump(system: MolecularSystem, rhf: RhfSolution) -> str:
    """FCIDUMP text for the built-in H2 system in its MO basis."""
    h_mo, eri_mo = mo_integrals(system, rhf)
    return write_fcidump(system.nuclear_repulsion, h_mo, eri_mo, n_electrons=2)
