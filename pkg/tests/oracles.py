"""Independent reference implementations used only by the tests.

Each oracle deliberately takes a different computational route from the
library it checks:

* the configuration-interaction oracle applies ladder operators directly to
  occupation tuples (no Pauli algebra anywhere),
* the dense Pauli/unitary helpers build matrices from scratch with kron and
  explicit basis-state rules (no reuse of the library's gate application),
* the density-matrix simulator evolves the full mixed state through exact
  depolarizing channels and readout confusion matrices,
* the regression oracle solves the weighted normal equations through a
  design-matrix factorization.
"""

from __future__ import annotations

import numpy as np

# ---------------------------------------------------------------------------
# Dense Pauli matrices (independent of sizecon.pauli).
# ---------------------------------------------------------------------------

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(letters: str) -> np.ndarray:
    mat = PAULI_1Q[letters[0]]
    for c in letters[1:]:
        mat = np.kron(mat, PAULI_1Q[c])
    return mat


def pauli_decompose(mat: np.ndarray, width: int) -> dict[str, complex]:
    """Expansion coefficients over all 4^width Pauli strings."""
    letters = ["I", "X", "Y", "Z"]
    strings = [""]
    for _ in range(width):
        strings = [s + c for s in strings for c in letters]
    dim = 2**width
    return {s: np.trace(pauli_matrix(s) @ mat) / dim for s in strings}


# ---------------------------------------------------------------------------
# Brute-force configuration interaction over Slater determinants.
# ---------------------------------------------------------------------------


def _annihilate(occ: tuple[int, ...], p: int) -> tuple[int, tuple[int, ...]] | None:
    if p not in occ:
        return None
    sign = (-1) ** occ.index(p)
    return sign, tuple(q for q in occ if q != p)


def _create(occ: tuple[int, ...], p: int) -> tuple[int, tuple[int, ...]] | None:
    if p in occ:
        return None
    before = sum(1 for q in occ if q < p)
    sign = (-1) ** before
    return sign, tuple(sorted(occ + (p,)))


def _apply_term(
    occ: tuple[int, ...], ops: list[tuple[int, bool]]
) -> tuple[int, tuple[int, ...]] | None:
    """Apply ladder operators right-to-left; ops = [(orbital, is_creation), ...]."""
    sign = 1
    state = occ
    for orbital, creation in reversed(ops):
        step = _create(state, orbital) if creation else _annihilate(state, orbital)
        if step is None:
            return None
        s, state = step
        sign *= s
    return sign, state


class CiOracle:
    """Exact CI in the 4-determinant Sz = 0 space of H2, built from integrals.

    Uses its own AO->MO transform (explicit loops) and physicist-notation
    spin-orbital integrals with direct second-quantized operator
    application, fully independent of the Jordan-Wigner route.
    """

    DETERMINANTS = ((0, 1), (0, 3), (1, 2), (2, 3))   # HF, two singles, double

    def __init__(self, system, rhf):
        c = np.asarray(rhf.mo_coefficients)
        n_ao = c.shape[0]
        h_core = system.kinetic + system.nuclear_attraction
        h_mo = np.zeros((n_ao, n_ao))
        for p in range(n_ao):
            for q in range(n_ao):
                for mu in range(n_ao):
                    for nu in range(n_ao):
                        h_mo[p, q] += c[mu, p] * c[nu, q] * h_core[mu, nu]
        eri_mo = np.zeros((n_ao,) * 4)
        for p in range(n_ao):
            for q in range(n_ao):
                for r in range(n_ao):
                    for s in range(n_ao):
                        total = 0.0
                        for mu in range(n_ao):
                            for nu in range(n_ao):
                                for lam in range(n_ao):
                                    for sig in range(n_ao):
                                        total += (
                                            c[mu, p] * c[nu, q] * c[lam, r] * c[sig, s]
                                            * system.two_electron[mu, nu, lam, sig]
                                        )
                        eri_mo[p, q, r, s] = total
        self.h_mo = h_mo
        self.eri_mo = eri_mo
        self.constant = system.nuclear_repulsion
        self.n_spin = 2 * n_ao
        self.matrix = self._build_matrix()

    def _spin_h1(self, p: int, q: int) -> float:
        if p % 2 != q % 2:
            return 0.0
        return self.h_mo[p // 2, q // 2]

    def _spin_v(self, p: int, q: int, r: int, s: int) -> float:
        # physicist <pq|rs>: electron 1 (p, r), electron 2 (q, s)
        if p % 2 != r % 2 or q % 2 != s % 2:
            return 0.0
        return self.eri_mo[p // 2, r // 2, q // 2, s // 2]

    def _apply_h(self, occ: tuple[int, ...]) -> dict[tuple[int, ...], float]:
        out: dict[tuple[int, ...], float] = {occ: self.constant}
        n = self.n_spin
        for p in range(n):
            for q in range(n):
                h = self._spin_h1(p, q)
                if h == 0.0:
                    continue
                step = _apply_term(occ, [(p, True), (q, False)])
                if step is not None:
                    sign, state = step
                    out[state] = out.get(state, 0.0) + sign * h
        for p in range(n):
            for q in range(n):
                for r in range(n):
                    for s in range(n):
                        v = self._spin_v(p, q, r, s)
                        if v == 0.0:
                            continue
                        step = _apply_term(
                            occ, [(p, True), (q, True), (s, False), (r, False)]
                        )
                        if step is not None:
                            sign, state = step
                            out[state] = out.get(state, 0.0) + 0.5 * sign * v
        return out

    def _build_matrix(self) -> np.ndarray:
        dets = self.DETERMINANTS
        index = {d: i for i, d in enumerate(dets)}
        mat = np.zeros((len(dets), len(dets)))
        for j, det in enumerate(dets):
            for state, amp in self._apply_h(det).items():
                if state in index:
                    mat[index[state], j] += amp
        return mat

    @property
    def e_hf(self) -> float:
        return float(self.matrix[0, 0])

    @property
    def e_double(self) -> float:
        return float(self.matrix[3, 3])

    @property
    def hf_double_coupling(self) -> float:
        return float(self.matrix[0, 3])

    @property
    def e_fci(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    @property
    def fci_double_population(self) -> float:
        vals, vecs = np.linalg.eigh(self.matrix)
        return float(vecs[3, 0] ** 2)


# ---------------------------------------------------------------------------
# Exact circuit unitaries and density-matrix noise simulation.
# ---------------------------------------------------------------------------


def gate_unitary(gate, n: int) -> np.ndarray:
    """Full-register unitary built from explicit basis-state rules."""
    dim = 2**n
    if len(gate.targets) == 1:
        q = gate.targets[0]
        if gate.kind == "X":
            small = PAULI_1Q["X"]
        elif gate.kind == "RY":
            half = gate.angle / 2
            small = np.array(
                [[np.cos(half), -np.sin(half)], [np.sin(half), np.cos(half)]],
                dtype=complex,
            )
        elif gate.kind == "RZ":
            small = np.diag(
                [np.exp(-0.5j * gate.angle), np.exp(0.5j * gate.angle)]
            ).astype(complex)
        else:
            raise ValueError(gate.kind)
        mats = [PAULI_1Q["I"]] * n
        mats[q] = small
        full = mats[0]
        for m in mats[1:]:
            full = np.kron(full, m)
        return full
    a, b = gate.targets
    full = np.zeros((dim, dim), dtype=complex)
    for code in range(dim):
        bit_a = (code >> (n - 1 - a)) & 1
        bit_b = (code >> (n - 1 - b)) & 1
        if gate.kind == "CZ":
            full[code, code] = -1.0 if bit_a and bit_b else 1.0
        elif gate.kind == "CNOT":
            out = code ^ ((1 << (n - 1 - b)) if bit_a else 0)
            full[out, code] = 1.0
        else:
            raise ValueError(gate.kind)
    return full


def circuit_unitary(circuit) -> np.ndarray:
    u = np.eye(2**circuit.width, dtype=complex)
    for gate in circuit.gates:
        u = gate_unitary(gate, circuit.width) @ u
    return u


def _pauli_on(letters_by_qubit: dict[int, str], n: int) -> np.ndarray:
    mats = [PAULI_1Q[letters_by_qubit.get(q, "I")] for q in range(n)]
    full = mats[0]
    for m in mats[1:]:
        full = np.kron(full, m)
    return full


def density_matrix_probs(circuit, device, physical_map, basis_change=None) -> np.ndarray:
    """Exact measured-bitstring distribution under the depolarizing + readout model."""
    n = circuit.width
    dim = 2**n
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    for gate in circuit.gates:
        u = gate_unitary(gate, n)
        rho = u @ rho @ u.conj().T
        if len(gate.targets) == 1:
            p = device.qubits[physical_map[gate.targets[0]]].single_qubit_error
            if p > 0:
                q = gate.targets[0]
                mixed = sum(
                    _pauli_on({q: c}, n) @ rho @ _pauli_on({q: c}, n) for c in "XYZ"
                )
                rho = (1 - p) * rho + (p / 3.0) * mixed
        else:
            a, b = gate.targets
            p = device.pair_error(physical_map[a], physical_map[b])
            if p > 0:
                mixed = np.zeros_like(rho)
                for ca in "IXYZ":
                    for cb in "IXYZ":
                        if ca == "I" and cb == "I":
                            continue
                        op = _pauli_on({a: ca, b: cb}, n)
                        mixed = mixed + op @ rho @ op
                rho = (1 - p) * rho + (p / 15.0) * mixed
    if basis_change is not None:
        for gate in basis_change.gates:
            u = gate_unitary(gate, n)
            rho = u @ rho @ u.conj().T
    probs = np.diag(rho).real.copy()
    probs = np.maximum(probs, 0.0)
    probs /= probs.sum()

    # Readout confusion, one 2x2 stochastic matrix per qubit.
    tensor = probs.reshape([2] * n)
    for q in range(n):
        cal = device.qubits[physical_map[q]]
        confusion = np.array(
            [
                [1 - cal.readout_p10, cal.readout_p01],
                [cal.readout_p10, 1 - cal.readout_p01],
            ]
        )
        tensor = np.moveaxis(
            np.tensordot(confusion, np.moveaxis(tensor, q, 0), axes=([1], [0])), 0, q
        )
    return tensor.reshape(-1)


# ---------------------------------------------------------------------------
# Weighted least squares through the normal equations on a design matrix.
# ---------------------------------------------------------------------------


def wls_normal_equations(points) -> tuple[float, float, float]:
    """(intercept, slope, slope stderr) of the weighted normal equations.

    Solved through the square-root-weighted design matrix with an
    orthogonal-factorization least-squares solve, so the oracle stays
    well-conditioned even for badly scaled instances.
    """
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    w = 1.0 / np.array([p[2] for p in points], dtype=float) ** 2
    a = np.column_stack([np.ones_like(x), x])
    b = np.sqrt(w)[:, None] * a
    beta, *_ = np.linalg.lstsq(b, np.sqrt(w) * y, rcond=None)
    residuals = y - a @ beta
    dof = len(x) - 2
    if dof > 0:
        sigma2 = float(residuals @ (w * residuals)) / dof
        pinv = np.linalg.pinv(b)
        cov = sigma2 * (pinv @ pinv.T)
        stderr = float(np.sqrt(cov[1, 1]))
    else:
        stderr = 0.0
    return float(beta[0]), float(beta[1]), stderr
