"""Exact symbolic algebra over multi-qubit Pauli strings.

Conventions used throughout the package:

* A Pauli string is written left-to-right as qubit 0..n-1, e.g. ``"ZIZI"``
  puts Z on qubits 0 and 2 of a 4-qubit register.
* Phases are tracked exactly as integer powers of ``i`` and only exposed as
  one of the four exact units ``{1, i, -1, -i}``; no floating-point phase
  arithmetic happens anywhere.
* Weighted sums of strings (:class:`PauliSum`) carry real coefficients,
  which is all a Hermitian Hamiltonian needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

LETTERS = "IXYZ"

# Exact phase units indexed by the power of i.
PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

# Single-letter products: (a, b) -> (k, c) meaning a*b = i**k * c.
_PRODUCT: dict[tuple[str, str], tuple[int, str]] = {}
for _p in LETTERS:
    _PRODUCT[("I", _p)] = (0, _p)
    _PRODUCT[(_p, "I")] = (0, _p)
    _PRODUCT[(_p, _p)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PRODUCT[(_a, _b)] = (1, _c)   # XY = iZ and cyclic
    _PRODUCT[(_b, _a)] = (3, _c)   # YX = -iZ and cyclic

_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Coefficients below this magnitude are dropped when building sums; far below
# anything resolvable at realistic shot counts.
COEFF_CUTOFF = 1e-14


@dataclass(frozen=True, order=True)
class PauliString:
    """An unsigned Pauli word, one letter per qubit."""

    letters: str

    def __post_init__(self) -> None:
        if len(self.letters) < 1:
            raise ValueError("Pauli string must cover at least one qubit")
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)!r}; expected I/X/Y/Z")

    @property
    def width(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) == {"I"}

    @property
    def support(self) -> tuple[int, ...]:
        """Qubit indices carrying a non-identity letter."""
        return tuple(i for i, c in enumerate(self.letters) if c != "I")

    def __str__(self) -> str:
        return self.letters

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; qubit 0 is the leftmost kron factor."""
        mat = _MATRICES[self.letters[0]]
        for c in self.letters[1:]:
            mat = np.kron(mat, _MATRICES[c])
        return mat


def identity_string(width: int) -> PauliString:
    return PauliString("I" * width)


def _check_widths(a: PauliString, b: PauliString) -> None:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Product a*b as (phase, string) with phase one of {1, i, -1, -i}."""
    _check_widths(a, b)
    k = 0
    out = []
    for ca, cb in zip(a.letters, b.letters):
        dk, c = _PRODUCT[(ca, cb)]
        k += dk
        out.append(c)
    return PHASES[k % 4], PauliString("".join(out))


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff [a, b] = 0: an even number of anticommuting positions."""
    _check_widths(a, b)
    clashes = sum(
        1 for ca, cb in zip(a.letters, b.letters) if ca != "I" and cb != "I" and ca != cb
    )
    return clashes % 2 == 0


def qubitwise_commutes(a: PauliString, b: PauliString) -> bool:
    """True iff every position commutes individually (equal or one is I).

    Strictly stronger than :func:`commutes`; qubit-wise commuting strings can
    be measured simultaneously after a single layer of one-qubit rotations.
    """
    _check_widths(a, b)
    return all(
        ca == "I" or cb == "I" or ca == cb for ca, cb in zip(a.letters, b.letters)
    )


def qubitwise_groups(strings: Iterable[PauliString]) -> list[list[PauliString]]:
    """Partition strings into qubit-wise commuting groups.

    Greedy first-fit over the input order: each string joins the first group
    it is qubit-wise compatible with, else opens a new group. Deterministic
    for a deterministic input order.
    """
    groups: list[list[PauliString]] = []
    for s in strings:
        for group in groups:
            if all(qubitwise_commutes(s, member) for member in group):
                group.append(s)
                break
        else:
            groups.append([s])
    return groups


class PauliSum:
    """Real-weighted sum of equal-width Pauli strings.

    Duplicate strings are merged on construction and coefficients below
    ``COEFF_CUTOFF`` are dropped (the identity coefficient is always kept so
    constant energy offsets survive).
    """

    def __init__(self, terms: Mapping[PauliString, float] | None = None, width: int | None = None):
        merged: dict[PauliString, float] = {}
        for s, c in (terms or {}).items():
            if not isinstance(s, PauliString):
                s = PauliString(s)
            merged[s] = merged.get(s, 0.0) + float(c)
        widths = {s.width for s in merged}
        if len(widths) > 1:
            raise ValueError(f"mixed widths in PauliSum: {sorted(widths)}")
        if width is None:
            if not widths:
                raise ValueError("empty PauliSum needs an explicit width")
            width = widths.pop()
        elif widths and widths.pop() != width:
            raise ValueError("explicit width disagrees with term width")
        self._width = width
        self._terms = {
            s: c for s, c in merged.items() if abs(c) > COEFF_CUTOFF or s.is_identity
        }

    @property
    def width(self) -> int:
        return self._width

    @property
    def terms(self) -> dict[PauliString, float]:
        return dict(self._terms)

    @property
    def constant(self) -> float:
        """Coefficient of the identity string (0.0 if absent)."""
        return self._terms.get(identity_string(self._width), 0.0)

    def sorted_strings(self, include_identity: bool = False) -> list[PauliString]:
        """Strings in lexicographic order; the canonical deterministic order."""
        strings = sorted(self._terms)
        if not include_identity:
            strings = [s for s in strings if not s.is_identity]
        return strings

    def coefficient(self, s: PauliString) -> float:
        return self._terms.get(s, 0.0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[PauliString, float]]:
        return iter(self._terms.items())

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.width != self._width:
            raise ValueError(f"width mismatch: {self._width} vs {other.width}")
        terms = dict(self._terms)
        for s, c in other:
            terms[s] = terms.get(s, 0.0) + c
        return PauliSum(terms, width=self._width)

    def scaled(self, factor: float) -> "PauliSum":
        return PauliSum({s: c * factor for s, c in self}, width=self._width)

    def to_matrix(self) -> np.ndarray:
        """Dense Hermitian matrix of the sum (intended for width <= 8)."""
        dim = 2**self._width
        mat = np.zeros((dim, dim), dtype=complex)
        for s, c in self._terms.items():
            mat += c * s.to_matrix()
        return mat

    def serialize(self) -> str:
        """Stable text form: one line per term, "coefficient<TAB>string"."""
        lines = [
            f"{self._terms[s]!r}\t{s.letters}"
            for s in sorted(self._terms)
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "PauliSum":
        terms: dict[PauliString, float] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                coeff, letters = line.split("\t")
                terms[PauliString(letters)] = float(coeff)
            except ValueError as exc:
                raise ValueError(f"bad PauliSum line {lineno}: {line!r}") from exc
        return cls(terms)


def embed_string(s: PauliString, subsystem_index: int, n_subsystems: int) -> PauliString:
    """Pad a subsystem string with identities on all other subsystem blocks."""
    if not 0 <= subsystem_index < n_subsystems:
        raise ValueError(
            f"subsystem_index {subsystem_index} out of range for {n_subsystems} subsystems"
        )
    w = s.width
    left = "I" * (w * subsystem_index)
    right = "I" * (w * (n_subsystems - subsystem_index - 1))
    return PauliString(left + s.letters + right)


def embed(sub: PauliSum, subsystem_index: int, n_subsystems: int) -> PauliSum:
    """Tensor a subsystem operator with identity on every other block.

    Block layout is contiguous: subsystem ``b`` owns qubits
    ``[b*w, (b+1)*w)`` of the composite register of width ``n_subsystems*w``.
    Coefficients are unchanged.
    """
    terms = {
        embed_string(s, subsystem_index, n_subsystems): c for s, c in sub
    }
    return PauliSum(terms, width=sub.width * n_subsystems)
