"""Circuit intermediate representation.

A circuit is an ordered gate list over a fixed qubit count with two named,
disjoint registers: the argument register (phase-estimation input, qubit 0 is
the top rail and most significant bit) and the function register (holds the
modular-exponentiation value, most significant bit first).  Final operations
are flags: whether the argument register is measured logically and whether its
qubit order is reversed before outcomes are labelled.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .gates import Gate, GateKind

DENSE_CAP = 14  # qubits; keeps every dense simulation at desk scale


@dataclass(frozen=True)
class Circuit:
    width: int
    argument: tuple[int, ...]
    function: tuple[int, ...]
    gates: tuple[Gate, ...]
    measure_argument: bool = True
    reverse_argument: bool = False

    def __post_init__(self):
        object.__setattr__(self, "argument", tuple(self.argument))
        object.__setattr__(self, "function", tuple(self.function))
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.width < 1:
            raise ValueError("width must be positive")
        if not self.argument or not self.function:
            raise ValueError("argument and function registers must be non-empty")
        for reg in (self.argument, self.function):
            if len(set(reg)) != len(reg):
                raise ValueError("register lists a qubit twice")
            if any(q < 0 or q >= self.width for q in reg):
                raise ValueError("register qubit index out of range")
        if set(self.argument) & set(self.function):
            raise ValueError("register overlap: argument and function must be disjoint")
        if self.reverse_argument and not self.measure_argument:
            raise ValueError("argument-order reversal is a measurement relabelling; "
                             "it requires measure_argument")
        for g in self.gates:
            if any(q < 0 or q >= self.width for q in g.qubits):
                raise ValueError(f"{g.kind.value} qubit index out of range for width {self.width}")

    @property
    def n(self) -> int:
        return len(self.argument)

    @property
    def m(self) -> int:
        return len(self.function)

    def replace(self, **kw) -> "Circuit":
        return replace(self, **kw)

    def with_gates(self, gates) -> "Circuit":
        return replace(self, gates=tuple(gates))

    def has_iqft_marker(self) -> bool:
        return any(g.kind is GateKind.IQFT for g in self.gates)

    def iqft_tagged_indices(self) -> list[int]:
        return [i for i, g in enumerate(self.gates) if g.tag == "iqft"]

    def modexp_prefix(self) -> "Circuit":
        """The circuit up to (excluding) the inverse-QFT marker or tagged gates.

        This is the state preparation whose output holds the argument/function
        correlations; register reversal and measurement flags are dropped.
        """
        kept = [g for g in self.gates
                if g.kind is not GateKind.IQFT and g.tag != "iqft"]
        return replace(self, gates=tuple(kept), measure_argument=False,
                       reverse_argument=False)

    def active_qubits(self) -> tuple[int, ...]:
        """Qubits touched by any multi-qubit gate in the modexp prefix.

        Rails outside this set stay in a product state with the rest (a bare
        Hadamard at most), which is why reports exclude them.
        """
        touched: set[int] = set()
        for g in self.modexp_prefix().gates:
            if len(g.qubits) > 1:
                touched.update(g.qubits)
        return tuple(sorted(touched))

    def active_argument(self) -> tuple[int, ...]:
        act = set(self.active_qubits())
        return tuple(q for q in self.argument if q in act)

    def active_function(self) -> tuple[int, ...]:
        act = set(self.active_qubits())
        return tuple(q for q in self.function if q in act)
