"""Order-finding circuit construction at four compilation levels.

``conceptual``  function-register preparation to the value 1, a Hadamard wall
                on the argument register, the full cascade of controlled
                modular multipliers (the j-th is controlled by the argument
                qubit of bit weight 2**j), and an inverse-QFT marker.
``decomposed``  multipliers that act as the identity are dropped, the
                surviving ones are decomposed into controlled-SWAP gates over
                function-register bit lines, and the marker is expanded into
                explicit H/controlled-phase gates (tagged ``iqft``) plus the
                argument-order-reversal flag.
``partial``     the decomposed circuit with every controlled-SWAP that the
                fixed function input makes provable rewritten to CNOTs or
                dropped.
``full``        the function register shrinks to log2(r) qubits holding the
                orbit index of C**x mod N; the circuit reduces to Hadamards on
                the low argument qubits and one CNOT per function qubit.

Every level takes the all-zeros basis state as input: the value-encoded
levels carry an explicit X gate preparing the function register to 1, and the
log-encoded level starts at orbit index 0 (the encoding of 1).  The
decomposed/partial levels exist only when every surviving multiplier permutes
function bit lines (for modulus 2**m - 1 that is the power-of-two co-primes);
the full level only needs the order to be a power of two.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .circuit import DENSE_CAP, Circuit
from .errors import PreconditionError, UnsupportedLevelError
from .gates import Gate, GateKind, ModMul
from .numtheory import OrderProfile

LEVELS = ("conceptual", "decomposed", "partial", "full")


def inverse_qft_gates(qubits: tuple[int, ...]) -> list[Gate]:
    """Inverse-QFT gate list whose final step is the qubit-order reversal.

    The reversal itself is not emitted; it is carried by the circuit's
    ``reverse_argument`` flag (relabelling commutes with measurement).  Block
    ``u`` applies the controlled phases -pi/2**(u-v) from every earlier qubit
    ``v`` and then a Hadamard, so each qubit's Hadamard precedes all phases it
    controls.
    """
    out: list[Gate] = []
    for u in range(len(qubits)):
        for v in range(u):
            out.append(Gate(GateKind.CP, (qubits[v], qubits[u]),
                            phase=Fraction(-1, 2 ** (u - v)), tag="iqft"))
        out.append(Gate(GateKind.H, (qubits[u],), tag="iqft"))
    return out


def expand_iqft_marker(c: Circuit) -> Circuit:
    """Replace IQFT markers with explicit gates and set the reversal flag."""
    if not c.has_iqft_marker():
        return c
    gates: list[Gate] = []
    for g in c.gates:
        if g.kind is GateKind.IQFT:
            gates.extend(inverse_qft_gates(g.qubits))
        else:
            gates.append(g)
    return c.replace(gates=tuple(gates), reverse_argument=True)


def multiplier_bit_permutation(multiplier: int, modulus: int, m: int) -> list[int] | None:
    """If y -> multiplier*y mod modulus permutes the m bit lines, return the
    permutation p with p[i] = destination line of bit weight 2**i, else None."""
    perm = [None] * m
    for i in range(m):
        y = (multiplier * (1 << i)) % modulus
        if y & (y - 1) != 0 or y == 0:
            return None
        perm[i] = y.bit_length() - 1
    if sorted(perm) != list(range(m)):
        return None
    # the bit permutation must reproduce the full multiplier map, including
    # the identity convention for y >= modulus
    for y in range(2**m):
        image = 0
        for i in range(m):
            if (y >> i) & 1:
                image |= 1 << perm[i]
        expected = (multiplier * y) % modulus if y < modulus else y
        if image != expected:
            return None
    return perm


def permutation_transpositions(perm: list[int]) -> list[tuple[int, int]]:
    """Cycle decomposition into adjacent-in-cycle transpositions, ordered so a
    cycle (c0 c1 .. ck) becomes the gate sequence (c_{k-1},c_k) .. (c0,c1)."""
    seen: set[int] = set()
    out: list[tuple[int, int]] = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cycle = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        for i in range(len(cycle) - 2, -1, -1):
            out.append((cycle[i], cycle[i + 1]))
    return out


def build_order_finding_circuit(N: int, C: int, n: int, level: str) -> Circuit:
    """Order-finding circuit for modulus ``N``, co-prime ``C`` and an
    ``n``-qubit argument register, at the requested compilation level."""
    if level not in LEVELS:
        raise PreconditionError(f"unknown level '{level}' (expected one of {LEVELS})")
    if n < 1:
        raise PreconditionError("argument register needs at least one qubit")
    profile = OrderProfile.compute(C, N)  # also validates co-primality
    m = max(1, math.ceil(math.log2(N)))
    if n + m > DENSE_CAP:
        raise PreconditionError(
            f"width {n + m} exceeds the dense simulation cap ({DENSE_CAP} qubits)"
        )

    width = n + m
    argument = tuple(range(n))
    function = tuple(range(n, n + m))

    if level == "conceptual":
        gates = [Gate(GateKind.X, (function[-1],))]  # function register <- 1
        gates += [Gate(GateKind.H, (q,)) for q in argument]
        for j in range(n):
            ctrl = argument[n - 1 - j]  # bit weight 2**j
            gates.append(Gate(GateKind.CU, (ctrl, *function),
                              modmul=ModMul(C, N, j)))
        gates.append(Gate(GateKind.IQFT, argument))
        return Circuit(width, argument, function, tuple(gates))

    if level in ("decomposed", "partial"):
        circuit = _build_decomposed(profile, n, width, argument, function)
        if level == "decomposed":
            return circuit
        from .passes import specialize_cswap_to_cnot  # deferred: avoids an import cycle

        return specialize_cswap_to_cnot(circuit).output

    return _build_full(profile, n)


def _build_decomposed(profile, n, width, argument, function) -> Circuit:
    N, C, m = profile.modulus, profile.base, len(function)
    gates = [Gate(GateKind.X, (function[-1],))]  # function register <- 1
    gates += [Gate(GateKind.H, (q,)) for q in argument]
    for j in range(n):
        mm = ModMul(C, N, j)
        if mm.multiplier == 1:
            continue  # the multiplier is the identity: nothing to emit
        perm = multiplier_bit_permutation(mm.multiplier, N, m)
        if perm is None:
            raise UnsupportedLevelError(
                f"C={C} N={N}: multiplier {mm.multiplier} does not permute function "
                "bit lines; no controlled-SWAP decomposition at this level"
            )
        ctrl = argument[n - 1 - j]
        for a, b in permutation_transpositions(perm):
            # bit line i is function qubit function[m-1-i] (MSB first)
            gates.append(Gate(GateKind.CSWAP, (ctrl, function[m - 1 - a], function[m - 1 - b])))
    gates.extend(inverse_qft_gates(argument))
    return Circuit(width, argument, function, tuple(gates), reverse_argument=True)


def _build_full(profile, n) -> Circuit:
    if not profile.power_of_two:
        raise UnsupportedLevelError(
            f"order r={profile.r} is not a power of two; the log-encoded level needs r=2**l"
        )
    l = profile.log2_r
    if n < l:
        raise PreconditionError(
            f"argument register must span at least one period: n={n} < log2(r)={l}"
        )
    width = n + l
    argument = tuple(range(n))
    function = tuple(range(n, n + l))
    gates = [Gate(GateKind.H, (argument[n - l + t],)) for t in range(l)]
    gates += [Gate(GateKind.CNOT, (argument[n - l + t], function[t])) for t in range(l)]
    return Circuit(width, argument, function, tuple(gates), reverse_argument=True)


# Named circuits for the CLI; the order-2 pair uses C=4 with one spare top
# rail (n=2), the order-4 pair uses C=2 with n=3.
NAMED_CIRCUITS = {
    "order2-decomposed": (15, 4, 2, "decomposed"),
    "order2-partial": (15, 4, 2, "partial"),
    "order2-full": (15, 4, 2, "full"),
    "order4-decomposed": (15, 2, 3, "decomposed"),
    "order4-partial": (15, 2, 3, "partial"),
    "order4-full": (15, 2, 3, "full"),
}


def named_circuit(name: str) -> Circuit:
    try:
        return build_order_finding_circuit(*NAMED_CIRCUITS[name])
    except KeyError:
        raise PreconditionError(
            f"unknown circuit name '{name}' (expected one of {sorted(NAMED_CIRCUITS)})"
        ) from None


def default_argument_width(profile: OrderProfile) -> int:
    """One spare rail above the period-index qubits when r is a power of two,
    otherwise the standard 2*ceil(log2 N) phase-estimation width."""
    if profile.power_of_two:
        return profile.log2_r + 1
    return 2 * math.ceil(math.log2(profile.modulus))
