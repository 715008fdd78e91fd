"""Compilation passes with an audit trail, plus the equivalence checker.

Pipeline order: hadamard-pair, trivial-power, dead-qubit, qft-elision,
cswap-specialize, log-recode.  The first two preserve the full unitary; the
rest are sound for the circuit's fixed all-zeros input (function register
prepared in-circuit) at the level of the measured argument-register
distribution, which is the scope the checker verifies for them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .builder import expand_iqft_marker
from .circuit import Circuit
from .errors import PreconditionError
from .gates import Gate, GateKind, is_self_inverse
from .numtheory import OrderProfile

REASON_TAGS = frozenset(
    {"hadamard-pair", "trivial-power", "fixed-input-specialization",
     "log-recode", "dead-qubit", "qft-elision"}
)

PIPELINE_ORDER = ("hadamard-pair", "trivial-power", "dead-qubit",
                  "qft-elision", "cswap-specialize", "log-recode")

# scope the soundness of each pass is checked at
PASS_SCOPE = {
    "hadamard-pair": "full-unitary",
    "trivial-power": "full-unitary",
    "dead-qubit": "argument-distribution",
    "qft-elision": "argument-distribution",
    "cswap-specialize": "argument-distribution",
    "log-recode": "argument-distribution",
}


@dataclass(frozen=True)
class PassResult:
    pass_name: str
    output: Circuit
    removed: tuple[tuple[int, str], ...] = ()
    rewritten: tuple[tuple[Gate, tuple[Gate, ...], str], ...] = ()
    skipped: tuple[tuple[int, str], ...] = ()
    applied: bool = True
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        for _, reason in self.removed:
            assert reason in REASON_TAGS, f"unknown reason tag {reason}"
        for _, _, reason in self.rewritten:
            assert reason in REASON_TAGS, f"unknown reason tag {reason}"


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    max_deviation: float
    scope: str


def cancel_adjacent_inverses(circuit: Circuit) -> PassResult:
    """Remove pairs of identical self-inverse gates separated only by gates on
    disjoint qubits."""
    entries = list(enumerate(circuit.gates))
    removed: list[tuple[int, str]] = []
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(entries):
            oi, g = entries[i]
            if is_self_inverse(g):
                qubits = set(g.qubits)
                for j in range(i + 1, len(entries)):
                    oj, h = entries[j]
                    if qubits & set(h.qubits):
                        if h.same_operation(g):
                            removed += [(oi, "hadamard-pair"), (oj, "hadamard-pair")]
                            del entries[j]
                            del entries[i]
                            changed = True
                            i -= 1
                        break
            i += 1
    out = circuit.with_gates([g for _, g in entries])
    return PassResult("hadamard-pair", out, removed=tuple(sorted(removed)))


def remove_trivial_controlled_powers(circuit: Circuit,
                                     profile: OrderProfile) -> PassResult:
    """Drop controlled multipliers whose multiplier is 1 (identity gates)."""
    kept: list[Gate] = []
    removed: list[tuple[int, str]] = []
    for i, g in enumerate(circuit.gates):
        if g.kind is GateKind.CU and g.modmul.multiplier == 1:
            removed.append((i, "trivial-power"))
        else:
            kept.append(g)
    return PassResult("trivial-power", circuit.with_gates(kept),
                      removed=tuple(removed))


_UNKNOWN = None


def specialize_cswap_to_cnot(circuit: Circuit) -> PassResult:
    """Rewrite controlled-SWAP gates whose swap pair is provably in known
    basis states (forward tracking from the all-zeros input) into CNOTs, or
    drop them when the pair values are equal.

    Pairs the tracker cannot fully resolve are left unchanged and recorded.
    """
    known: list[int | None] = [0] * circuit.width
    out: list[Gate] = []
    removed: list[tuple[int, str]] = []
    rewritten: list[tuple[Gate, tuple[Gate, ...], str]] = []
    skipped: list[tuple[int, str]] = []

    for i, g in enumerate(circuit.gates):
        if g.kind is GateKind.CSWAP:
            c, a, b = g.qubits
            ka, kb = known[a], known[b]
            if ka is not _UNKNOWN and kb is not _UNKNOWN:
                if ka == kb:
                    removed.append((i, "fixed-input-specialization"))
                    continue  # swapping equal values is the identity
                new = (Gate(GateKind.CNOT, (c, a)), Gate(GateKind.CNOT, (c, b)))
                rewritten.append((g, new, "fixed-input-specialization"))
                for ng in new:
                    out.append(ng)
                    _track(known, ng)
                continue
            skipped.append((i, f"pair values not both known (got {ka}, {kb})"))
        out.append(g)
        _track(known, g)
    return PassResult("cswap-specialize", circuit.with_gates(out),
                      removed=tuple(removed), rewritten=tuple(rewritten),
                      skipped=tuple(skipped))


def _track(known: list[int | None], g: Gate):
    """Forward update of per-qubit basis-state knowledge ({0, 1, unknown})."""
    kind = g.kind
    if kind is GateKind.X:
        q = g.qubits[0]
        known[q] = None if known[q] is _UNKNOWN else 1 - known[q]
    elif kind in (GateKind.H, GateKind.IQFT):
        for q in g.qubits:
            known[q] = _UNKNOWN
    elif kind in (GateKind.T, GateKind.CZ, GateKind.CP):
        pass  # diagonal: basis values unchanged
    elif kind is GateKind.CNOT:
        c, t = g.qubits
        if known[c] == 0:
            pass
        elif known[c] == 1:
            known[t] = None if known[t] is _UNKNOWN else 1 - known[t]
        else:
            known[t] = _UNKNOWN
    elif kind is GateKind.SWAP:
        a, b = g.qubits
        known[a], known[b] = known[b], known[a]
    elif kind is GateKind.CSWAP:
        c, a, b = g.qubits
        if known[c] == 0:
            pass
        elif known[c] == 1:
            known[a], known[b] = known[b], known[a]
        elif known[a] != known[b] or known[a] is _UNKNOWN:
            known[a] = known[b] = _UNKNOWN
    elif kind is GateKind.CU:
        if known[g.qubits[0]] == 0 or g.modmul.multiplier == 1:
            return
        for q in g.qubits[1:]:
            known[q] = _UNKNOWN


def recode_function_register(circuit: Circuit, profile: OrderProfile) -> PassResult:
    """Shrink the function register to log2(r) qubits holding the orbit index
    of C**x mod N; the modular-exponentiation gates become one CNOT per index
    bit, fed by the matching argument qubit."""
    if not profile.power_of_two:
        raise PreconditionError(
            f"cannot recode: order r={profile.r} is not a power of two"
        )
    l = profile.log2_r
    n = circuit.n
    if n < l:
        raise PreconditionError(f"argument register too narrow: n={n} < log2(r)={l}")
    if circuit.argument != tuple(range(n)):
        raise PreconditionError("recoding expects the argument register on the top rails")

    func = set(circuit.function)
    cascade = [Gate(GateKind.CNOT, (circuit.argument[n - l + t], n + t)) for t in range(l)]
    if circuit.m == l:
        current = [g for g in circuit.gates if set(g.qubits) & func]
        if current == cascade:
            return PassResult("log-recode", circuit,
                              notes=("function register already log-encoded",))

    removed = tuple((i, "log-recode") for i, g in enumerate(circuit.gates)
                    if set(g.qubits) & func)
    kept_arg = [g for g in circuit.gates if not set(g.qubits) & func]
    # argument gates keep their indices; the new register sits right below
    insert_at = next((k for k, g in enumerate(kept_arg) if g.tag == "iqft"), len(kept_arg))
    gates = kept_arg[:insert_at] + cascade + kept_arg[insert_at:]
    out = Circuit(n + l, circuit.argument, tuple(range(n, n + l)), tuple(gates),
                  circuit.measure_argument, circuit.reverse_argument)
    return PassResult("log-recode", out, removed=removed,
                      notes=(f"function register recoded {circuit.m} -> {l} qubits",))


def elide_inverse_qft(circuit: Circuit, profile: OrderProfile,
                      force: bool = False) -> PassResult:
    """For power-of-two orders, drop the final inverse Fourier transform.

    The transform's Hadamards on the period-index-free top qubits cancel the
    initialization wall (those rails end in |0>), its controlled phases are
    inhibited by those |0> controls, and its gates on the remaining argument
    qubits act on subsystems that are maximally mixed after modular
    exponentiation; only the qubit-order reversal survives, as a relabelling
    flag.  Orders that are not a power of two leave the circuit unchanged
    (not-applicable) unless ``force`` is set, which elides anyway (a negative
    control: it changes the measured distribution).
    """
    if not profile.power_of_two and not force:
        return PassResult("qft-elision", circuit, applied=False,
                          notes=(f"not applicable: r={profile.r} is not a power of two",))
    l = profile.log2_r if profile.power_of_two else profile.r.bit_length() - 1
    n = circuit.n
    if n < l:
        return PassResult("qft-elision", circuit, applied=False,
                          notes=(f"not applicable: n={n} < log2(r)={l}",))
    k_qubits = set(circuit.argument[: n - l])

    removed: list[tuple[int, str]] = []
    kept: list[tuple[int, Gate]] = []
    had_qft = False
    for i, g in enumerate(circuit.gates):
        if g.kind is GateKind.IQFT or g.tag == "iqft":
            removed.append((i, "qft-elision"))
            had_qft = True
        else:
            kept.append((i, g))
    if not had_qft:
        return PassResult("qft-elision", circuit.replace(reverse_argument=True),
                          notes=("no inverse-QFT marker or gates present",))

    # cancel the initialization Hadamard on each top qubit against the
    # transform's leading Hadamard (both are gone once the rail only carries
    # identity multipliers)
    out: list[Gate] = []
    for i, g in kept:
        if (g.kind is GateKind.H and g.qubits[0] in k_qubits
                and _only_trivial_company(circuit, g.qubits[0], kept, i)):
            removed.append((i, "hadamard-pair"))
            continue
        out.append(g)
    result = circuit.with_gates(out).replace(reverse_argument=True)
    return PassResult("qft-elision", result, removed=tuple(sorted(removed)))


def _only_trivial_company(circuit: Circuit, qubit: int, kept, h_index: int) -> bool:
    """True when every other kept gate on ``qubit`` is an identity multiplier."""
    for i, g in kept:
        if i == h_index or qubit not in g.qubits:
            continue
        if not (g.kind is GateKind.CU and g.modmul.multiplier == 1):
            return False
    return True


def eliminate_dead_qubit_gates(circuit: Circuit, profile: OrderProfile) -> PassResult:
    """Remove inverse-QFT gates that provably cannot affect the measured
    argument distribution: controlled phases whose control rail was reset to
    |0> by the transform's own Hadamard, and gates confined to argument qubits
    left maximally mixed by modular exponentiation."""
    notes: list[str] = []
    if circuit.has_iqft_marker():
        circuit = expand_iqft_marker(circuit)
        notes.append("inverse-QFT marker expanded to explicit gates")
    if not profile.power_of_two or circuit.n < profile.log2_r:
        return PassResult("dead-qubit", circuit, applied=False,
                          notes=(*notes, f"not applicable: r={profile.r}"))
    n, l = circuit.n, profile.log2_r
    k_set = set(circuit.argument[: n - l])
    a_set = set(circuit.argument[n - l:])

    # a top qubit is provably |0> at a given point if the transform's own
    # Hadamard already fired on it, or if no kept gate has touched it at all
    # (an earlier pass cancelled its initialization Hadamard)
    reset: set[int] = set()
    touched: set[int] = set()
    removed: list[tuple[int, str]] = []
    out: list[Gate] = []
    for i, g in enumerate(circuit.gates):
        if g.tag != "iqft":
            out.append(g)
            touched.update(g.qubits)
            continue
        if g.kind is GateKind.CP:
            control, target = g.qubits
            if control in k_set and (control in reset or control not in touched):
                removed.append((i, "dead-qubit"))  # inhibited by a |0> control
                continue
            if control in a_set and target in a_set:
                removed.append((i, "dead-qubit"))  # acts on maximally mixed qubits
                continue
        elif g.kind is GateKind.H:
            q = g.qubits[0]
            if q in a_set:
                removed.append((i, "dead-qubit"))  # acts on a maximally mixed qubit
                continue
            if q in k_set:
                reset.add(q)
        out.append(g)
        touched.update(g.qubits)
    return PassResult("dead-qubit", circuit.with_gates(out),
                      removed=tuple(removed), notes=tuple(notes))


_PASS_FUNCS = {
    "hadamard-pair": lambda c, p: cancel_adjacent_inverses(c),
    "trivial-power": remove_trivial_controlled_powers,
    "dead-qubit": eliminate_dead_qubit_gates,
    "qft-elision": elide_inverse_qft,
    "cswap-specialize": lambda c, p: specialize_cswap_to_cnot(c),
    "log-recode": recode_function_register,
}


def run_pipeline(circuit: Circuit, profile: OrderProfile,
                 passes: tuple[str, ...] = PIPELINE_ORDER):
    """Apply the passes in order; returns (circuit, [PassResult, ...]).

    ``log-recode`` is skipped with a not-applicable result when the order is
    not a power of two (the other passes degrade gracefully on their own).
    """
    results: list[PassResult] = []
    for name in passes:
        if name not in _PASS_FUNCS:
            raise PreconditionError(f"unknown pass '{name}'")
        if name == "log-recode" and not profile.power_of_two:
            results.append(PassResult(name, circuit, applied=False,
                                      notes=(f"not applicable: r={profile.r}",)))
            continue
        result = _PASS_FUNCS[name](circuit, profile)
        results.append(result)
        circuit = result.output
    return circuit, results


def equivalence_check(c1: Circuit, c2: Circuit, scope: str,
                      tol: float = 1e-10) -> EquivalenceResult:
    """Compare two circuits.

    ``full-unitary`` compares gate-list unitaries up to global phase;
    ``argument-distribution`` compares the measured argument-register
    distributions from the all-zeros input, after each circuit's declared
    qubit-order reversal.
    """
    from .sim import circuit_unitary, register_distribution, run_pure

    if scope == "full-unitary":
        if c1.width != c2.width:
            raise PreconditionError(
                f"width mismatch: {c1.width} vs {c2.width} qubits"
            )
        u1 = circuit_unitary(c1)
        u2 = circuit_unitary(c2)
        anchor = np.unravel_index(np.argmax(np.abs(u1)), u1.shape)
        ref = u2[anchor] / u1[anchor]
        dev = float(np.max(np.abs(u1 * ref - u2)))
        return EquivalenceResult(dev <= tol, dev, scope)
    if scope == "argument-distribution":
        if c1.n != c2.n:
            raise PreconditionError(
                f"argument width mismatch: {c1.n} vs {c2.n} qubits"
            )
        dists = []
        for c in (c1, c2):
            expanded = expand_iqft_marker(c)
            state = run_pure(expanded)
            dists.append(register_distribution(state, expanded.argument,
                                               reverse=expanded.reverse_argument))
        dev = float(np.max(np.abs(dists[0] - dists[1])))
        return EquivalenceResult(dev <= tol, dev, scope)
    raise PreconditionError(f"unknown equivalence scope '{scope}'")
