"""Line-oriented circuit text format.

Grammar (one item per line, ``#`` starts a comment):

    circuit width=K arg=[i,...] func=[j,...]
    H 0 | X 0 | T 0
    CNOT c t | CZ c t | SWAP a b
    CP c t p/q          # controlled phase of pi*p/q
    CSWAP c a b
    CU C=.. N=.. j=.. ctrl=c func=[...]
    IQFT [q,...]        # unexpanded inverse-QFT marker
    measure arg [reversed]

A gate line may end with a ``!name`` provenance tag (the builder tags the
expanded inverse-QFT gates ``!iqft``).  ``serialize_circuit`` emits the
canonical form: single spaces, lowercase keywords, uppercase gate mnemonics.
``parse_circuit(serialize_circuit(c))`` reproduces ``c`` exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .circuit import Circuit
from .errors import ParseError
from .gates import Gate, GateKind, ModMul


def serialize_circuit(c: Circuit) -> str:
    lines = [
        "circuit width=%d arg=[%s] func=[%s]"
        % (c.width, ",".join(map(str, c.argument)), ",".join(map(str, c.function)))
    ]
    for g in c.gates:
        lines.append(_gate_line(g))
    if c.measure_argument:
        lines.append("measure arg reversed" if c.reverse_argument else "measure arg")
    return "\n".join(lines) + "\n"


def _gate_line(g: Gate) -> str:
    if g.kind is GateKind.CP:
        body = "CP %d %d %d/%d" % (*g.qubits, g.phase.numerator, g.phase.denominator)
    elif g.kind is GateKind.CU:
        mm = g.modmul
        body = "CU C=%d N=%d j=%d ctrl=%d func=[%s]" % (
            mm.base, mm.modulus, mm.power, g.qubits[0],
            ",".join(map(str, g.qubits[1:])),
        )
    elif g.kind is GateKind.IQFT:
        body = "IQFT [%s]" % ",".join(map(str, g.qubits))
    else:
        body = " ".join([g.kind.value, *map(str, g.qubits)])
    return f"{body} !{g.tag}" if g.tag else body


def parse_circuit(text: str) -> Circuit:
    header = None
    gates: list[Gate] = []
    measure = False
    reversed_ = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if tokens[0] != "circuit":
                raise ParseError(ln, "expected 'circuit' header line")
            header = _parse_header(ln, tokens[1:])
            continue
        if tokens[0] == "measure":
            if measure:
                raise ParseError(ln, "duplicate measure line")
            if len(tokens) < 2 or tokens[1] != "arg" or len(tokens) > 3:
                raise ParseError(ln, "expected 'measure arg [reversed]'")
            if len(tokens) == 3:
                if tokens[2] != "reversed":
                    raise ParseError(ln, f"unknown measure modifier '{tokens[2]}'")
                reversed_ = True
            measure = True
            continue
        if measure:
            raise ParseError(ln, "gate after measure line")
        gates.append(_parse_gate(ln, tokens))
    if header is None:
        raise ParseError(max(1, text.count("\n") + 1), "missing circuit header")
    width, arg, func = header
    try:
        return Circuit(width, arg, func, tuple(gates), measure, reversed_)
    except ValueError as exc:
        raise ParseError(1, str(exc)) from exc


def _parse_header(ln: int, tokens: list[str]) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    fields = dict(_split_kv(ln, t) for t in tokens)
    missing = {"width", "arg", "func"} - set(fields)
    if missing:
        raise ParseError(ln, f"header missing {sorted(missing)}")
    extra = set(fields) - {"width", "arg", "func"}
    if extra:
        raise ParseError(ln, f"unknown header fields {sorted(extra)}")
    return _int(ln, fields["width"]), _int_list(ln, fields["arg"]), _int_list(ln, fields["func"])


def _parse_gate(ln: int, tokens: list[str]) -> Gate:
    tag = ""
    if tokens[-1].startswith("!"):
        tag = tokens[-1][1:]
        tokens = tokens[:-1]
        if not tag:
            raise ParseError(ln, "empty gate tag")
    name, args = tokens[0], tokens[1:]
    try:
        kind = GateKind(name)
    except ValueError:
        raise ParseError(ln, f"unknown gate '{name}'") from None
    try:
        if kind is GateKind.CP:
            if len(args) != 3:
                raise ValueError("CP expects: CP control target p/q")
            qubits = (_int(ln, args[0]), _int(ln, args[1]))
            return Gate(kind, qubits, phase=_fraction(ln, args[2]), tag=tag)
        if kind is GateKind.CU:
            fields = dict(_split_kv(ln, t) for t in args)
            need = {"C", "N", "j", "ctrl", "func"}
            if set(fields) != need:
                raise ValueError(f"CU expects fields {sorted(need)}")
            mm = ModMul(_int(ln, fields["C"]), _int(ln, fields["N"]), _int(ln, fields["j"]))
            qubits = (_int(ln, fields["ctrl"]), *_int_list(ln, fields["func"]))
            return Gate(kind, qubits, modmul=mm, tag=tag)
        if kind is GateKind.IQFT:
            if len(args) != 1:
                raise ValueError("IQFT expects one bracketed qubit list")
            return Gate(kind, _int_list(ln, args[0]), tag=tag)
        qubits = tuple(_int(ln, a) for a in args)
        if kind is GateKind.CNOT and len(qubits) == 2 and qubits[0] == qubits[1]:
            raise ValueError("identical control/target")
        return Gate(kind, qubits, tag=tag)
    except ValueError as exc:
        raise ParseError(ln, str(exc)) from None


def _split_kv(ln: int, token: str) -> tuple[str, str]:
    if "=" not in token:
        raise ParseError(ln, f"expected key=value, got '{token}'")
    key, value = token.split("=", 1)
    return key, value


def _int(ln: int, s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ParseError(ln, f"expected integer, got '{s}'") from None


def _int_list(ln: int, s: str) -> tuple[int, ...]:
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(ln, f"expected bracketed list, got '{s}'")
    body = s[1:-1]
    if not body:
        return ()
    return tuple(_int(ln, part) for part in body.split(","))


def _fraction(ln: int, s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(ln, f"expected rational p/q, got '{s}'") from None
