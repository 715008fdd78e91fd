"""Experiment reports: assembly, JSON/CSV serialization, schema validation.

Reports are reproducible byte-for-byte for a fixed config: every random draw
is derived from the recorded seed and serialization is canonical (sorted keys,
repr floats, no timestamps).
"""

from __future__ import annotations

import csv
import io
import json
from importlib import resources

import numpy as np

from . import __version__
from ._kernels import backend_name
from .builder import build_order_finding_circuit, default_argument_width, expand_iqft_marker
from .errors import PreconditionError
from .metrics import fidelity, ghz_frame_target, ghz_witness, linear_entropy, tangle
from .noise import NoiseModel, postselection_yield
from .numtheory import OrderProfile
from .passes import PASS_SCOPE, equivalence_check, run_pipeline
from .shor import run_full_pipeline
from .sim import (conditional_function_distribution, measure_logical, partial_trace,
                  register_distribution, run_density, run_pure)
from .textfmt import serialize_circuit, _gate_line


def complex_matrix_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m)]


def state_json(qubits, matrix: np.ndarray) -> dict:
    return {
        "qubits": [int(q) for q in qubits],
        "dimension": int(matrix.shape[0]),
        "matrix": complex_matrix_json(matrix),
    }


def noise_json(noise: NoiseModel) -> dict:
    return {
        "visibility": noise.visibility,
        "per_gate_visibility": (
            list(noise.per_gate_visibility) if noise.per_gate_visibility else None
        ),
        "depolarizing": noise.depolarizing,
        "gate_success": noise.gate_success,
    }


def pass_result_json(result, equivalence=None) -> dict:
    out = {
        "pass": result.pass_name,
        "applied": result.applied,
        "removed": [[int(i), reason] for i, reason in result.removed],
        "rewritten": [
            {"old": _gate_line(old), "new": [_gate_line(g) for g in new], "reason": reason}
            for old, new, reason in result.rewritten
        ],
        "skipped": [[int(i), note] for i, note in result.skipped],
        "notes": list(result.notes),
    }
    if equivalence is not None:
        out["equivalence"] = {
            "scope": equivalence.scope,
            "equivalent": bool(equivalence.equivalent),
            "max_deviation": float(equivalence.max_deviation),
        }
    return out


def audit_pipeline(circuit, profile, passes=None) -> tuple[list[dict], bool]:
    """Run the pass pipeline and equivalence-check every step; returns the
    audit entries and whether every applied pass was sound."""
    kwargs = {} if passes is None else {"passes": tuple(passes)}
    _, results = run_pipeline(circuit, profile, **kwargs)
    entries = []
    sound = True
    current = circuit
    for result in results:
        equiv = None
        if result.applied and result.output is not current:
            equiv = equivalence_check(current, result.output, PASS_SCOPE[result.pass_name])
            sound = sound and equiv.equivalent
        entries.append(pass_result_json(result, equiv))
        current = result.output
    return entries, sound


def build_run_report(N: int, C: int, level: str = "full", n: int | None = None,
                     noise: NoiseModel | None = None, shots: int = 1024,
                     seed: int = 0) -> dict:
    """Full experiment report for one circuit run (the CLI ``run`` command)."""
    noise = noise or NoiseModel()
    profile = OrderProfile.compute(C, N)
    if n is None:
        n = default_argument_width(profile)
    circuit = expand_iqft_marker(build_order_finding_circuit(N, C, n, level))
    prefix = circuit.modexp_prefix()

    if noise.trivial:
        final = run_pure(circuit).density()
        joint_full = run_pure(prefix).density()
    else:
        final = run_density(circuit, noise=noise)
        joint_full = run_density(prefix, noise=noise)
    ideal_joint_full = run_pure(prefix).density()

    seeds = np.random.SeedSequence(seed).generate_state(3, dtype=np.uint64)
    record = measure_logical(final, circuit.argument, shots, int(seeds[0]),
                             reverse=circuit.reverse_argument)
    probs = register_distribution(final, circuit.argument,
                                  reverse=circuit.reverse_argument)
    prob_rows = [
        {
            "outcome": format(i, f"0{circuit.n}b"),
            "probability": float(p),
            "count": int(record.counts.get(format(i, f"0{circuit.n}b"), 0)),
        }
        for i, p in enumerate(probs)
        if p > 1e-12 or format(i, f"0{circuit.n}b") in record.counts
    ]

    arg_active = circuit.active_argument()
    func_active = circuit.active_function()
    states = {}
    metrics = {}
    conditionals = []
    if arg_active:
        arg_reduced = partial_trace(final, arg_active)
        states["argument_reduced"] = state_json(arg_active, arg_reduced.matrix)
        metrics["linear_entropy_argument"] = linear_entropy(arg_reduced)
    if arg_active and func_active:
        joint_qubits = tuple(sorted(arg_active + func_active))
        joint = partial_trace(joint_full, joint_qubits)
        ideal_joint = partial_trace(ideal_joint_full, joint_qubits)
        states["joint_active"] = state_json(joint_qubits, joint.matrix)
        metrics["joint_fidelity_vs_ideal"] = fidelity(joint, ideal_joint)
        metrics["joint_linear_entropy"] = linear_entropy(joint)
        if len(joint_qubits) == 3 and fidelity(ideal_joint, ghz_frame_target()) > 0.999:
            metrics["ghz_witness"] = ghz_witness(joint)
        if len(arg_active) == len(func_active) and len(arg_active) >= 2:
            metrics["tangles"] = {
                f"{a}-{f}": tangle(partial_trace(joint_full, (a, f)))
                for a, f in zip(arg_active, func_active)
            }
        for outcome in range(2 ** len(arg_active)):
            joint_probs = register_distribution(joint_full, arg_active)
            if joint_probs[outcome] <= 1e-12:
                continue
            dist = conditional_function_distribution(
                joint_full, arg_active, func_active, outcome)
            conditionals.append({
                "argument_outcome": format(outcome, f"0{len(arg_active)}b"),
                "labels": [format(i, f"0{len(func_active)}b") for i in range(len(dist))],
                "distribution": [float(p) for p in dist],
            })

    audit, sound = audit_pipeline(build_order_finding_circuit(N, C, n, level), profile)
    stats = run_full_pipeline(N, C, noise=noise, shots=shots, seed=int(seeds[1]),
                              n=n, level=level)
    report = {
        "version": __version__,
        "backend": backend_name(),
        "config": {
            "N": N, "C": C, "n": n, "level": level, "shots": shots, "seed": seed,
            "noise": noise_json(noise),
        },
        "circuit": serialize_circuit(circuit),
        "order": {"r": profile.r, "log2_r": profile.log2_r,
                  "orbit": list(profile.orbit)},
        "postselection_yield": float(postselection_yield(circuit, noise)),
        "compilation": audit,
        "compilation_sound": sound,
        "probabilities": prob_rows,
        "states": states,
        "metrics": metrics,
        "conditionals": conditionals,
        "factoring": {
            "fractions": stats.fractions,
            "errors": stats.errors,
            "outcomes": [
                {
                    "bitstring": bits,
                    "count": count,
                    "candidate_order": out.candidate_order,
                    "classification": out.classification,
                    "factors": list(out.factors) if out.factors else None,
                }
                for bits, count, out in stats.outcomes
            ],
        },
    }
    validate_report(report)
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def probabilities_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["outcome", "probability", "count"])
    for row in rows:
        writer.writerow([row["outcome"], repr(row["probability"]), row["count"]])
    return buf.getvalue()


def records_csv(records) -> str:
    """Tomography settings/counts table: setting, outcome, count."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["setting", "outcome", "count"])
    for record in records:
        setting = "".join(record.basis)
        for outcome in sorted(record.counts):
            value = record.counts[outcome]
            writer.writerow([setting, outcome,
                             repr(value) if record.shots == 0 else int(value)])
    return buf.getvalue()


def load_schema() -> dict:
    with resources.files("shorsim.schemas").joinpath("report.schema.json").open() as fh:
        return json.load(fh)


def validate_report(report: dict):
    import jsonschema

    try:
        jsonschema.validate(report, load_schema())
    except jsonschema.ValidationError as exc:
        raise PreconditionError(f"report does not match schema: {exc.message}") from exc
