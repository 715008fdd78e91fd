"""Command-line driver.

Exit codes: 0 success (including not-applicable passes), 1 unsound
compilation, 2 circuit parse error, 3 precondition violation, 4 reconstruction
non-convergence.  The default output directory comes from SHORSIM_OUTPUT_DIR
(falling back to the working directory).
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import __version__
from .builder import (NAMED_CIRCUITS, build_order_finding_circuit, expand_iqft_marker,
                      named_circuit)
from .errors import (IncompleteDataError, NonConvergenceError, ParseError,
                     PreconditionError, ShorSimError)
from .gates import Gate, GateKind
from .metrics import fidelity
from .noise import Channel, NoiseModel
from .numtheory import OrderProfile
from .passes import PASS_SCOPE, PIPELINE_ORDER, elide_inverse_qft, equivalence_check
from .report import (build_run_report, pass_result_json, probabilities_csv,
                     records_csv, report_to_json, state_json)
from .sim import partial_trace, run_density, run_pure
from .textfmt import parse_circuit, serialize_circuit
from .tomography import (bootstrap_metric, chi_of_channel, chi_of_unitary,
                         process_fidelity, process_tomography_records,
                         reconstruct_process, reconstruct_state,
                         simulate_state_tomography)

EXIT_UNSOUND = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NONCONVERGENCE = 4


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            click.echo(f"parse error: {exc}", err=True)
            sys.exit(EXIT_PARSE)
        except NonConvergenceError as exc:
            click.echo(f"non-convergence: {exc}", err=True)
            sys.exit(EXIT_NONCONVERGENCE)
        except (PreconditionError, IncompleteDataError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_PRECONDITION)
        except ShorSimError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_PRECONDITION)

    return wrapper


def _output_dir(option: str | None) -> Path:
    path = Path(option or os.environ.get("SHORSIM_OUTPUT_DIR", "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_circuit(spec: str):
    if spec in NAMED_CIRCUITS:
        return named_circuit(spec)
    path = Path(spec)
    if path.exists():
        return parse_circuit(path.read_text())
    raise PreconditionError(
        f"'{spec}' is neither a named circuit ({sorted(NAMED_CIRCUITS)}) nor a file"
    )


@click.group()
@click.version_option(version=__version__, prog_name="shorsim")
def main():
    """Compile, simulate and characterize compiled order-finding circuits."""


@main.command("compile")
@click.option("--N", "modulus", type=int, default=None, help="Number to factor.")
@click.option("--C", "base", type=int, default=None, help="Co-prime base.")
@click.option("--n", "arg_width", type=int, default=None, help="Argument register width.")
@click.option("--from", "from_level", default="conceptual", show_default=True,
              type=click.Choice(["conceptual", "decomposed", "partial", "full"]))
@click.option("--to", "to_level", default=None,
              type=click.Choice(["conceptual", "decomposed", "partial", "full"]),
              help="Compare the pipeline output against this builder level.")
@click.option("--pass", "pass_list", default=None,
              help="Comma-separated pass subset (default: full pipeline).")
@click.option("--circuit-file", type=click.Path(), default=None,
              help="Compile this circuit file instead of a builder circuit.")
@click.option("--force-elision", is_flag=True,
              help="Elide the inverse QFT even when the order is not a power of two.")
@click.option("-o", "--output", default=None, help="Audit JSON path (default: stdout).")
@guarded
def cmd_compile(modulus, base, arg_width, from_level, to_level, pass_list,
                circuit_file, force_elision, output):
    """Run compilation passes and emit a JSON audit report."""
    if circuit_file is not None:
        circuit = parse_circuit(Path(circuit_file).read_text())
        if modulus is None or base is None:
            cu = next((g for g in circuit.gates if g.kind is GateKind.CU), None)
            if cu is None:
                raise PreconditionError("--N and --C are required (no CU gate to infer from)")
            modulus, base = cu.modmul.modulus, cu.modmul.base
    else:
        if modulus is None or base is None:
            raise PreconditionError("--N and --C are required without --circuit-file")
        profile_tmp = OrderProfile.compute(base, modulus)
        if arg_width is None:
            from .builder import default_argument_width

            arg_width = default_argument_width(profile_tmp)
        circuit = build_order_finding_circuit(modulus, base, arg_width, from_level)
    profile = OrderProfile.compute(base, modulus)

    passes = tuple(pass_list.split(",")) if pass_list else PIPELINE_ORDER
    entries = []
    sound = True
    current = circuit
    for name in passes:
        if name == "qft-elision" and force_elision:
            result = elide_inverse_qft(current, profile, force=True)
        else:
            from .passes import _PASS_FUNCS

            if name not in _PASS_FUNCS:
                raise PreconditionError(f"unknown pass '{name}'")
            if name == "log-recode" and not profile.power_of_two:
                from .passes import PassResult

                result = PassResult(name, current, applied=False,
                                    notes=(f"not applicable: r={profile.r}",))
                entries.append(pass_result_json(result))
                continue
            result = _PASS_FUNCS[name](current, profile)
        equiv = None
        if result.applied and result.output is not current:
            equiv = equivalence_check(current, result.output, PASS_SCOPE[name])
            sound = sound and equiv.equivalent
        entries.append(pass_result_json(result, equiv))
        current = result.output

    audit = {
        "version": __version__,
        "config": {"N": modulus, "C": base, "from": from_level, "to": to_level,
                   "passes": list(passes), "force_elision": force_elision},
        "input_circuit": serialize_circuit(circuit),
        "output_circuit": serialize_circuit(current),
        "passes": entries,
        "sound": sound,
    }
    if to_level is not None:
        target = build_order_finding_circuit(modulus, base, circuit.n, to_level)
        match = equivalence_check(current, target, "argument-distribution")
        audit["target_equivalence"] = {
            "level": to_level,
            "equivalent": bool(match.equivalent),
            "max_deviation": float(match.max_deviation),
            "structural_match": expand_iqft_marker(current) == expand_iqft_marker(target),
        }
    text = json.dumps(audit, sort_keys=True, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
        click.echo(f"audit written to {output}")
    else:
        click.echo(text, nl=False)
    if not sound:
        click.echo("unsound pass detected", err=True)
        sys.exit(EXIT_UNSOUND)


@main.command("run")
@click.option("--N", "modulus", type=int, required=True)
@click.option("--C", "base", type=int, required=True)
@click.option("--n", "arg_width", type=int, default=None)
@click.option("--level", default="full", show_default=True,
              type=click.Choice(["conceptual", "decomposed", "partial", "full"]))
@click.option("--noise", default="off", show_default=True,
              help="Preset (off, dependent-pair, independent-pair, preset-paper) "
                   "or key=value list (vr=, vr_list=a:b, p=, success=).")
@click.option("--shots", type=int, default=1024, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", default=None, help="Output directory.")
@guarded
def cmd_run(modulus, base, arg_width, level, noise, shots, seed, output):
    """Run one experiment and write report.json plus probabilities.csv."""
    model = NoiseModel.parse(noise)
    report = build_run_report(modulus, base, level=level, n=arg_width,
                              noise=model, shots=shots, seed=seed)
    outdir = _output_dir(output)
    (outdir / "report.json").write_text(report_to_json(report))
    (outdir / "probabilities.csv").write_text(probabilities_csv(report["probabilities"]))
    click.echo(f"report written to {outdir / 'report.json'}")
    for row in report["probabilities"]:
        click.echo(f"P({row['outcome']}) = {row['probability']:.6f}  count={row['count']}")
    for key, value in sorted(report["metrics"].items()):
        click.echo(f"{key}: {value}")


@main.group("tomography")
def tomography():
    """State and process tomography of circuits and gates."""


@tomography.command("state")
@click.option("--circuit", "circuit_spec", required=True,
              help="Named circuit or circuit file; the tomographed state is the "
                   "post-modular-exponentiation joint state of its interacting rails.")
@click.option("--noise", default="off", show_default=True)
@click.option("--shots", type=int, default=10_000, show_default=True,
              help="Shots per measurement setting.")
@click.option("--exact", is_flag=True, help="Infinite-shot mode (exact probabilities).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bootstrap", "resamples", type=int, default=100, show_default=True,
              help="Bootstrap resamples for the fidelity error bar (sampled mode).")
@click.option("-o", "--output", default=None, help="Output directory.")
@guarded
def tomography_state(circuit_spec, noise, shots, exact, seed, resamples, output):
    """Reconstruct a circuit's joint active state and report its fidelity."""
    circuit = expand_iqft_marker(_load_circuit(circuit_spec))
    model = NoiseModel.parse(noise)
    prefix = circuit.modexp_prefix()
    active = circuit.active_qubits()
    if not active:
        raise PreconditionError("circuit has no interacting rails to tomograph")
    ideal = partial_trace(run_pure(prefix).density(), active)
    if model.trivial:
        prepared = ideal
    else:
        prepared = partial_trace(run_density(prefix, noise=model), active)
    records = simulate_state_tomography(prepared, shots, seed, exact=exact)
    reconstruction = reconstruct_state(records)
    f_ideal = fidelity(reconstruction, ideal)
    result = {
        "version": __version__,
        "target": "state",
        "config": {"circuit": circuit_spec, "noise": noise, "shots": 0 if exact else shots,
                   "seed": seed, "qubits": [int(q) for q in active]},
        "fidelity_vs_ideal": f_ideal,
        "bootstrap": None,
        "reconstruction": state_json(active, reconstruction.matrix),
    }
    if not exact and resamples >= 2:
        mean, std = bootstrap_metric(
            records, reconstruct_state, lambda dm: fidelity(dm, ideal), resamples, seed + 1)
        result["bootstrap"] = {"metric": "fidelity_vs_ideal", "mean": mean,
                               "std": std, "resamples": resamples}
    outdir = _output_dir(output)
    (outdir / "tomography_state.json").write_text(
        json.dumps(result, sort_keys=True, indent=2) + "\n")
    (outdir / "tomography_state.csv").write_text(records_csv(records))
    click.echo(f"fidelity vs ideal: {f_ideal:.8f}")
    if result["bootstrap"]:
        click.echo(f"bootstrap: {result['bootstrap']['mean']:.6f} "
                   f"+- {result['bootstrap']['std']:.6f}")


_GATES = {
    "cnot": Gate(GateKind.CNOT, (0, 1)),
    "cz": Gate(GateKind.CZ, (0, 1)),
    "swap": Gate(GateKind.SWAP, (0, 1)),
    "h": Gate(GateKind.H, (0,)),
    "x": Gate(GateKind.X, (0,)),
    "t": Gate(GateKind.T, (0,)),
}


@tomography.command("process")
@click.option("--gate", "gate_name", required=True,
              type=click.Choice(sorted(_GATES)), help="Gate to characterize.")
@click.option("--vr", type=float, default=1.0, show_default=True,
              help="Relative interference visibility of the gate.")
@click.option("--p", "depol", type=float, default=0.0, show_default=True,
              help="Depolarizing probability.")
@click.option("--shots", type=int, default=10_000, show_default=True)
@click.option("--exact", is_flag=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bootstrap", "resamples", type=int, default=100, show_default=True)
@click.option("-o", "--output", default=None, help="Output directory.")
@guarded
def tomography_process(gate_name, vr, depol, shots, exact, seed, resamples, output):
    """Reconstruct a gate's chi matrix and report its process fidelity."""
    gate = _GATES[gate_name]
    channel = Channel.from_gate(gate, visibility=vr, depolarizing=depol)
    from .gates import gate_matrix

    ideal = chi_of_unitary(gate_matrix(gate))
    records = process_tomography_records(channel, shots, seed, exact=exact)
    chi = reconstruct_process(records)
    f_p = process_fidelity(chi, ideal)
    result = {
        "version": __version__,
        "target": "process",
        "config": {"gate": gate_name, "vr": vr, "p": depol,
                   "shots": 0 if exact else shots, "seed": seed},
        "process_fidelity_vs_ideal": f_p,
        "analytic_process_fidelity": process_fidelity(chi_of_channel(channel), ideal),
        "bootstrap": None,
        "chi": {
            "qubits": channel.num_qubits,
            "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in chi.matrix],
        },
    }
    if not exact and resamples >= 2:
        mean, std = bootstrap_metric(
            records, reconstruct_process,
            lambda c: process_fidelity(c, ideal), resamples, seed + 1)
        result["bootstrap"] = {"metric": "process_fidelity_vs_ideal", "mean": mean,
                               "std": std, "resamples": resamples}
    outdir = _output_dir(output)
    (outdir / "tomography_process.json").write_text(
        json.dumps(result, sort_keys=True, indent=2) + "\n")
    flat_records = [record for group in records for record in group]
    (outdir / "tomography_process.csv").write_text(records_csv(flat_records))
    click.echo(f"process fidelity vs ideal: {f_p:.8f}")
    if result["bootstrap"]:
        click.echo(f"bootstrap: {result['bootstrap']['mean']:.6f} "
                   f"+- {result['bootstrap']['std']:.6f}")


if __name__ == "__main__":
    main()
