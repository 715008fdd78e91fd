"""Classical half of the factoring run: outcome post-processing and the
compile-simulate-sample-factor pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass


from .builder import build_order_finding_circuit, default_argument_width, expand_iqft_marker
from .errors import PreconditionError
from .noise import NoiseModel
from .numtheory import OrderProfile, factors_from_order, phase_to_order
from .sim import measure_logical, run_density, run_pure

SUCCESS = "success"
EXPECTED_FAILURE = "expected-failure"
TRIVIAL_FACTORS = "trivial-factors"


@dataclass(frozen=True)
class FactoringOutcome:
    bitstring: str
    candidate_order: int | None
    classification: str
    factors: tuple[int, int] | None = None

    def __post_init__(self):
        if self.classification == SUCCESS:
            assert self.factors is not None


def postprocess_outcome(bitstring: str, n: int, profile: OrderProfile) -> FactoringOutcome:
    """Classify a measured argument-register string.

    The phase outcome/2**n is collapsed to a candidate order by continued
    fractions.  Phase zero is the expected failure mode; a candidate that is
    not actually an order of C (C**r != 1 mod N), or one whose gcd step only
    returns trivial divisors, yields the trivial-factors classification.
    """
    if len(bitstring) != n or set(bitstring) - {"0", "1"}:
        raise PreconditionError(f"expected an {n}-bit string, got '{bitstring}'")
    outcome = int(bitstring, 2)
    candidate = phase_to_order(outcome, n, profile.modulus)
    if candidate is None:
        return FactoringOutcome(bitstring, None, EXPECTED_FAILURE)
    if pow(profile.base, candidate, profile.modulus) != 1:
        return FactoringOutcome(bitstring, candidate, TRIVIAL_FACTORS)
    factors = factors_from_order(profile.base, candidate, profile.modulus)
    if factors is None:
        return FactoringOutcome(bitstring, candidate, TRIVIAL_FACTORS)
    return FactoringOutcome(bitstring, candidate, SUCCESS, factors)


@dataclass(frozen=True)
class PipelineStats:
    N: int
    C: int
    n: int
    shots: int
    seed: int
    fractions: dict[str, float]
    errors: dict[str, float]  # binomial standard errors
    outcomes: tuple[tuple[str, int, FactoringOutcome], ...]

    @property
    def success_fraction(self) -> float:
        return self.fractions[SUCCESS]


def run_full_pipeline(N: int, C: int, noise: NoiseModel | None = None,
                      shots: int = 10_000, seed: int = 0,
                      n: int | None = None, level: str = "full") -> PipelineStats:
    """Compile, simulate, sample and post-process one factoring run."""
    if shots < 1:
        raise PreconditionError("shots must be >= 1")
    profile = OrderProfile.compute(C, N)
    if n is None:
        n = default_argument_width(profile)
    circuit = expand_iqft_marker(build_order_finding_circuit(N, C, n, level))
    noise = noise or NoiseModel()
    state = run_pure(circuit) if noise.trivial else run_density(circuit, noise=noise)
    record = measure_logical(state, circuit.argument, shots, seed,
                             reverse=circuit.reverse_argument)

    tallies = {SUCCESS: 0, EXPECTED_FAILURE: 0, TRIVIAL_FACTORS: 0}
    outcomes = []
    for bits in sorted(record.counts):
        count = int(record.counts[bits])
        outcome = postprocess_outcome(bits, n, profile)
        tallies[outcome.classification] += count
        outcomes.append((bits, count, outcome))
    fractions = {k: v / shots for k, v in tallies.items()}
    errors = {k: math.sqrt(max(f * (1.0 - f), 0.0) / shots)
              for k, f in fractions.items()}
    return PipelineStats(N, C, n, shots, seed, fractions, errors, tuple(outcomes))


def ideal_success_fraction(N: int, C: int, n: int) -> float:
    """Analytic success fraction of the ideal sampler: the probability weight
    of argument outcomes whose continued-fraction order both verifies and
    factors N."""
    profile = OrderProfile.compute(C, N)
    circuit = expand_iqft_marker(build_order_finding_circuit(N, C, n, "full"))
    from .sim import register_distribution

    dist = register_distribution(run_pure(circuit), circuit.argument,
                                 reverse=circuit.reverse_argument)
    total = 0.0
    for outcome, p in enumerate(dist):
        if p <= 0:
            continue
        bits = format(outcome, f"0{n}b")
        if postprocess_outcome(bits, n, profile).classification == SUCCESS:
            total += float(p)
    return total
