"""Numeric constants and CLI vocabulary."""
import math

LN2 = math.log(2.0)

# Vacuum noise in ℏ-units
VACUUM_VARIANCE = 0.5

# log2(3πe): large-loss limit of the classical-communication cost
CC_COST_LIMIT = math.log2(3.0 * math.pi * math.e)

# Family tags; `lossy` parses to thermal-loss with nbar=0
GAUSSIAN_FAMILIES = (
    "thermal-loss",
    "amplifier",
    "additive",
    "conjugate-amplifier",
    "form-a2",
    "form-b1",
)
DV_FAMILIES = ("pauli", "depolarizing", "dephasing", "erasure", "damping")

# Sweep axis used when none is given on the command line
DEFAULT_AXIS = {
    "thermal-loss": "eta",
    "amplifier": "g",
    "additive": "xi",
    "depolarizing": "p",
    "dephasing": "p",
    "erasure": "p",
    "damping": "p",
}

PROTOCOL_TOKENS = (
    "no-switching",
    "switching",
    "cvmdi-sym",
    "cvmdi-asym",
    "twoway-het",
    "twoway-hom",
    "bb84-1ph",
    "bb84-decoy",
    "dvmdi",
)

# Bound series understood by the sweep engine (protocol tokens are accepted too)
BOUND_SERIES = (
    "capacity",
    "lower",
    "upper",
    "flux",
    "reverse-coherent-info",
    "reverse-coherent-info-clamped",
    "coherent-info",
    "coherent-info-clamped",
    "squashed",
    "ree",
    "tgw",
    "constrained-rci",
    "constrained-tgw",
    "cc-cost",
    "half-assisted",
)
