"""Shared fixtures: the bundled example potentials and their reference data."""

import numpy as np
import pytest

from phasefit import Potential

# Four-layer reference potential and three distinct potentials whose shift
# tables are practically identical to its own (at k = 3). Independently
# tabulated reference values, 6-8 significant digits.
REFERENCE_LAYERS = ([0.5, 1.0, 1.5, 2.0], [7.2, 4.5, 7.2, 4.5])
EQUIVALENT_A_LAYERS = ([0.4316, 0.8758, 1.5718, 2.0065], [8.9991, 3.9672, 6.7356, 4.3029])
EQUIVALENT_B_LAYERS = (
    [0.6809, 0.9162, 1.2856, 1.4314, 1.9969],
    [6.4197, 3.1509, 6.7464, 8.7210, 4.5936],
)
EQUIVALENT_C_LAYERS = ([0.8666, 0.9862, 1.4345, 1.9964], [5.9463, 0.1008, 7.9164, 4.6116])

REFERENCE_K = 3.0

# delta(k=3, l) of the reference potential for l = 0..20
REFERENCE_SHIFTS = np.array([
    -0.220024e+00, -0.188623e+00, -0.210693e+00, -0.185306e+00, -0.104318e+00,
    -0.390310e-01, -0.100159e-01, -0.183339e-02, -0.250850e-03, -0.267137e-04,
    -0.228367e-05, -0.160476e-06, -0.944572e-08, -0.472923e-09, -0.204010e-10,
    -0.766553e-12, -0.253238e-13, -0.741554e-15, -0.193858e-16, -0.455299e-18,
    -0.966113e-20,
])

# published misfit values of the three equivalent potentials against the
# reference shifts at k = 3
REFERENCE_PHI = {"a": 9.3586605e-5, "b": 6.1848208e-5, "c": 3.3089927e-5}


@pytest.fixture(scope="session")
def reference_potential() -> Potential:
    return Potential.from_layers(*REFERENCE_LAYERS)


@pytest.fixture(scope="session")
def equivalent_a() -> Potential:
    return Potential.from_layers(*EQUIVALENT_A_LAYERS)


@pytest.fixture(scope="session")
def equivalent_b() -> Potential:
    return Potential.from_layers(*EQUIVALENT_B_LAYERS)


@pytest.fixture(scope="session")
def equivalent_c() -> Potential:
    return Potential.from_layers(*EQUIVALENT_C_LAYERS)
