import numpy as np
import pytest

from spinbath.bath import BathThermal, RateSet
from spinbath.liouvillian import ModelParams, build_generator, classify_spectrum
from spinbath.states import (
    bell_singlet,
    bell_triplet,
    maximally_mixed,
    z_up_down,
)

DELTA_FIELD = 10.0

# acceptance verdicts collected during the run and echoed into the
# terminal summary, one line per criterion, capture notwithstanding
VERDICTS = []


def record_verdict(ok, label, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    VERDICTS.append(line)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)

# the four initial states used throughout the trajectory checks, with their
# spin-correlation scalars
FOUR_STATES = (
    ("singlet", bell_singlet, -3.0),
    ("z_up_down", z_up_down, -1.0),
    ("mixed", maximally_mixed, 0.0),
    ("triplet", bell_triplet, 1.0),
)


def make_generator(deficit, ratio, delta_field=DELTA_FIELD, gamma0=1.0, **kwargs):
    thermal = BathThermal.from_ratio(ratio)
    rates = RateSet.from_parameters(gamma0, thermal, deficit)
    params = ModelParams(
        delta_field,
        kwargs.pop("lamb_a", 0.0),
        kwargs.pop("lamb_b", 0.0),
        kwargs.pop("exchange_xi", 0.0),
    )
    return build_generator(params, rates, **kwargs)


@pytest.fixture(scope="session")
def reference_generator():
    """The workhorse configuration: deficit 0.05, polarization 0.9."""
    return make_generator(0.05, 0.9)


@pytest.fixture(scope="session")
def reference_spectrum(reference_generator):
    return classify_spectrum(reference_generator)


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


def random_density_matrix(rng, rank=4):
    """Haar-ish random mixed state of the given rank."""
    raw = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = raw @ raw.conj().T
    return rho / np.trace(rho).real
