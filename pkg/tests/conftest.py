import numpy as np
import pytest

from qchkahler import (
    biconformally_flat_normal_form,
    canonical_distribution,
    flat_metric,
    potential_from_name,
    potential_metric,
    random_normal_form_v,
    rotational_metric,
    RotationalProfile,
)


def unit_points(radii, n=3, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for r in radii:
        x = rng.normal(size=2 * n)
        out.append(r * x / np.linalg.norm(x))
    return out


@pytest.fixture(scope="session")
def flat3():
    return flat_metric(3)


@pytest.fixture(scope="session")
def fs3():
    return potential_metric(potential_from_name("log1p"), 3)


@pytest.fixture(scope="session")
def quad3():
    return potential_metric(potential_from_name("quadratic"), 3)


@pytest.fixture(scope="session")
def normal_form3():
    return biconformally_flat_normal_form(random_normal_form_v(11), 3)


@pytest.fixture(scope="session")
def sine_profile():
    return RotationalProfile.sine()


@pytest.fixture(scope="session")
def sine3(sine_profile):
    return rotational_metric(sine_profile, 3)


@pytest.fixture(scope="session")
def dist_of():
    return canonical_distribution
