import sys
import os

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from modelspace.inner import BlaschkeZero, InnerFunctionSpec
from modelspace.sieve import DensityPiece, MassAtom, MeasureSpec

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def spec_pw():
    # pure exponential, no Blaschke factors
    return InnerFunctionSpec(tau=0.0, c=2.0, zeros=())


@pytest.fixture(scope="session")
def spec_one():
    return InnerFunctionSpec(tau=0.0, c=1.0, zeros=(BlaschkeZero(0.0, 1.0),))


@pytest.fixture(scope="session")
def spec_two():
    return InnerFunctionSpec(
        tau=0.0,
        c=1.0,
        zeros=(BlaschkeZero(0.0, 1.0), BlaschkeZero(2.0, 0.5)),
    )


@pytest.fixture(scope="session")
def all_specs(spec_pw, spec_one, spec_two):
    return (spec_pw, spec_one, spec_two)


@pytest.fixture(scope="session")
def corpus_measures():
    return (
        MeasureSpec(atoms=(MassAtom(0.0, 1.0),), pieces=()),
        MeasureSpec(atoms=(MassAtom(0.0, 1.0), MassAtom(0.6, 1.0)), pieces=()),
        MeasureSpec(atoms=(), pieces=(DensityPiece(0.0, 1.0, 1.0),)),
        MeasureSpec(
            atoms=(),
            pieces=(DensityPiece(0.0, 1.0, 1.0), DensityPiece(2.0, 2.5, 1.0)),
        ),
    )
