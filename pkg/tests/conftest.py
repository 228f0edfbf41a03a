"""Shared parameter sets for the test suite.

E1/E2/E3 are hand-checkable sets; F1A/F2A reproduce the figure
configurations (F2A's amplitude is normalized so the initial support
radius is of order one, see demos/fig2a.cfg).
"""

import pytest

from degenpde import ProblemParams, derive


def make_e1(**overrides):
    base = dict(q=0.0, m=2.0, k=1.0, p=2.0, n=0.0, n1=0.0, l=0.0,
                epsilon=1, beta=3.0, N=1)
    base.update(overrides)
    return ProblemParams(**base)


def make_e2(**overrides):
    return make_e1(beta=5.0, a=0.5, **overrides)


def make_e3(**overrides):
    # the fast-diffusion set leaves beta free; 2.0 keeps gamma2*(beta2-1) < 0
    base = dict(q=0.0, m=0.5, k=1.0, p=2.0, n=0.0, n1=0.0, l=0.0,
                epsilon=1, beta=2.0, N=3)
    base.update(overrides)
    return ProblemParams(**base)


def make_f1a(**overrides):
    # figure set: q=0.8, m=k=1, p=3, one-dimensional; beta is not part of
    # the figure caption and only shapes the initial data (run is source-free)
    base = dict(q=0.8, m=1.0, k=1.0, p=3.0, n=0.0, n1=0.0, l=0.0,
                epsilon=1, beta=3.0, N=1)
    base.update(overrides)
    return ProblemParams(**base)


def make_f2a(**overrides):
    # figure set: q=0, m=3, k=3.2, p=4, n=0.2, n1=1, l=0, beta=1.3, N=2
    base = dict(q=0.0, m=3.0, k=3.2, p=4.0, n=0.2, n1=1.0, l=0.0,
                epsilon=1, beta=1.3, N=2)
    base.update(overrides)
    return ProblemParams(**base)


@pytest.fixture
def e1():
    return make_e1()


@pytest.fixture
def e2():
    return make_e2()


@pytest.fixture
def e3():
    return make_e3()


@pytest.fixture
def d1(e1):
    return derive(e1)


@pytest.fixture
def d2(e2):
    return derive(e2)


@pytest.fixture
def d3(e3):
    return derive(e3)
