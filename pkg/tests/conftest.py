import pytest

from gammaratio import RatioSpec


@pytest.fixture(scope="session")
def spec_mixed_scale():
    """p=3, q=2 ratio with unequal factor counts; l.c.m. via condition (a)."""
    return RatioSpec(A=(2, 3, 1), a=(0.4, 2.4, 0.9), B=(1, 5), b=(2, 6))


@pytest.fixture(scope="session")
def spec_paired():
    """p=q=3 ratio that only condition (b) certifies."""
    return RatioSpec(A=(2, 3, 1.4), a=(0.8, 8, 2.3), B=(1, 2.4, 3), b=(1.5, 7.8, 11))


@pytest.fixture(scope="session")
def spec_bernstein_only():
    """Scale sums differ (not l.c.m.) but the kernel is nonnegative by (c)."""
    return RatioSpec(A=(4, 2), a=(0.7, 1.8), B=(3, 1), b=(0.6, 1.2))


@pytest.fixture(scope="session")
def spec_equal_scales():
    """A = B elementwise; l.c.m. via the majorization condition (c); mu = 1/2."""
    return RatioSpec(A=(3, 2.2, 1.4), a=(0.8, 1.8, 2.3), B=(3, 2.2, 1.4), b=(1.2, 1.7, 2.5))


@pytest.fixture(scope="session")
def spec_inverse_x():
    """W(x) = Gamma(x)/Gamma(x+1) = 1/x; density and kernel are both == 1."""
    return RatioSpec(A=(1,), a=(0,), B=(1,), b=(1,))
