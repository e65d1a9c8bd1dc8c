import pytest

from pivotforge import LowerBoundPolynomial


@pytest.fixture(scope="session")
def oracle_for():
    """Shared objective instances so memoized gradients and edge
    restrictions carry across tests."""
    cache = {}

    def get(n: int) -> LowerBoundPolynomial:
        if n not in cache:
            cache[n] = LowerBoundPolynomial(n)
        return cache[n]

    return get
