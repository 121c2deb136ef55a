from __future__ import annotations

import pytest

from prudentpoly.enumeration import pa3_scaled_float, pa3_series


@pytest.fixture(scope="session")
def exact_counts_800():
    return pa3_series(800, "theorem")


@pytest.fixture(scope="session")
def float_counts_4096():
    return pa3_scaled_float(4096, precision=40)
