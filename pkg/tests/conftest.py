import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

MU_GRID = (-0.25, 0.0, 0.5, 1.0, 2.5)


@pytest.fixture(params=MU_GRID, ids=lambda m: f"mu={m}")
def mu(request):
    return request.param
