import pytest

from app.config import settings
from app.services.fixtures import k4_minus_edge
from app.services.matroid_kernel import uniform


@pytest.fixture(autouse=True)
def restore_settings():
    """Tests and CLI runs mutate the settings singleton; put it back afterwards."""
    saved = settings.model_dump()
    yield
    for name, value in saved.items():
        setattr(settings, name, value)


@pytest.fixture
def k4e():
    return k4_minus_edge()


@pytest.fixture
def u24():
    return uniform(2, 4)
