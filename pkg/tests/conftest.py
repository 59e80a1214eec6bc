import pytest

from qlorentz.verify import TOLERANCES


@pytest.fixture(autouse=True)
def _restore_tolerances():
    saved = dict(TOLERANCES)
    yield
    TOLERANCES.clear()
    TOLERANCES.update(saved)
