import numpy as np
import pytest

from hybridmark import corpus


@pytest.fixture(scope="session")
def logo():
    return corpus.logo_19x52()


@pytest.fixture(scope="session")
def logo64():
    return corpus.logo_64x64()


@pytest.fixture(scope="session")
def synth_images():
    return corpus.synthetic_images(seed=0)


def _natural(name):
    data = pytest.importorskip("skimage.data")
    img = getattr(data, name)()
    if img.ndim == 3:
        img = img.mean(axis=2)
    return np.round(img.astype(np.float64))


@pytest.fixture(scope="session")
def camera():
    return _natural("camera")


@pytest.fixture(scope="session")
def natural_photos():
    return {name: _natural(name) for name in ("camera", "astronaut", "moon")}


_ACCEPTANCE = []


@pytest.fixture
def report(request):
    """Record a one-line PASS/FAIL verdict for the terminal summary."""

    def _report(ok, detail):
        _ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'} {request.node.name}: {detail}")
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
