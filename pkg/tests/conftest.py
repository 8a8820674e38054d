import numpy as np
import pytest

from csis.descipher import DesKey
from csis.pixelio import Image

skdata = pytest.importorskip("skimage.data")

# 512x512 test images bundled with scikit-image
NATURAL = ("camera", "moon", "astronaut", "brick")
TEXTURED = ("grass", "gravel")


def load_test_image(name: str) -> Image:
    px = getattr(skdata, name)()
    if px.ndim == 3:
        px = np.round(px @ np.array([0.299, 0.587, 0.114])).astype(np.uint8)
    return Image(px)


@pytest.fixture(scope="session")
def images():
    return {name: load_test_image(name) for name in NATURAL + TEXTURED}


@pytest.fixture(scope="session")
def camera(images):
    return images["camera"]


@pytest.fixture(scope="session")
def astronaut_rgb():
    return Image(skdata.astronaut())


@pytest.fixture
def des_key():
    return DesKey("133457799BBCDFF1")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion."""

    def report(number: int, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
        print(line)
        request.config.stash.setdefault(_CRITERIA, []).append(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
