"""
Test configuration and fixtures
===============================
"""
import pytest

import chirosat.settings as settings
from chirosat.chirotope import Chirotope
from chirosat.constants import NO_7GON_POINTS_3D
from chirosat.core.logger import ChiroLogger
from chirosat.geometry import PointSet, chirotope_from_points


@pytest.fixture(autouse=True)
def isolated_environment(tmp_path, monkeypatch):
    """Her test kendi settings dosyası ve log dizini ile çalışır"""
    monkeypatch.setenv("CHIROSAT_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(settings, "CFG_PATH", tmp_path / "settings.json")
    settings.reload()
    settings._cfg["paths"]["output_dir"] = str(tmp_path / "runs")
    # CLI tests must not replace pytest's own logging handlers
    monkeypatch.setattr(ChiroLogger, "_initialized", True)
    yield
    settings.reload()


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "out"
    path.mkdir()
    return path


# ---------------------------------------------------------------------------
# Point sets
# ---------------------------------------------------------------------------
@pytest.fixture
def square_points():
    return PointSet.of([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def triangle_interior_points():
    """Triangle with the interior point (1, 1) as element 4"""
    return PointSet.of([(0, 0), (6, 0), (0, 6), (1, 1)])


@pytest.fixture
def triangle_center_points():
    return PointSet.of([(0, 0), (6, 0), (0, 6), (2, 2)])


@pytest.fixture
def triangle_outside_points():
    return PointSet.of([(0, 0), (6, 0), (0, 6), (7, 7)])


@pytest.fixture
def pentagon_points():
    """Convex pentagon, counter-clockwise"""
    return PointSet.of([(0, 0), (2, 0), (3, 2), (1, 3), (-1, 2)])


@pytest.fixture
def no_7gon_points():
    return PointSet.of(NO_7GON_POINTS_3D)


# ---------------------------------------------------------------------------
# Chirotopes
# ---------------------------------------------------------------------------
@pytest.fixture
def square_chirotope(square_points) -> Chirotope:
    return chirotope_from_points(square_points)


@pytest.fixture
def triangle_chirotope(triangle_interior_points) -> Chirotope:
    return chirotope_from_points(triangle_interior_points)


@pytest.fixture
def pentagon_chirotope(pentagon_points) -> Chirotope:
    return chirotope_from_points(pentagon_points)


@pytest.fixture
def flipped_pentagon(pentagon_chirotope) -> Chirotope:
    """Pentagon with chi(1,2,4) negated; not a chirotope"""
    return pentagon_chirotope.with_sign((1, 2, 4), -pentagon_chirotope.sign_of_sorted((1, 2, 4)))


@pytest.fixture
def cyclic_chirotope(triangle_chirotope) -> Chirotope:
    """Triangle-with-interior-point reoriented at 4: uniform but not acyclic"""
    return triangle_chirotope.reorient(4)
