"""Shared pytest fixtures for liemorse tests."""

import pytest
from click.testing import CliRunner


@pytest.fixture
def cli_runner():
    """Click CLI test runner."""
    return CliRunner()


@pytest.fixture
def mock_config():
    """Standard test configuration."""
    return {
        "complex": {
            "max_wedges": 100000,
            "progress": False,
        },
        "reduction": {
            "default": "auto",
        },
        "homology": {
            "threads": 1,
        },
        "output": {
            "format": "text",
        },
        "verify": {
            "tables_max_n": 3,
            "probe_max_n": 3,
            "uct_max_n": 3,
        },
        "logging": {
            "level": "WARNING",
        },
    }


@pytest.fixture
def settings_config():
    """The packaged config/settings.yaml with its full verify limits."""
    from pathlib import Path

    from liemorse.utils import load_config

    return load_config(Path(__file__).parent.parent / "config" / "settings.yaml")


@pytest.fixture
def diamond():
    """The four-element diamond 1 < 2, 3 < 4."""
    from liemorse.poset import from_cover_relations

    return from_cover_relations(4, [(1, 2), (1, 3), (2, 4), (3, 4)])


@pytest.fixture
def diamond_file(tmp_path):
    """Diamond poset in the poset file format."""
    path = tmp_path / "diamond.pos"
    path.write_text("# diamond\nn=4\n1 < 2\n1 < 3\n2 < 4\n3 < 4\n")
    return path


@pytest.fixture
def circle_facets_file(tmp_path):
    """Hollow triangle: a circle."""
    path = tmp_path / "circle.fac"
    path.write_text("a b\nb c\nc a\n")
    return path


@pytest.fixture
def worked_example():
    """Simplicial complex with a square, a hollow and a solid tetrahedron."""
    from liemorse.chain import simplicial_chain_complex
    from liemorse.reference import WORKED_EXAMPLE_FACETS

    return simplicial_chain_complex(WORKED_EXAMPLE_FACETS)


@pytest.fixture
def sol2_integral():
    """CE complex of sol_2 over Z (basis e11, e12, e22)."""
    from liemorse.chain import build_ce_complex
    from liemorse.lie import sol
    from liemorse.ring import INTEGERS

    return build_ce_complex(sol(2), INTEGERS)


@pytest.fixture
def sol3_integral():
    """CE complex of sol_3 over Z."""
    from liemorse.chain import build_ce_complex
    from liemorse.lie import sol
    from liemorse.ring import INTEGERS

    return build_ce_complex(sol(3), INTEGERS)
