import pytest

from tests.support import build_service_env


@pytest.fixture(scope="session")
def service_env(tmp_path_factory):
    """(bare config, full config) sharing one glossary and model dir."""
    root = tmp_path_factory.mktemp("service-env")
    return build_service_env(str(root))
