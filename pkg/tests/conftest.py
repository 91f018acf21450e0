"""
Shared fixtures: one context store per session so contexts are built once.
"""
import pytest

from src.services.context_store import ContextStore
from src.utils.settings import get_settings


@pytest.fixture(scope="session")
def store():
    return ContextStore(get_settings())


@pytest.fixture(scope="session")
def ext1(store):
    """The sl-exterior context at N = 1 (V = Q(q)^2) with its wedge view."""
    return store.exterior(1)


@pytest.fixture(scope="session")
def ext2(store):
    return store.exterior(2)


@pytest.fixture(scope="session")
def ctx1(ext1):
    return ext1.context


@pytest.fixture(scope="session")
def ctx2(ext2):
    return ext2.context
