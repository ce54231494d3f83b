from __future__ import annotations

import itertools
import json
from importlib import resources

import pytest

from selfassess import QuestionBank, import_bank
from selfassess.auth import hash_password
from selfassess.profiles import LearnerProfile
from selfassess.store import DocumentStore

FIXTURE_NAME = "microeconomics.json"


def fixture_text() -> str:
    return resources.files("selfassess.data").joinpath(FIXTURE_NAME).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_bank() -> QuestionBank:
    return import_bank(fixture_text())


@pytest.fixture()
def data_dir(tmp_path, fixture_bank):
    """A populated data directory: fixture bank, two users, one profile."""
    store = DocumentStore(tmp_path / "data")
    store.save_bank(fixture_bank)
    store.save_users(
        {
            "maria": {"role": "student", "credentials": hash_password("streetlight")},
            "nikos": {"role": "student", "credentials": hash_password("lighthouse")},
            "kostas": {"role": "educator", "credentials": hash_password("chalkboard")},
            "root": {"role": "admin", "credentials": hash_password("rootpw")},
        }
    )
    store.save_profile(LearnerProfile(learner_id="maria", education_level=3))
    return store.root


@pytest.fixture()
def service_client(data_dir):
    from fastapi.testclient import TestClient

    from selfassess.service import create_app

    counter = itertools.count(1)
    app = create_app(
        DocumentStore(data_dir),
        secret="test-secret",
        clock=lambda: 1_760_000_000.0,
        id_factory=lambda: f"sess-{next(counter):04d}",
    )
    with TestClient(app) as client:
        yield client


def login(client, username: str, password: str) -> dict:
    response = client.post(
        "/api/v1/login", json={"username": username, "password": password}
    )
    assert response.status_code == 200, response.text
    token = response.json()["token"]
    return {"Authorization": f"Bearer {token}"}


@pytest.fixture()
def student_headers(service_client):
    return login(service_client, "maria", "streetlight")


@pytest.fixture()
def educator_headers(service_client):
    return login(service_client, "kostas", "chalkboard")
