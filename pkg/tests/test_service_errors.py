"""Malformed request bodies must come back in the documented error shape."""
import pytest
from fastapi.testclient import TestClient

from dxprobe.kb import fixture_path, load_kb
from dxprobe.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app({"net-a": load_kb(fixture_path("net-a"))}))


def test_missing_body_field_is_400_with_field(client):
    resp = client.post("/sessions", json={"mode": "fixed-params"})
    assert resp.status_code == 400
    body = resp.json()
    assert body["code"] == "invalid-request"
    assert body["field"] == "kb"


def test_wrong_type_is_400(client):
    sid = client.post("/sessions", json={"kb": "net-a", "mode": "fixed-params"}).json()["id"]
    resp = client.post(f"/sessions/{sid}/open-probe", json={"reported": "rash"})
    assert resp.status_code == 400
    assert resp.json()["code"] == "invalid-request"
