import pytest


class TestTables:
    def test_json(self, client):
        response = client.get("/api/tables/I")
        assert response.status_code == 200
        data = response.get_json()
        assert data["row_count"] == 16
        assert data["rows"][0] == {"public": "00", "Alice": "00", "Bob": "00", "probability": pytest.approx(1 / 16)}

    def test_csv(self, client):
        response = client.get("/api/tables/III?format=csv")
        assert response.status_code == 200
        assert response.mimetype == "text/csv"
        lines = response.get_data(as_text=True).splitlines()
        assert lines[0] == "public,Alice,Bob,Carol,David"
        assert len(lines) == 17

    def test_unknown_table(self, client):
        response = client.get("/api/tables/IV")
        assert response.status_code == 400
        assert "unknown table" in response.get_json()["error"]

    def test_unknown_format(self, client):
        assert client.get("/api/tables/I?format=xml").status_code == 400


class TestCampaigns:
    def test_create(self, client):
        response = client.post("/api/campaigns", json={"protocol": "multiparty_es", "rounds": 40, "seed": 4})
        assert response.status_code == 201
        data = response.get_json()
        assert data["report_type"] == "Campaign Report"
        assert data["kept"] == 40
        assert data["alarm"] is False

    def test_attack(self, client):
        response = client.post("/api/campaigns/", json={
            "protocol": "two_party_es", "rounds": 60, "eve": "intercept", "compare-fraction": 1,
        })
        assert response.status_code == 201
        assert response.get_json()["alarm"] is True

    def test_missing_protocol(self, client):
        response = client.post("/api/campaigns", json={"rounds": 10})
        assert response.status_code == 400
        assert response.get_json()["missing_fields"] == ["protocol"]

    def test_unknown_field(self, client):
        response = client.post("/api/campaigns", json={"protocol": "hbb99", "colour": "red"})
        assert response.status_code == 400
        assert response.get_json()["unknown_fields"] == ["colour"]

    def test_invalid_config(self, client):
        response = client.post("/api/campaigns", json={"protocol": "hbb99", "parties": 5})
        assert response.status_code == 400

    def test_round_cap(self, client, app):
        response = client.post("/api/campaigns", json={"protocol": "hbb99", "rounds": app.config["MAX_API_ROUNDS"] + 1})
        assert response.status_code == 400
        assert response.get_json()["max_rounds"] == app.config["MAX_API_ROUNDS"]

    def test_requires_json(self, client):
        assert client.post("/api/campaigns", data="protocol=hbb99").status_code == 400


def test_verify(client):
    response = client.get("/api/verify")
    assert response.status_code == 200
    data = response.get_json()
    assert data["passed"] is True
    assert {suite["suite"] for suite in data["suites"]} >= {"table_I", "table_II", "table_III"}


def test_settings(client, app):
    response = client.get("/api/settings")
    assert response.status_code == 200
    data = response.get_json()
    assert data["max_api_rounds"] == app.config["MAX_API_ROUNDS"]
    assert data["settings"]["compare_fraction"] == 0.5
