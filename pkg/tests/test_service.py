"""HTTP endpoints: lifecycle, evaluation, files, plots, isolation, concurrency."""

import concurrent.futures
import threading

import pytest
from fastapi.testclient import TestClient

from mathpar.service import MAX_SOURCE_BYTES, create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def new_session(client):
    r = client.post("/v1/sessions")
    assert r.status_code == 201
    return r.json()["id"]


def ev(client, sid, src):
    return client.post(f"/v1/sessions/{sid}/eval", json={"src": src})


class TestLifecycle:
    def test_create_distinct_ids(self, client):
        assert new_session(client) != new_session(client)

    def test_default_space_polynomial(self, client):
        sid = new_session(client)
        r = ev(client, sid, "x;")
        assert r.json()["results"][0]["plain"] == "x"

    def test_drop_then_eval(self, client):
        sid = new_session(client)
        assert client.delete(f"/v1/sessions/{sid}").status_code == 200
        r = ev(client, sid, "1;")
        assert r.status_code == 404
        assert r.json()["error"]["type"] == "UnknownSession"

    def test_drop_unknown(self, client):
        assert client.delete("/v1/sessions/doesnotexist").status_code == 404


class TestEval:
    def test_tropical_snippet(self, client):
        sid = new_session(client)
        r = ev(client, sid, r"SPACE=ZMaxPlus[]; a=2; b=9; c=a+b; d=a*b; \print(c,d);")
        assert "c=9; d=11" in r.json()["transcript"]

    def test_empty_source(self, client):
        sid = new_session(client)
        assert ev(client, sid, "").json()["results"] == []

    def test_state_persists_between_requests(self, client):
        sid = new_session(client)
        ev(client, sid, "a = 41;")
        r = ev(client, sid, r"\print(a + 1);")
        assert r.json()["transcript"] == "a + 1=42.0"

    def test_malformed_source_structured_error(self, client):
        sid = new_session(client)
        r = ev(client, sid, "1 + ;")
        assert r.status_code == 422
        assert r.json()["error"]["type"] == "ParseError"

    def test_runtime_error_with_statement_index(self, client):
        sid = new_session(client)
        r = ev(client, sid, r"a = 1; b = \bogus(a);")
        body = r.json()
        assert body["error"]["statement"] == 1

    def test_payload_too_large(self, client):
        sid = new_session(client)
        r = ev(client, sid, "a;" * (MAX_SOURCE_BYTES // 2 + 10))
        assert r.status_code == 413

    def test_results_carry_latex(self, client):
        sid = new_session(client)
        r = ev(client, sid, "SPACE = Q[x]; 1/(x+1);")
        assert "\\frac" in r.json()["results"][-1]["latex"]


class TestFiles:
    def test_upload_then_fromfile(self, client):
        sid = new_session(client)
        client.put(f"/v1/sessions/{sid}/files/m.txt", content="A = 41;")
        r = ev(client, sid, r"SPACE = Z[]; B = \fromFile(m); \print(B);")
        assert r.json()["transcript"] == "B=41"

    def test_tofile_then_download(self, client):
        sid = new_session(client)
        ev(client, sid, r"SPACE = Q[x]; B = (x+1)^2; \toFile(B, b);")
        r = client.get(f"/v1/sessions/{sid}/files/b.txt")
        assert r.status_code == 200 and r.text.strip() == "x^2+2*x+1;"

    def test_download_unknown(self, client):
        sid = new_session(client)
        r = client.get(f"/v1/sessions/{sid}/files/none")
        assert r.status_code == 422
        assert r.json()["error"]["type"] == "FileNotFound"

    def test_listing(self, client):
        sid = new_session(client)
        client.put(f"/v1/sessions/{sid}/files/a.txt", content="1;")
        client.put(f"/v1/sessions/{sid}/files/b.txt", content="2;")
        assert client.get(f"/v1/sessions/{sid}/files").json()["files"] == \
            ["a.txt", "b.txt"]


class TestPlots:
    def test_plot_document(self, client):
        sid = new_session(client)
        r = ev(client, sid, r"\plot(x^2, [-1, 1]);")
        ref = r.json()["plots"][0]
        doc = client.get(f"/v1/plots/{ref}").json()
        assert doc["version"] == 1
        assert len(doc["series"][0]["points"]) == 512

    def test_unknown_plot(self, client):
        assert client.get("/v1/plots/missing").status_code == 404


class TestIsolation:
    def test_bindings_do_not_leak(self, client):
        s1, s2 = new_session(client), new_session(client)
        ev(client, s1, "secret = 123;")
        r = ev(client, s2, r"\print(secret);")
        # in session 2 the name is just a symbol
        assert r.json()["transcript"] == "secret=secret"

    def test_files_do_not_leak(self, client):
        s1, s2 = new_session(client), new_session(client)
        client.put(f"/v1/sessions/{s1}/files/f.txt", content="1;")
        r = ev(client, s2, r"\fromFile(f);")
        assert r.json()["error"]["type"] == "FileNotFound"

    def test_concurrent_storm_serializes(self, client):
        sessions = [new_session(client), new_session(client)]
        for sid in sessions:
            ev(client, sid, "n = 0;")

        def bump(sid, i):
            return ev(client, sid, f"n = n + 1; \\print(n);")

        with concurrent.futures.ThreadPoolExecutor(max_workers=16) as pool:
            futures = [pool.submit(bump, sid, i)
                       for i in range(50) for sid in sessions]
            for f in futures:
                assert f.result().status_code == 200

        for sid in sessions:
            r = ev(client, sid, r"\print(n);")
            # each of the 50 increments applied exactly once
            assert r.json()["transcript"] == "n=50.0"
