import json

import pytest

from galprod.errors import CacheMiss, NetworkError, NotFound, SchemaError
from galprod.lmfdb import (
    OFFLINE, ONLINE, CurveSource, CurveSpec, LabelCache, default_cache_dir, fetch_entry, normalize_payload,
    resolve_curve,
)


def test_inline_passes_through(tmp_path, no_network):
    spec = CurveSpec.from_json({"ainvs": ["0", "0", "0", "1", "10"], "conductor": "208"})
    curve = resolve_curve(spec, OFFLINE, tmp_path)
    assert curve.conductor == 208
    assert spec.resolved is curve
    assert not no_network


def test_online_then_offline(tmp_path, api_server):
    source = CurveSource(api_server.url)
    curve = resolve_curve(CurveSpec(label="988.c1"), ONLINE, tmp_path, source)
    assert curve.conductor == 988 and curve.a4 == -362249
    assert api_server.requests == ["988.c1"]
    cached = json.loads((tmp_path / "988.c1.json").read_text())
    assert cached["payload"] == {"label": "988.c1", "ainvs": ["0", "0", "0", "-362249", "165197113"],
                                 "conductor": "988"}
    assert "fetched_at" in cached
    # second resolution is served from the cache
    resolve_curve(CurveSpec(label="988.c1"), ONLINE, tmp_path, source)
    assert api_server.requests == ["988.c1"]


def test_offline_warm_cache_no_network(tmp_path, api_server, no_network):
    LabelCache(tmp_path).put("988.c1", {"label": "988.c1", "ainvs": ["0", "0", "0", "-362249", "165197113"],
                                        "conductor": "988"}, fetched_at="2024-01-01T00:00:00Z")
    curve = resolve_curve(CurveSpec(label="988.c1"), OFFLINE, tmp_path)
    assert curve.conductor == 988
    assert not no_network
    assert api_server.requests == []


def test_offline_miss(tmp_path, no_network):
    with pytest.raises(CacheMiss) as info:
        resolve_curve(CurveSpec(label="208.c2"), OFFLINE, tmp_path)
    assert info.value.details["label"] == "208.c2"
    assert not no_network


def test_not_found(tmp_path, api_server):
    with pytest.raises((NotFound, SchemaError)) as info:
        resolve_curve(CurveSpec(label="nosuch.z9"), ONLINE, tmp_path, CurveSource(api_server.url))
    assert "nosuch.z9" in str(info.value)
    assert not (tmp_path / "nosuch.z9.json").exists()


def test_schema_errors(tmp_path, api_server):
    source = CurveSource(api_server.url)
    for label in ("broken.a1", "garbage.a1"):
        with pytest.raises(SchemaError):
            fetch_entry(label, ONLINE, tmp_path, source)


def test_network_error(tmp_path):
    source = CurveSource("http://127.0.0.1:9/api/", timeout=2)
    with pytest.raises(NetworkError):
        fetch_entry("208.c2", ONLINE, tmp_path, source)


def test_label_validation(tmp_path):
    with pytest.raises(SchemaError):
        LabelCache(tmp_path).path("../etc/passwd")
    with pytest.raises(SchemaError):
        CurveSpec.from_json({"conductor": "11"})


def test_normalize():
    assert normalize_payload("x.a1", {"ainvs": [0, -1, 1, -10, -20], "conductor": 11}) == {
        "label": "x.a1", "ainvs": ["0", "-1", "1", "-10", "-20"], "conductor": "11"}
    with pytest.raises(SchemaError):
        normalize_payload("x.a1", {"ainvs": [0, 1], "conductor": 11})


def test_url_and_env(monkeypatch, tmp_path):
    monkeypatch.setenv("GALPROD_CACHE_DIR", str(tmp_path))
    assert default_cache_dir() == tmp_path
    monkeypatch.delenv("GALPROD_CACHE_DIR")
    assert default_cache_dir().name == "galprod"
    url = CurveSource().url_for("208.c2")
    assert url == "https://www.lmfdb.org/api/ec_curvedata/?lmfdb_label=208.c2&_format=json"
