"""Curve lookup by label: a one-file-per-label JSON cache in front of the LMFDB API."""
import json
import os
import re
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from pathlib import Path

from .curves import CurveModel
from .errors import CacheMiss, NetworkError, NotFound, SchemaError

DEFAULT_API_URL = "https://www.lmfdb.org/api/ec_curvedata/"
CACHE_ENV = "GALPROD_CACHE_DIR"
API_ENV = "GALPROD_API_URL"
ONLINE = "online"
OFFLINE = "offline"

_LABEL_RE = re.compile(r"^[0-9A-Za-z.\-]+$")


def default_cache_dir():
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "galprod"


def _check_label(label):
    if not _LABEL_RE.match(label or ""):
        raise SchemaError(f"invalid curve label {label!r}", label=label)
    return label


def normalize_payload(label, record):
    """Reduce an API record to the curve JSON schema: {label, ainvs, conductor}."""
    if not isinstance(record, dict) or "ainvs" not in record or "conductor" not in record:
        raise SchemaError(f"record for {label} lacks ainvs/conductor", label=label)
    ainvs = record["ainvs"]
    if not isinstance(ainvs, list) or len(ainvs) != 5:
        raise SchemaError(f"record for {label} has malformed ainvs", label=label)
    payload = {"label": label, "ainvs": [str(int(a)) for a in ainvs], "conductor": str(int(record["conductor"]))}
    CurveModel.from_json(payload)
    return payload


class CurveSource:
    """HTTP client for the curve database; one GET per label."""

    def __init__(self, base_url=None, timeout=30.0):
        self.base_url = base_url or os.environ.get(API_ENV) or DEFAULT_API_URL
        self.timeout = timeout

    def url_for(self, label):
        query = urllib.parse.urlencode({"lmfdb_label": label, "_format": "json"})
        return f"{self.base_url}?{query}"

    def fetch(self, label):
        _check_label(label)
        try:
            with urllib.request.urlopen(self.url_for(label), timeout=self.timeout) as resp:
                body = resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code == 404:
                raise NotFound(f"no curve with label {label}", label=label) from None
            raise NetworkError(f"HTTP {exc.code} fetching {label}", label=label) from None
        except (urllib.error.URLError, OSError) as exc:
            raise NetworkError(f"could not fetch {label}: {exc}", label=label) from None
        try:
            doc = json.loads(body)
        except ValueError:
            raise SchemaError(f"response for {label} is not JSON", label=label) from None
        data = doc.get("data") if isinstance(doc, dict) else None
        if data is None:
            raise SchemaError(f"response for {label} has no 'data' field", label=label)
        if not data:
            raise NotFound(f"no curve with label {label}", label=label)
        return normalize_payload(label, data[0])


@dataclass
class CacheEntry:
    label: str
    payload: dict
    fetched_at: str

    def to_json(self):
        return {"label": self.label, "payload": self.payload, "fetched_at": self.fetched_at}


class LabelCache:
    def __init__(self, cache_dir):
        self.dir = Path(cache_dir)

    def path(self, label):
        return self.dir / f"{_check_label(label)}.json"

    def get(self, label):
        path = self.path(label)
        if not path.exists():
            return None
        doc = json.loads(path.read_text())
        entry = CacheEntry(doc["label"], doc["payload"], doc["fetched_at"])
        CurveModel.from_json(entry.payload)
        return entry

    def put(self, label, payload, fetched_at=None):
        if fetched_at is None:
            fetched_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        entry = CacheEntry(label, payload, fetched_at)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.path(label).write_text(json.dumps(entry.to_json(), sort_keys=True, indent=2) + "\n")
        return entry


@dataclass
class CurveSpec:
    """Either an inline model or a label to resolve."""

    inline: CurveModel = None
    label: str = None
    resolved: CurveModel = None

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            return cls(label=obj)
        if isinstance(obj, dict) and "ainvs" in obj:
            return cls(inline=CurveModel.from_json(obj))
        if isinstance(obj, dict) and "label" in obj:
            return cls(label=str(obj["label"]))
        raise SchemaError("curve entry needs 'ainvs' or 'label'")


def fetch_entry(label, mode=ONLINE, cache_dir=None, source=None):
    """Cache lookup, then (online only) a single fetch stored back in the cache."""
    cache = LabelCache(cache_dir or default_cache_dir())
    entry = cache.get(label)
    if entry is not None:
        return entry
    if mode == OFFLINE:
        raise CacheMiss(f"{label} is not cached and offline mode is set", label=label)
    payload = (source or CurveSource()).fetch(label)
    return cache.put(label, payload)


def resolve_curve(spec, mode=ONLINE, cache_dir=None, source=None):
    if spec.inline is not None:
        spec.resolved = spec.inline
        return spec.inline
    entry = fetch_entry(spec.label, mode, cache_dir, source)
    curve = CurveModel.from_json(entry.payload)
    if curve.conductor is None:
        raise SchemaError(f"cached payload for {spec.label} has no conductor", label=spec.label)
    spec.resolved = curve
    return curve
