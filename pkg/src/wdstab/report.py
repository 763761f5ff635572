"""Run manifests and canonical JSON output."""
import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources

from . import __version__


def digest(data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    return "sha256:" + hashlib.sha256(data).hexdigest()


def canonical_json(obj):
    """Sorted keys, two-space indent, no NaN/Infinity tokens."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


@dataclass(frozen=True)
class RunManifest:
    command: str
    config: dict
    input_digest: str
    tool_version: str = __version__
    timestamp: str = ""

    @classmethod
    def create(cls, command, config, input_bytes):
        stamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")
        return cls(command, dict(config), digest(input_bytes), __version__, stamp)

    def to_dict(self):
        return {
            "command": self.command,
            "config": self.config,
            "input_digest": self.input_digest,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }


def with_manifest(body, manifest):
    """Attach ``manifest`` plus a digest of ``body``; the digest ignores the timestamp."""
    doc = dict(body)
    m = manifest.to_dict()
    m["result_digest"] = digest(canonical_json(body))
    doc["manifest"] = m
    return doc


def load_schema(name):
    text = resources.files("wdstab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


SCHEMAS = ("panel", "fit_report", "pca_report", "search_result", "synth_truth", "histograms")
