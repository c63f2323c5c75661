"""
    Run manifests and JSON helpers shared by every command output.
"""

import sys
import json
import hashlib
import datetime
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np


__all__ = [
    "VERSION",
    "json_formatter",
    "dumps",
    "payload_digest",
    "RunManifest",
]

VERSION = "0.2.0"


def json_formatter(o):
    """
        Formatter function for json.dumps
    """
    if isinstance(o, datetime.datetime):
        return o.isoformat()
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"Object of type {type(o).__name__} is not JSON serializable")


def dumps(obj: Any, **kwargs) -> str:
    """
    json.dumps with the geoent formatter and stable key order.
    """
    kwargs.setdefault("sort_keys", True)
    return json.dumps(obj, default=json_formatter, **kwargs)


def payload_digest(payload: Any) -> str:
    """
    SHA-256 of the canonical JSON rendering of a payload.
    """
    return hashlib.sha256(dumps(payload, separators=(",", ":")).encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    """
    Provenance block embedded into every output file.

    The timestamp is not part of the digest so replaying the same command
    with the same seed yields the same payload hash.
    """
    command: str
    argv: List[str]
    master_seed: Optional[int]
    version: str = VERSION
    timestamp: datetime.datetime = field(default_factory=lambda: datetime.datetime.now(datetime.timezone.utc))
    payload_sha256: Optional[str] = None
    warnings: List[Dict[str, Any]] = field(default_factory=list)

    @classmethod
    def for_command(cls, command: str, master_seed: Optional[int]=None, argv: Optional[List[str]]=None) -> "RunManifest":
        return cls(command=command, argv=list(sys.argv if argv is None else argv), master_seed=master_seed)

    def seal(self, payload: Any) -> "RunManifest":
        """
        Record the digest of the numeric payload.
        """
        self.payload_sha256 = payload_digest(payload)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "argv": list(self.argv),
            "master_seed": self.master_seed,
            "version": self.version,
            "timestamp": self.timestamp.isoformat(),
            "payload_sha256": self.payload_sha256,
            "warnings": [ {k: v for k, v in w.items() if k != "created"} for w in self.warnings ],
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "RunManifest":
        return cls(
            command=d["command"],
            argv=list(d["argv"]),
            master_seed=d.get("master_seed"),
            version=d.get("version", VERSION),
            timestamp=datetime.datetime.fromisoformat(d["timestamp"]),
            payload_sha256=d.get("payload_sha256"),
            warnings=list(d.get("warnings", [])),
        )

    def comment_lines(self) -> List[str]:
        """
        Manifest rendered as '# key: value' lines for CSV headers.
        """
        d = self.to_dict()
        d.pop("warnings")
        return [ f"# {key}: {json.dumps(d[key], default=json_formatter)}" for key in sorted(d) ]
