"""
Stable digests and on-disk storage of check witnesses.

A witness is any JSON-serialisable payload.  Its digest is the SHA-256 of the
canonical encoding (sorted keys, compact separators), so two runs producing the
same exact witness always report the same digest.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from cryptography.hazmat.primitives import hashes


def canonical_json(payload: Any) -> str:
    """Encode *payload* deterministically."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def witness_digest(payload: Any) -> str:
    """SHA-256 hex digest of the canonical encoding of *payload*."""
    h = hashes.Hash(hashes.SHA256())
    h.update(canonical_json(payload).encode("utf-8"))
    return h.finalize().hex()


def write_witness(witness_dir: str | Path, check_id: str, digest: str, payload: Any) -> str:
    """Write the full witness to ``<witness_dir>/<check_id>-<digest[:16]>.json`` and return the path."""
    witness_dir = Path(witness_dir)
    witness_dir.mkdir(parents=True, exist_ok=True)
    path = witness_dir / f"{check_id}-{digest[:16]}.json"
    path.write_text(json.dumps(payload, sort_keys=True, indent=2), encoding="utf-8")
    return str(path)
