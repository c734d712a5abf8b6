"""Optional on-disk cache of closed k-Schur expansions.

Disabled unless a directory is configured with :func:`configure` or the
``CLOSEDKSCHUR_CACHE_DIR`` environment variable.  Each entry is one JSON file
holding the HPoly terms and a sha256 of their canonical serialization; a file
whose digest does not match is ignored and rewritten.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from .symfunc import HPoly

log = logging.getLogger(__name__)

ENV_VAR = "CLOSEDKSCHUR_CACHE_DIR"
_directory: Optional[Path] = None
_configured = False


def configure(directory: Optional[os.PathLike | str]) -> None:
    global _directory, _configured
    _directory = Path(directory) if directory else None
    _configured = True
    if _directory is not None:
        _directory.mkdir(parents=True, exist_ok=True)


def directory() -> Optional[Path]:
    if not _configured:
        env = os.environ.get(ENV_VAR)
        return Path(env) if env else None
    return _directory


def entry_name(lam: Sequence[int], k: int, ell: int) -> str:
    return f"k{k}_l{ell}_{'-'.join(str(p) for p in lam) or 'empty'}.json"


def _digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def load(lam: Sequence[int], k: int, ell: int) -> Optional[HPoly]:
    d = directory()
    if d is None:
        return None
    path = d / entry_name(lam, k, ell)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        return None
    except (OSError, ValueError) as exc:
        log.warning("unreadable cache entry %s: %s", path, exc)
        return None
    payload = data.get("value")
    if not isinstance(payload, dict) or data.get("sha256") != _digest(payload):
        log.warning("cache entry %s failed its checksum; recomputing", path)
        return None
    return HPoly.from_dict(payload)


def store(lam: Sequence[int], k: int, ell: int, value: HPoly) -> None:
    d = directory()
    if d is None:
        return
    d.mkdir(parents=True, exist_ok=True)
    payload = value.to_dict()
    record = {"k": k, "ell": ell, "lambda": list(lam), "value": payload, "sha256": _digest(payload)}
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(record, fh, separators=(",", ":"))
        os.replace(tmp, d / entry_name(lam, k, ell))
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def entries() -> list[Path]:
    d = directory()
    return sorted(d.glob("k*_l*_*.json")) if d is not None and d.exists() else []
