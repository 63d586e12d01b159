"""Content-addressed on-disk cache for expansions.

Layout under the cache root:
    blobs/<sha256>.json   canonical expansion JSON, named by its digest
    refs/<key>.json       {"digest": ..., "bound": ..., "params": ...}, one per parameter set

A ref points at the largest bound computed so far; smaller requests are served by
truncation.  All writes go through a temporary file and os.replace.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from .errors import CacheCorruptionError
from .forms import Expansion, from_json, to_json

log = logging.getLogger(__name__)


def default_root() -> Path | None:
    v = os.environ.get("HMF_CACHE")
    return Path(v) if v else None


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class ExpansionCache:
    def __init__(self, root):
        self.root = Path(root)

    def _ref_path(self, params: dict) -> Path:
        key = _digest(json.dumps(params, sort_keys=True, separators=(",", ":")))
        return self.root / "refs" / f"{key}.json"

    def _blob_path(self, digest: str) -> Path:
        return self.root / "blobs" / f"{digest}.json"

    def get(self, params: dict, bound: int) -> Expansion | None:
        """Cached expansion truncated to bound, or None on a miss.

        Raises CacheCorruptionError when the stored blob does not match its digest.
        """
        ref = self._ref_path(params)
        if not ref.exists():
            return None
        meta = json.loads(ref.read_text(encoding="utf-8"))
        if int(meta["bound"]) < bound:
            return None
        blob = self._blob_path(meta["digest"])
        if not blob.exists():
            raise CacheCorruptionError(f"missing blob {blob.name}")
        text = blob.read_text(encoding="utf-8")
        if _digest(text) != meta["digest"]:
            raise CacheCorruptionError(f"digest mismatch for {blob.name}")
        f = from_json(text)
        return f if f.bound == bound else f.truncate(bound)

    def get_text(self, params: dict) -> str | None:
        ref = self._ref_path(params)
        if not ref.exists():
            return None
        meta = json.loads(ref.read_text(encoding="utf-8"))
        return self._blob_path(meta["digest"]).read_text(encoding="utf-8")

    def put(self, params: dict, f: Expansion) -> str:
        text = to_json(f)
        digest = _digest(text)
        blob = self._blob_path(digest)
        if not blob.exists():
            _atomic_write(blob, text)
        ref = self._ref_path(params)
        if ref.exists():
            try:
                old = json.loads(ref.read_text(encoding="utf-8"))
                if int(old["bound"]) > f.bound:
                    return digest
            except (ValueError, KeyError):
                pass
        _atomic_write(ref, json.dumps({"digest": digest, "bound": f.bound, "params": params}, sort_keys=True))
        return digest

    def get_or_compute(self, params: dict, bound: int, compute) -> Expansion:
        try:
            hit = self.get(params, bound)
        except CacheCorruptionError as e:
            log.warning("ignoring corrupt cache entry: %s", e)
            hit = None
        if hit is not None:
            return hit
        f = compute()
        self.put(params, f)
        return f
