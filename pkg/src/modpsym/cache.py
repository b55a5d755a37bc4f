"""Versioned JSON disk cache for operator matrices.

Keys are canonical serializations of (space descriptor, operator label); the
files store the field data explicitly so entries are portable and stale
versions are ignored.  Corrupt entries are recomputed and overwritten with a
warning rather than failing the run.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading

import numpy as np

from .gfq import Mat, build_field

log = logging.getLogger(__name__)

CACHE_VERSION = 1
ENV_VAR = "MODPSYM_CACHE"


def _canonical(desc, label):
    return json.dumps({"desc": desc, "label": label}, sort_keys=True,
                      separators=(",", ":"))


class OperatorCache:
    def __init__(self, directory):
        self.dir = directory
        os.makedirs(directory, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, desc, label):
        digest = hashlib.sha256(_canonical(desc, label).encode()).hexdigest()[:32]
        return os.path.join(self.dir, f"op-{digest}.json")

    def load(self, desc, label, field):
        path = self._path(desc, label)
        if not os.path.exists(path):
            return None
        try:
            with open(path) as fh:
                data = json.load(fh)
            if data.get("version") != CACHE_VERSION:
                return None
            if data.get("key") != _canonical(desc, label):
                return None
            fld = data["field"]
            if (fld["p"], fld["d"]) != (field.p, field.d) or \
                    tuple(fld["poly"]) != tuple(field.poly):
                return None
            rows = data["rows"]
            arr = (np.asarray(rows, dtype=np.int64) if rows
                   else np.zeros((0, data["ncols"]), dtype=np.int64))
            if arr.size and int(arr.max(initial=0)) >= field.q:
                raise ValueError("entry out of field range")
            return Mat(field, arr if arr.ndim == 2 else arr.reshape(0, data["ncols"]))
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            log.warning("corrupt cache entry %s (%s); recomputing", path, exc)
            return None

    def store(self, desc, label, M):
        path = self._path(desc, label)
        field = M.F
        payload = {
            "version": CACHE_VERSION,
            "key": _canonical(desc, label),
            "field": {"p": field.p, "d": field.d, "poly": list(field.poly)},
            "nrows": M.nrows,
            "ncols": M.ncols,
            "rows": M.a.tolist(),
        }
        tmp = path + ".tmp"
        with self._lock:
            with open(tmp, "w") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, path)


def cache_from_env(cli_dir=None):
    directory = cli_dir or os.environ.get(ENV_VAR)
    return OperatorCache(directory) if directory else None


def cache_store(cache, desc, label, M):
    cache.store(desc, label, M)


def cache_load(cache, desc, label, field):
    return cache.load(desc, label, field)
