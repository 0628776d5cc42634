"""On-disk cache of special polynomials and units.

Layout: ``<root>/q{q}/S_{s}.poly`` and ``<root>/q{q}/sigma_{s}.poly``.  Each
file is one JSON header line followed by the polynomial in canonical
text.  A header mismatch (other q, s, modulus or format version) makes the
entry invalid and it is recomputed.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .algebra.grammar import parse_poly
from .algebra.multipoly import MultiPoly, PolyRing

FORMAT_VERSION = 1
ENV_VAR = "STARK_UNITS_CACHE"


def resolve_cache_dir(flag: str | None = None) -> Path:
    """Flag beats environment beats ./cache."""
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path("cache")


class PolyCache:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, kind: str, q: int, s: int) -> Path:
        return self.root / f"q{q}" / f"{kind}_{s}.poly"

    def _header(self, kind: str, ring: PolyRing, s: int) -> dict:
        return {
            "kind": kind,
            "q": ring.q,
            "s": s,
            "modulus": list(ring.modulus) if ring.modulus else None,
            "format_version": FORMAT_VERSION,
        }

    def load(self, kind: str, ring: PolyRing, s: int) -> MultiPoly | None:
        p = self.path(kind, ring.q, s)
        try:
            text = p.read_text()
        except OSError:
            return None
        head, _, body = text.partition("\n")
        try:
            header = json.loads(head)
        except json.JSONDecodeError:
            return None
        if header != self._header(kind, ring, s):
            return None
        try:
            return parse_poly(body.strip(), ring=ring)
        except Exception:
            return None

    def store(self, kind: str, ring: PolyRing, s: int, poly: MultiPoly) -> Path:
        p = self.path(kind, ring.q, s)
        p.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(self._header(kind, ring, s), sort_keys=True) + "\n" + str(poly) + "\n"
        # write-then-rename so readers never see a partial file
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=p.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, p)
        return p
