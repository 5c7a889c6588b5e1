"""Deterministic seed derivation.

Every random stage derives its seed from the master seed and a name path
via SHA-256, so stages and cells can be re-run independently with
identical results on any platform.
"""

from __future__ import annotations

import hashlib


def seed_for(master_seed: int, *names: str) -> int:
    """Stable 63-bit seed for (master_seed, names...)."""
    key = f"{master_seed}/" + "/".join(names)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
