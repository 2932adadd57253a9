import hashlib

import numpy as np


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from arbitrary printable parts.

    Python's `hash` is salted per process, so sha256 over the repr of the parts is
    used instead.

    >>> derive_seed(7, "ce_001") == derive_seed(7, "ce_001")
    True
    """
    digest = hashlib.sha256("\x1f".join(repr(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def make_rng(*parts) -> np.random.Generator:
    return np.random.default_rng(derive_seed(*parts))
