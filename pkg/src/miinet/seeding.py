"""Deterministic seed derivation.

Every stochastic operation takes an explicit seed derived from a single
top-level seed plus the identifiers of the computation (subset indices,
operation tag, shuffle index, ...). Results are then independent of
evaluation order and worker count.
"""

import hashlib


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a tuple of ints/strings/int-tuples."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, (tuple, list)):
            token = ",".join(str(int(p)) for p in part)
        elif isinstance(part, (int,)):
            token = str(part)
        elif isinstance(part, str):
            token = part
        else:
            raise TypeError(f"unsupported seed part {part!r}")
        h.update(token.encode("ascii"))
        h.update(b"|")
    return int.from_bytes(h.digest(), "big")
