"""
Seed splitting
Every worker seed is the master seed XOR a stable hash of the worker's role name
"""

import hashlib

SEED_MODULUS = 2 ** 63


def role_hash(role: str) -> int:
    """First 8 bytes of md5(role) as a little-endian unsigned integer"""
    digest = hashlib.md5(role.encode("utf8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_seed(master: int, role: str) -> int:
    return (int(master) ^ role_hash(role)) % SEED_MODULUS
