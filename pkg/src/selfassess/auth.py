"""Token auth: salted-hash credentials at rest, HMAC-signed bearer tokens.

Tokens are stateless: base64(username|role|expiry) plus an HMAC-SHA256 tag
under the server secret, so any worker can verify without shared session
state. Credentials never round-trip; only PBKDF2 hashes are stored.
"""
from __future__ import annotations

import base64
import hashlib
import hmac
import os
from dataclasses import dataclass
from enum import Enum

PBKDF2_ITERATIONS = 60_000
TOKEN_TTL_SECONDS = 12 * 3600


class Role(str, Enum):
    ADMIN = "admin"
    EDUCATOR = "educator"
    STUDENT = "student"
    GUEST = "guest"

    def covers(self, required: "Role") -> bool:
        """admin inherits educator rights; other roles only cover themselves."""
        if self is required:
            return True
        return self is Role.ADMIN and required is Role.EDUCATOR


@dataclass(frozen=True)
class Identity:
    username: str | None
    role: Role

    @property
    def registered(self) -> bool:
        return self.username is not None


GUEST_IDENTITY = Identity(username=None, role=Role.GUEST)


def hash_password(password: str, salt: bytes | None = None) -> dict:
    if salt is None:
        salt = os.urandom(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode(), salt, PBKDF2_ITERATIONS)
    return {
        "salt": salt.hex(),
        "hash": digest.hex(),
        "iterations": PBKDF2_ITERATIONS,
    }


def verify_password(password: str, record: dict) -> bool:
    digest = hashlib.pbkdf2_hmac(
        "sha256", password.encode(), bytes.fromhex(record["salt"]), record["iterations"]
    )
    return hmac.compare_digest(digest.hex(), record["hash"])


def _sign(secret: bytes, payload: bytes) -> str:
    return hmac.new(secret, payload, hashlib.sha256).hexdigest()


def mint_token(secret: bytes, username: str, role: Role, now: float) -> str:
    payload = f"{username}|{role.value}|{int(now) + TOKEN_TTL_SECONDS}".encode()
    return base64.urlsafe_b64encode(payload).decode() + "." + _sign(secret, payload)


def parse_token(secret: bytes, token: str, now: float) -> Identity | None:
    """The identity the token proves, or None when invalid or expired."""
    try:
        encoded, tag = token.split(".", 1)
        payload = base64.urlsafe_b64decode(encoded.encode())
    except Exception:
        return None
    if not hmac.compare_digest(_sign(secret, payload), tag):
        return None
    try:
        username, role_label, expiry = payload.decode().split("|")
        role = Role(role_label)
        if int(expiry) < now:
            return None
    except Exception:
        return None
    return Identity(username=username, role=role)
