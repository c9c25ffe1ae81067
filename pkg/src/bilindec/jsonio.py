"""JSON reading and writing for matrices, spaces and certificates."""

from __future__ import annotations

import json
import os
from typing import Any

from .bilinear import BilinearSpace
from .decomp import AntiAutoCert, GenericDecompCert, IndecompWitness, check_antiauto
from .linalg import QMatrix


def _default(obj: Any):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(obj, default=_default, indent=2)


def load_text(arg: str) -> Any:
    """Parse *arg* as inline JSON, or read it as a path to a JSON file."""
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    return json.loads(arg)


def parse_space(data: Any) -> BilinearSpace:
    if isinstance(data, dict) and "gram" in data:
        return BilinearSpace.from_json(data)
    if isinstance(data, list):
        return BilinearSpace(QMatrix(data))
    raise ValueError("expected a Gram matrix or an object with a 'gram' field")


def certificate_from_json(data: dict):
    if not isinstance(data, dict):
        raise ValueError("a certificate must be a JSON object")
    kind = data.get("type")
    if kind == "similarity":
        return GenericDecompCert.from_json(data)
    if kind == "antiauto":
        return AntiAutoCert.from_json(data)
    if kind == "witness":
        return IndecompWitness.from_json(data)
    raise ValueError(f"unknown certificate type {kind!r}")


def verify_certificate(cert) -> tuple[bool, str]:
    """(ok, message) for any supported certificate object."""
    if isinstance(cert, AntiAutoCert):
        failed = check_antiauto(cert)
        return failed is None, "ok" if failed is None else f"failed: {failed}"
    ok = cert.verify()
    return ok, "ok" if ok else "failed: certificate identity"
