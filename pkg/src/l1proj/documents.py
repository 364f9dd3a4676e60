"""JSON documents: schema validation and complex-matrix encoding."""

from __future__ import annotations

import hashlib
import json
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema
import numpy as np


class DocumentError(ValueError):
    """A document failed schema validation; ``pointer`` names the offending field."""

    def __init__(self, message: str, pointer: str = "$"):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("l1proj").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc: Any, schema: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(schema))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise DocumentError(err.message, err.json_path)


def encode_matrix(M: np.ndarray) -> list:
    """Row-major nested list of [re, im] pairs."""
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(rows: list) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise DocumentError("matrix must be a row-major list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def spec_hash(doc: Any) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()
