"""Shared fixtures: a minimal dim-2 module and JSON schema validation."""

import json
import pathlib

import numpy as np
import pytest

from invfields.bases import Module, SelfConjBasis
from invfields.groups import RngStream


class TorusPairModule(Module):
    """Reducible two-character circle module with labels (1, -1).

    The smallest space carrying a self-conjugated basis: v_{-1} = conj(v_1),
    rotation acts by e^{i theta} on v_1.  Group elements are plain angles.
    """

    def __init__(self):
        self.dim = 2
        self.labels = [1, -1]
        self.conj_signs = np.array([1.0, 1.0])
        self.space_tag = "circle"
        self._finish_setup()

    def ref_rep(self, theta: float) -> np.ndarray:
        return np.diag([np.exp(1j * theta), np.exp(-1j * theta)])

    def haar(self, rng: RngStream) -> float:
        return float(rng.generator.uniform(0.0, 2.0 * np.pi))

    def identity_element(self) -> float:
        return 0.0

    def inverse(self, theta: float) -> float:
        return -theta

    def eval_ref(self, i: int, point: float) -> complex:
        return complex(np.exp(1j * self.labels[i] * point))

    def rotate_point(self, theta: float, point: float) -> float:
        return point + theta


@pytest.fixture
def dim2_basis() -> SelfConjBasis:
    return SelfConjBasis(TorusPairModule(), np.eye(2, dtype=complex))


SCHEMA_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "invfields" / "schemas"


def validate_report(payload: dict, schema_name: str) -> None:
    """Raise if the payload does not satisfy the named shipped schema."""
    import jsonschema
    from referencing import Registry, Resource

    schemas = {
        p.name: json.loads(p.read_text()) for p in SCHEMA_DIR.glob("*.schema.json")
    }
    registry = Registry().with_resources(
        (name, Resource.from_contents(s)) for name, s in schemas.items()
    )
    validator = jsonschema.Draft7Validator(schemas[schema_name], registry=registry)
    errors = list(validator.iter_errors(payload))
    assert not errors, errors[:3]
