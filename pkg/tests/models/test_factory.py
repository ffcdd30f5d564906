import json
import math
import os
import tempfile
import unittest

from affinevol.core.errors import ModelSpecError
from affinevol.core.jumps import CompoundPoisson, NoJumps
from affinevol.core.parameters import validate_admissibility
from affinevol.models.bates import BatesGenerator
from affinevol.models.factory import (
    PRESETS,
    build_generator,
    build_model,
    load_model_spec,
    preset_spec,
)
from affinevol.models.heston import HestonGenerator, HestonJumpGenerator


def heston_spec(**overrides):
    """A valid Heston spec with selected fields replaced."""
    spec = {
        "kind": "heston",
        "lambda": 1.3253,
        "theta": 0.0354,
        "zeta": 0.3877,
        "rho": -0.7165,
    }
    spec.update(overrides)
    return spec


class TestPresets(unittest.TestCase):
    """Test the built-in model presets."""

    def test_every_preset_builds(self):
        """Test that each preset embeds into an admissible parameter set."""
        for name, spec in PRESETS.items():
            with self.subTest(preset=name):
                model = build_model(spec)
                self.assertEqual(model.kind, name)
                report = validate_admissibility(model.embedding())
                self.assertTrue(report.passed, str(report))

    def test_generator_types(self):
        """Test the generator class chosen for each kind."""
        self.assertIsInstance(
            build_generator(PRESETS["heston_jumps"]), HestonJumpGenerator
        )
        self.assertIsInstance(build_generator(PRESETS["bates"]), BatesGenerator)

    def test_overrides(self):
        """Test flat and nested overrides without touching the preset."""
        spec = preset_spec("heston", {"rho": 0.5})
        self.assertEqual(spec["rho"], 0.5)
        self.assertEqual(PRESETS["heston"]["rho"], -0.7165)
        spec = preset_spec("bates", {"jumps": {"intensity": 1.0}})
        self.assertEqual(spec["jumps"]["intensity"], 1.0)
        self.assertEqual(spec["jumps"]["law"], "gaussian")
        self.assertEqual(PRESETS["bates"]["jumps"]["intensity"], 5.0)

    def test_unknown_preset(self):
        """Test that an unknown preset names the ``preset`` field."""
        with self.assertRaises(ModelSpecError) as ctx:
            preset_spec("sabr")
        self.assertEqual(ctx.exception.field, "preset")


class TestSpecErrors(unittest.TestCase):
    """Test that malformed specs name the offending field."""

    def assertField(self, spec, field):
        """Assert that building ``spec`` fails on ``field``."""
        with self.assertRaises(ModelSpecError) as ctx:
            build_model(spec)
        self.assertEqual(ctx.exception.field, field)

    def test_heston_fields(self):
        """Test missing, mistyped and NaN fields."""
        spec = heston_spec()
        del spec["rho"]
        self.assertField(spec, "rho")
        self.assertField(heston_spec(theta="0.04"), "theta")
        self.assertField(heston_spec(zeta=True), "zeta")
        self.assertField(heston_spec(**{"lambda": math.nan}), "lambda")

    def test_unknown_fields(self):
        """Test that fields foreign to the kind are refused, not ignored."""
        self.assertField(heston_spec(c=0.1), "c")
        self.assertField(heston_spec(jumps={"intensity": 0.0}), "jumps")
        spec = preset_spec("bns")
        spec["theta"] = 0.04
        self.assertField(spec, "theta")
        self.assertField({"kind": "parameters", "lambda": 1.0}, "lambda")

    def test_family_invariants(self):
        """Test that parameter errors are reported against the kind."""
        self.assertField(heston_spec(**{"lambda": -1.0}), "heston")

    def test_kind(self):
        """Test unknown kinds and non-object specs."""
        self.assertField({"kind": "sabr"}, "kind")
        self.assertField([1, 2], "<root>")

    def test_jump_fields(self):
        """Test errors inside the jump section."""
        spec = preset_spec("heston_jumps", {"jumps": {"law": "cauchy"}})
        self.assertField(spec, "jumps.law")
        spec = preset_spec("bates", {"jumps": {"std": -0.1}})
        self.assertField(spec, "jumps.law")
        spec = heston_spec(kind="bates")
        self.assertField(spec, "jumps")

    def test_subordinator_fields(self):
        """Test the BNS subordinator section."""
        spec = preset_spec("bns", {"subordinator": {"family": "stable"}})
        self.assertField(spec, "subordinator.family")
        spec = preset_spec("bns", {"subordinator": {"z": 1.0}})
        self.assertField(spec, "subordinator")

    def test_parameter_fields(self):
        """Test arrays and jump measures of a raw parameter set."""
        self.assertField({"kind": "parameters", "alpha": [1.0, 0.0]}, "alpha")
        self.assertField({"kind": "parameters", "b": [0.0, "x"]}, "b")
        self.assertField(
            {"kind": "parameters", "m": {"type": "levy"}}, "m.type"
        )
        self.assertField(
            {"kind": "parameters", "mu": {"intensity": 1.0}}, "mu.marks"
        )


class TestParameterSpec(unittest.TestCase):
    """Test building a raw parameter set."""

    def test_defaults_and_jumps(self):
        """Test zero defaults and a compound Poisson measure."""
        model = build_model(
            {
                "kind": "parameters",
                "alpha": [[1.0, 0.0], [0.0, 0.1]],
                "beta": [-0.5, -1.0],
                "m": {
                    "intensity": 0.2,
                    "marks": {"law": "gaussian", "mean": 0.0, "std": 0.1},
                },
            }
        )
        params = model.embedding()
        self.assertEqual(params.c, 0.0)
        self.assertEqual(params.b.tolist(), [0.0, 0.0])
        self.assertIsInstance(params.m, CompoundPoisson)
        self.assertEqual(params.mu, NoJumps())


class TestLoadSpec(unittest.TestCase):
    """Test reading specs from strings and files."""

    def test_inline(self):
        """Test an inline JSON object."""
        spec = load_model_spec(json.dumps(heston_spec()))
        self.assertIsInstance(build_generator(spec), HestonGenerator)

    def test_file(self):
        """Test a JSON file on disk."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "model.json")
            with open(path, "w") as f:
                json.dump(PRESETS["bns"], f)
            self.assertEqual(load_model_spec(path), PRESETS["bns"])

    def test_malformed(self):
        """Test malformed JSON and a non-object document."""
        with self.assertRaises(ModelSpecError) as ctx:
            load_model_spec('{"kind": ')
        self.assertEqual(ctx.exception.field, "<json>")
        with self.assertRaises(ModelSpecError) as ctx:
            load_model_spec("[1, 2]")
        self.assertEqual(ctx.exception.field, "<root>")


if __name__ == "__main__":
    unittest.main()
