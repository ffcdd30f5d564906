import io
import math
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr

from affinevol.cli.commands import EXIT_FAIL, EXIT_OK, EXIT_SPEC
from affinevol.cli.main import main
from affinevol.models.heston import HestonParams, heston_closed_w

KILLED_MODEL = json.dumps(
    {
        "kind": "parameters",
        "alpha": [[1.0, 0.0], [0.0, 0.1]],
        "beta": [-0.5, -1.0],
        "c": 0.1,
    }
)
FIG1 = HestonParams(lam=1.3253, theta=0.0354, zeta=0.3877, rho=-0.7165)
SMALL_GRIDS = (
    "--t-min",
    "0.5",
    "--t-max",
    "2",
    "--t-count",
    "3",
    "--xi-count",
    "3",
    "--w-min",
    "-5",
    "--w-max",
    "5",
    "--w-count",
    "3",
)


def note_value(notes, key):
    """The float after ``key=`` in a list of footer notes."""
    for note in notes:
        for item in note.split():
            name, _, value = item.partition("=")
            if name == key:
                return float(value)
    raise KeyError(key)


class TestMain(unittest.TestCase):
    """Test subcommands end to end through ``main``."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.config_path = os.path.join(self.tmp.name, "config.yaml")
        with open(self.config_path, "w") as f:
            f.write("log_level: WARNING\nu_count: 5\n")

    def tearDown(self):
        self.tmp.cleanup()

    def run_cli(self, *args, out="out.csv"):
        """Run the CLI and return (exit code, output text, stderr)."""
        path = os.path.join(self.tmp.name, out)
        stderr = io.StringIO()
        argv = [
            args[0],
            "--config_path",
            self.config_path,
            "--out",
            path,
            *args[1:],
        ]
        with redirect_stderr(stderr):
            code = main(argv)
        text = ""
        if os.path.exists(path):
            with open(path) as f:
                text = f.read()
        return code, text, stderr.getvalue()

    def test_validate_preset(self):
        """Test that the Heston preset passes every check."""
        code, text, _ = self.run_cli("validate", "--preset", "heston")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(text.startswith("check,result,detail\n"))
        self.assertIn("martingale,yes,", text)

    def test_validate_killed_model(self):
        """Test that a killing rate fails with exit code 2."""
        code, text, _ = self.run_cli("validate", "--model", KILLED_MODEL)
        self.assertEqual(code, EXIT_FAIL)
        self.assertIn("conservative,no,", text)

    def test_malformed_model(self):
        """Test that malformed JSON exits with 1 and names the field."""
        code, text, err = self.run_cli("validate", "--model", '{"kind": ')
        self.assertEqual(code, EXIT_SPEC)
        self.assertEqual(text, "")
        self.assertIn("<json>", err)

    def test_bad_params(self):
        """Test --params that is not a JSON object."""
        code, _, err = self.run_cli(
            "longterm", "--preset", "heston", "--params", "[1]"
        )
        self.assertEqual(code, EXIT_SPEC)
        self.assertIn("--params", err)

    def test_unknown_preset(self):
        """Test an unknown preset name."""
        code, _, err = self.run_cli("longterm", "--preset", "sabr")
        self.assertEqual(code, EXIT_SPEC)
        self.assertIn("preset", err)

    def test_violated_assumption(self):
        """Test that chi(1) >= 0 makes longterm exit with 2."""
        code, _, _ = self.run_cli(
            "longterm",
            "--preset",
            "heston",
            "--params",
            '{"rho": 0.9, "lambda": 0.1}',
        )
        self.assertEqual(code, EXIT_FAIL)

    def test_missing_config(self):
        """Test an explicit config path that does not exist."""
        self.config_path = os.path.join(self.tmp.name, "missing.yaml")
        code, _, err = self.run_cli("validate", "--preset", "heston")
        self.assertEqual(code, EXIT_SPEC)
        self.assertIn("not found", err)

    def test_explosion_is_deterministic(self):
        """Test that two runs write identical bytes."""
        flags = ("--u-min", "-5", "--u-max", "5", "--u-count", "5")
        first = self.run_cli("explosion", *flags, out="a.csv")
        second = self.run_cli("explosion", *flags, out="b.csv")
        self.assertEqual(first[0], EXIT_OK)
        self.assertEqual(first[1], second[1])
        lines = first[1].splitlines()
        self.assertEqual(lines[0], "u,T_star,T_star_S,branch,branch_S")
        self.assertEqual(len(lines), 6)

    def test_json_output(self):
        """Test the JSON rendering of the stationary cgf."""
        code, text, _ = self.run_cli(
            "stationary",
            "--preset",
            "bns",
            "--format",
            "json",
            "--w-min",
            "-5",
            "--w-max",
            "15",
            "--w-count",
            "3",
            out="l.json",
        )
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(text)
        self.assertEqual(payload["columns"], ["w", "l"])
        self.assertEqual(len(payload["rows"]), 3)
        self.assertIn("l_plus=12.5", payload["notes"])

    def run_json(self, *args):
        """Run a subcommand with JSON output; return (code, payload)."""
        code, text, err = self.run_cli(*args, "--format", "json", out="t.json")
        self.assertEqual(code, EXIT_OK, err)
        return code, json.loads(text)

    def test_unknown_params_key(self):
        """Test that --params with a field foreign to the kind is refused."""
        code, text, err = self.run_cli(
            "longterm", "--preset", "heston", "--params", '{"c": 0.1}'
        )
        self.assertEqual(code, EXIT_SPEC)
        self.assertEqual(text, "")
        self.assertIn("c:", err)

    def test_figure1(self):
        """Test stable branches and psi endpoints against closed forms."""
        with open(self.config_path, "w") as f:
            f.write("log_level: WARNING\ntrajectory_u: [0.25, 0.5, 0.75]\n")
        _, payload = self.run_json(
            "figure1",
            "--u-min",
            "-1",
            "--u-max",
            "2",
            "--u-count",
            "7",
            "--t-max",
            "5",
        )
        rows = payload["rows"]
        stable = [r for r in rows if r[0] == "stable"]
        self.assertEqual(len(stable), 7)
        for _, u, _, value in stable:
            with self.subTest(u=u):
                expected = heston_closed_w(FIG1, u)
                self.assertAlmostEqual(
                    value, expected, delta=1e-10 * max(1.0, abs(expected))
                )
        rate = note_value(payload["notes"], "rate")
        constant = note_value(payload["notes"], "C")
        for u in (0.25, 0.5, 0.75):
            path = [r for r in rows if r[0] == "psi" and r[1] == u]
            _, _, t_end, psi_end = max(path, key=lambda r: r[2])
            with self.subTest(u=u):
                self.assertAlmostEqual(t_end, 5.0, places=12)
                self.assertLessEqual(
                    abs(psi_end - heston_closed_w(FIG1, u)),
                    constant * math.exp(-rate * t_end) + 1e-8,
                )

    def test_figure2(self):
        """Test that jumps cap the lower critical moment at kappa_-."""
        _, payload = self.run_json(
            "figure2",
            "--preset",
            "heston_jumps",
            "--t-min",
            "0.25",
            "--t-max",
            "8",
            "--t-count",
            "5",
        )
        self.assertIn("kappa_minus=-10.0", payload["notes"])
        self.assertEqual(len(payload["rows"]), 5)
        for row in payload["rows"]:
            t, u_minus, u_jump = row[0], float(row[1]), float(row[5])
            with self.subTest(t=t):
                expected = max(u_minus, -10.0)
                self.assertAlmostEqual(
                    u_jump, expected, delta=1e-8 * abs(expected)
                )

    def test_critical_moments(self):
        """Test the moment strip and the Lee slopes on a t-grid."""
        _, payload = self.run_json("critical-moments", *SMALL_GRIDS)
        self.assertEqual(
            payload["columns"],
            ["T", "u_minus", "u_plus", "left_slope", "right_slope"],
        )
        self.assertEqual(len(payload["rows"]), 3)
        previous = None
        for T, u_minus, u_plus, left, right in payload["rows"]:
            with self.subTest(T=T):
                self.assertLess(float(u_minus), 0.0)
                self.assertGreater(float(u_plus), 1.0)
                self.assertTrue(0.0 < left <= 2.0)
                self.assertTrue(0.0 < right <= 2.0)
                if previous is not None:
                    self.assertLess(float(u_plus), previous)
                previous = float(u_plus)

    def test_smile(self):
        """Test the smile table and its Lee slope notes."""
        _, payload = self.run_json(
            "smile",
            "--xi-min",
            "-0.4",
            "--xi-max",
            "0.4",
            "--xi-count",
            "5",
        )
        self.assertEqual(
            payload["columns"], ["T", "xi", "price", "implied_variance"]
        )
        prices = [r[2] for r in payload["rows"]]
        variances = [r[3] for r in payload["rows"]]
        self.assertTrue(all(a > b for a, b in zip(prices, prices[1:])))
        self.assertTrue(all(0.0 < v < 0.2 for v in variances))
        self.assertGreater(variances[0], variances[-1])
        self.assertIn("regime=primary", payload["notes"])

    def test_longterm(self):
        """Test a successful long-term profile of the Heston preset."""
        _, payload = self.run_json(
            "longterm", "--u-min", "0", "--u-max", "1", "--u-count", "3"
        )
        self.assertEqual(
            payload["columns"], ["u", "w", "h", "in_I", "in_J", "w_unstable"]
        )
        (u0, w0, h0, *_), mid, (u1, w1, h1, *_) = payload["rows"]
        self.assertEqual((w0, h0, w1, h1), (0.0, 0.0, 0.0, 0.0))
        self.assertLess(mid[1], 0.0)
        self.assertIs(mid[3], True)
        self.assertIs(mid[4], True)
        self.assertAlmostEqual(
            mid[1], heston_closed_w(FIG1, 0.5), delta=1e-10
        )

    def test_every_command_is_deterministic(self):
        """Test that each subcommand writes identical bytes twice."""
        for command in (
            "validate",
            "figure1",
            "figure2",
            "explosion",
            "longterm",
            "critical-moments",
            "smile",
            "stationary",
        ):
            preset = "heston_jumps" if command == "figure2" else "heston"
            args = (command, "--preset", preset, *SMALL_GRIDS)
            with self.subTest(command=command):
                first = self.run_cli(*args, out="a.csv")
                second = self.run_cli(*args, out="b.csv")
                self.assertEqual(first[0], EXIT_OK, first[2])
                self.assertTrue(first[1])
                self.assertEqual(first[1], second[1])


if __name__ == "__main__":
    unittest.main()
