"""End-to-end checks of the spectra-cert command line.

Usage: cli_test.py <spectra-cert binary> <data dir>
"""

import json
import os
import subprocess
import sys
import tempfile
import unittest

BIN = None
DATA = None


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("SPECTRA_CERT_SEED", None)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env)


def load(path):
    with open(path) as f:
        return json.load(f)


def dump(obj, path):
    with open(path, "w") as f:
        json.dump(obj, f)


def write(path, text):
    with open(path, "w") as f:
        f.write(text)


def read(path):
    with open(path) as f:
        return f.read()


def data(name):
    return os.path.join(DATA, name)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def analyze(self, instance, *flags):
        out = self.path(os.path.basename(instance) + ".report.json")
        proc = run("analyze", instance, "--out", out, *flags)
        report = load(out) if os.path.exists(out) else None
        return proc, report, out

    def test_worked_infeasible_example(self):
        proc, report, out = self.analyze(data("ex1.json"))
        self.assertEqual(proc.returncode, 3, proc.stderr)
        self.assertEqual(report["verdict"], "infeasible")
        self.assertTrue(report["verification"]["accepted"])
        self.assertEqual(run("verify", data("ex1.json"), out).returncode, 0)

    def test_hinted_run_has_depth_two_and_detects_tampering(self):
        proc, report, out = self.analyze(data("ex1.json"), "--hints", data("ex1_hints.json"))
        self.assertEqual(proc.returncode, 3, proc.stderr)
        self.assertEqual(report["k"], 2)
        self.assertEqual(report["system"]["b"], ["0", "0", "-1", "2", "1", "3"])
        report["system"]["b"][2] = "0"
        bad = self.path("tampered.json")
        dump(report, bad)
        proc = run("verify", data("ex1.json"), bad)
        self.assertEqual(proc.returncode, 1)
        self.assertIn("b-minus-one", proc.stdout)

    def test_feasible_example(self):
        proc, report, out = self.analyze(data("ex2.json"))
        self.assertEqual(proc.returncode, 0, proc.stderr)
        self.assertEqual(report["p"], 2)
        self.assertEqual(run("verify", data("ex2.json"), out).returncode, 0)

    def test_motivating_system(self):
        proc, report, _ = self.analyze(data("motivating.json"))
        self.assertEqual(proc.returncode, 3)
        self.assertEqual(report["k"], 1)
        self.assertEqual(report["blockSizes"], [1, 1])
        self.assertEqual(report["strength"], "weak")
        proc = run("verify", data("motivating.json"), data("motivating_report.json"))
        self.assertEqual(proc.returncode, 0, proc.stdout)

    def test_float_mode_is_toleranced(self):
        proc, report, out = self.analyze(data("ex1.json"), "--mode", "float")
        self.assertEqual(proc.returncode, 3)
        self.assertEqual(report["transcript"]["mode"], "float")
        proc = run("verify", data("ex1.json"), out)
        self.assertEqual(proc.returncode, 0)
        self.assertEqual(json.loads(proc.stdout)["status"], "toleranced")

    def test_report_is_deterministic_apart_from_timestamp(self):
        reports = []
        for _ in range(2):
            proc = run("analyze", data("ex2.json"), env={"SPECTRA_CERT_SEED": "42"})
            self.assertEqual(proc.returncode, 0)
            r = json.loads(proc.stdout)
            self.assertEqual(r["metadata"]["seed"], 42)
            r.pop("timestamp")
            reports.append(json.dumps(r, sort_keys=True))
        self.assertEqual(reports[0], reports[1])

    def test_parse_errors(self):
        bad = self.path("bad.json")
        write(bad, '{"n": 2, "m": 1, "A": [[["1","2"],["3","1"]]], "b": ["0"]}')
        self.assertEqual(run("analyze", bad).returncode, 64)
        write(bad, "{not json")
        self.assertEqual(run("analyze", bad).returncode, 64)
        self.assertEqual(run("analyze", self.path("missing.json")).returncode, 64)

    def test_generate_weakly_infeasible(self):
        out = self.path("gen")
        proc = run("generate", "--kind", "weakly-infeasible", "--n", "3", "--m", "2",
                   "--k", "1", "--count", "5", "--seed", "7", "--out-dir", out)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        files = sorted(os.listdir(out))
        self.assertEqual(len(files), 5)
        for f in files:
            inst = load(os.path.join(out, f))
            gt = inst["ground_truth"]
            self.assertTrue(gt["confirmed"])
            self.assertEqual(gt["certificate"]["strength"], "weak")
            cert = self.path("gt.json")
            dump(gt["certificate"], cert)
            self.assertEqual(run("verify", os.path.join(out, f), cert).returncode, 0)

    def test_generate_is_deterministic(self):
        a, b = self.path("a"), self.path("b")
        for d in (a, b):
            run("generate", "--kind", "infeasible", "--n", "4", "--m", "3", "--count", "3",
                "--out-dir", d, env={"SPECTRA_CERT_SEED": "5"})
        for f in os.listdir(a):
            self.assertEqual(read(os.path.join(a, f)), read(os.path.join(b, f)))

    def test_generate_rank_zero_and_strong(self):
        out = self.path("gen")
        proc = run("generate", "--kind", "feasible", "--p", "0", "--n", "3", "--m", "3",
                   "--count", "3", "--out-dir", out, "--prefix", "f")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        for i in range(3):
            inst = load(os.path.join(out, f"f-{i}.json"))
            self.assertTrue(all(b == "0" for b in inst["b"]))
            self.assertEqual(inst["ground_truth"]["certificate"]["p"], 0)
        proc = run("generate", "--kind", "strongly-infeasible", "--n", "3", "--m", "3",
                   "--count", "3", "--out-dir", out, "--prefix", "s")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        for i in range(3):
            inst = load(os.path.join(out, f"s-{i}.json"))
            cert = inst["ground_truth"]["certificate"]
            self.assertEqual(cert["k"], 0)
            self.assertIsNotNone(cert["farkasRay"])

    def test_generate_failures(self):
        proc = run("generate", "--kind", "infeasible", "--k", "1", "--entry-bound", "0",
                   "--out-dir", self.path("g"))
        self.assertEqual(proc.returncode, 75)
        proc = run("generate", "--kind", "weakly-infeasible", "--m", "3", "--k", "1",
                   "--out-dir", self.path("g"))
        self.assertEqual(proc.returncode, 64)

    def test_batch_directory(self):
        out = self.path("gen")
        run("generate", "--kind", "feasible", "--n", "4", "--m", "3", "--p", "2",
            "--count", "3", "--seed", "1", "--out-dir", out)
        reports = self.path("reports")
        proc = run("analyze", out, "--out", reports)
        self.assertEqual(proc.returncode, 0, proc.stdout)
        self.assertEqual(len(os.listdir(reports)), 3)
        self.assertEqual(proc.stdout.count("feasible p=2"), 3)

    def test_probe(self):
        zero = self.path("c0.json")
        dump({"C": [["0"] * 4 for _ in range(4)]}, zero)
        proc = run("probe", data("ex2.json"), "--objective", zero)
        self.assertEqual(proc.returncode, 0, proc.stderr)
        self.assertEqual(json.loads(proc.stdout)["probes"][0]["gap"], 0.0)

        proc = run("probe", data("ex2.json"), "--random-C", "3", "--count", "10")
        self.assertEqual(proc.returncode, 0, proc.stderr)
        out = json.loads(proc.stdout)
        self.assertIn("not an exact proof", out["label"])
        self.assertEqual(len(out["probes"]), 10)
        for p in out["probes"]:
            self.assertLess(p["gap"], 1e-6)

        self.assertEqual(run("probe", data("ex1.json"), "--random-C", "1").returncode, 64)

    def test_import_sdpa(self):
        proc = run("import-sdpa", data("motivating.dat-s"))
        self.assertEqual(proc.returncode, 0, proc.stderr)
        self.assertEqual(json.loads(proc.stdout), load(data("motivating.json")))

        empty = self.path("empty.dat-s")
        write(empty, "")
        self.assertEqual(run("import-sdpa", empty).returncode, 64)

        two = self.path("two.dat-s")
        write(two, "1\n2\n2 -2\n1\n1 1 1 1 1\n")
        proc = run("import-sdpa", two)
        self.assertEqual(proc.returncode, 64)
        self.assertIn("single psd block", proc.stderr)


if __name__ == "__main__":
    BIN, DATA = sys.argv[1], sys.argv[2]
    unittest.main(argv=[sys.argv[0], "-v"])
