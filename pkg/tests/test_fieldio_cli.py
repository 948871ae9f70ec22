import json
import struct

import numpy as np
import pytest

from ciq.cli import main
from ciq.errors import FormatError
from ciq.fieldio import decode_field, encode_field, read_field_file, write_field_file
from ciq.helmholtz import transverse_project
from ciq.lattice import LatticeGrid, ScalarField, VectorField, spectral_curl, spectral_gradient
from ciq.report import RunConfig, run_basis_check, run_decompose, run_verify


class TestCIQF:
    def test_scalar_size_and_header(self, tmp_path, rng):
        f = ScalarField.random(LatticeGrid(3, 0.25), rng)
        path = tmp_path / "s.ciqf"
        write_field_file(path, f)
        data = path.read_bytes()
        assert len(data) == 4 + 4 + 4 + 8 + 4 + 27 * 8 == 240
        assert data[:4] == b"CIQF"
        assert struct.unpack("<IIdI", data[4:24]) == (1, 3, 0.25, 1)
        assert struct.unpack("<d", data[24:32])[0] == f.values[0]

    def test_vector_round_trip_bit_exact(self, tmp_path, rng):
        v = VectorField.random(LatticeGrid(5, 0.3), rng)
        path = tmp_path / "v.ciqf"
        write_field_file(path, v)
        back = read_field_file(path)
        assert isinstance(back, VectorField)
        assert back.grid == v.grid
        assert back.values.tobytes() == v.values.tobytes()
        write_field_file(tmp_path / "again.ciqf", back)
        assert (tmp_path / "again.ciqf").read_bytes() == path.read_bytes()

    def test_component_major_layout(self):
        g = LatticeGrid(3)
        vals = np.arange(81, dtype=float).reshape(3, 27)
        data = encode_field(VectorField.from_array(g, vals))
        payload = np.frombuffer(data, "<f8", offset=24)
        np.testing.assert_array_equal(payload, np.arange(81))

    def test_bad_magic(self, rng):
        data = bytearray(encode_field(ScalarField.random(LatticeGrid(3), rng)))
        data[:4] = b"XXXX"
        with pytest.raises(FormatError) as exc:
            decode_field(bytes(data))
        assert exc.value.offset == 0

    def test_even_points(self, rng):
        data = bytearray(encode_field(ScalarField.random(LatticeGrid(3), rng)))
        data[8:12] = struct.pack("<I", 4)
        with pytest.raises(FormatError) as exc:
            decode_field(bytes(data))
        assert exc.value.offset == 8

    def test_truncated(self, rng):
        data = encode_field(ScalarField.random(LatticeGrid(3), rng))
        with pytest.raises(FormatError) as exc:
            decode_field(data[:-5])
        assert exc.value.offset == len(data) - 5
        with pytest.raises(FormatError):
            decode_field(data[:10])

    def test_bad_components(self, rng):
        data = bytearray(encode_field(ScalarField.random(LatticeGrid(3), rng)))
        data[20:24] = struct.pack("<I", 2)
        with pytest.raises(FormatError) as exc:
            decode_field(bytes(data))
        assert exc.value.offset == 20

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_field_file(tmp_path / "nope.ciqf")


class TestReports:
    def test_kg_report(self, tmp_path):
        out = tmp_path / "r.json"
        r = run_verify(RunConfig("kg", 5, spacing=0.7, mass=1.0, output_path=str(out)))
        assert r.passed
        assert r.metrics["bracket_max_err"] < 1e-9 / 0.7**3
        doc = json.loads(out.read_text())
        assert doc["pass"] is True
        assert set(doc["metrics"]) >= {
            "bracket_max_err", "antisymmetry_residual", "hamilton_residual", "constraint_residual",
            "covariance_residual", "mode_bracket_max_err", "hamiltonian_rel_err", "energy_drift",
        }

    def test_maxwell_report(self):
        r = run_verify(RunConfig("maxwell", 3))
        assert r.passed
        assert r.metrics["closure_max_err"] < 1e-12

    def test_deterministic(self):
        a = run_verify(RunConfig("kg", 3, seed=11))
        b = run_verify(RunConfig("kg", 3, seed=11))
        assert a.metrics == b.metrics

    def test_even_points_config(self):
        with pytest.raises(ValueError, match="n_points must be odd"):
            RunConfig("kg", 4)

    def test_tolerance_failure(self):
        r = run_verify(RunConfig("kg", 3, tolerance=1e-30))
        assert not r.passed

    def test_basis_report(self):
        r = run_basis_check(9)
        assert r.passed and r.metrics["closure_max_err"] < 1e-12 and r.metrics["parity_max_err"] == 0.0

    def test_decompose(self, tmp_path, rng):
        g = LatticeGrid(5, 0.5)
        v = VectorField.random(g, rng)
        write_field_file(tmp_path / "in.ciqf", v)
        run_decompose(tmp_path / "in.ciqf", tmp_path / "t.ciqf", tmp_path / "l.ciqf")
        vt, vl = read_field_file(tmp_path / "t.ciqf"), read_field_file(tmp_path / "l.ciqf")
        assert np.max(np.abs(vt.values + vl.values - v.values)) < 1e-12

    @pytest.mark.parametrize("kind", ["gradient", "curl"])
    def test_decompose_pure_inputs(self, tmp_path, rng, kind):
        g = LatticeGrid(3, 1.0)
        if kind == "gradient":
            v = spectral_gradient(ScalarField.random(g, rng))
        else:
            v = spectral_curl(VectorField.random(g, rng))
        write_field_file(tmp_path / "in.ciqf", v)
        run_decompose(tmp_path / "in.ciqf", tmp_path / "t.ciqf", tmp_path / "l.ciqf")
        zero = "t.ciqf" if kind == "gradient" else "l.ciqf"
        assert np.max(np.abs(read_field_file(tmp_path / zero).values)) < 1e-12


class TestCLI:
    def test_verify_pass(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main(["verify", "kg", "--n", "3", "--spacing", "0.5", "--mass", "1.0", "--seed", "42", "--out", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["pass"] is True
        json.loads(capsys.readouterr().out)

    def test_verify_maxwell(self, tmp_path):
        assert main(["verify", "maxwell", "--n", "3", "--spacing", "1.0", "--out", str(tmp_path / "m.json")]) == 0

    def test_verify_fail(self, tmp_path):
        assert main(["verify", "kg", "--n", "3", "--tol", "1e-40", "--out", str(tmp_path / "f.json")]) == 1
        assert json.loads((tmp_path / "f.json").read_text())["pass"] is False

    def test_usage_even(self, capsys):
        assert main(["verify", "kg", "--n", "4"]) == 2
        assert "n_points must be odd" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "argv",
        [[], ["verify"], ["verify", "qed", "--n", "3"], ["basis", "--n", "8"], ["verify", "kg", "--n", "3", "--spacing", "-1"]],
    )
    def test_usage_errors(self, argv):
        assert main(argv) == 2

    def test_basis(self, tmp_path):
        out = tmp_path / "b.json"
        assert main(["basis", "--n", "9", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["metrics"]["closure_max_err"] < 1e-12

    def test_decompose(self, tmp_path, rng):
        v = transverse_project(VectorField.random(LatticeGrid(3), rng))
        write_field_file(tmp_path / "v.ciqf", v)
        args = ["decompose", "--in", str(tmp_path / "v.ciqf"),
                "--out-transverse", str(tmp_path / "vt.ciqf"), "--out-longitudinal", str(tmp_path / "vl.ciqf")]
        assert main(args) == 0
        assert np.max(np.abs(read_field_file(tmp_path / "vl.ciqf").values)) < 1e-12

    def test_decompose_bad_input(self, tmp_path, rng):
        (tmp_path / "bad.ciqf").write_bytes(b"XXXX" + bytes(20))
        args = ["decompose", "--in", str(tmp_path / "bad.ciqf"), "--out-transverse", str(tmp_path / "a"),
                "--out-longitudinal", str(tmp_path / "b")]
        assert main(args) == 2
        write_field_file(tmp_path / "s.ciqf", ScalarField.random(LatticeGrid(3), rng))
        args[2] = str(tmp_path / "s.ciqf")
        assert main(args) == 2
