import csv
import io
import json
import math

import pytest

from arraydirectivity.cli import run
from arraydirectivity.directivity import OMNI
from arraydirectivity.geometry import ArrayLayout, DirectionSpec
from arraydirectivity.specfile import (
    SpecError,
    dump_spec,
    load_spec,
    parse_angle,
    parse_spec_text,
    spec_from_dict,
    wave_number_from_frequency,
)


def doc(**over):
    base = {
        "schema_version": 1,
        "elements": [{"position": [0, 0, 0]}, {"position": [1.5, 0, 0], "phase": 0.2}],
        "pattern": {"u": 0, "v": 1},
        "k": 1.0,
        "direction": {"theta0": "45deg", "phi0": 0.5},
    }
    base.update(over)
    return base


class TestSpecFile:
    def test_parse_angle_forms(self):
        assert parse_angle("90deg") == pytest.approx(math.pi / 2)
        assert parse_angle("0.5rad") == pytest.approx(0.5)
        assert parse_angle(1) == 1.0
        for bad in ("abc", True, None, "nan"):
            with pytest.raises(SpecError):
                parse_angle(bad)

    def test_valid_document(self):
        spec = spec_from_dict(doc())
        assert spec.layout.n == 2
        assert spec.direction.theta0 == pytest.approx(math.pi / 4)
        assert spec.layout.phases[1] == pytest.approx(0.2)

    def test_frequency_replaces_k(self):
        d = doc(frequency=5e9)
        del d["k"]
        assert spec_from_dict(d).k == pytest.approx(wave_number_from_frequency(5e9))
        with pytest.raises(SpecError, match="only one"):
            spec_from_dict(doc(frequency=5e9))

    @pytest.mark.parametrize("bad, field", [
        (doc(extra=1), "extra"),
        (doc(schema_version=2), "schema_version"),
        (doc(elements=[]), "elements"),
        (doc(elements=[{"position": [0, 0]}]), r"elements\[0\].position"),
        (doc(elements=[{"position": [0, 0, 0], "amplitude": "x"}]), r"elements\[0\].amplitude"),
        (doc(elements=[{"position": [0, 0, 0], "gain": 1}]), r"elements\[0\]"),
        (doc(pattern={"u": -1, "v": 0}), "pattern"),
        (doc(k=-1.0), "k"),
        (doc(direction={"theta0": "200deg"}), "direction"),
    ])
    def test_errors_name_the_field(self, bad, field):
        with pytest.raises(SpecError, match=field):
            spec_from_dict(bad)

    def test_json_error_location(self):
        with pytest.raises(SpecError, match="line 2 column"):
            parse_spec_text('{\n  "a": }')

    def test_round_trip(self, tmp_path):
        lay = ArrayLayout([[0, 0, 0], [1, 2, 3]], [1.0, 0.5], [0.0, 1.0])
        d = DirectionSpec(0.3, 0.4, 2.0)
        path = tmp_path / "a.json"
        dump_spec(path, lay, OMNI, 2.0, d)
        spec = load_spec(path)
        assert spec.layout.positions.tolist() == lay.positions.tolist()
        assert spec.direction == d

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecError):
            load_spec(tmp_path / "none.json")


def run_json(argv, capsys):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


class TestCli:
    def test_oupa_and_eval_round_trip(self, tmp_path, capsys):
        out = tmp_path / "grid.json"
        code, rec = run_json(["oupa", "--n1", "3", "--n2", "3", "--export", str(out)], capsys)
        assert code == 0
        assert rec["command"] == "oupa"
        assert rec["outputs"]["directivity_dbi"] == pytest.approx(14.12, abs=0.05)
        code, ev = run_json(["eval", str(out)], capsys)
        assert code == 0
        assert ev["outputs"]["directivity_dbi"] == pytest.approx(rec["outputs"]["directivity_dbi"], abs=1e-9)
        assert ev["outputs"]["relative_difference"] < 1e-8

    def test_baseline_ula(self, capsys):
        code, rec = run_json(["baseline", "--geometry", "ula", "--n", "6"], capsys)
        assert code == 0
        assert rec["outputs"]["directivity_dbi"] == pytest.approx(9.17, abs=0.05)

    def test_ga_record_has_seed(self, capsys):
        code, rec = run_json(["ga", "--n", "3", "--seed", "5", "--max-generations", "3"], capsys)
        assert code == 0
        assert rec["seed"] == 5
        assert rec["outputs"]["stop_reason"] == "max_generations"
        assert len(rec["outputs"]["history_g"]) == 4

    def test_sweep_csv(self, capsys):
        assert run(["sweep-dmin", "--geometry", "upa", "--n", "4", "--start", "0.5", "--stop", "1.0",
                    "--step", "0.25"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["d_min", "directivity_dbi", "area"]
        assert len(rows) == 4

    def test_pareto_csv(self, capsys):
        assert run(["pareto", "--n1-range", "2:3", "--n2-range", "2:3", "--only-n", "6"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert [r[:3] for r in rows[1:]] == [["6", "2", "3"], ["6", "3", "2"]]

    def test_table_format(self, capsys):
        assert run(["baseline", "--geometry", "uca", "--n", "6", "--format", "table"]) == 0
        assert "directivity_dbi" in capsys.readouterr().out

    def test_input_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema_version": 1}')
        assert run(["eval", str(bad)]) == 2
        assert "elements" in capsys.readouterr().err

    def test_degenerate_direction_exit_code(self, capsys):
        assert run(["oupa", "--n1", "2", "--n2", "2", "--theta0", "90deg"]) == 3

    def test_no_local_minimum_exit_code(self, capsys):
        # A step larger than the search cap leaves no grid point to test.
        assert run(["oupa", "--n1", "2", "--n2", "2", "--c-step", "100"]) == 4

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["oupa", "--n1", "2"])
        assert exc.value.code == 2

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert run(["baseline", "--geometry", "ula", "--n", "2", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["command"] == "baseline"
