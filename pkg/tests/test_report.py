import json
from pathlib import Path

import numpy as np
import pytest

from meshgame import (
    RunSpec,
    element_qualities,
    generate_scenario,
    read_off,
    run_compare,
    write_off,
)


@pytest.fixture(scope="module")
def fan4_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fan4_report")
    spec = RunSpec(out_dir=out, scenario="fan4", ks=(1, 2), max_iterations=3)
    record = run_compare(spec)
    return out, record


class TestRunSpec:
    def test_requires_exactly_one_input(self, tmp_path):
        with pytest.raises(ValueError):
            RunSpec(out_dir=tmp_path)
        with pytest.raises(ValueError):
            RunSpec(out_dir=tmp_path, scenario="fan4", mesh_path="x.off")

    def test_rejects_bad_ks(self, tmp_path):
        with pytest.raises(ValueError):
            RunSpec(out_dir=tmp_path, scenario="fan4", ks=())
        with pytest.raises(ValueError):
            RunSpec(out_dir=tmp_path, scenario="fan4", ks=(0, 1))

    def test_rejects_bad_target(self, tmp_path):
        with pytest.raises(ValueError):
            RunSpec(out_dir=tmp_path, scenario="fan4", target_quality=2.0)


class TestRunCompare:
    def test_writes_expected_files(self, fan4_run):
        out, record = fan4_run
        for rel in (
            "report.json",
            "sweep.csv",
            "compare_k1.svg",
            "compare_k2.svg",
            "quality_vs_k.png",
            "quality_vs_iterations.png",
            "meshes/initial.off",
            "meshes/k1_nash.off",
            "meshes/k1_best.off",
            "meshes/k1_uniform.off",
            "meshes/k2_nash.off",
            "meshes/k2_best.off",
            "meshes/k2_uniform.off",
        ):
            assert (out / rel).exists(), rel

    def test_json_schema(self, fan4_run):
        out, _ = fan4_run
        doc = json.loads((out / "report.json").read_text())
        assert doc["scenario"] == "fan4"
        assert doc["ks"] == [1, 2]
        assert set(doc["config"]) >= {"metric", "fix_boundary", "theta", "preserve_area"}
        assert doc["initial"]["mesh_file"] == "meshes/initial.off"
        for entry in doc["results"]:
            assert {"k", "nash", "best", "uniform", "equilibrium_count", "timings"} <= set(entry)
            for family in ("nash", "best", "uniform"):
                fam = entry[family]
                assert fam is None or {"profile", "mean_quality", "min_quality", "mesh_file"} <= set(fam)
        assert set(doc["trajectories"]) == {"1", "2"}
        for values in doc["trajectories"].values():
            assert values[0] == pytest.approx(doc["initial"]["mean_quality"])

    def test_qualities_recompute_from_emitted_meshes(self, fan4_run):
        out, _ = fan4_run
        doc = json.loads((out / "report.json").read_text())
        mesh = generate_scenario("fan4")
        for entry in doc["results"]:
            for family in ("nash", "best", "uniform"):
                fam = entry[family]
                if fam is None:
                    continue
                coords = read_off(out / fam["mesh_file"]).coords
                q = element_qualities(mesh, coords=coords)
                assert float(q.mean()) == pytest.approx(fam["mean_quality"], abs=1e-9)
                assert float(q.min()) == pytest.approx(fam["min_quality"], abs=1e-9)

    def test_csv_rows(self, fan4_run):
        out, _ = fan4_run
        lines = (out / "sweep.csv").read_text().strip().splitlines()
        assert lines[0] == "k,family,mean_quality,min_quality,profile"
        assert len(lines) == 1 + 2 * 3

    def test_record_matches_json(self, fan4_run):
        out, record = fan4_run
        doc = json.loads((out / "report.json").read_text())
        assert record.to_dict() == doc

    def test_no_equilibrium_reported_as_null(self, tmp_path):
        spec = RunSpec(out_dir=tmp_path, scenario="fan4", ks=(4,), max_iterations=1)
        record = run_compare(spec)
        entry = record.results[0]
        assert entry.nash is None
        assert entry.equilibrium_count == 0
        assert entry.best is not None
        doc = json.loads((tmp_path / "report.json").read_text())
        assert doc["results"][0]["nash"] is None
        assert not (tmp_path / "meshes" / "k4_nash.off").exists()

    def test_budget_refusal_becomes_skip_entry(self, tmp_path):
        spec = RunSpec(out_dir=tmp_path, scenario="fan5", ks=(1, 3), budget=40)
        record = run_compare(spec)
        assert record.results[0].skipped is None
        assert record.results[1].skipped is not None
        doc = json.loads((tmp_path / "report.json").read_text())
        assert "skipped" in doc["results"][1]
        assert not (tmp_path / "compare_k3.svg").exists()
        assert "3" not in doc["trajectories"]

    def test_mesh_path_input(self, tmp_path):
        mesh = generate_scenario("fan4")
        mesh_file = tmp_path / "input.off"
        write_off(mesh_file, mesh)
        spec = RunSpec(
            out_dir=tmp_path / "out", mesh_path=str(mesh_file), ks=(1,), max_iterations=1
        )
        record = run_compare(spec)
        assert record.spec.label == "input"
        doc = json.loads((tmp_path / "out" / "report.json").read_text())
        assert doc["scenario"] is None
        assert doc["mesh_path"] == str(mesh_file)

    def test_initial_off_round_trips_bitwise(self, fan4_run):
        out, _ = fan4_run
        mesh = generate_scenario("fan4")
        assert np.array_equal(read_off(out / "meshes/initial.off").coords, mesh.coords)
