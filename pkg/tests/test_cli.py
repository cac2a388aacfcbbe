import json

import pytest

from nomoforge.cli import main


def args_for(files, *extra, outputs_key="outputs"):
    return [
        "--features", str(files["features"]),
        "--outputs", str(files[outputs_key]),
        "--manifest", str(files["manifest"]),
        *extra,
    ]


class TestValidate:
    def test_clean_fixture(self, catbin_files, capsys):
        code = main(["validate", *args_for(catbin_files)])
        assert code == 0
        assert "ok" in capsys.readouterr().out

    def test_duplicate_row_fixture(self, tmp_path, catbin_files, capsys):
        bad = tmp_path / "features.csv"
        bad.write_text("A,B\n0,0\n0,0\n0,1\n1,0\n")
        code = main([
            "validate", "--features", str(bad),
            "--outputs", str(catbin_files["outputs"]),
            "--manifest", str(catbin_files["manifest"]),
        ])
        assert code == 1
        out = capsys.readouterr().out
        assert "DuplicateRow" in out and "MissingCombination" in out

    def test_missing_file(self, catbin_files, tmp_path):
        code = main([
            "validate", "--features", str(tmp_path / "nope.csv"),
            "--outputs", str(catbin_files["outputs"]),
            "--manifest", str(catbin_files["manifest"]),
        ])
        assert code == 2


class TestCreate:
    def test_type1_default(self, catbin_files, tmp_path):
        out = tmp_path / "n.svg"
        code = main(["create", *args_for(catbin_files), "--out", str(out)])
        assert code == 0
        assert out.read_bytes().startswith(b"<?xml")

    def test_type2_with_shap(self, catbin_files, tmp_path):
        out = tmp_path / "n.svg"
        code = main([
            "create", *args_for(catbin_files, "--shap", str(catbin_files["shap"])),
            "--prob", "--out", str(out),
        ])
        assert code == 0
        assert b"stroke-dasharray" in out.read_bytes()  # dotted threshold line

    def test_type5_mixed_estimate(self, mixed_files, tmp_path):
        out = tmp_path / "n.svg"
        code = main([
            "create", *args_for(mixed_files, outputs_key="outputs_est"),
            "--shap", str(mixed_files["shap"]), "--estimate", "--out", str(out),
        ])
        assert code == 0
        assert b"polyline" in out.read_bytes()

    def test_mixed_without_flags_fails(self, mixed_files, tmp_path):
        code = main([
            "create", *args_for(mixed_files), "--out", str(tmp_path / "n.svg"),
        ])
        assert code == 1

    def test_rules_json(self, catbin_files, tmp_path):
        out = tmp_path / "rules.json"
        code = main([
            "create", *args_for(catbin_files, "--shap", str(catbin_files["shap"])),
            "--format", "rules-json", "--out", str(out),
        ])
        assert code == 0
        rules = json.loads(out.read_text())
        assert [r["assignments"] for r in rules["positive"]] == [
            [["A", "1"]], [["A", "0"], ["B", "1"]],
        ]

    def test_layout_json(self, catbin_files, tmp_path):
        out = tmp_path / "layout.json"
        code = main([
            "create", *args_for(catbin_files), "--prob",
            "--format", "layout-json", "--out", str(out),
        ])
        assert code == 0
        layout = json.loads(out.read_text())
        assert layout["kind"] == 2
        assert [p["role"] for p in layout["panels"]] == ["tile", "output"]

    def test_identical_runs_identical_bytes(self, catbin_files, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        for path in (a, b):
            assert main([
                "create", *args_for(catbin_files, "--shap", str(catbin_files["shap"])),
                "--prob", "--out", str(path),
            ]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestRead:
    def test_positive_rule(self, catbin_files, capsys):
        code = main(["read", *args_for(catbin_files), "A=1", "B=0"])
        assert code == 0
        out = capsys.readouterr().out
        assert "positive" in out and "A=1" in out

    def test_tabular_read(self, mixed_files, capsys):
        code = main([
            "read", *args_for(mixed_files), "--prob", "A=1", "B=1", "q=17",
        ])
        assert code == 0
        assert "0.65" in capsys.readouterr().out

    def test_json_trace(self, catbin_files, capsys):
        code = main(["read", *args_for(catbin_files), "--json", "A=0", "B=0"])
        assert code == 0
        trace = json.loads(capsys.readouterr().out)
        assert trace["polarity"] == "negative"

    def test_missing_assignment(self, catbin_files):
        assert main(["read", *args_for(catbin_files), "A=1"]) == 2

    def test_unknown_feature(self, catbin_files):
        assert main(["read", *args_for(catbin_files), "A=1", "Z=0"]) == 2

    def test_malformed_assignment(self, catbin_files):
        assert main(["read", *args_for(catbin_files), "A:1", "B=0"]) == 2

    def test_numeric_out_of_range(self, mixed_files):
        code = main(["read", *args_for(mixed_files), "--prob", "A=1", "B=1", "q=99"])
        assert code == 1


class TestUsage:
    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_unwritable_output_path(self, catbin_files, tmp_path):
        code = main([
            "create", *args_for(catbin_files),
            "--out", str(tmp_path / "missing-dir" / "n.svg"),
        ])
        assert code == 2

    def test_prob_and_estimate_conflict(self, catbin_files, tmp_path):
        code = main([
            "create", *args_for(catbin_files), "--prob", "--estimate",
            "--out", str(tmp_path / "n.svg"),
        ])
        assert code == 2
