import csv
import json
from pathlib import Path

import pytest
import yaml

from dyadlab.cli import main
from dyadlab.config import ConfigError, ExperimentConfig, dump_config, load_config

CONFIGS = Path(__file__).resolve().parent.parent / "scripts" / "configs"


def write(tmp_path, data, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data) if name.endswith(".yaml") else json.dumps(data))
    return path


class TestConfig:
    def test_round_trip_yaml_and_json(self, tmp_path):
        cfg = load_config(CONFIGS / "random_tail.yaml")
        for name in ("a.yaml", "a.json"):
            dump_config(cfg, tmp_path / name)
            again = load_config(tmp_path / name)
            assert again.to_dict() == cfg.to_dict()

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown"):
            load_config(write(tmp_path, {"modle": {"n": 1}}))

    def test_missing_weights_file(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            load_config(write(tmp_path, {"weights": {"file": "nope.json"}}))

    def test_weights_file(self, tmp_path):
        (tmp_path / "w.json").write_text(json.dumps({"omega": [[1, 4], [1, 1]], "v": [1, 2]}))
        cfg = load_config(write(tmp_path, {"model": {"n": 1, "K": 1}, "weights": {"file": "w.json"}}))
        W = cfg.build_weights(cfg.build_model())
        assert W.v.tolist() == [1.0, 2.0]

    def test_generator_is_seeded(self, tmp_path):
        cfg = ExperimentConfig.from_dict({"weights": {"generator": {"seed": 3, "L": 1.0}}})
        m = cfg.build_model()
        assert (cfg.build_weights(m).v == cfg.build_weights(m).v).all()

    def test_exact_strings(self):
        cfg = ExperimentConfig.from_dict({"model": {"n": 1, "K": 1}, "mode": "exact",
                                          "weights": {"omega": [["1", "4"], [1, 1]], "v": ["1/2", 2]}})
        W = cfg.build_weights(cfg.build_model())
        assert str(W.v[0]) == "1/2"


class TestCommands:
    def test_trivial_verify(self, tmp_path):
        code = main(["verify", "--config", str(CONFIGS / "trivial.yaml"), "--out", str(tmp_path)])
        assert code == 0
        rows = list(csv.DictReader((tmp_path / "verify.csv").open()))
        assert rows and all(r["pass"] == "true" for r in rows if "stated" not in r["check"] and "no prod" not in r["check"])
        doc = json.loads((tmp_path / "verify.json").read_text())
        assert doc["schema"] == 1
        ap = next(r for r in doc["results"] if r["suite"] == "theorem_ap")
        assert ap["constants"]["A_p_vector"]["value"] == pytest.approx(1.0)

    def test_constants_report(self, tmp_path):
        assert main(["constants", "--config", str(CONFIGS / "ap_instance.yaml"), "--out", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "constants.json").read_text())
        ap = next(r for r in doc["results"] if r["name"] == "A_p_vector")
        assert ap["value"] == pytest.approx(1.185854, abs=1e-6)
        assert ap["attaining_cube"] == "0:0"

    def test_constants_exact_mode(self, tmp_path):
        assert main(["constants", "--config", str(CONFIGS / "ap_instance.yaml"), "--out", str(tmp_path),
                     "--mode", "exact"]) == 0
        doc = json.loads((tmp_path / "constants.json").read_text())
        ap = next(r for r in doc["results"] if r["name"] == "A_p_vector")
        assert ap["exact"] == "(5/8)^(1/2)*(3/2)"

    def test_bad_exponent(self, tmp_path, capsys):
        assert main(["verify", "--config", str(CONFIGS / "bad_exponent.yaml"), "--out", str(tmp_path)]) == 2
        assert "exponent must exceed 1" in capsys.readouterr().err

    def test_unparsable(self, tmp_path):
        path = tmp_path / "x.yaml"
        path.write_text("model: [unclosed")
        assert main(["constants", "--config", str(path)]) == 2

    def test_search(self, tmp_path):
        assert main(["search", "--config", str(CONFIGS / "ap_instance.yaml"), "--out", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "search.json").read_text())
        weak, strong = doc["results"]
        assert weak["lower_bound"] == pytest.approx(weak["upper_bound"], rel=1e-9)
        assert strong["lower_bound"] <= strong["upper_bound"]
        assert "witness" in strong

    def test_bench(self, tmp_path):
        path = write(tmp_path, {"bench": {"n": 1, "K": [6, 8], "repeats": 1}})
        assert main(["bench", "--config", str(path), "--out", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "bench.json").read_text())
        assert {r["op"] for r in doc["results"]} == {"aggregate", "maximal", "sp_testing"}
        assert all(r["ns_per_cube"] > 0 for r in doc["results"])

    def test_failure_names_check_and_witness(self, tmp_path, capsys):
        # a negative tolerance makes every equality-tight check fail
        path = write(tmp_path, {"model": {"n": 1, "K": 2}, "suites": ["holder"], "samples": 10,
                                "tolerances": {"rel": -0.5}})
        assert main(["verify", "--config", str(path), "--out", str(tmp_path)]) == 1
        err = capsys.readouterr().err
        assert "FAILED holder" in err and "witness file:" in err
        text = (tmp_path / "verify.txt").read_text()
        assert "witness file: " + str(tmp_path / "witness_holder.json") in text
        assert (tmp_path / "witness_holder.json").stat().st_size > 2

    def test_threads_do_not_change_json(self, tmp_path):
        outs = []
        for threads in ("1", "8"):
            out = tmp_path / threads
            assert main(["verify", "--config", str(CONFIGS / "random_tail.yaml"), "--out", str(out),
                         "--threads", threads]) == 0
            doc = json.loads((out / "verify.json").read_text())
            doc.pop("timestamp")
            outs.append(json.dumps(doc, sort_keys=True))
        assert outs[0] == outs[1]
