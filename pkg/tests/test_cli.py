import io
import json
import subprocess
import sys

import pytest

from ultraislands import cli
from ultraislands import islands as isl
from ultraislands.presets import PRESETS, UnknownPreset, load_config, preset
from ultraislands.parsing import ParseError


def invoke(argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.run(argv, stdout=out)
    return code, json.loads(out.getvalue())


def preset_text(name):
    out = io.StringIO()
    assert cli.run(["preset", name], stdout=out) == 0
    return out.getvalue()


class TestSimpleCommands:
    def test_gauss_norm(self):
        code, rep = invoke(["gauss-norm", "--prime", "3", "--ram", "1", "--fn", "(z^2+3*z+27)/(1)", "--center", "0", "--logr", "1"])
        assert code == 0
        assert rep["result"] == {"valuation": "2"}
        assert rep["schema"] == "ultrametric-islands/1" and rep["exact"] is True
        assert rep["operation"] == "gauss-norm"

    def test_pushforward(self):
        code, rep = invoke(["pushforward", "--prime", "3", "--fn", "z^2 + 3", "--logr", "1"])
        assert code == 0 and rep["result"]["image"] == "nu(3, p^-(2))"

    def test_profile(self):
        code, rep = invoke(["profile", "--prime", "3", "--fn", "z*(z-3)", "--qlo", "0"])
        assert code == 0
        assert [pc["slope"] for pc in rep["result"]["pieces"]] == [2, 1]

    def test_g_profile(self):
        code, rep = invoke(["profile", "--prime", "3", "--fn", "z", "--alpha", "2", "--qlo", "0"])
        assert [pc["slope"] for pc in rep["result"]["pieces"]] == [1]

    def test_counts(self):
        code, rep = invoke(["counts", "--prime", "3", "--fn", "z^2", "--value", "ram"])
        assert rep["result"] == {"count": 1}
        code, rep = invoke(["counts", "--prime", "3", "--fn", "1/z^3", "--value", "inf"])
        assert rep["result"] == {"count": 3}

    def test_L_and_G(self):
        _, rep = invoke(["L", "--prime", "3", "--fn", "z/27", "--logr", "1"])
        assert rep["result"] == {"valuation": "2"}
        _, rep = invoke(["G", "--prime", "3", "--fn", "z", "--alpha", "2", "--logr", "2"])
        assert rep["result"] == {"valuation": "2"}

    def test_separates(self):
        _, rep = invoke(["separates", "--prime", "3", "--logr", "-2", "--items", "1/9; 2/9"])
        assert rep["result"]["separates"] is True
        _, rep = invoke(["separates", "--prime", "3", "--items", "D(0, p^0)"])
        assert rep["result"]["separates"] is False

    def test_ahlfors(self):
        _, rep = invoke(["ahlfors-radius", "--prime", "3", "--islands", "D(0, p^0); D(1/9, p^0); D(2/9, p^0); comp Dbar(0, p^-(-4))"])
        assert rep["result"] == {"valuation": "2"}

    def test_verify(self):
        _, rep = invoke(["verify", "--prime", "3", "--fn", "z/27", "--U", "D(3, p^-3)", "--V", "D(1/9, p^0)"])
        assert rep["result"] == {"one_to_one_onto": True}


class TestErrors:
    def test_parse_error(self):
        code, rep = invoke(["gauss-norm", "--prime", "3", "--fn", "z^^2"])
        assert code == 3 and rep["error_kind"] == "ParseError"

    def test_missing_prime(self):
        code, _ = invoke(["gauss-norm", "--fn", "z"])
        assert code == 3

    def test_bad_prime(self):
        code, _ = invoke(["gauss-norm", "--prime", "4", "--fn", "z"])
        assert code == 3

    def test_unknown_preset(self):
        code, rep = invoke(["preset", "nope"])
        assert code == 3 and "unknown preset" in rep["error"]
        with pytest.raises(UnknownPreset):
            preset("nope")

    def test_bad_config(self, monkeypatch):
        code, _ = invoke(["constants"], stdin="{not json", monkeypatch=monkeypatch)
        assert code == 3

    def test_unknown_command(self):
        assert cli.run(["frobnicate"], stdout=io.StringIO()) == 3

    def test_undecided_exit(self, monkeypatch):
        monkeypatch.setattr(isl, "check_hypotheses", lambda *a, **k: isl.HypothesisReport("Undecided", True))
        code, rep = invoke(["check-hypotheses"], stdin=preset_text("linear-positive"), monkeypatch=monkeypatch)
        assert code == 2 and rep["result"]["status"] == "Undecided"


class TestPresetPipelines:
    def test_remark5_find(self, monkeypatch):
        code, rep = invoke(["find-islands"], stdin=preset_text("remark5"), monkeypatch=monkeypatch)
        assert code == 1
        hyp = rep["result"]["hypotheses"]
        assert rep["result"]["status"] == "HypothesisAFailed"
        assert hyp["f_sharp"] == hyp["C1"] == {"valuation": "-3"}

    def test_warp_check(self, monkeypatch):
        code, rep = invoke(["check-hypotheses"], stdin=preset_text("warp-p3"), monkeypatch=monkeypatch)
        assert code == 1
        assert rep["result"]["status"] == "HypothesisBFailed" and "witness" in rep["result"]

    def test_warp_audit_capability(self, monkeypatch):
        code, rep = invoke(["find-islands", "--audit"], stdin=preset_text("warp-p3"), monkeypatch=monkeypatch)
        assert rep["result"]["status"] != "Found"
        assert code == cli._STATUS_EXIT[rep["result"]["status"]]

    def test_positive_find(self, monkeypatch):
        code, rep = invoke(["find-islands"], stdin=preset_text("linear-positive"), monkeypatch=monkeypatch)
        assert code == 0 and rep["result"]["status"] == "Found"

    def test_global_flag(self, monkeypatch):
        code, rep = invoke(["find-islands", "--global"], stdin=preset_text("linear-positive"), monkeypatch=monkeypatch)
        assert code == 0 and rep["result"]["trace"][0]["step"] == "global"

    def test_config_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(preset_text("linear-positive"))
        code, rep = invoke(["constants", "--config", str(path)])
        assert code == 0 and rep["result"]["mu"] == {"a": "2/3", "b": "0"}

    def test_flags_override_config(self, monkeypatch):
        code, rep = invoke(["check-hypotheses", "--fn", "z/3"], stdin=preset_text("linear-positive"), monkeypatch=monkeypatch)
        assert rep["inputs"]["fn"] == "z/3"

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_echo_roundtrip(self, name, monkeypatch):
        _, rep = invoke(["check-hypotheses"], stdin=preset_text(name), monkeypatch=monkeypatch)
        assert rep["inputs"] == preset(name)

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_matches_library(self, name, monkeypatch):
        L = load_config(preset(name))
        _, rep = invoke(["check-hypotheses"], stdin=preset_text(name), monkeypatch=monkeypatch)
        assert rep["result"] == isl.check_hypotheses(L.f, L.cfg, L.seeds).to_dict()
        _, rep = invoke(["constants"], stdin=preset_text(name), monkeypatch=monkeypatch)
        assert rep["result"] == isl.theorem_constants(L.cfg).to_dict()


class TestPresets:
    def test_remark5_shape(self):
        d = preset("remark5")
        assert d["fn"] == "z/27" and d["prime"] == 3

    def test_warp_shape(self):
        d = preset("warp-p3")
        assert (d["prime"], d["ram_index"]) == (3, 3)
        assert d["seeds"] == ["3", "1 + pi^4", "2 + pi^4"]
        assert d["nu1"] == "nu(0, p^0)"

    def test_modified_differs_in_first_factor(self):
        a, b = preset("warp-p3"), preset("warp-p3-modified")
        assert a["fn"] != b["fn"] and a["islands"] == b["islands"]

    def test_read_only(self):
        d = preset("remark5")
        d["fn"] = "z"
        assert preset("remark5")["fn"] == "z/27"

    def test_load_errors(self):
        with pytest.raises(ParseError):
            load_config({"fn": "z"})
        with pytest.raises(ParseError):
            load_config({"prime": 3, "islands": []})
        with pytest.raises(ParseError):
            load_config([1, 2])


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "ultraislands.cli", "gauss-norm", "--prime", "3", "--fn", "z", "--logr", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"] == {"valuation": "1"}
