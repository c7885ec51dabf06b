import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from nodalcones.cli import main

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_CASES = {
    "nodal_cubic-26": ["nodal", "cubic-26"],
    "nodal_cubic-20": ["nodal", "cubic-20"],
    "ample_k3-hilb-4": ["ample", "k3-hilb-4"],
    "chambers_cubic-8": ["chambers", "cubic-8"],
    "lattice_cubic-14": ["lattice", "cubic-14"],
    "zero_k3-hilb-2": ["zero", "k3-hilb-2"],
    "fano_cubic-26": ["fano", "cubic-26"],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def leaves(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from leaves(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from leaves(v)
    else:
        yield obj


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_json_golden(capsys, name):
    code, out, _ = run(capsys, "--json", *GOLDEN_CASES[name])
    assert code == 0
    assert out == (GOLDEN / f"{name}.json").read_text()


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_text_carries_same_numbers(capsys, name):
    _, out_json, _ = run(capsys, "--json", *GOLDEN_CASES[name])
    _, out_text, _ = run(capsys, *GOLDEN_CASES[name])
    text_tokens = set(re.findall(r"-?\d+(?:/\d+)?", out_text))
    for leaf in leaves(json.loads(out_json)):
        if isinstance(leaf, bool) or leaf is None:
            continue
        if isinstance(leaf, int):
            assert str(leaf) in text_tokens
        elif re.fullmatch(r"-?\d+/\d+", str(leaf)):
            assert leaf in text_tokens


def test_scrolls_tsv_golden(capsys):
    code, out, _ = run(capsys, "scrolls", "--nmax", "11", "--tsv")
    assert code == 0
    assert out == (GOLDEN / "scrolls_11.tsv").read_text()


def test_deterministic_json(capsys):
    _, a, _ = run(capsys, "--json", "chambers", "cubic-12")
    _, b, _ = run(capsys, "--json", "chambers", "cubic-12")
    assert a == b


def test_global_flags_after_subcommand(capsys):
    _, a, _ = run(capsys, "--json", "--bound", "300", "nodal", "cubic-14")
    _, b, _ = run(capsys, "nodal", "cubic-14", "--json", "--bound", "300")
    assert a == b and json.loads(a)["params"]["bound"] == 300


def test_lattice_beauville(capsys):
    code, out, _ = run(capsys, "--json", "lattice", "beauville")
    res = json.loads(out)["results"]
    assert code == 0 and res["rank"] == 23 and res["signature"] == [3, 20]
    assert res["discriminant_group"] == "Z/2Z"


def test_disc_group(capsys):
    _, out, _ = run(capsys, "--json", "disc-group", "beauville")
    assert json.loads(out)["results"]["q_values"] == ["3/2"]


def test_nodal_degrees(capsys):
    _, out, _ = run(capsys, "--json", "nodal", "cubic-14")
    nodal = json.loads(out)["results"]["nodal"]
    assert {(n["display"], n["degree"]) for n in nodal} == {("2g-τ", 4), ("2τ-g", 5)}
    assert all("conjectural" in w for w in json.loads(out)["warnings"])
    _, out, _ = run(capsys, "--json", "nodal", "k3-hilb-8")
    assert [n["display"] for n in json.loads(out)["results"]["nodal"]] == ["e"]


def test_ample_rays(capsys):
    _, out, _ = run(capsys, "--json", "ample", "k3-hilb-4")
    amp = json.loads(out)["results"]["ample_cone"]
    assert {amp["ray_lo"]["display"], amp["ray_hi"]["display"]} == {"f4", "3f4-4e"}


def test_chambers_flag(capsys):
    _, out, _ = run(capsys, "--json", "chambers", "cubic-8")
    chs = json.loads(out)["results"]["chambers"]
    assert len(chs) == 2 and sum(c["contains_g"] for c in chs) == 1


def test_zero(capsys):
    _, out, _ = run(capsys, "--json", "zero", "k3-hilb-2")
    assert "f2-e" in [r["display"] for r in json.loads(out)["results"]]


def test_unirat_refusal_and_warning(capsys):
    code, _, err = run(capsys, "unirat", "5", "2")
    assert code == 4 and "isolated singularities" in err
    code, _, err = run(capsys, "unirat", "5", "2", "--assume-not-cone")
    assert code == 4
    code, out, _ = run(capsys, "--json", "unirat", "5", "2", "--assume-not-cone", "--assume-isolated")
    data = json.loads(out)
    assert code == 0 and data["results"]["degree"] == 1
    assert any("two ordinary double points" in w for w in data["warnings"])
    code, _, _ = run(capsys, "unirat", "4", "1", "--assume-not-cone", "--assume-isolated")
    assert code == 2


def test_rr(capsys):
    _, out, _ = run(capsys, "--json", "rr", "2")
    assert json.loads(out)["results"]["chi"] == 6
    assert run(capsys, "rr", "3")[0] == 2


def test_unknown_preset_lists_registry(capsys):
    code, _, err = run(capsys, "lattice", "nope")
    assert code == 2
    for name in ["k3-hilb-2", "k3-hilb-2n:<n>", "cubic-26", "sigma-F4", "beauville"]:
        assert name in err


def test_sigma_presets_lattice_only(capsys):
    code, out, _ = run(capsys, "--json", "lattice", "sigma-F1")
    assert code == 0 and json.loads(out)["results"]["gram"] == [[-2, 2], [2, -10]]
    assert run(capsys, "nodal", "sigma-F1")[0] == 2


def test_k3_hilb_2n(capsys):
    code, out, _ = run(capsys, "--json", "nodal", "k3-hilb-2n:3")
    assert code == 0 and json.loads(out)["config"]["name"] == "k3-hilb-2n:3"
    assert run(capsys, "nodal", "k3-hilb-2n:x")[0] == 2


def test_instability_exit_code(capsys):
    code, _, err = run(capsys, "--bound", "60", "nodal", "cubic-26")
    assert code == 3 and "--bound 240" in err


def test_iteration_cap_exit_code(capsys):
    code, _, err = run(capsys, "--max-iters", "0", "reduce", "cubic-8", "--", "1,2")
    assert code == 3 and "partial word" in err


def test_reduce(capsys):
    _, out, _ = run(capsys, "--json", "reduce", "cubic-8", "--", "1,2")
    res = json.loads(out)["results"]
    assert res["reduced"]["raw"] == [1, 0] and res["length"] == 1


def test_decompose_and_ruling(capsys):
    _, out, _ = run(capsys, "--json", "decompose", "k3-hilb-4", "--", "12,-17")
    assert json.loads(out)["results"]["decomposable"] is True
    _, out, _ = run(capsys, "--json", "ruling", "cubic-26", "5", "17")
    res = json.loads(out)["results"]
    assert res["rho"]["display"] == "5g-2τ" and res["verdict"] == "outside"


def test_pell(capsys):
    _, out, _ = run(capsys, "--json", "pell", "2", "-2")
    res = json.loads(out)["results"]
    assert res["matrix"] == [[3, 2], [4, 3]] and [2, 3] in res["seeds"]


def test_fano_custom(capsys):
    _, out, _ = run(capsys, "--json", "fano", "--b", "4", "--tsq", "10")
    assert json.loads(out)["results"]["gram"] == [[6, 8], [8, 6]]
    assert run(capsys, "fano")[0] == 2
    assert run(capsys, "fano", "--b", "0", "--tsq", "2")[0] == 2


def test_tsv_rejected_elsewhere(capsys):
    assert run(capsys, "--tsv", "nodal", "cubic-8")[0] == 2
    code, out, _ = run(capsys, "--tsv", "enumerate", "k3-hilb-8", "--square", "-10", "--bound", "50")
    assert code == 0 and out.splitlines()[1:] == ["1\t-3\t-10\t1\t", "1\t3\t-10\t1\t"]


def test_scroll_row_query(capsys):
    _, out, _ = run(capsys, "--json", "scrolls", "--row", "8,5")
    row = json.loads(out)["results"][0]
    assert row["disc"] == 32 and any("saturation" in w for w in row["warnings"])


def test_custom_lattice_files(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"rank": 2, "gram": [[6, 2], [2, -2]], "labels": ["g", "t"], "even": True, "profile": [2, 1]}))
    code, out, _ = run(capsys, "--json", "nodal", str(good), "--polarization", "1,0")
    assert code == 0
    assert {n["raw"][0] for n in json.loads(out)["results"]["nodal"]} == {0, 1}
    assert run(capsys, "nodal", str(good))[0] == 2  # no polarization
    assert run(capsys, "lattice", str(good))[0] == 0

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rank": 2, "gram": [[2, 1], [0, 2]]}))
    code, _, err = run(capsys, "lattice", str(bad))
    assert code == 2 and "(1,2)" in err and "(2,1)" in err

    broken = tmp_path / "broken.json"
    broken.write_text('{"rank": 2,\n "gram": [[2, 1] [1, 2]]}')
    code, _, err = run(capsys, "lattice", str(broken))
    assert code == 2 and "line 2" in err

    noninteger = tmp_path / "frac.json"
    noninteger.write_text(json.dumps({"gram": [[2, 0.5], [0.5, 2]]}))
    code, _, err = run(capsys, "lattice", str(noninteger))
    assert code == 2 and "(1,2)" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nodalcones", "--json", "rr", "0"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["results"]["chi"] == 3
