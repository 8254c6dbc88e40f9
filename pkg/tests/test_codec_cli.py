import io
import json
import subprocess
import sys

import pytest

from fadzeta import catalog, codec
from fadzeta import systems as sy
from fadzeta.cli import main

from conftest import F_C, SIGMA_F5


@pytest.mark.parametrize("name", sorted(catalog.EXAMPLES))
def test_catalog_round_trip(name):
    d = catalog.load(name)
    text = codec.dumps(d)
    assert codec.dumps(codec.loads(text)) == text
    assert codec.loads(text) == d


def test_big_integers_travel_as_strings():
    d = sy.RationalSInteger(2**60 + 1, ())
    enc = codec.encode(d)
    assert enc["xi"] == str(2**60 + 1)
    assert codec.decode(enc) == d


def test_input_only_kinds():
    assert codec.decode({"kind": "ree", "a": 0}) == sy.ree_descriptor(0)
    assert codec.decode({"kind": "frobenius", "q": 3, "degrees": [1, 2]}) == sy.frobenius_descriptor(3, (1, 2))


def test_vector_group_accepts_plain_coefficients():
    d = codec.decode({"kind": "vector_group", "p": 5, "sigma": [[[1], [0, 1]], [[2], [0, 1]]]})
    assert d == sy.VectorGroup(5, 1, None, SIGMA_F5)


@pytest.mark.parametrize(
    "data, where",
    [
        ({"kind": "torus", "p": 5, "M": [[1, "x"], [0, 1]]}, "$.M[0][1]"),
        ({"kind": "torus", "p": 5}, "$"),
        ({"kind": "nope"}, "$.kind"),
        ({"kind": "finite", "cycles": [[1]]}, "$.cycles[0]"),
        ({"kind": "raw_fad", "params": {"A": [[2]], "r": {"period": 2, "values": [[1, "a/b"]]}}}, "$.params.r.values[0][1]"),
        ({"kind": "product", "factors": [{"kind": "torus", "p": 5, "M": [[1, 2]]}]}, "$.factors[0].M"),
    ],
)
def test_schema_errors_carry_location(data, where):
    with pytest.raises(codec.SchemaError) as e:
        codec.decode(data)
    assert e.value.where == where


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_fixcount(capsys):
    code, out, _ = _run(["fixcount", "--input", "@ga2_f5_pair", "--range", "1..4"], capsys)
    assert code == 0
    assert [v["f"] for v in json.loads(out)["values"]] == [1, 1, 25, 25]


def test_cli_zeta_closed(capsys):
    code, out, _ = _run(["zeta", "--input", "@doubling_map", "--closed"], capsys)
    assert code == 0 and out.strip() == "(1 - z)/(1 - 2*z)"


def test_cli_zeta_json(capsys, tmp_path):
    f = tmp_path / "d.json"
    f.write_text(json.dumps({"kind": "torus", "p": 5, "M": [list(r) for r in F_C]}))
    code, out, _ = _run(["zeta", "--input", str(f), "--max", "4"], capsys)
    data = json.loads(out)
    assert code == 0 and data["form"] == "non_holonomic" and data["series"] == ["1", "1", "6", "6", "21"]


def test_cli_detector(capsys):
    code, out, _ = _run(["detector", "--input", "@torus_f5_c"], capsys)
    data = json.loads(out)
    assert code == 0 and data["group"] == "Z/3Z x T x Z_5" and data["t_flag"] == "exact"


def test_cli_classify(capsys):
    code, out, _ = _run(["classify", "--input", "@torus_f5_frobenius"], capsys)
    data = json.loads(out)
    assert data["class"] == "Finite" and data["limits"] == ["625/624"] and data["theta"] == "3/4"


def test_cli_plot_csv(capsys):
    code, out, _ = _run(["plot", "--input", "@torus_f5_frobenius", "--max", "30", "--precision", "64"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "N,pi,Pi_lo,Pi_hi" and len(lines) == 31
    N, pi, lo, hi = lines[20].split(",")
    assert N == "20" and float(lo) <= float(hi) and abs(float(lo) - 625 / 624) < 1e-3


def test_cli_orbits_json(capsys):
    code, out, _ = _run(["orbits", "--input", "@full_shift_2", "--max", "4"], capsys)
    rows = json.loads(out)["rows"]
    assert [r["P"] for r in rows] == [2, 1, 2, 3]


def test_cli_realizable(capsys):
    code, out, _ = _run(["realizable", "--input", "@half_five_power", "--max", "50"], capsys)
    assert code == 0 and json.loads(out)["passed"] is True


def test_cli_oracle(capsys):
    code, out, _ = _run(["oracle", "--input", "@elliptic_f3_m2_ordinary", "--range", "1..4"], capsys)
    assert code == 0 and json.loads(out)["all_agree"] is True


def test_cli_equiv(capsys, tmp_path):
    f = tmp_path / "pair.json"
    f.write_text(json.dumps([{"kind": "torus", "p": 5, "M": [[2, 1], [1, 1]]}, {"kind": "torus", "p": 5, "M": [[1, 1], [1, 2]]}]))
    code, out, _ = _run(["equiv", "--input", str(f)], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "equivariantly_isogenous"


def test_cli_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = _run(["fixcount", "--input", "@full_shift_2", "--n", "3", "--output", str(target)], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["values"] == [{"n": 3, "f": 8}]


def test_cli_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO('{"kind": "finite", "cycles": [[1, 1], [2, 3]]}'))
    code, out, _ = _run(["fixcount", "--input", "-", "--n", "2"], capsys)
    assert code == 0 and json.loads(out)["values"][0]["f"] == 7


def test_cli_list_examples(capsys):
    code, out, _ = _run(["--list-examples"], capsys)
    assert code == 0 and "torus_f5_c" in out.split()


def test_cli_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "torus", "p": 5, "M": [[1, "x"], [0, 1]]}')
    code, _, err = _run(["fixcount", "--input", str(bad)], capsys)
    assert code == 2 and "$.M[0][1]" in err
    domain = tmp_path / "domain.json"
    domain.write_text('{"kind": "torus", "p": 5, "M": [[1]]}')
    code, _, err = _run(["fixcount", "--input", str(domain)], capsys)
    assert code == 1 and "NotConfined" in err
    code, _, _ = _run(["fixcount"], capsys)
    assert code == 2
    code, _, _ = _run(["nonsense"], capsys)
    assert code == 2
    code, _, err = _run(["detector", "--input", "@doubling_map", "--format", "csv"], capsys)
    assert code == 2


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "fadzeta.cli", "fixcount", "--input", "@full_shift_2", "--n", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["values"][0]["f"] == 4
