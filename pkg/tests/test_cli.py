import json
from importlib import resources

import jsonschema
import pytest

from hydrogen_ladder.cli import main
from hydrogen_ladder.export import csv_text, format_complex, load_schema, svg_line_chart


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_spectrum_csv(tmp_path):
    assert run(tmp_path, "spectrum", "--n-max", "3") == 0
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "n,energy_ev,degeneracy"
    assert len(lines) == 4
    e1 = float(lines[1].split(",")[1])
    assert -13.7 < e1 < -13.5


def test_spectrum_z_scaling(tmp_path):
    run(tmp_path / "a", "spectrum", "--n-max", "4", "--format", "json")
    run(tmp_path / "b", "spectrum", "--n-max", "4", "--format", "json", "--Z", "3")
    a = read_json(tmp_path / "a" / "spectrum.json")["rows"]
    b = read_json(tmp_path / "b" / "spectrum.json")["rows"]
    for ra, rb in zip(a, b):
        assert abs(rb["energy_ev"] / ra["energy_ev"] - 9) < 1e-12


def test_spectrum_single_row(tmp_path):
    run(tmp_path, "spectrum", "--n-max", "1")
    assert len((tmp_path / "spectrum.csv").read_text().splitlines()) == 2


def test_radial_golden_at_bohr_radius(tmp_path):
    from hydrogen_ladder import AtomConfig

    a0 = AtomConfig().a0
    assert run(tmp_path, "radial", "--n", "1", "--l", "0", "--samples", "3", "--r-max", str(2 * a0)) == 0
    rows = (tmp_path / "radial_n1_l0.csv").read_text().splitlines()
    r, R, _ = map(float, rows[2].split(","))
    assert abs(r - a0) < 1e-15
    assert abs(R - 2 * 2.718281828459045**-1 * a0**-1.5) < 1e-12 * a0**-1.5


def test_matrix_aplus(tmp_path):
    run(tmp_path, "matrix", "--kind", "Aplus", "--l", "0", "--n-max", "4", "--format", "json")
    doc = read_json(tmp_path / "matrix_Aplus_l0_nmax4.json")
    sub = [doc["re"][i + 1][i] for i in range(3)]
    assert sub == pytest.approx([2**0.5, 6**0.5, 2 * 3**0.5], abs=1e-15)


def test_matrix_complex_csv(tmp_path):
    run(tmp_path, "matrix", "--kind", "rho_p_rho", "--l", "1", "--n-max", "4")
    rows = (tmp_path / "matrix_rho_p_rho_l1_nmax4.csv").read_text().splitlines()
    assert rows[0] == "n,n=2,n=3,n=4"
    assert rows[1].split(",")[2] == "0.0+1.0i"


def test_bessel_m_golden(tmp_path):
    run(tmp_path, "bessel-m", "--orders", "0", "--x", "1.0")
    rows = (tmp_path / "bessel_m.csv").read_text().splitlines()
    assert rows[0] == "x,M0"
    assert abs(float(rows[1].split(",")[1]) - 0.9405884429) < 1e-10


def test_bessel_m_diff(tmp_path):
    assert run(tmp_path, "bessel-m", "--diff") == 0
    assert len((tmp_path / "bessel_m_diff.csv").read_text().splitlines()) == 307


def test_coherent_polar_and_cartesian_agree(tmp_path):
    run(tmp_path / "p", "coherent", "--l", "1", "--z-abs", "2", "--z-arg", "0", "--format", "json")
    run(tmp_path / "c", "coherent", "--l", "1", "--z-re", "2", "--format", "json")
    a = read_json(tmp_path / "p" / "coherent_l1.json")
    b = read_json(tmp_path / "c" / "coherent_l1.json")
    assert a["coefficients"] == b["coefficients"]
    assert abs(a["uncertainty"]["product"] - a["mean_occupation"]) < 1e-8


@pytest.mark.parametrize(
    "args,schema,name",
    [
        (["spectrum", "--n-max", "5"], "spectrum", "spectrum.json"),
        (["radial", "--n", "3", "--l", "1", "--samples", "20"], "radial", "radial_n3_l1.json"),
        (["matrix", "--kind", "p_rho", "--l", "0", "--n-max", "6"], "matrix", "matrix_p_rho_l0_nmax6.json"),
        (["coherent", "--l", "0", "--z-re", "1", "--z-im", "1", "--samples", "20"], "coherent", "coherent_l0.json"),
        (["bessel-m", "--orders", "0,3"], "bessel_m", "bessel_m.json"),
        (["validate"], "report", "validation_fast.json"),
    ],
)
def test_json_outputs_match_schema_and_are_deterministic(tmp_path, args, schema, name):
    assert run(tmp_path / "1", *args, "--format", "json") == 0
    assert run(tmp_path / "2", *args, "--format", "json") == 0
    first = (tmp_path / "1" / name).read_bytes()
    assert first == (tmp_path / "2" / name).read_bytes()
    jsonschema.validate(json.loads(first), load_schema(schema))


@pytest.mark.parametrize(
    "args",
    [
        ["spectrum", "--n-max", "4", "--plot"],
        ["radial", "--n", "4", "--l", "2", "--plot"],
        ["coherent", "--l", "2", "--z-abs", "1.5", "--z-arg", "1", "--plot"],
        ["bessel-m", "--plot"],
        ["validate"],
    ],
)
def test_csv_outputs_deterministic(tmp_path, args):
    run(tmp_path / "1", *args)
    run(tmp_path / "2", *args)
    files = sorted(p.name for p in (tmp_path / "1").iterdir())
    assert files
    for f in files:
        assert (tmp_path / "1" / f).read_bytes() == (tmp_path / "2" / f).read_bytes(), f
        if f.endswith(".csv"):
            assert not (tmp_path / "1" / f).read_text().splitlines()[0][0].isdigit()


def test_plot_is_svg(tmp_path):
    run(tmp_path, "radial", "--n", "2", "--l", "0", "--plot")
    text = (tmp_path / "radial_n2_l0_R.svg").read_text()
    assert text.startswith("<?xml") and 'version="1.1"' in text and text.rstrip().endswith("</svg>")


def test_output_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("HLA_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["spectrum", "--n-max", "2", "--out", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "env" / "spectrum.csv").exists()
    assert not (tmp_path / "flag").exists()


def test_validate_fast_passes(tmp_path, capsys):
    assert run(tmp_path, "validate", "--level", "fast", "--format", "json") == 0
    doc = read_json(tmp_path / "validation_fast.json")
    assert doc["status"] == "pass"
    assert doc["summary"]["total"] >= 320
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)
    assert sum(n.startswith("bessel_m_table/") for n in names) == 306


def test_validate_fault_injection(tmp_path, capsys):
    text = resources.files("hydrogen_ladder").joinpath("data/bessel_m_table.csv").read_text()
    bad = text.replace("\n2.5,", "\n2.5,9", 1)  # corrupt M0(2.5)
    assert bad != text
    path = tmp_path / "bad.csv"
    path.write_text(bad)
    assert run(tmp_path, "validate", "--table", str(path)) == 1
    out = capsys.readouterr().out
    assert "FAIL  bessel_m_table/l=0/x=2.5" in out
    assert out.count("FAIL ") == 1


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["spectrum", "--bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["matrix", "--kind", "nope", "--l", "0"])
    assert info.value.code == 2
    assert run(tmp_path, "radial", "--n", "2", "--l", "2") == 2
    assert "n must be >= l + 1" in capsys.readouterr().err
    assert run(tmp_path, "spectrum", "--n-max", "0") == 2
    assert run(tmp_path, "matrix", "--kind", "N", "--l", "3", "--n-max", "4") == 2
    with pytest.raises(SystemExit) as info:
        main(["coherent", "--l", "0", "--z-re", "1", "--z-abs", "1"])
    assert info.value.code == 2


def test_export_helpers():
    assert format_complex(0.5 - 2j) == "0.5-2.0i"
    assert format_complex(1j) == "0.0+1.0i"
    assert csv_text(["a", "b"], [(1, 0.25)]) == "a,b\n1,0.25\n"
    svg = svg_line_chart([("s", [0, 1, 2], [0, 1, 0])], title="t & u")
    assert "t &amp; u" in svg
