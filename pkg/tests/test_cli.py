import json
import subprocess
import sys

import pytest

from clusterlab.cli import main
from clusterlab.core import replay
from clusterlab.scalar import from_json
from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    return _write


def test_c_pattern_text(capsys):
    code, out, _ = run(capsys, "c-pattern", "--type", "H3", "--format", "text", "--check-sign-coherence")
    assert code == 0
    assert "Size\n32\n" in out
    assert "finite, maximum depth = 6" in out
    assert "sign-coherent up to 7" in out


def test_c_pattern_text_without_coherence(capsys):
    _, out, _ = run(capsys, "c-pattern", "--type", "A2", "--format", "text")
    assert "Coherence" not in out
    assert out.rstrip().endswith("5")


def test_c_pattern_from_file(capsys, write):
    path = write("h3.json", [[0, "-[5]", "[5]"], ["[5]", 0, "-[5]"], ["-[5]", "[5]", 0]])
    code, out, _ = run(capsys, "c-pattern", "--input", path, "--depth", "7", "--verify")
    assert code == 0
    obj = json.loads(out)
    assert obj["size"] == 32 and obj["duality_failures"] == []


def test_json_round_trip(capsys, write):
    b = [[0, "-1/2"], [2, 0]]
    path = write("b.json", {"B": b, "D": [4, 1]})
    _, out, _ = run(capsys, "c-pattern", "--input", path, "--depth", "12")
    obj = json.loads(out)
    b0 = tuple(tuple(from_json(x) for x in r) for r in b)
    for cl in obj["classes"]:
        node = replay(b0, cl["word"])
        assert tuple(tuple(from_json(x) for x in r) for r in cl["C"]) == node.C
        assert tuple(tuple(from_json(x) for x in r) for r in cl["G"]) == node.G


def test_expect_coherent_exit_code(capsys, write):
    path = write("inc.json", [[0, "1/2"], ["-1/2", 0]])
    code, out, _ = run(capsys, "c-pattern", "--input", path, "--depth", "2", "--expect-coherent", "--format", "text")
    assert code == 2
    assert "incoherent [1, 2]" in out


def test_parse_error_location(capsys, write):
    path = write("bad.json", '[[0, 1],\n [1 0]]')
    code, _, err = run(capsys, "b-pattern", "--input", path, "--depth", "2")
    assert code == 1
    assert "bad.json:2:5" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "sk", "--input", "/nonexistent/x.json")
    assert code == 1 and "nonexistent" in err


def test_float_entries_rejected(capsys, write):
    path = write("f.json", [[0, 0.5], [-0.5, 0]])
    code, _, err = run(capsys, "b-pattern", "--input", path, "--depth", "1")
    assert code == 1 and "float" in err.lower()


def test_zero_b_pattern(capsys, write):
    path = write("zero2.json", [[0, 0], [0, 0]])
    code, out, _ = run(capsys, "b-pattern", "--input", path, "--depth", "3", "--format", "text")
    assert code == 0
    assert "Size\n1\n" in out


def test_depth_required_for_files(capsys, write):
    path = write("z.json", [[0, 0], [0, 0]])
    code, _, err = run(capsys, "b-pattern", "--input", path)
    assert code == 1 and "--depth" in err


def test_classify_example_quiver(capsys):
    code, out, _ = run(capsys, "classify-quasi-integer", "--input", str(DATA / "quiver5.json"))
    assert code == 0
    obj = json.loads(out)
    assert obj["verdict"] == "QuasiInteger"
    assert obj["certificate"]["D"] == [3, 1, 2, 5, 5]
    assert obj["certificate"]["verified"] is True


def test_classify_rejects(capsys, write):
    path = write("inc.json", [[0, "1/2"], ["-1/2", 0]])
    code, out, _ = run(capsys, "classify-quasi-integer", "--input", path)
    obj = json.loads(out)
    assert code == 0 and obj["verdict"] == "NotQuasiInteger" and obj["pair"] == [1, 2]


def test_construct_integer(capsys):
    code, out, _ = run(capsys, "construct-integer", "--input", str(DATA / "quiver5.json"))
    obj = json.loads(out)
    assert code == 0
    assert set(obj) == {"B", "D", "perm", "verified"}
    assert obj["B"][1] == [-6, 0, -8, 15, -10]


def test_skew_symmetrizer_and_sk(capsys, write):
    path = write("b.json", [[0, -2], [1, 0]])
    _, out, _ = run(capsys, "skew-symmetrizer", "--input", path)
    assert [from_json(x) for x in json.loads(out)["D"]] == [1, 2]
    _, out, _ = run(capsys, "sk", "--input", path, "--format", "text")
    assert "√2" in out


def test_inconsistent_cycle_reports_error(capsys, write):
    path = write("cyc.json", [[0, 1, -1], [-1, 0, 1], [2, -1, 0]])
    code, _, err = run(capsys, "skew-symmetrizer", "--input", path)
    assert code == 1 and "cycle" in err


def test_fan(capsys):
    code, out, _ = run(capsys, "fan", "--type", "H3", "--verify", "--format", "text")
    assert code == 0
    assert "cones: 32\nrays: 18\nfan_verified: True\n" == out


def test_exchange_graph(capsys, write):
    path = write("b.json", [[0, "-1/2"], [2, 0]])
    code, out, _ = run(capsys, "exchange-graph", "--input", path, "--depth", "14", "--kind", "G")
    obj = json.loads(out)
    assert code == 0 and len(obj["vertices"]) == 10 and obj["regular"]


def test_rank2(capsys, tmp_path):
    svg = tmp_path / "f.svg"
    code, out, _ = run(capsys, "rank2", "--a", "cos(7)", "--svg", str(svg))
    obj = json.loads(out)
    assert code == 0
    assert obj["verdict"] == "CoxeterFinite" and obj["m"] == 7 and obj["cones"] == 9
    assert svg.read_text().startswith("<svg")


def test_rank2_incoherent(capsys):
    code, out, _ = run(capsys, "rank2", "--a", "6/5", "--format", "text", "--expect-coherent")
    assert code == 2
    assert "word: [2, 1, 2]" in out and "11/25" in out


def test_rank2_svg_stdout(capsys):
    code, out, _ = run(capsys, "rank2", "--a", "1", "--b", "4", "--format", "svg")
    assert code == 0 and "stroke-dasharray" in out


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog", "H4")
    obj = json.loads(out)
    assert code == 0 and obj["default_depth"] == 11 and obj["quiver"]["n"] == 4


def test_unknown_catalog_type(capsys):
    code, _, err = run(capsys, "catalog", "Z9")
    assert code == 1 and "Z9" in err


def test_text_output_is_byte_stable(capsys):
    _, a, _ = run(capsys, "c-pattern", "--type", "B3", "--format", "text", "--check-sign-coherence")
    _, b, _ = run(capsys, "c-pattern", "--type", "B3", "--format", "text", "--check-sign-coherence")
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "clusterlab", "c-pattern", "--type", "A2", "--format", "text"],
                         capture_output=True, text=True, check=True)
    assert "Size\n5\n" in res.stdout
