import json
import subprocess
import sys

import pytest

from paphelp.cli import main, report_from_document, report_to_document
from paphelp.group_model import table_to_dict

from conftest import get_table


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_c3(capsys):
    code, out, _ = run(["solve", "abelian:3", "--order", "3"], capsys)
    assert code == 0
    assert "n=3: 2 solution(s)" in out
    assert out.count("[trivial") == 2


def test_check_pap_216(capsys):
    code, out, _ = run(["check-pap", "SmallGroup_216_153", "--order", "6"], capsys)
    assert code == 0
    assert "n=6: pap open" in out
    assert "solution d=1 {3d:-1, 3a:1, 6a:1}; d=2 {3e:1}" in out
    assert "class 3c" in out and "class 3e" in out


def test_check_genbp(capsys):
    code, out, _ = run(["check-genbp", "PSL_2_19", "--order", "10"], capsys)
    assert code == 0
    assert "n=10: genbp holds" in out


def test_validate_ok(capsys):
    code, out, _ = run(["validate", "A5"], capsys)
    assert code == 0
    assert "valid" in out and "exponent 30" in out


def test_validate_list(capsys):
    code, out, _ = run(["validate", "--list"], capsys)
    assert code == 0 and "PSL_2_19" in out


def test_validate_corrupted(tmp_path, capsys):
    doc = table_to_dict(get_table("A5"))
    doc["characters"][3][2] = 7
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["validate", str(path)], capsys)
    assert code == 2
    assert "orthogonality" in err


def test_invalid_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, _ = run(["validate", str(path)], capsys)
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "nonexistent_table"],
        ["solve", "A5", "--order", "x"],
        ["solve", "A5", "--order", "5", "--brauer", "5"],
        ["solve", "A5", "--order", "5", "--pap"],
        ["check-pap", "A5", "--pap", "--order", "5"],
        ["solve", "A5", "--budget", "0"],
        ["solve", "abelian:0"],
        ["solve"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1
    assert "error" in err


def test_argparse_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["solve", "A5", "--format", "xml"])
    assert info.value.code == 1


def test_resource_limit_exit_3(capsys):
    code, out, _ = run(["solve", "SmallGroup_216_153", "--order", "3", "--budget", "3"], capsys)
    assert code == 3
    assert "resource limit" in out


def test_pap_with_acknowledgement(capsys):
    code, out, _ = run(["check-zc", "A5", "--order", "5", "--pap", "--acknowledge-pap-assumption"], capsys)
    assert code == 0
    assert "zc proven" in out


def test_machine_document_keys_and_round_trip(capsys):
    code, out, _ = run(["solve", "SmallGroup_216_153", "--order", "1,2,3,6", "--format", "machine"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert {"table_name", "options", "per_order", "group_summary"} <= set(doc)
    assert all({"n", "solutions", "verdicts"} <= set(o) for o in doc["per_order"])
    table = get_table("SmallGroup_216_153")
    again = report_to_document(report_from_document(doc, table), doc["command"])
    assert again == doc


def test_machine_output_is_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        workers = str(i + 1)
        main(["check-sp", "A5", "--format", "machine", "--out", str(path), "--workers", workers])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_options_are_reported(capsys):
    code, out, _ = run(
        ["check-zc", "abelian:4", "--no-cl-congruences", "--brauer", "none", "--format", "machine"], capsys
    )
    doc = json.loads(out)
    assert doc["options"]["cohn_livingstone_congruences"] is False
    assert doc["options"]["folklore_congruences"] is True
    assert doc["options"]["brauer"] is False


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "paphelp", "check-pq", "A5"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "prime graph" in proc.stdout
