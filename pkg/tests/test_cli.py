import json

import pytest

from localdiff import cli
from localdiff.construction import build_baseline, build_pn
from localdiff.core import IntegerSet
from localdiff.diffset import diff_count
from localdiff.formats import (
    dump_set,
    load_set,
    parse_report_text,
    read_set,
    reports_to_csv,
    write_set,
)
from localdiff.verifier import verify_all_k


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("S", [build_pn(0), build_pn(3), build_baseline("sidon", 6),
                               IntegerSet((-5, 0, 2**80), "custom")])
def test_set_round_trip(S):
    assert load_set(dump_set(S)) == S


def test_set_file_header_mismatch():
    with pytest.raises(ValueError):
        load_set("n=2 count=3\n0\n1\n")
    with pytest.raises(ValueError):
        load_set("")


def test_report_text_round_trip():
    reports = verify_all_k(build_pn(2))
    from localdiff.formats import reports_to_text
    blocks = parse_report_text(reports_to_text(reports))
    assert [int(b["min_diff"]) for b in blocks] == [1, 3, 7, 9]
    assert blocks[3]["witness"] == "1111"
    assert reports_to_csv(reports).splitlines()[0] == "k,min_diff,bound_lo,bound_hi,holds,mode,subsets_checked"


def test_construct_levels(tmp_path, capsys):
    out = tmp_path / "p3.txt"
    code, stdout, _ = run(capsys, "construct", "--levels", 3, "--out", out)
    assert code == 0 and "diff_count=27" in stdout
    assert len(read_set(out)) == 8


def test_construct_truncated(tmp_path, capsys):
    out = tmp_path / "t3.txt"
    assert run(capsys, "construct", "--n", 3, "--out", out)[0] == 0
    assert read_set(out).masks == (0, 1, 2)


def test_construct_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "construct", "--kind", "sidon", "--n", 10, "--seed", 7, "--out", a)
    run(capsys, "construct", "--kind", "sidon", "--n", 10, "--seed", 7, "--out", b)
    c = tmp_path / "c.txt"
    run(capsys, "construct", "--kind", "random_integers", "--n", 10, "--seed", 7, "--out", c)
    assert a.read_text() == b.read_text()
    assert read_set(c) == build_baseline("random_integers", 10, 7)


def test_verify_p4_all_k(tmp_path, capsys):
    path = tmp_path / "p4.txt"
    write_set(path, build_pn(4))
    report = tmp_path / "p4.report"
    code, stdout, _ = run(capsys, "verify", path, "--all-k", "--report", report)
    assert code == 0
    assert len(stdout.strip().splitlines()) == 17
    assert len(parse_report_text(report.read_text())) == 16


def test_verify_ap_violation(tmp_path, capsys):
    path = tmp_path / "ap.txt"
    write_set(path, build_baseline("arithmetic_progression", 16))
    code, _, err = run(capsys, "verify", path, "--k", 4)
    assert code == 2 and "elements=['0', '1', '2', '3']" in err


def test_verify_k1_always_ok(tmp_path, capsys):
    path = tmp_path / "ap.txt"
    write_set(path, build_baseline("arithmetic_progression", 30))
    assert run(capsys, "verify", path, "--k", 1)[0] == 0


def test_verify_bnb_json_lines(tmp_path, capsys):
    path = tmp_path / "p5.txt"
    write_set(path, build_pn(5))
    code, stdout, _ = run(capsys, "verify", path, "--k", 4, "--format", "json-lines")
    row = json.loads(stdout)
    assert code == 0 and row["mode"] == "branch_and_bound" and row["min_diff"] == 9
    assert row["bound_lo"] == row["bound_hi"] == "9"


def test_verify_budget_exhausted(tmp_path, capsys):
    path = tmp_path / "p5.txt"
    write_set(path, build_pn(5))
    code, _, err = run(capsys, "verify", path, "--k", 10, "--mode", "bnb", "--budget", 50)
    assert code == 3 and "inconclusive" in err


def test_verify_exhaustive_over_cap_is_usage_error(tmp_path, capsys):
    path = tmp_path / "p5.txt"
    write_set(path, build_pn(5))
    assert run(capsys, "verify", path, "--k", 3, "--mode", "exhaustive")[0] == 1


def test_usage_and_io_errors(tmp_path, capsys):
    assert run(capsys, "verify", tmp_path / "missing.txt", "--k", 2)[0] == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["construct"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["prove", "riemann"])
    assert exc.value.code == 1


def test_prove_and_validate(tmp_path, capsys):
    cert = tmp_path / "f0.cert"
    code, stdout, _ = run(capsys, "prove", "f0", "--cert", cert)
    assert code == 0 and "status=verified" in stdout
    assert run(capsys, "validate-certificate", cert)[0] == 0
    cert.write_text(cert.read_text().replace("status: verified", "status: failed"))
    assert run(capsys, "validate-certificate", cert)[0] == 2


def test_prove_domain_reduction_margin(capsys):
    code, stdout, _ = run(capsys, "prove", "domain-reduction")
    margin = [ln for ln in stdout.splitlines() if ln.startswith("margin=")][0]
    lo, hi = margin[len("margin=["):-1].split(", ")
    assert code == 0 and 0.036 < float(lo) <= float(hi) < 0.0361


def test_prove_subadditivity_params(capsys):
    code, stdout, _ = run(capsys, "prove", "subadditivity", "--a", "4", "--b-lo", "1/100", "--b-hi", "4")
    assert code == 0 and "domain=[1/100,4]" in stdout


def test_report_table(tmp_path, capsys):
    paths = []
    for name, S in (("p5", build_pn(5)), ("ap32", build_baseline("arithmetic_progression", 32)),
                    ("sidon32", build_baseline("sidon", 32))):
        paths.append(tmp_path / f"{name}.txt")
        write_set(paths[-1], S)
    code, stdout, _ = run(capsys, "report", *paths)
    lines = stdout.strip().splitlines()
    assert code == 0 and len(lines) == 4
    assert lines[1].startswith("p5.txt,hypercube,32,243,121,7,true,9,true")
    assert lines[2].startswith("ap32.txt,arithmetic_progression,32,63,31,5,false,7,false")
    code, stdout, _ = run(capsys, "report", *paths, "--format", "json-lines")
    rows = [json.loads(ln) for ln in stdout.splitlines()]
    assert rows[2]["diff_count"] == 32 * 31 + 1


def test_report_sidon20_matches_oracle(tmp_path, capsys):
    S = build_baseline("sidon", 20)
    path = tmp_path / "s20.txt"
    write_set(path, S)
    _, stdout, _ = run(capsys, "report", path, "--k", "3")
    assert stdout.splitlines()[1].split(",")[3] == str(len({a - b for a in S.ints for b in S.ints}))
    assert diff_count(S) == 381


def test_report_empty(capsys):
    code, stdout, _ = run(capsys, "report")
    assert code == 0 and stdout.strip() == "source,kind,size,diff_count,distance_count,min_diff_k3,holds_k3,min_diff_k4,holds_k4"


def test_profile(tmp_path, capsys):
    path = tmp_path / "p1.txt"
    write_set(path, build_pn(1))
    code, stdout, _ = run(capsys, "profile", path)
    assert code == 0 and stdout == "code,count\n0,1\n1,2\n2,1\n"
