import json
import subprocess
import sys

import pytest

from flowtype.cli import run
from flowtype.flowspace import ZSubshift
from flowtype.group import Group, SymmetricFiniteSet
from flowtype.weaktype import LStructure, WeakType, enumerate_type

LAT1 = '{"kind":"lattice","d":1}'
FREE2 = '{"kind":"free","rank":2}'
Z6 = json.dumps({"kind": "finite", "table": [[(i + j) % 6 for j in range(6)] for i in range(6)]})
GM = '{"kind":"sft","alphabet":2,"forbidden":["11"]}'
FULL = '{"kind":"sft","alphabet":2,"forbidden":[]}'
TABLE = '{"kind":"table","values":["0","1/2","1","1","1","1/2"]}'


def orbit(p):
    return json.dumps(
        {"kind": "finite_flow", "group": {"kind": "lattice", "d": 1}, "size": p, "action": {"1": [(i + 1) % p for i in range(p)]}}
    )


@pytest.fixture
def call(capsys):
    def _call(*argv):
        code = run(list(argv))
        out = capsys.readouterr()
        return code, (json.loads(out.out) if out.out else None), out.err

    return _call


@pytest.fixture
def files(tmp_path):
    (tmp_path / "c4.json").write_text(orbit(4))
    (tmp_path / "c2.json").write_text(orbit(2))
    (tmp_path / "gm.json").write_text(GM)
    levels = [list(range(-r, r + 1)) for r in (9, 3, 1, 0)]
    (tmp_path / "chain.json").write_text(json.dumps({"kind": "chain", "levels": levels}))
    return tmp_path


def test_factor_output_is_exact(files, capsys):
    assert run(["factor", "--from", str(files / "c4.json"), "--to", str(files / "c2.json")]) == 0
    assert capsys.readouterr().out == '{"factor":[0,1,0,1]}\n'


def test_bk_check(files, call):
    assert call("bk-check", "--group", LAT1, "--chain", str(files / "chain.json"))[:2] == (
        0,
        {"precondition": "ok", "violations": []},
    )
    bad = '{"kind":"chain","levels":[[-2,-1,0,1,2],[-1,0,1]]}'
    code, out, err = call("bk-check", "--group", LAT1, "--chain", bad)
    assert code == 3 and out is None and "U_1^3" in err


def test_type_matches_library(files, call):
    code, out, _ = call("type", "--flow", str(files / "gm.json"), "--F", "-1,0,1", "--n", "2", "--w", "1")
    assert code == 0
    Z = Group.lattice(1)
    F = SymmetricFiniteSet.of(Z, [(-1,), (0,), (1,)])
    expected = enumerate_type(ZSubshift(2, ["11"]), F, 2, 1)
    assert WeakType.from_json(out) == expected
    assert out == json.loads(json.dumps(expected.to_json()))
    assert out["resolution"] == {"n": 2, "w": 1}
    assert all(s["n"] <= 2 for s in out["structures"])


def test_guard_and_malformed_exit_codes(files, call):
    code, _, err = call("type", "--flow", GM, "--F", "-1,0,1", "--n", "4", "--w", "1")
    assert code == 3 and "force" in err
    assert call("mul", "--group", FREE2, "--a", "ab", "--b", "c")[0] == 2
    assert call("transitive", "--flow", "{not json")[0] == 2
    assert call("transitive", "--flow", str(files / "missing.json"))[0] == 2
    assert call("seminorm-eval", "--group", Z6, "--seminorm", '{"kind":"table","values":[0.5]}', "--g", "1")[0] == 2
    assert call("transitive", "--flow", '{"kind":"sft","alphabet":2,"forbidden":["0","1"]}')[0] == 3
    with pytest.raises(SystemExit) as exc:
        run(["mul"])
    assert exc.value.code == 2


def test_group_commands(call):
    assert call("mul", "--group", FREE2, "--a", "ab", "--b", "BA")[1] == {"result": ""}
    assert call("mul", "--group", '{"kind":"lattice","d":2}', "--a", "[1,2]", "--b", "[3,-1]")[1] == {"result": "4,1"}
    out = call("ball", "--group", FREE2, "--radius", "2")[1]
    assert out["size"] == 17
    out = call("ball", "--group", Z6, "--gens", "1", "--radius", "3")[1]
    assert out["elements"] == ["0", "1", "2", "3", "4", "5"]


def test_seminorm_commands(call):
    gen = '{"kind":"generated","pairs":[["1","3/10"]],"default":"1"}'
    assert call("seminorm-eval", "--group", LAT1, "--seminorm", gen, "--g", "2")[1] == {"value": "3/5"}
    zero = '{"kind":"table","values":["0","0","0","0","0","0"]}'
    out = call("phi", "--group", Z6, "--sigma", TABLE, "--sigma-prime", zero, "--F", "0,3", "--eps", "1/10", "--g", "2")[1]
    assert out == {"value": "3/5"}
    out = call("fubini-witness", "--group", Z6, "--sigma0", TABLE, "--sigma2", TABLE, "--delta", "2/5")[1]
    assert out["verified"] is True and out["eps"] == "2/25"
    out = call("lipschitz-correct", "--rho", "[[0,1],[1,0]]", "--f", '["0","8/5"]', "--delta", "3/5")[1]
    assert out == {"f": ["3/10", "13/10"]}
    code, _, err = call("lipschitz-correct", "--rho", "[[0,1],[1,0]]", "--f", "[0,3]", "--delta", "1/2")
    assert code == 3
    chain = '{"kind":"chain","levels":[{"ball":9},{"ball":3},{"ball":1},{"ball":0}]}'
    out = call("seminorm-ball", "--group", LAT1, "--seminorm", chain, "--c", "1", "--domain", '{"ball":20}')[1]
    assert out == {"elements": [str(k) for k in range(-4, 5)]}


def test_flowspace_commands(call):
    both = '{"lo":0,"hi":2,"allowed":["101","111"]}'
    out = call("sft-empty", "--flow", GM, "--set", both)[1]
    assert out["empty"] is False and out["witness"]["center"]
    assert call("sft-empty", "--flow", GM, "--set", '{"lo":0,"hi":1,"allowed":["11"]}')[1] == {"empty": True, "witness": None}
    fam = '[{"lo":0,"hi":0,"allowed":["0"]},{"lo":0,"hi":1,"allowed":["10"]}]'
    assert call("sft-cover", "--flow", GM, "--family", fam)[1] == {"cover": True, "witness": None}
    assert call("sft-cover", "--flow", FULL, "--family", fam)[1]["cover"] is False
    out = call("translate", "--set", '{"lo":0,"hi":0,"allowed":["1"]}', "--n", "-3")[1]
    assert out == {"lo": -3, "hi": -3, "allowed": ["1"]}
    assert call("translate", "--flow", orbit(4), "--set", "[0,1]", "--n", "3")[1] == [0, 3]
    A, B = '{"lo":0,"hi":0,"allowed":["1"]}', '{"lo":1,"hi":1,"allowed":["1"]}'
    assert call("r-u-disjoint", "--flow", GM, "--A", A, "--B", B, "--U", "0")[1] == {"disjoint": True}
    assert call("r-u-disjoint", "--flow", GM, "--A", A, "--B", B, "--U", "-1,0,1")[1] == {"disjoint": False}
    assert call("transitive", "--flow", '{"kind":"sft","alphabet":2,"forbidden":["01","10"]}')[1] == {"transitive": False}
    z4 = {"kind": "finite", "table": [[(i + j) % 4 for j in range(4)] for i in range(4)]}
    flow = json.dumps({"kind": "finite_flow", "group": z4, "size": 4, "action": {"1": [1, 2, 3, 0]}})
    sigma = '{"kind":"table","values":["0","2/5","7/10","2/5"]}'
    assert call("partial-sigma", "--flow", flow, "--seminorm", sigma, "--x", "0", "--y", "2")[1] == {"value": "7/10"}


def test_weaktype_commands(files, call):
    fam = '[{"lo":0,"hi":0,"allowed":["1"]},{"lo":1,"hi":1,"allowed":["1"]}]'
    code, out, _ = call("full-structure", "--flow", GM, "--family", fam, "--F", "-1,0,1")
    assert code == 0
    M = LStructure.from_json(Group.lattice(1), out)
    assert M.to_json() == out and len(M.E) == 6
    struct = '{"n":1,"F":["-1","0","1"],"E":[["1",0,0]],"C":[]}'
    out = call("realizes", "--flow", FULL, "--structure", struct, "--w", "1")[1]
    assert out["realized"] is True and len(out["witness"]) == 1
    assert call("realizes", "--flow", FULL, "--structure", struct, "--w", "0")[1]["realized"] is False
    out = call("contain", "--X", orbit(3), "--Y", orbit(4), "--F", "-1,0,1", "--n", "7")[1]
    assert out["verdict"] == "NotContainedCertified"
    out = call("contain", "--X", orbit(2), "--Y", orbit(4), "--F", "-1,0,1", "--n", "3")[1]
    assert out["verdict"] == "Contained"
    t1 = files / "t1.json"
    t2 = files / "t2.json"
    for path, flow in ((t1, GM), (t2, FULL)):
        code, out, _ = call("type", "--flow", flow, "--F", "-1,0,1", "--n", "2", "--w", "1")
        assert code == 0
        path.write_text(json.dumps(out))
    Z = Group.lattice(1)
    code, out, _ = call("type-meet", "--types", str(t1), str(t2))
    assert code == 0
    meet = WeakType.from_json(out)
    part = LStructure.from_json(Z, {"n": 2, "F": ["-1", "0", "1"], "E": [["0", 0, 1], ["0", 1, 0]], "C": [[0, 1]]})
    assert part in meet


def test_oracle_commands(call):
    z2 = {"kind": "finite", "table": [[0, 1], [1, 0]]}
    flow = json.dumps({"kind": "finite_flow", "group": z2, "size": 2, "action": {"1": [1, 0]}})
    out = call("brute-type", "--flow", flow, "--nmax", "2")[1]
    assert out["exact"] is True and out["F"] == ["0", "1"]
    assert call("brute-type", "--flow", orbit(5), "--F", "-1,0,1", "--nmax", "1")[0] == 3
    out = call("verify-theorem", "--cyclic", "6")[1]
    assert out["summary"]["total"] == 36 and out["summary"]["disagree"] == 0
    flows = json.dumps([json.loads(orbit(2)), json.loads(orbit(4))])
    out = call("verify-theorem", "--flows", flows, "--F", "-1,0,1")[1]
    assert [r["agree"] for r in out["instances"]] == [True] * 4


def test_output_is_deterministic(files):
    argv = ["flowtype", "type", "--flow", str(files / "gm.json"), "--F", "-1,0,1", "--n", "2", "--w", "1"]
    runs = [
        subprocess.run([sys.executable, "-m", "flowtype.cli", *argv[1:]], capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    assert runs[0] == runs[1] and runs[0].endswith(b"\n")


def test_console_script_runs(files):
    proc = subprocess.run(
        ["flowtype", "factor", "--from", str(files / "c4.json"), "--to", str(files / "c2.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == '{"factor":[0,1,0,1]}\n'
