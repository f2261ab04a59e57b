import json
import os

import pytest
from click.testing import CliRunner

from gfcech import GradedModule, PolyRing, is_filter_regular, parse_session, render_certificate, run
from gfcech.cli import main
from gfcech.genfrac import GenFracComplex
from gfcech.runner import strip_timing
from gfcech.session import load_session

from oracles import inverse_monomial_count

SESSIONS = os.path.join(os.path.dirname(__file__), os.pardir, "sessions")


def session_path(name):
    return os.path.join(SESSIONS, name)


def test_q_xy_report_has_closed_form_dims():
    rep = run(load_session(session_path("q_xy.session")))
    payload = json.loads(rep.to_json())
    task = payload["tasks"][0]
    degrees = task["tables"]["cech"]["degrees"]
    dims = dict(zip(degrees, task["tables"]["cech"]["spots"]["2"]["dims"]))
    assert [dims[d] for d in range(-2, -7, -1)] == [1, 2, 3, 4, 5]
    assert all(dims[d] == inverse_monomial_count(2, d) for d in degrees)
    assert task["tables"]["cech"]["all_stable"]
    assert payload["format"] == "gfcech-report/1"
    assert payload["summary"] == {"tasks": 1, "errors": 0, "negative": 0}
    assert rep.exit_code(True) == 0


def test_empty_task_list():
    rep = run(parse_session("ring Q[x,y]\nmodule A = free\n"))
    assert rep.results == []
    assert rep.to_dict()["tasks"] == []
    assert rep.exit_code(True) == 0


def test_workbench_is_deterministic():
    spec = load_session(session_path("workbench.session"))
    a = strip_timing(run(spec).to_dict())
    b = strip_timing(run(spec).to_dict())
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    kinds = [t["kind"] for t in a["tasks"]]
    assert set(kinds) == {"localcohomology", "genfrac", "compare", "filtreg", "synth", "ses", "tor"}
    assert all(t["status"] == "ok" for t in a["tasks"])


def test_workbench_verdicts():
    rep = run(load_session(session_path("workbench.session")))
    verdicts = [(r.task.kind, r.verdict) for r in rep.results]
    assert ("compare", "iso") in verdicts
    assert ("filtreg", "not-filter-regular") in verdicts
    assert ("filtreg", "filter-regular") in verdicts
    assert ("ses", "exact") in verdicts
    assert ("tor", "vanishes") in verdicts
    # the filter-regular failure is negative, so assertion mode exits 2
    assert rep.exit_code(False) == 0
    assert rep.exit_code(True) == 2


def test_task_errors_are_isolated():
    text = ("ring Q[x,y]\nmodule A = free\nseq m = x, y\n"
            "task ses A m window -1:0\n"
            "task localcohomology A m window -3:-2\n")
    rep = run(parse_session(text))
    assert rep.results[0].status == "error" and "multiplier" in rep.results[0].error
    assert rep.results[1].status == "ok"
    assert rep.exit_code(False) == 1


def test_seed_and_field_override():
    spec = load_session(session_path("workbench.session"))
    rep = run(spec, seed=7, field_name="fp:101")
    assert all(r.params["seed"] == 7 and r.params["field"] == "fp:101" for r in rep.results)
    assert all(r.status == "ok" for r in rep.results)


def test_render_certificate_examples():
    R = PolyRing("xy")
    x, y = R.gens()
    G = GenFracComplex([x, y], GradedModule.free(R))
    cert = G.gf_is_zero(G.fraction(x, (1, 0))).certificate
    text = render_certificate(cert, G.x)
    assert text == "x/(x1^1,1) = 0: δ=1; y*x = x*y in (x)M"
    assert render_certificate(None) == "—"
    assert render_certificate({}) == "—"
    node = GradedModule.cyclic(R, [x * y])
    assert render_certificate(is_filter_regular([x, y], node)) == "x*y = 0 in M, but y is not in 0 :_M a^∞"
    assert render_certificate(is_filter_regular([x + y, x - y], node)) == "—"


def test_render_three_term_certificate_is_stable():
    R = PolyRing("xyzw")
    x, y, z, w = R.gens()
    G = GenFracComplex([x, y, z, w], GradedModule.free(R))
    f = G.fraction(x + y + z, (1, 1, 1, 0))
    texts = {render_certificate(G.gf_is_zero(f).certificate, G.x) for _ in range(3)}
    assert texts == {"(x + y + z)/(x1^1,x2^1,x3^1,1) = 0: δ=1; w*(x + y + z) = x*w + y*w + z*w in (x, y, z)M"}


def test_two_element_certificates_rendered():
    rep = run(load_session(session_path("workbench.session")))
    compare = next(r for r in rep.results if r.task.kind == "compare" and r.task.seq == "r")
    assert compare.certificates
    assert all("cycle (" in c and "NOT A CYCLE" not in c for c in compare.certificates)


# ---------------------------------------------------------------------------
# command line


def test_cli_json_and_csv(tmp_path):
    out = tmp_path / "report.json"
    csvdir = tmp_path / "csv"
    res = CliRunner().invoke(main, ["run", session_path("q_xy.session"), "--json", str(out), "--csv", str(csvdir)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["tasks"][0]["verdict"] == "stable"
    files = sorted(os.listdir(csvdir))
    assert "task00_localcohomology_spot2.csv" in files
    rows = (csvdir / "task00_localcohomology_spot2.csv").read_text().splitlines()
    assert rows[0] == "degree,dimension,stable,level"
    assert rows[1].startswith("-6,5,True")


def test_cli_stdout_and_assert_mode():
    r = CliRunner()
    res = r.invoke(main, ["run", session_path("hypothesis_unmet.session")])
    assert res.exit_code == 0
    assert json.loads(res.stdout)["summary"]["negative"] == 2
    res = r.invoke(main, ["run", session_path("hypothesis_unmet.session"), "--assert-hypotheses"])
    assert res.exit_code == 2


def test_cli_overrides(tmp_path):
    out = tmp_path / "o.json"
    res = CliRunner().invoke(main, ["run", session_path("q_xy.session"), "--json", str(out),
                                    "--seed", "5", "--field", "fp:101"])
    assert res.exit_code == 0
    task = json.loads(out.read_text())["tasks"][0]
    assert task["params"]["seed"] == 5 and task["params"]["field"] == "fp:101"
    res = CliRunner().invoke(main, ["run", session_path("q_xy.session"), "--field", "fp:9"])
    assert res.exit_code != 0


def test_cli_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.session"
    bad.write_text("ring Q[x,y] weights 0 1\n")
    res = CliRunner().invoke(main, ["run", str(bad)])
    assert res.exit_code == 3
    assert ":1:21: weights must be positive" in res.output


def test_cli_byte_identical_modulo_timing(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"r{i}.json"
        CliRunner().invoke(main, ["run", session_path("workbench.session"), "--json", str(p)])
        outs.append(strip_timing(json.loads(p.read_text())))
    assert outs[0] == outs[1]
