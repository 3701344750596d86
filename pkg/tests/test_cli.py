import pytest

from tracecascade.cli import main


@pytest.fixture
def cli(data, capsys, monkeypatch):
    monkeypatch.chdir(data)

    def call(*argv):
        rc = main(list(argv))
        out, err = capsys.readouterr()
        return rc, out, err

    return call


def test_normalize(cli):
    assert cli("normalize", "--alphabet", "a3.alph", "c a") == (0, "a c\n", "")


def test_run(cli):
    rc, out, _ = cli("run", "exists_a.aut", "b a c")
    assert rc == 0
    assert out == "state: (hi, _, _)\naccepted: true\n"


def test_eval_trace_and_event_formulas(cli):
    assert cli("eval", "--alphabet", "a2.alph", "E[3] Yleq(1,3)", "a b c")[1] == "true\n"
    assert cli("eval", "--alphabet", "a2.alph", "E[3] Yleq(1,3)", "a b a c")[1] == "false\n"
    assert cli("eval", "--alphabet", "a1.alph", "a S[1] b", "b a a")[1] == "0:b false\n1:a true\n2:a true\n"


@pytest.mark.parametrize("extra", [(), ("--oracle",)])
def test_gossip_label(cli, extra):
    rc, out, _ = cli("gossip-label", "--alphabet", "a2.alph", *extra, "a b c")
    assert rc == 0
    assert out.splitlines()[1:] == ["0:a 000 000 000", "1:b 110 110 000", "2:c 111 011 011"]


def test_equiv(cli):
    rc, out, _ = cli("equiv", "sprtl:E[1] a", "exists_a.aut", "--alphabet", "a1.alph", "--max-len", "5")
    assert (rc, out) == (0, "equivalent (traces checked: 543)\n")
    rc, out, _ = cli("equiv", "parity_b.aut", "sprtl:E[1] a", "--alphabet", "a1.alph", "--max-len", "4")
    assert rc == 1
    assert out == "counterexample: a\nleft: false right: true\n"


def test_decompose(cli):
    rc, out, _ = cli("decompose", "u2.morph", "--check")
    assert rc == 0
    assert "U2[p1]" in out and "U2[p3]" in out
    assert out.rstrip().endswith("language: ok (traces checked: 179)")
    rc, _, err = cli("decompose", "u2_triangle.morph")
    assert rc == 2
    assert err.startswith("error: not-acyclic:")


def test_compile_round_trip(cli, tmp_path):
    out_dir = tmp_path / "since"
    rc, out, _ = cli("compile", "--alphabet", "a1.alph", "E[1] a", "--out", str(out_dir))
    assert rc == 0 and "stages: 1" in out
    manifest = out_dir / "manifest.txt"
    assert manifest.read_text().splitlines()[0] == "kind: chain"
    rc, out, _ = cli("product", str(manifest), "b a")
    assert out.splitlines()[-1] == "accepted: true"
    rc, out, _ = cli("equiv", "manifest:" + str(manifest), "formula:E[1] a", "--alphabet", "a1.alph", "--max-len", "4")
    assert (rc, out) == (0, "equivalent (traces checked: 179)\n")


def test_compile_gcs_round_trip(cli, tmp_path):
    out_dir = tmp_path / "prev"
    rc, _, _ = cli("compile", "--alphabet", "a3.alph", "--fragment", "prev", "E[3] Y[1] a", "--out", str(out_dir))
    assert rc == 0
    manifest = out_dir / "manifest.txt"
    assert manifest.read_text().splitlines()[0] == "kind: gcs"
    rc, out, _ = cli("gcs-run", str(manifest), "a b c")
    assert rc == 0
    rc, out, _ = cli("equiv", "manifest:" + str(manifest), "formula:E[3] Y[1] a", "--alphabet", "a3.alph", "--max-len", "4")
    assert (rc, out) == (0, "equivalent (traces checked: 88)\n")


def test_dot_poset(cli):
    rc, out, _ = cli("dot", "poset", "--alphabet", "a1.alph", "a b")
    assert rc == 0
    assert 'e0 [label="0:a"];' in out and "e0 -> e1;" in out


def test_dot_automaton(cli):
    rc, out, _ = cli("dot", "automaton", "exists_a.aut")
    assert rc == 0 and out.startswith("digraph") and "doublecircle" in out


def test_errors(cli):
    rc, _, err = cli("normalize", "--alphabet", "nope.alph", "a")
    assert rc == 2 and err.startswith("error: input:")
    rc, _, err = cli("normalize", "--alphabet", "a1.alph", "a z")
    assert rc == 2 and err.startswith("error:")
