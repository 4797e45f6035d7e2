import csv
import pathlib

import pytest

from pycro.cli import main

DATA = pathlib.Path(__file__).parent / "data"
TOY1 = str(DATA / "toy1.topo")
TOYBA = str(DATA / "toyba.topo")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pspt_table(capsys):
    code, out, _ = run_cli(capsys, "pspt", "--topology", TOY1, "--source", "D1:s")
    assert code == 0
    assert "D1:s dist=0 parent=-" in out
    assert "D1:a dist=1 parent=D1:s" in out
    assert "D2:b dist=3 parent=D1:a" in out


def test_cr_matches_pspt(capsys):
    _, out1, _ = run_cli(capsys, "pspt", "--topology", TOY1, "--source", "D1:s")
    _, out2, _ = run_cli(capsys, "cr", "--topology", TOY1, "--source", "D1:s")
    table1 = [l for l in out1.splitlines() if l.startswith("D")]
    table2 = [l for l in out2.splitlines() if l.startswith("D")]
    assert table1 == table2


def test_missing_source_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["pspt", "--topology", TOY1])
    assert err.value.code == 1


def test_route(capsys):
    code, out, _ = run_cli(capsys, "route", "--topology", TOY1, "--source", "D1:s", "--dest", "D2:t")
    assert code == 0
    assert "path: D1:s -> D1:a -> D2:b -> D2:t" in out
    assert "cost: 5" in out
    assert "entry D2: D2:b -> D2:t" in out
    assert "entry D1: D1:a -> D2:b" in out


def test_route_self_is_empty(capsys):
    code, out, _ = run_cli(capsys, "route", "--topology", TOY1, "--source", "D1:s", "--dest", "D1:s")
    assert code == 0
    assert "cost: 0" in out


def test_route_unreachable_exit_2(capsys, tmp_path):
    topo = tmp_path / "lone.topo"
    topo.write_text(
        (DATA / "toy1.topo").read_text()
        + "domain D3\nswitch z gateway\nswitch far\ninterlink D3:z D1:a cost 1\n"
    )
    code, _, err = run_cli(
        capsys, "route", "--topology", str(topo), "--source", "D1:s", "--dest", "D3:far"
    )
    assert code == 2
    assert "no route" in err


def test_route_modes_agree(capsys):
    costs = []
    for mode in ("baseline", "cr", "shared"):
        code, out, _ = run_cli(
            capsys, "route", "--topology", TOY1, "--source", "D1:s", "--dest", "D2:t",
            "--mode", mode,
        )
        assert code == 0
        costs.append([l for l in out.splitlines() if l.startswith("cost:")][0])
    assert len(set(costs)) == 1


def test_ba_table(capsys):
    code, out, _ = run_cli(
        capsys, "ba", "--topology", TOYBA, "--source", "D1:s", "--dest", "D4:t", "--demand", "5"
    )
    assert code == 0
    assert "total_cost=17" in out
    assert out.count("path len=") == 2


def test_ba_single_row(capsys):
    code, out, _ = run_cli(
        capsys, "ba", "--topology", TOYBA, "--source", "D1:s", "--dest", "D4:t", "--demand", "1"
    )
    assert code == 0
    assert out.count("path len=") == 1


def test_ba_unsatisfiable_exit_3(capsys):
    code, out, _ = run_cli(
        capsys, "ba", "--topology", TOYBA, "--source", "D1:s", "--dest", "D4:t", "--demand", "1000000"
    )
    assert code == 3
    assert "satisfied=False" in out  # partial table still printed


def test_deterministic_stdout(capsys):
    outs = set()
    for _ in range(2):
        _, out, _ = run_cli(capsys, "cr", "--topology", TOY1, "--source", "D1:s", "--seed", "5")
        outs.add(out)
    assert len(outs) == 1


def test_csv_row(capsys, tmp_path):
    out_csv = tmp_path / "m.csv"
    code, _, _ = run_cli(
        capsys, "pspt", "--topology", TOY1, "--source", "D1:s", "--csv", str(out_csv)
    )
    assert code == 0
    rows = list(csv.DictReader(out_csv.open()))
    assert len(rows) == 1
    assert rows[0]["mode"] == "baseline" and rows[0]["n_domains"] == "2"
    assert int(rows[0]["secif_count"]) > 0


def test_gen_deterministic(capsys, tmp_path):
    f1, f2 = tmp_path / "a.topo", tmp_path / "b.topo"
    run_cli(capsys, "gen", "--domains", "2", "--switches", "5", "--inter-links", "3",
            "--seed", "4", "-o", str(f1))
    run_cli(capsys, "gen", "--domains", "2", "--switches", "5", "--inter-links", "3",
            "--seed", "4", "-o", str(f2))
    assert f1.read_text() == f2.read_text()
    code, out, _ = run_cli(
        capsys, "route", "--topology", str(f1), "--source", "D1:s0", "--dest", "D2:s1"
    )
    assert code in (0, 2)


def test_gen_preset_counts(capsys):
    code, out, _ = run_cli(capsys, "gen", "--preset", "I", "--inter-links", "1", "--seed", "0")
    assert code == 0
    text = out
    assert text.count("switch ") == 318
    assert text.count("\nlink ") == 758
    assert text.count(" gateway") == 231


def test_bench_sweep_rows(capsys, tmp_path):
    out_csv = tmp_path / "bench.csv"
    code, out, _ = run_cli(
        capsys, "bench", "--preset", "sweep-2dom", "--mode", "cr", "--csv", str(out_csv),
        "--switches-per-domain", "4",
    )
    assert code == 0
    assert "context" in out  # headline-number disclaimer present
    rows = list(csv.DictReader(out_csv.open()))
    assert len(rows) == 5
    links = [int(r["n_inter_links"]) for r in rows]
    assert links == sorted(links) and links[0] == 10 and links[-1] == 100
    byts = [float(r["bytes_per_domain_avg"]) for r in rows]
    assert all(b > 0 for b in byts)


def test_bench_single_topology(capsys, tmp_path):
    out_csv = tmp_path / "one.csv"
    code, _, _ = run_cli(
        capsys, "bench", "--topology", TOY1, "--source", "D1:s", "--csv", str(out_csv)
    )
    assert code == 0
    assert len(list(csv.DictReader(out_csv.open()))) == 1


def test_bench_real_backend_small(capsys):
    code, out, _ = run_cli(
        capsys, "bench", "--topology", TOY1, "--source", "D1:s", "--backend", "real"
    )
    assert code == 0
    wall = [l for l in out.splitlines() if "wall_ms=" in l][0]
    assert float(wall.split("wall_ms=")[1].split()[0]) > 0
