import json

import numpy as np
import pytest

from sgmatch import cli
from sgmatch.graphs import Graph, permute_vertices
from sgmatch.io import load_graph, write_graph, write_seeds

CONFIG = """
n = 30
p = 0.5
rho_grid = 0.5,1.0
seed_grid = 0,8
replicates = 3
methods = sgm,rgm,faq
master_seed = 12345
"""


def run_cli(capsys, *args):
    code = cli.main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenerate:
    def test_writes_pair_and_metadata(self, capsys, tmp_path):
        g1p, g2p = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        code, out, _ = run_cli(
            capsys, "generate", "--n", "12", "--p", "0.5", "--rho", "1.0",
            "--seed", "5", "--out-g1", g1p, "--out-g2", g2p,
        )
        assert code == 0
        meta = json.loads(out)
        assert meta["prng"] == "philox4x64"
        g1 = load_graph(g1p)
        g2 = load_graph(g2p)
        assert np.array_equal(g1.adj, g2.adj)  # rho = 1

    def test_bad_probability_exit_code(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "generate", "--n", "5", "--p", "1.5", "--rho", "0.5",
            "--out-g1", str(tmp_path / "a"), "--out-g2", str(tmp_path / "b"),
        )
        assert code == 2
        assert "error" in err


@pytest.fixture
def scrambled_pair(tmp_path):
    """Identical graphs with the second one's labels hidden by a known permutation."""
    rng = np.random.default_rng(17)
    a = np.triu((rng.random((20, 20)) < 0.5).astype(float), 1)
    g1 = Graph(a + a.T)
    hidden = rng.permutation(20).astype(np.int64)
    g2 = permute_vertices(g1, hidden)
    g1p, g2p = str(tmp_path / "g1.csv"), str(tmp_path / "g2.csv")
    write_graph(g1, g1p)
    write_graph(g2, g2p)
    return g1p, g2p, hidden


class TestMatch:
    def test_faq_recovers_isomorphism(self, capsys, scrambled_pair, tmp_path):
        g1p, g2p, hidden = scrambled_pair
        out_path = str(tmp_path / "map.csv")
        code, out, _ = run_cli(
            capsys, "match", "--method", "faq", "--g1", g1p, "--g2", g2p,
            "--out", out_path,
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["disagreements"] == 0
        rows = [line.split(",") for line in open(out_path).read().strip().split("\n")[1:]]
        mapping = {int(r[0]): int(r[1]) for r in rows}
        assert all(mapping[v] == hidden[v] for v in range(20))

    def test_seeded_methods_with_seed_file(self, capsys, scrambled_pair, tmp_path):
        g1p, g2p, hidden = scrambled_pair
        seeds = np.array([[v, hidden[v]] for v in (3, 7, 11, 15)])
        seeds_path = str(tmp_path / "seeds.csv")
        write_seeds(seeds, seeds_path)
        for method in ("sgm", "rgm"):
            out_path = str(tmp_path / f"{method}.csv")
            code, out, _ = run_cli(
                capsys, "match", "--method", method, "--g1", g1p, "--g2", g2p,
                "--seeds", seeds_path, "--out", out_path,
            )
            assert code == 0
            summary = json.loads(out)
            assert summary["seeds"] == 4
            rows = [ln.split(",") for ln in open(out_path).read().strip().split("\n")[1:]]
            mapping = {int(r[0]): int(r[1]) for r in rows}
            seeded = {int(r[0]) for r in rows if r[2] == "1"}
            assert seeded == {3, 7, 11, 15}
            assert all(mapping[v] == hidden[v] for v in seeded)
            if method == "sgm":
                assert all(mapping[v] == hidden[v] for v in range(20))

    def test_rgm_without_seeds_is_parameter_error(self, capsys, scrambled_pair):
        g1p, g2p, _ = scrambled_pair
        code, _, _ = run_cli(capsys, "match", "--method", "rgm", "--g1", g1p, "--g2", g2p)
        assert code == 2

    def test_missing_file_is_format_error(self, capsys, tmp_path):
        code, _, _ = run_cli(
            capsys, "match", "--method", "faq",
            "--g1", str(tmp_path / "none.csv"), "--g2", str(tmp_path / "none.csv"),
        )
        assert code == 3

    def test_stdout_mode(self, capsys, scrambled_pair):
        g1p, g2p, _ = scrambled_pair
        code, out, err = run_cli(capsys, "match", "--method", "faq", "--g1", g1p, "--g2", g2p)
        assert code == 0
        assert out.startswith("v_in_g1,v_in_g2,is_seed")
        json.loads(err)  # summary goes to stderr


class TestSimulate:
    def test_deterministic_across_runs_and_threads(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(CONFIG)
        outs = []
        for name, threads in (("a", "1"), ("b", "1"), ("c", "8")):
            out_path = tmp_path / f"{name}.csv"
            code, _, _ = run_cli(
                capsys, "simulate", "--config", str(cfg), "--out", str(out_path),
                "--threads", threads,
            )
            assert code == 0
            outs.append(out_path.read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_artifacts_emitted(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(CONFIG)
        code, _, _ = run_cli(
            capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "r.csv"),
            "--json", str(tmp_path / "r.json"), "--plot", str(tmp_path / "r.svg"),
            "--emit-matches", str(tmp_path / "matches"),
        )
        assert code == 0
        assert (tmp_path / "r.csv").exists()
        payload = json.loads((tmp_path / "r.json").read_text())
        assert payload["config"]["n"] == 30
        assert {"method": "rgm", "rho": 0.5, "s": 0} in payload["skipped_cells"]
        svg = (tmp_path / "r.svg").read_text()
        assert svg.startswith("<svg")
        match_files = sorted(tmp_path.glob("matches.*.csv"))
        assert len(match_files) == 8  # sgm on 4 cells, rgm on s=8 cells, faq on s=0
        header = match_files[0].read_text().splitlines()[0]
        assert header == "replicate,vertex,matched_to,correct"

    def test_bad_config_is_format_error(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("n = 10\nwhat = ever\n")
        code, _, _ = run_cli(capsys, "simulate", "--config", str(cfg), "--out", str(tmp_path / "r.csv"))
        assert code == 3


class TestOracle:
    def test_gm_report(self, capsys, tmp_path):
        rng = np.random.default_rng(2)
        a = np.triu((rng.random((6, 6)) < 0.5).astype(float), 1)
        g = Graph(a + a.T)
        p = str(tmp_path / "g.csv")
        write_graph(g, p)
        code, out, _ = run_cli(capsys, "oracle", "--mode", "gm", "--g1", p, "--g2", p)
        assert code == 0
        report = json.loads(out)
        assert report["optimum"] == 0
        assert report["better_than_identity"] == 0

    def test_rgm_with_prefix_seeds(self, capsys, tmp_path):
        rng = np.random.default_rng(3)
        a = np.triu((rng.random((7, 7)) < 0.5).astype(float), 1)
        g = Graph(a + a.T)
        p = str(tmp_path / "g.csv")
        write_graph(g, p)
        code, out, _ = run_cli(
            capsys, "oracle", "--mode", "rgm", "--g1", p, "--g2", p, "--s", "3"
        )
        assert code == 0
        assert json.loads(out)["optimum"] == 0

    def test_oversize_refused_with_exit_4(self, capsys, tmp_path):
        g = Graph(np.zeros((11, 11)))
        p = str(tmp_path / "g.csv")
        write_graph(g, p)
        code, _, err = run_cli(capsys, "oracle", "--mode", "gm", "--g1", p, "--g2", p)
        assert code == 4
        assert "cap" in err


class TestBounds:
    def test_kl(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "kl", "--r", "0.75", "--q", "0.5")
        assert code == 0
        assert json.loads(out)["kl"] == pytest.approx(0.130812, abs=1e-6)

    def test_tail_with_exact(self, capsys):
        code, out, _ = run_cli(
            capsys, "bounds", "tail", "--eta", "10", "--q", "0.3", "--r", "0.5", "--exact"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["lower_bound"] <= payload["exact_tail"]
        assert payload["threshold"] == 5

    def test_constants(self, capsys):
        code, out, _ = run_cli(
            capsys, "bounds", "constants", "--p", "0.5", "--rho", "0.5", "--eps", "1.0"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["c5_lower"] > 0
        assert payload["c6_upper"] > 0

    def test_domain_error_exit_2(self, capsys):
        code, _, _ = run_cli(capsys, "bounds", "kl", "--r", "0.0", "--q", "0.5")
        assert code == 2
