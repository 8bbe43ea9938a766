import pytest

from gfibvm import cli, harness


def run(argv, monkeypatch=None):
    return cli.main(argv)


def test_coverage_then_verify(tmp_path, capsys):
    out = tmp_path / "r.csv"
    args = ["--methods", "JeffreysBayes", "--n-values", "100", "--theta-values", "0.3",
            "--replicates", "2000", "--grid-size", "1024", "--seed", "4"]
    assert cli.main(["coverage", *args, "-o", str(out)]) == 0
    assert out.read_text().startswith("method,n,theta0")
    assert cli.main(["verify", "-i", str(out)]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_failure_exit_code(tmp_path):
    out = tmp_path / "bad.csv"
    harness.emit([harness.CoverageRecord("GF", 50, 0.3, 0.5, 0.9, 0.0, 1)], "csv", out)
    assert cli.main(["verify", "-i", str(out)]) == 1


@pytest.mark.parametrize("argv", [
    ["coverage", "--theta-values", "1.5"],
    ["coverage", "--methods", "Nope"],
    ["coverage", "--replicates", "0"],
    ["coverage", "--config", "/nonexistent/file"],
])
def test_config_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert "config error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["coverage", "--replicates", "many"])
    assert exc.value.code == 2


def test_config_file_and_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("# comment\nmethods = GF, ModGF\nn-values = 10\ntheta_values=0.2\nreplicates = 5\nseed = 1\n")
    parser = cli.build_parser()
    monkeypatch.delenv(cli.SEED_ENV, raising=False)
    resolved = cli.resolve_config(parser.parse_args(["coverage", "--config", str(cfg)]))
    assert resolved.methods == ("GF", "ModGF") and resolved.n_values == (10,) and resolved.seed == 1

    env = {cli.SEED_ENV: "0x10"}
    assert cli.resolve_config(parser.parse_args(["coverage", "--config", str(cfg)]), env).seed == 16
    flagged = parser.parse_args(["coverage", "--config", str(cfg), "--seed", "99", "--replicates", "7"])
    resolved = cli.resolve_config(flagged, env)
    assert resolved.seed == 99 and resolved.replicates == 7


def test_env_override_is_seed_only(tmp_path):
    parser = cli.build_parser()
    cfg = cli.resolve_config(parser.parse_args(["coverage"]), {cli.SEED_ENV: "5", "GFIBVM_REPLICATES": "3"})
    assert cfg.seed == 5 and cfg.replicates == 10_000


def test_bad_config_lines(tmp_path):
    for text in ("replicates\n", "colour = red\n", "replicates = lots\n"):
        p = tmp_path / "c.cfg"
        p.write_text(text)
        assert cli.main(["coverage", "--config", str(p)]) == 2


def test_same_seed_same_csv(capsys):
    args = ["coverage", "--methods", "GF", "--n-values", "5", "--theta-values", "0.4",
            "--replicates", "50", "--grid-size", "256", "--seed", "8"]
    cli.main(args)
    first = capsys.readouterr().out
    cli.main(args + ["--workers", "2"])
    assert capsys.readouterr().out == first


def test_bvm_and_spline_demo(capsys):
    assert cli.main(["bvm", "--n-values", "20,100", "--theta-values", "0.5", "--replicates", "3",
                     "--grid-size", "1024"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "theta0,n,mean_tv,replicates" and len(lines) == 3
    assert cli.main(["spline-demo", "--n", "80", "--steps", "200", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "t1," in out and "sigma2," in out


def test_spline_demo_invalid_truth():
    assert cli.main(["spline-demo", "--knots", "0.01"]) == 2
