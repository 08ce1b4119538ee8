import json
import xml.etree.ElementTree as ET

import pytest

from webometer.cli import main

SIM = {
    "seed": 11,
    "num_docs": 1500,
    "docs_per_day": 50,
    "vocab_size": 800,
}


@pytest.fixture
def config_path(tmp_path):
    cfg = {
        "backends": [
            {"name": "standard", "kind": "sim", "interface": "standard"},
            {"name": "api", "kind": "sim", "interface": "api"},
        ],
        "sim": SIM,
        "store_path": str(tmp_path / "samples.jsonl"),
        "state_dir": str(tmp_path),
        "enforce_quota": False,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


@pytest.fixture
def queries_path(tmp_path, small_corpus):
    path = tmp_path / "queries.json"
    path.write_text(
        json.dumps({"qa": small_corpus.vocab[0], "qb": small_corpus.vocab[1]})
    )
    return str(path)


def test_help_exits_zero():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0


def test_subcommand_help_exits_zero():
    for sub in ("collect", "compare", "tld", "formats", "coverage", "serve"):
        with pytest.raises(SystemExit) as exc:
            main([sub, "--help"])
        assert exc.value.code == 0


def test_collect_prints_four_lines(config_path, queries_path, capsys):
    rc = main(
        ["--config", config_path, "collect", "--queries", queries_path,
         "--day", "2004-07-30"]
    )
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 4


def test_collect_repeat_same_day_marks_updated(config_path, queries_path, capsys, tmp_path):
    args = ["--config", config_path, "collect", "--queries", queries_path,
            "--day", "2004-07-30"]
    main(args)
    store = tmp_path / "samples.jsonl"
    size_before = store.read_text()
    capsys.readouterr()
    rc = main(args)
    assert rc == 0
    out = capsys.readouterr().out
    assert "updated" in out
    assert store.read_text() == size_before


def test_bad_config_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"backends": []}))
    rc = main(["--config", str(bad), "tld", "--query", "x"])
    assert rc == 1


def test_unknown_backend_exits_one(config_path, capsys):
    rc = main(["--config", config_path, "tld", "--query", "x", "--backend", "nope"])
    assert rc == 1


def test_compare_prints_lag(config_path, queries_path, capsys):
    for day in range(1, 41):
        main(
            ["--config", config_path, "collect", "--queries", queries_path,
             "--day", f"2004-07-{day:02d}" if day <= 31 else f"2004-08-{day-31:02d}"]
        )
    capsys.readouterr()
    rc = main(["--config", config_path, "compare", "--query", "qa", "--max-lag", "6"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "best_lag: 3" in out
    assert "ratio" in out


def test_compare_single_day_insufficient(config_path, queries_path, capsys):
    main(["--config", config_path, "collect", "--queries", queries_path,
          "--day", "2004-07-30"])
    rc = main(["--config", config_path, "compare", "--query", "qa", "--max-lag", "2"])
    assert rc == 1


def test_compare_missing_series_exits_one(config_path, capsys):
    rc = main(["--config", config_path, "compare", "--query", "ghost"])
    assert rc == 1


def test_compare_plot_is_valid_svg(config_path, queries_path, tmp_path, capsys):
    for day in range(1, 11):
        main(["--config", config_path, "collect", "--queries", queries_path,
              "--day", f"2004-07-{day:02d}"])
    plot = tmp_path / "chart.svg"
    rc = main(
        ["--config", config_path, "compare", "--query", "qa", "--max-lag", "3",
         "--plot", str(plot)]
    )
    assert rc == 0
    root = ET.parse(plot).getroot()
    assert root.tag.endswith("svg")
    series = [
        el for el in root.iter()
        if el.tag.endswith("polyline") and el.get("class") == "series"
    ]
    assert len(series) == 2


def test_tld_defaults_and_table(config_path, small_corpus, capsys):
    rc = main(["--config", config_path, "tld", "--query", small_corpus.vocab[0]])
    assert rc == 0
    out = capsys.readouterr().out
    assert "total: 250 urls" in out
    assert "fit [ols-loglog]" in out


def test_tld_empty_query_exits_two(config_path, capsys):
    rc = main(["--config", config_path, "tld", "--query", "nosuchword"])
    assert rc == 2
    assert "empty distribution" in capsys.readouterr().out


def test_tld_json_report_matches_analytics(config_path, small_corpus, tmp_path, capsys):
    out_json = tmp_path / "tld.json"
    rc = main(
        ["--config", config_path, "tld", "--query", small_corpus.vocab[0],
         "--json", str(out_json)]
    )
    assert rc == 0
    from webometer import analytics
    from webometer.backend import SimBackend, fetch_top
    from webometer.model import Query
    from webometer.sim_index import InterfaceKind

    backend = SimBackend(small_corpus, InterfaceKind.STANDARD)
    urls = fetch_top(backend, Query(terms=(small_corpus.vocab[0],)), 250)
    dist = analytics.tld_distribution(list(urls))
    fit = analytics.fit_power_law(dist)
    assert out_json.read_text() == analytics.report_json(dist, fit)


def test_tld_plot_svg(config_path, small_corpus, tmp_path, capsys):
    plot = tmp_path / "tld.svg"
    rc = main(
        ["--config", config_path, "tld", "--query", small_corpus.vocab[0],
         "--plot", str(plot)]
    )
    assert rc == 0
    root = ET.parse(plot).getroot()
    points = [el for el in root.iter() if el.get("class") == "point"]
    assert points
    fitted = [el for el in root.iter() if el.get("class") == "series"]
    assert len(fitted) == 1


def test_formats_both_modes(config_path, small_corpus, capsys):
    for mode in ("facet-query", "url-extension"):
        rc = main(
            ["--config", config_path, "formats", "--query", small_corpus.vocab[0],
             "--mode", mode, "--n", "200"]
        )
        assert rc == 0
        out = capsys.readouterr().out
        fractions = [
            float(line.split()[-1])
            for line in out.strip().splitlines()[1:]
            if not line.startswith("plot")
        ]
        # printed fractions are rounded to 4 decimals
        assert sum(fractions) == pytest.approx(1.0, abs=1e-3)


def test_formats_plot_bar_chart(config_path, small_corpus, tmp_path, capsys):
    plot = tmp_path / "fmt.svg"
    rc = main(
        ["--config", config_path, "formats", "--query", small_corpus.vocab[0],
         "--plot", str(plot)]
    )
    assert rc == 0
    root = ET.parse(plot).getroot()
    bars = [el for el in root.iter() if el.get("class") == "bar"]
    assert bars


def test_coverage_command(config_path, small_corpus, tmp_path, capsys):
    from test_coverage import planted_fixture

    journals = planted_fixture(small_corpus)
    jpath = tmp_path / "journals.csv"
    jpath.write_text("title\n" + "\n".join(j.title for j in journals) + "\n")
    out_csv = tmp_path / "report.csv"
    rc = main(
        ["--config", config_path, "coverage", "--journals", str(jpath),
         "--out", str(out_csv)]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "covered_fraction: 0.6000" in out
    assert out_csv.exists()


def test_coverage_missing_file_exits_one(config_path, capsys):
    rc = main(["--config", config_path, "coverage", "--journals", "/nope.csv"])
    assert rc == 1
