"""End-to-end runs of the command line entry point against a tiny corpus."""

import json
import math
import pathlib

import pytest

from compsearch.cli import main

ALPHA_DOCS = {
    "doc_a1.html": (
        "<html><body>\n"
        "<cite>Port Record Office, 1871</cite>\n"
        '<p class="quote">The harbor lanterns burned through the fog.</p>\n'
        '<img class="figure" src="plates/a1.png">\n'
        "<p>Keepers trimmed every wick at dusk. The harbor lanterns answered.</p>\n"
        "</body></html>\n"
    ),
    "doc_a2.html": (
        "<html><body>\n"
        "<cite>Quay Ledger, 1874</cite>\n"
        '<p class="quote">Lanterns along the harbor wall guided the pilot boats.</p>\n'
        "</body></html>\n"
    ),
    "doc_a3.html": (
        "<html><body>\n"
        "<cite>Harbormaster Notes, 1880</cite>\n"
        '<p class="quote">Notes on the harbor lanterns and their oil.</p>\n'
        '<p>See also <a class="hit" href="doc_a1.html">the port record</a>.</p>\n'
        "</body></html>\n"
    ),
}

BETA_DOCS = {
    "doc_b1.html": (
        "<html><body>\n"
        "<blockquote>Every harbor kept its lanterns lit until dawn.</blockquote>\n"
        '<p>More at <a href="doc_b2.html" class="entry">the second volume</a>.</p>\n'
        "</body></html>\n"
    ),
    "doc_b2.html": (
        "<html><body>\n"
        "<blockquote>The lanterns of the outer harbor were doused in the gale.</blockquote>\n"
        "</body></html>\n"
    ),
    # keywords appear only inside longer words; invisible to whole-word scoring
    "doc_b3.html": (
        "<html><body>\n"
        "<blockquote>The harborside lanternsmith kept his shop by the quay.</blockquote>\n"
        "</body></html>\n"
    ),
}


def catalog_entries():
    return [
        {
            "name": "alpha",
            "query_url_template": "file:alpha/results_{QUERY}_p{PAGE}.html",
            "link_pattern": '<a class="hit" href="([^"]+)">',
            "result_page_limit": 2,
            "topic_tags": ["maritime"],
            "extraction_rules": [
                {"target_kind": "excerpt", "pattern": '<p class="quote">([^<]+)</p>'},
                {"target_kind": "image", "pattern": '<img class="figure" src="([^"]+)">'},
            ],
            "citation_pattern": "<cite>([^<]+)</cite>",
            "rate_limit_ms": 0,
        },
        {
            "name": "beta",
            "query_url_template": "file:beta/results_{QUERY}.html",
            "link_pattern": '<a href="([^"]+)" class="entry">',
            "result_page_limit": 1,
            "topic_tags": ["maritime", "lighting"],
            "extraction_rules": [
                {"target_kind": "excerpt", "pattern": "<blockquote>([^<]+)</blockquote>"},
            ],
            "citation_pattern": None,
            "rate_limit_ms": 0,
        },
    ]


def hit(href):
    return f'<a class="hit" href="{href}">entry</a>'


def entry(href):
    return f'<a href="{href}" class="entry">entry</a>'


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    """Two databases, five matching documents, one substring-only decoy."""
    root = tmp_path_factory.mktemp("corpus")
    alpha = root / "alpha"
    beta = root / "beta"
    alpha.mkdir()
    beta.mkdir()
    for name, body in ALPHA_DOCS.items():
        (alpha / name).write_text(body, encoding="utf-8")
    for name, body in BETA_DOCS.items():
        (beta / name).write_text(body, encoding="utf-8")
    (alpha / "results_harbor+lanterns_p1.html").write_text(
        "<html><body>\n" + hit("doc_a1.html") + "\n" + hit("doc_a2.html") + "\n</body></html>\n",
        encoding="utf-8",
    )
    (alpha / "results_harbor+lanterns_p2.html").write_text(
        "<html><body>\n" + hit("doc_a3.html") + "\n</body></html>\n", encoding="utf-8"
    )
    (beta / "results_harbor+lanterns.html").write_text(
        "<html><body>\n"
        + "\n".join(entry(n) for n in ("doc_b1.html", "doc_b2.html", "doc_b3.html"))
        + "\n</body></html>\n",
        encoding="utf-8",
    )
    (root / "catalog.json").write_text(json.dumps(catalog_entries()), encoding="utf-8")
    (root / "replay.json").write_text('{"alpha": 2.5, "beta": 4.0}', encoding="utf-8")
    return root


def run_cli(corpus, out, *extra):
    return main(
        [
            "harbor",
            "lanterns",
            "--catalog",
            str(corpus / "catalog.json"),
            "--replay-timings",
            str(corpus / "replay.json"),
            "--out",
            str(out),
            *extra,
        ]
    )


class TestSuccessfulRun:
    def test_exit_code_and_summary_line(self, corpus, tmp_path, capsys):
        rc = run_cli(corpus, tmp_path / "report")
        out = capsys.readouterr().out
        assert rc == 0
        assert "compiled 5 sources from 2 databases" in out
        assert "report.json" in out and "report.html" in out

    def test_json_report_contents(self, corpus, tmp_path):
        run_cli(corpus, tmp_path / "report")
        data = json.loads((tmp_path / "report.json").read_text("utf-8"))
        assert data["query"]["keywords"] == ["harbor", "lanterns"]
        assert data["generated_at"] == "1970-01-01T00:00:00Z"
        assert len(data["records"]) == 5
        assert data["diagnostics"] == []
        telem = data["telemetry"]
        assert telem["total_sources"] == 5
        assert telem["total_time_seconds"] == 4.0
        assert telem["points"] == [
            {"seconds": 2.5, "sources": 3},
            {"seconds": 4.0, "sources": 2},
        ]
        assert telem["cumulative_points"] == [
            {"seconds": 2.5, "sources": 3},
            {"seconds": 4.0, "sources": 5},
        ]
        # two cumulative points fit a line: S(t) = 4/3 t - 1/3
        assert len(telem["s_coefficients"]) == 2
        assert math.isclose(telem["s_coefficients"][1], 4.0 / 3.0, rel_tol=1e-12)
        assert math.isclose(telem["overall_rate"], 1.25, rel_tol=1e-12)

    def test_best_source_ranked_first(self, corpus, tmp_path):
        run_cli(corpus, tmp_path / "report")
        data = json.loads((tmp_path / "report.json").read_text("utf-8"))
        first = data["records"][0]
        assert first["url"].endswith("alpha/doc_a1.html")
        assert first["relevance_score"] == 4.0
        assert first["citation"] == "Port Record Office, 1871"
        kinds = {c["kind"] for c in first["components"]}
        assert kinds == {"excerpt", "image"}
        # beta has no citation pattern, so its records carry null
        beta_record = next(r for r in data["records"] if "beta/" in r["url"])
        assert beta_record["citation"] is None

    def test_html_report_has_one_section_per_record(self, corpus, tmp_path):
        run_cli(corpus, tmp_path / "report")
        html = (tmp_path / "report.html").read_text("utf-8")
        assert html.count('<section class="source"') == 5
        assert "5 sources compiled." in html

    def test_repeat_runs_are_byte_identical(self, corpus, tmp_path):
        run_cli(corpus, tmp_path / "one")
        run_cli(corpus, tmp_path / "two")
        assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()
        assert (tmp_path / "one.html").read_bytes() == (tmp_path / "two.html").read_bytes()

    def test_out_stem_with_missing_directories(self, corpus, tmp_path):
        stem = tmp_path / "deep" / "nested" / "run"
        rc = run_cli(corpus, stem)
        assert rc == 0
        assert stem.with_name("run.json").exists()
        assert stem.with_name("run.html").exists()

    def test_plot_flag_defaults_to_out_stem(self, corpus, tmp_path):
        rc = run_cli(corpus, tmp_path / "report", "--plot")
        assert rc == 0
        svg = (tmp_path / "report.svg").read_text("utf-8")
        assert svg.startswith("<?xml")
        assert "<svg" in svg

    def test_plot_flag_with_explicit_path(self, corpus, tmp_path):
        target = tmp_path / "curves.svg"
        rc = run_cli(corpus, tmp_path / "report", "--plot", str(target))
        assert rc == 0
        assert target.exists()
        assert not (tmp_path / "report.svg").exists()

    def test_substring_switch_admits_glued_words(self, corpus, tmp_path):
        rc = run_cli(corpus, tmp_path / "loose", "--match-substrings")
        assert rc == 0
        data = json.loads((tmp_path / "loose.json").read_text("utf-8"))
        assert len(data["records"]) == 6
        assert any(r["url"].endswith("doc_b3.html") for r in data["records"])

    def test_topic_filter_narrows_to_one_database(self, corpus, tmp_path, capsys):
        rc = run_cli(corpus, tmp_path / "lit", "--topics", "lighting")
        out = capsys.readouterr().out
        assert rc == 0
        assert "compiled 2 sources from 1 databases" in out
        data = json.loads((tmp_path / "lit.json").read_text("utf-8"))
        assert all("beta/" in r["url"] for r in data["records"])


class TestConfigErrors:
    def test_missing_catalog(self, tmp_path, capsys):
        rc = main(["harbor", "--catalog", str(tmp_path / "absent.json"), "--out", str(tmp_path / "r")])
        err = capsys.readouterr().err
        assert rc == 2
        assert err.startswith("error:")
        assert not (tmp_path / "r.json").exists()

    def test_unparseable_catalog(self, tmp_path, capsys):
        bad = tmp_path / "catalog.json"
        bad.write_text("[{", encoding="utf-8")
        rc = main(["harbor", "--catalog", str(bad), "--out", str(tmp_path / "r")])
        assert rc == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_query_of_stop_words(self, corpus, tmp_path, capsys):
        rc = main(
            ["the", "of", "and", "--catalog", str(corpus / "catalog.json"), "--out", str(tmp_path / "r")]
        )
        assert rc == 2
        assert "no keywords" in capsys.readouterr().err

    def test_unknown_topic(self, corpus, tmp_path, capsys):
        rc = run_cli(corpus, tmp_path / "r", "--topics", "astronomy")
        assert rc == 2
        assert "astronomy" in capsys.readouterr().err

    def test_unknown_extract_kind(self, corpus, tmp_path, capsys):
        rc = run_cli(corpus, tmp_path / "r", "--extract", "citation,nonsense")
        assert rc == 2
        assert "nonsense" in capsys.readouterr().err

    def test_empty_extract_list(self, corpus, tmp_path, capsys):
        rc = run_cli(corpus, tmp_path / "r", "--extract", "")
        assert rc == 2
        assert "nothing to extract" in capsys.readouterr().err

    def test_damping_at_one(self, corpus, tmp_path, capsys):
        rc = run_cli(corpus, tmp_path / "r", "--damping", "1.0")
        assert rc == 2
        assert "damping" in capsys.readouterr().err

    def test_nonpositive_timeout(self, corpus, tmp_path, capsys):
        rc = run_cli(corpus, tmp_path / "r", "--timeout-ms", "0")
        assert rc == 2
        assert "timeout" in capsys.readouterr().err

    def test_unreadable_stop_words_file(self, corpus, tmp_path, capsys):
        rc = run_cli(corpus, tmp_path / "r", "--stop-words", str(tmp_path / "none.txt"))
        assert rc == 2
        assert "stop words" in capsys.readouterr().err

    def test_http_template_rejected_in_fixture_mode(self, tmp_path, capsys):
        entries = catalog_entries()
        entries[0]["query_url_template"] = "http://alpha.example/search?q={QUERY}&p={PAGE}"
        cat = tmp_path / "catalog.json"
        cat.write_text(json.dumps(entries), encoding="utf-8")
        rc = main(["harbor", "--catalog", str(cat), "--out", str(tmp_path / "r")])
        err = capsys.readouterr().err
        assert rc == 2
        assert "fixture mode" in err and "alpha" in err

    def test_replay_file_naming_unknown_database(self, corpus, tmp_path, capsys):
        replay = tmp_path / "replay.json"
        replay.write_text('{"gamma": 1.0}', encoding="utf-8")
        rc = main(
            [
                "harbor",
                "lanterns",
                "--catalog",
                str(corpus / "catalog.json"),
                "--replay-timings",
                str(replay),
                "--out",
                str(tmp_path / "r"),
            ]
        )
        assert rc == 2
        assert "gamma" in capsys.readouterr().err


class TestReplayWarnings:
    def test_empty_replay_file_warns_and_proceeds(self, corpus, tmp_path, capsys):
        replay = tmp_path / "replay.json"
        replay.write_text("{}", encoding="utf-8")
        rc = main(
            [
                "harbor",
                "lanterns",
                "--catalog",
                str(corpus / "catalog.json"),
                "--replay-timings",
                str(replay),
                "--out",
                str(tmp_path / "r"),
            ]
        )
        captured = capsys.readouterr()
        assert rc == 0
        assert "no entries" in captured.err
        assert (tmp_path / "r.json").exists()

    def test_partial_replay_warns_per_database(self, corpus, tmp_path, capsys):
        replay = tmp_path / "replay.json"
        replay.write_text('{"alpha": 2.5}', encoding="utf-8")
        rc = main(
            [
                "harbor",
                "lanterns",
                "--catalog",
                str(corpus / "catalog.json"),
                "--replay-timings",
                str(replay),
                "--out",
                str(tmp_path / "r"),
            ]
        )
        captured = capsys.readouterr()
        assert rc == 0
        assert "no replay entry for 'beta'" in captured.err
        data = json.loads((tmp_path / "r.json").read_text("utf-8"))
        assert {"seconds": 2.5, "sources": 3} in data["telemetry"]["points"]


class TestHardFailures:
    def test_every_database_failing_exits_3(self, tmp_path, capsys):
        entries = catalog_entries()
        for e in entries:
            e["query_url_template"] = f"file://elsewhere/{e['name']}_{{QUERY}}.html"
        cat = tmp_path / "catalog.json"
        cat.write_text(json.dumps(entries), encoding="utf-8")
        rc = main(["harbor", "--catalog", str(cat), "--out", str(tmp_path / "r")])
        err = capsys.readouterr().err
        assert rc == 3
        assert "every selected database failed" in err
        assert not (tmp_path / "r.json").exists()

    def test_live_mode_connection_refused_exits_3(self, tmp_path, capsys):
        entries = [catalog_entries()[1]]
        entries[0]["query_url_template"] = "http://127.0.0.1:1/find?q={QUERY}"
        cat = tmp_path / "catalog.json"
        cat.write_text(json.dumps(entries), encoding="utf-8")
        rc = main(
            [
                "harbor",
                "--catalog",
                str(cat),
                "--mode",
                "live",
                "--timeout-ms",
                "2000",
                "--out",
                str(tmp_path / "r"),
            ]
        )
        assert rc == 3
        assert "beta" in capsys.readouterr().err

    def test_missing_result_page_degrades_but_succeeds(self, tmp_path, capsys):
        entries = [catalog_entries()[0]]
        cat = tmp_path / "catalog.json"
        cat.write_text(json.dumps(entries), encoding="utf-8")
        # no alpha/ directory at all: page 1 is missing, not broken
        rc = main(["harbor", "--catalog", str(cat), "--out", str(tmp_path / "r")])
        out = capsys.readouterr().out
        assert rc == 0
        assert "compiled 0 sources" in out
        assert "diagnostics" in out
        data = json.loads((tmp_path / "r.json").read_text("utf-8"))
        assert data["records"] == []
        assert data["telemetry"]["s_coefficients"] is None
        assert len(data["diagnostics"]) >= 1

    def test_plot_skipped_without_curve(self, tmp_path, capsys):
        entries = [catalog_entries()[0]]
        cat = tmp_path / "catalog.json"
        cat.write_text(json.dumps(entries), encoding="utf-8")
        rc = main(["harbor", "--catalog", str(cat), "--out", str(tmp_path / "r"), "--plot"])
        captured = capsys.readouterr()
        assert rc == 0
        assert "skipping plot" in captured.err
        assert not (tmp_path / "r.svg").exists()


class TestModuleEntryPoint:
    def test_dunder_main_wires_to_cli(self):
        import compsearch.__main__ as entry

        assert entry.main is main

    def test_report_paths_derive_from_out_stem(self, corpus, tmp_path):
        stem = tmp_path / "named"
        run_cli(corpus, stem)
        written = sorted(p.name for p in tmp_path.iterdir())
        assert written == ["named.html", "named.json"]
