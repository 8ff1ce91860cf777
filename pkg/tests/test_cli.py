import json

from trajecta.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main

from conftest import STUDENT_SENTENCE


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestStageGuards:
    def test_query_before_any_stage_exits_2(self, tmp_path, capsys):
        code, _, err = _run(capsys, "--root", str(tmp_path), "query", "pass park")
        assert code == EXIT_DATA
        assert "missing" in err

    def test_query_before_build_index_names_the_index(self, tmp_path, capsys):
        base = ["--root", str(tmp_path)]
        assert main(base + ["synth", "--users", "2", "--days", "1", "--pois", "40",
                            "--stations", "8", "--seed", "1"]) == EXIT_OK
        assert main(base + ["ingest"]) == EXIT_OK
        assert main(base + ["train-topics", "--topics", "2", "--iters", "20"]) == EXIT_OK
        assert main(base + ["train-embed", "--dim", "8"]) == EXIT_OK
        capsys.readouterr()
        code, _, err = _run(capsys, *base, "query", "pass park")
        assert code == EXIT_DATA
        assert "index missing" in err

    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_trajecta_home_overrides_root(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("TRAJECTA_HOME", str(tmp_path))
        assert main(["synth", "--users", "1", "--days", "1", "--pois", "20",
                     "--stations", "5", "--seed", "1"]) == EXIT_OK
        assert (tmp_path / "data" / "stations.csv").exists()


class TestQueryCommand:
    def test_json_output_ranked_and_deterministic(self, demo_root, capsys):
        base = ["--root", str(demo_root)]
        code, out1, _ = _run(capsys, *base, "query", STUDENT_SENTENCE, "--json")
        assert code == EXIT_OK
        code, out2, _ = _run(capsys, *base, "query", STUDENT_SENTENCE, "--json")
        assert code == EXIT_OK
        body1 = json.loads(out1)
        body2 = json.loads(out2)
        body1.pop("timing_ms")
        body2.pop("timing_ms")
        assert body1 == body2  # stable ordering and content across runs
        assert body1["trajectories"]
        relevances = [t["relevance"] for t in body1["trajectories"]]
        assert relevances == sorted(relevances, reverse=True)

    def test_human_output_lists_results(self, demo_root, capsys):
        code, out, _ = _run(capsys, "--root", str(demo_root), "query", STUDENT_SENTENCE)
        assert code == EXIT_OK
        assert "students" in out
        assert "trajectories" in out

    def test_bad_topic_weights_is_usage_error(self, demo_root, capsys):
        code, _, err = _run(capsys, "--root", str(demo_root), "query", STUDENT_SENTENCE,
                            "--topic-weights", "1,zap,0,0")
        assert code == EXIT_USAGE
        assert "error:" in err

    def test_query_flags_flow_through(self, demo_root, capsys):
        code, out, _ = _run(capsys, "--root", str(demo_root), "query", STUDENT_SENTENCE,
                            "--json", "--alpha", "0.8", "--beta", "0.2",
                            "--topic-weights", "1,0,0,0", "--k", "3")
        assert code == EXIT_OK
        constraints = json.loads(out)["constraints"]
        assert constraints["alpha"] == 0.8
        assert constraints["beta"] == 0.2
        assert constraints["topic_weights"] == [1.0, 0.0, 0.0, 0.0]
        assert constraints["k"] == 3


class TestSimilarCommand:
    def test_self_similarity_zero(self, demo_root, demo_workspace, capsys):
        tid = sorted(demo_workspace.trajectories)[0]
        code, out, _ = _run(capsys, "--root", str(demo_root), "similar", tid, tid)
        assert code == EXIT_OK
        assert "cost=0.000000" in out

    def test_unknown_id_exits_2(self, demo_root, capsys):
        code, _, err = _run(capsys, "--root", str(demo_root), "similar", "nope", "nope")
        assert code == EXIT_DATA


class TestClusterCommand:
    def test_cluster_runs(self, demo_root, capsys):
        code, out, _ = _run(capsys, "--root", str(demo_root), "cluster", "--k", "3")
        assert code == EXIT_OK
        assert "clustered" in out
