import json
import os

import pytest

from main import main


@pytest.fixture
def cli(workspace, capsys):
    """Запуск CLI в тестовом каталоге: возвращает (код, stdout, stderr)"""

    def invoke(*argv):
        code = main(["--config", str(workspace / "eicv.conf"), *argv])
        out, err = capsys.readouterr()
        return code, out, err

    return invoke


def data(workspace, name):
    return workspace / "data" / name


class TestTopics:
    def test_list_fixture(self, cli):
        code, out, _ = cli("topics", "list")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 10
        assert lines[0] == "football\t17 tags"

    def test_add_then_list(self, cli):
        cli("topics", "add", "Chess")
        _, out, _ = cli("topics", "list")
        assert out.splitlines()[-1] == "chess\t0 tags"

    def test_remove_twice(self, cli, workspace):
        assert cli("topics", "remove", "golf")[0] == 0
        assert not data(workspace, "tags/golf.csv").exists()
        code, _, err = cli("topics", "remove", "golf")
        assert code == 1
        assert "not found" in err

    def test_add_duplicate(self, cli):
        assert cli("topics", "add", "football")[0] == 1

    @pytest.mark.parametrize("name", ["../../escaped", "a/b", "..\\escaped", ".hidden"])
    def test_add_rejects_path_like_names(self, cli, workspace, name):
        code, _, err = cli("topics", "add", name)
        assert code == 1
        assert "Topic name" in err
        assert not (workspace / "escaped.csv").exists()
        assert not (workspace / "data" / "tags" / "a").exists()
        assert name not in data(workspace, "topics.csv").read_text(encoding="utf-8")

    def test_add_to_new_catalog(self, cli, workspace):
        topics = workspace / "new" / "topics.csv"
        tags_dir = workspace / "new" / "tags"
        code, _, _ = cli("--topics", str(topics), "--tags-dir", str(tags_dir), "topics", "add", "golf")
        assert code == 0
        assert topics.read_text(encoding="utf-8") == "golf\n"
        assert (tags_dir / "golf.csv").exists()

    def test_json_list(self, cli):
        code, out, _ = cli("--json", "topics", "list")
        assert code == 0
        assert json.loads(out)[1] == {"topic": "cricket", "tags": 14}


class TestTags:
    def test_expand_one_topic(self, cli, workspace):
        code, out, _ = cli("tags", "expand", "--topic", "football", "--limit", "5")
        assert code == 0
        assert out.splitlines()[0] == "football (5 candidates):"
        pending = data(workspace, "pending/football.csv").read_text(encoding="utf-8").split()
        assert pending == ["soccer", "midfielder", "defender", "kickoff", "dribble"]
        # каталог не меняется до tags add
        assert "soccer" not in data(workspace, "tags/football.csv").read_text(encoding="utf-8")

    def test_commit_pending(self, cli, workspace):
        cli("tags", "expand", "--topic", "football", "--limit", "5")
        code, out, _ = cli("tags", "add", "--topic", "football", "--pending")
        assert code == 0
        assert out.strip() == "added 5 tag(s) to 'football'"
        assert not data(workspace, "pending/football.csv").exists()
        assert "soccer" in data(workspace, "tags/football.csv").read_text(encoding="utf-8").split()

    def test_add_literal_tags(self, cli, workspace):
        code, out, _ = cli("tags", "add", "--topic", "golf", "Hole In One", "putt")
        assert code == 0
        assert out.strip() == "added 1 tag(s) to 'golf'"
        assert "hole in one" in data(workspace, "tags/golf.csv").read_text(encoding="utf-8")

    def test_add_needs_a_source(self, cli):
        assert cli("tags", "add", "--topic", "golf")[0] == 64

    def test_add_pending_for_unknown_topic(self, cli):
        code, _, err = cli("tags", "add", "--topic", "../../escaped", "--pending")
        assert code == 1
        assert "not found" in err

    def test_report(self, cli):
        code, out, _ = cli("tags", "report")
        assert code == 0
        assert out.splitlines() == ["football: player", "cricket: player"]

    def test_triage_whitelist_then_nothing_left(self, cli, workspace, monkeypatch):
        answers = iter(["w"])
        monkeypatch.setattr("builtins.input", lambda prompt="": next(answers))
        code, out, _ = cli("tags", "triage")
        assert code == 0
        assert "player: football, cricket" in out
        code, out, _ = cli("tags", "triage")
        assert code == 0
        assert out.strip() == "no ambiguity"
        assert "player,football,cricket" in data(workspace, "whitelist.csv").read_text(encoding="utf-8")

    def test_triage_quit_leaves_lexicons(self, cli, workspace, monkeypatch):
        before = data(workspace, "tags/cricket.csv").read_text(encoding="utf-8")
        monkeypatch.setattr("builtins.input", lambda prompt="": "q")
        code, out, _ = cli("tags", "triage")
        assert code == 0
        assert "aborted" in out
        assert data(workspace, "tags/cricket.csv").read_text(encoding="utf-8") == before

    def test_triage_decisions_file(self, cli, workspace):
        decisions = workspace / "decisions.csv"
        decisions.write_text("player,remove_from,cricket\n", encoding="utf-8")
        code, _, _ = cli("tags", "triage", "--decisions", str(decisions))
        assert code == 0
        assert "player" not in data(workspace, "tags/cricket.csv").read_text(encoding="utf-8").split()
        assert "player,cricket" in data(workspace, "rejected.csv").read_text(encoding="utf-8")
        # отклонённый тег больше не предлагается
        _, out, _ = cli("--json", "tags", "expand", "--topic", "cricket")
        assert "player" not in json.loads(out)["candidates"]["cricket"]

    def test_bad_decision_action(self, cli, workspace):
        decisions = workspace / "decisions.csv"
        decisions.write_text("player,maybe\n", encoding="utf-8")
        assert cli("tags", "triage", "--decisions", str(decisions))[0] == 1


class TestClassify:
    def test_ronaldo(self, cli):
        code, out, _ = cli("classify", "--text", "I like Ronaldo")
        assert code == 0
        assert out.strip() == "football"

    def test_no_topic(self, cli):
        code, out, _ = cli("classify", "--text", "I am frustrated")
        assert code == 0
        assert out.strip() == "No topic matched"

    def test_user(self, cli):
        code, out, _ = cli("classify", "--user", "@cr7fan")
        assert code == 0
        assert out.strip() == "football"

    def test_unknown_user(self, cli):
        assert cli("classify", "--user", "ghost")[0] == 3

    @pytest.mark.parametrize("argv", [
        ("classify", "--text", "x", "--user", "y"),
        ("classify",),
        ("frobnicate",),
    ])
    def test_usage_errors(self, cli, argv):
        code, _, err = cli(*argv)
        assert code == 64
        assert "usage error" in err

    def test_empty_text(self, cli):
        assert cli("classify", "--text", "   ")[0] == 1

    def test_json_is_byte_stable(self, cli):
        first = cli("classify", "--text", "I like Harry Potter", "--json")[1]
        second = cli("classify", "--text", "I like Harry Potter", "--json")[1]
        assert first == second
        payload = json.loads(first)
        assert payload["matched"] == ["movie"]
        assert payload["values"]["movie"] == 9
        assert set(payload) >= {"matched", "values", "t_max", "t_v", "entities"}

    def test_learn_extends_redundant_words(self, cli, workspace):
        code, _, _ = cli("classify", "--text", "I like Ronaldo ok 2017", "--learn")
        assert code == 0
        words = data(workspace, "redword.csv").read_text(encoding="utf-8").split()
        assert "ok" in words and "2017" in words

    def test_missing_catalog(self, cli, workspace):
        data(workspace, "tags/golf.csv").unlink()
        code, _, err = cli("classify", "--text", "I like Ronaldo")
        assert code == 2
        assert "golf" in err


class TestIndexAndEval:
    def test_index_writes_cache(self, cli, workspace):
        code, out, _ = cli("index", "--out", str(workspace / "out.idx"))
        assert code == 0
        assert out.startswith("indexed 168 document(s)")
        assert (workspace / "out.idx").exists()

    def test_reindex_replaces_cache(self, cli, workspace):
        cache = workspace / "out.idx"
        cli("index", "--out", str(cache))
        first = cache.read_bytes()
        cli("index", "--out", str(cache))
        assert cache.read_bytes() == first
        assert not list(workspace.glob(".out.idx.*"))

    def test_index_missing_corpus(self, cli, workspace):
        assert cli("index", "--corpus", str(workspace / "absent.jsonl"))[0] == 2

    def test_classify_uses_cache(self, cli, workspace):
        cli("index")
        assert data(workspace, "corpus.idx").exists()
        assert cli("classify", "--text", "Sachin is my idol")[1].strip() == "cricket"

    def test_cache_of_another_corpus_is_not_used(self, cli, workspace):
        cli("index")
        other = workspace / "other.jsonl"
        other.write_text(
            "".join(f'{{"id": "o{n}", "text": "pizza night {n}", "ts": {n}}}\n' for n in range(5)),
            encoding="utf-8",
        )
        stamp = data(workspace, "corpus.idx").stat().st_mtime
        os.utime(other, (stamp - 100, stamp - 100))
        code, out, _ = cli("--corpus", str(other), "classify", "--text", "I like Ronaldo")
        assert code == 0
        assert out.strip() == "No topic matched"

    def test_eval_sample_set(self, cli, workspace):
        code, out, _ = cli("eval", "--dataset", str(data(workspace, "eval.csv")))
        assert code == 0
        assert out.splitlines()[0] == "6/6 = 100.00%"

    def test_eval_one_wrong(self, cli, workspace):
        code, out, _ = cli("eval", "--dataset", str(data(workspace, "eval_wrong.csv")))
        assert code == 0
        assert out.splitlines()[0] == "5/6 = 83.33%"
        assert any(line.startswith("FAIL [text] 'Sachin is my idol'") for line in out.splitlines())

    def test_eval_json(self, cli, workspace):
        code, out, _ = cli("--json", "eval", "--dataset", str(data(workspace, "eval.csv")))
        assert code == 0
        assert json.loads(out)["accuracy_percent"] == "100.00"

    def test_eval_missing_dataset(self, cli, workspace):
        assert cli("eval", "--dataset", str(workspace / "absent.csv"))[0] == 2

    def test_eval_empty_dataset(self, cli, workspace):
        empty = workspace / "empty.csv"
        empty.write_text("# nothing here\n", encoding="utf-8")
        assert cli("eval", "--dataset", str(empty))[0] == 1


class TestConfig:
    def test_unknown_config_key(self, tmp_path, capsys):
        config = tmp_path / "bad.conf"
        config.write_text("colour = blue\n", encoding="utf-8")
        assert main(["--config", str(config), "topics", "list"]) == 1
        assert "unknown key" in capsys.readouterr().err

    def test_threshold_invariant_checked_at_parse(self, workspace, capsys):
        config = workspace / "eicv.conf"
        config.write_text(config.read_text(encoding="utf-8") + "threshold_num = 4\n", encoding="utf-8")
        assert main(["--config", str(config), "classify", "--text", "I like Ronaldo"]) == 1
        assert "threshold" in capsys.readouterr().err
