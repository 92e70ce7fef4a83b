import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from conftest import FIXTURES, TrackingBackend, run
from services.evaluator import (
    build_report, check_gold_topics, evaluate, judge, load_dataset, load_groups, parse_gold,
)
from storage.models import CaseOutcome, ClassificationResult, LabeledCase, TopicGroups, Verdict
from utils.errors import EvaluationError, StorageError, ValidationError

GROUPS = TopicGroups(groups={"games": {"football", "cricket"}, "screen": {"movie", "book"}})


def _case(gold):
    return LabeledCase(input="x", gold_topics=None if gold is None else frozenset(gold))


def _judge(matched, gold, groups=GROUPS):
    return judge(ClassificationResult(matched=matched), _case(gold), groups)


def _outcomes(total, correct):
    return [
        CaseOutcome(case=_case(None), verdict=Verdict(correct=i < correct))
        for i in range(total)
    ]


class TestJudge:
    def test_gold_at_rank_one(self):
        assert _judge(["football"], {"football"}).correct

    def test_gold_at_rank_two_same_group(self):
        assert _judge(["cricket", "football"], {"football"}).correct

    def test_extra_topic_outside_group(self):
        verdict = _judge(["football", "movie"], {"football"})
        assert not verdict.correct
        assert "movie" in verdict.reason

    def test_gold_at_rank_three(self):
        assert not _judge(["cricket", "cricket2", "football"], {"football"}).correct

    def test_none_expected_and_nothing_matched(self):
        assert _judge([], None).correct

    def test_none_expected_but_topic_matched(self):
        assert not _judge(["food"], None).correct

    def test_nothing_matched_for_gold(self):
        verdict = _judge([], {"food"})
        assert not verdict.correct
        assert verdict.reason == "no topic matched"

    def test_any_of_several_gold_topics(self):
        assert _judge(["movie", "book"], {"book", "movie"}).correct


class TestReport:
    def test_headline_arithmetic(self):
        report = build_report(_outcomes(1378, 1282))
        assert report.summary_line() == "1282/1378 = 93.03%"
        assert report.error_rate_percent == "6.97"
        assert report.incorrect == 96

    def test_rounding(self):
        assert build_report(_outcomes(6, 5)).accuracy_percent == "83.33"
        assert build_report(_outcomes(3, 2)).accuracy_percent == "66.67"
        assert build_report(_outcomes(8, 1)).accuracy_percent == "12.50"

    def test_empty_outcomes(self):
        with pytest.raises(EvaluationError):
            build_report([])

    @hsettings(max_examples=500, deadline=None)
    @given(total=st.integers(min_value=1, max_value=2000), data=st.data())
    def test_accuracy_monotone_in_correct(self, total, data):
        correct = data.draw(st.integers(min_value=0, max_value=total - 1))
        lower = float(build_report(_outcomes(total, correct)).accuracy_percent)
        higher = float(build_report(_outcomes(total, correct + 1)).accuracy_percent)
        assert 0.0 <= lower <= higher <= 100.0


class TestLoading:
    def test_load_dataset(self):
        cases = load_dataset(FIXTURES / "eval.csv")
        assert len(cases) == 6
        assert cases[0].gold_topics == frozenset({"football"})
        assert cases[4].expects_none

    def test_missing_dataset(self, tmp_path):
        with pytest.raises(StorageError):
            load_dataset(tmp_path / "absent.csv")

    def test_bad_kind(self, tmp_path):
        path = tmp_path / "eval.csv"
        path.write_text("tweet,I like Ronaldo,football\n", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_dataset(path)

    def test_parse_gold(self):
        assert parse_gold("none") is None
        assert parse_gold("Movie; book") == frozenset({"movie", "book"})

    def test_groups(self):
        groups = load_groups(FIXTURES / "groups.csv")
        assert groups.group_of("cricket") == "sports"
        assert groups.group_of("politics") is None

    def test_topic_in_two_groups(self, tmp_path):
        path = tmp_path / "groups.csv"
        path.write_text("a,football\nb,football\n", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_groups(path)


class TestEvaluate:
    def test_sample_tweets(self, catalog, backend, store, cfg):
        dataset = load_dataset(FIXTURES / "eval.csv")
        report = run(evaluate(dataset, catalog, backend, store, cfg, load_groups(FIXTURES / "groups.csv")))
        assert report.summary_line() == "6/6 = 100.00%"

    def test_one_wrong_gold(self, catalog, backend, store, cfg):
        dataset = load_dataset(FIXTURES / "eval_wrong.csv")
        report = run(evaluate(dataset, catalog, backend, store, cfg))
        assert report.summary_line() == "5/6 = 83.33%"
        assert [o.case.input for o in report.per_case if not o.verdict.correct] == ["Sachin is my idol"]

    def test_user_case_and_errors_count_as_incorrect(self, catalog, backend, store, cfg):
        dataset = [
            LabeledCase(kind="user", input="cr7fan", gold_topics=frozenset({"football"})),
            LabeledCase(kind="user", input="ghost", gold_topics=frozenset({"football"})),
        ]
        report = run(evaluate(dataset, catalog, backend, store, cfg))
        assert [o.verdict.correct for o in report.per_case] == [True, False]
        assert report.per_case[1].verdict.reason.startswith("classification error")

    def test_empty_dataset(self, catalog, backend, store, cfg):
        with pytest.raises(EvaluationError):
            run(evaluate([], catalog, backend, store, cfg))

    def test_concurrency_limit_reaches_knowledge_queries(self, catalog, backend, store, cfg):
        tracking = TrackingBackend(backend)
        dataset = [
            LabeledCase(input="Sachin Ronaldo Pizza Potter", gold_topics=frozenset({"cricket"})),
            LabeledCase(input="Harry Potter Shahrukh Khan", gold_topics=frozenset({"movie"})),
        ]
        run(evaluate(dataset, catalog, tracking, store, cfg, max_concurrency=1))
        assert tracking.peak == 1


class TestGoldTopics:
    def test_fixture_gold_topics_are_known(self, catalog):
        check_gold_topics(load_dataset(FIXTURES / "eval.csv"), catalog)

    def test_misspelled_gold_topic_rejected(self, catalog):
        dataset = [
            LabeledCase(input="I like Ronaldo", gold_topics=frozenset({"footbal"})),
            LabeledCase(input="I am frustrated"),
        ]
        with pytest.raises(ValidationError) as exc:
            check_gold_topics(dataset, catalog)
        assert "footbal" in str(exc.value)


TOPICS = ["football", "cricket", "golf", "movie", "book", "food"]
MATCHED = st.lists(st.sampled_from(TOPICS), unique=True, max_size=4)
GOLD = st.sets(st.sampled_from(TOPICS), min_size=1)


@hsettings(max_examples=500, deadline=None)
@given(matched=MATCHED, gold=GOLD, extra=st.sets(st.sampled_from(TOPICS)))
def test_judge_monotone_in_gold(matched, gold, extra):
    if _judge(matched, gold).correct:
        assert _judge(matched, gold | extra).correct


@hsettings(max_examples=500, deadline=None)
@given(matched=MATCHED, gold=GOLD)
def test_judge_without_groups_needs_gold_only(matched, gold):
    expected = bool(set(matched[:2]) & gold) and set(matched) <= gold
    assert _judge(matched, gold, TopicGroups()).correct == expected
