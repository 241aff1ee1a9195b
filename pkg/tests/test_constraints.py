from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_jsonl
from umwelt_lab.constraints import (
    CheckerConfig,
    ConditionSpec,
    check_eprime,
    check_nohave,
    is_participle,
    load_registry,
    tokenize,
    validate,
)
from umwelt_lab.constraints import lexicon
from umwelt_lab.constraints.checkers import ViolationReport
from umwelt_lab.constraints.registry import registry_from_dict
from umwelt_lab.errors import ConfigError

# ---- tokenizer ---------------------------------------------------------------


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_keeps_contraction_whole():
    toks = tokenize("it's here")
    assert [(t.surface, t.start, t.end) for t in toks] == [("it's", 0, 4), ("here", 5, 9)]


def test_tokenize_punctuation_token():
    toks = tokenize("The cat sat.")
    assert [t.surface for t in toks if t.is_word] == ["The", "cat", "sat"]
    assert [t.surface for t in toks if not t.is_word] == ["."]


def test_tokenize_curly_apostrophe_and_casefold():
    (tok,) = tokenize("IT’S")
    assert tok.lower == "it’s" and tok.norm == "it's"


@given(st.text())
def test_tokens_reconstruct_input(text):
    toks = tokenize(text)
    pos, rebuilt = 0, []
    for t in toks:
        assert t.start < t.end and t.start >= pos
        assert text[pos : t.start].strip() == ""
        rebuilt.append(text[pos : t.start])
        rebuilt.append(t.surface)
        pos = t.end
    rebuilt.append(text[pos:])
    assert "".join(rebuilt) == text


# ---- E-Prime -----------------------------------------------------------------


@pytest.mark.parametrize(
    "text, count",
    [
        ("The cat is black", 1),
        ("it's, that's, there's, who's", 4),
        ("John's hat fell", 0),
        ("Be careful", 1),
        ("I'm sure; you're right", 2),
        ("The claim isn't true", 1),
        ("Bees and islands", 0),
    ],
)
def test_eprime_examples(text, count):
    assert check_eprime(text).count == count


def test_eprime_matched_form_and_rule():
    (v,) = check_eprime("That's odd").violations
    assert v.matched_form == "that's" and v.rule == "be_contraction" and v.span == (0, 6)


def test_eprime_custom_head_list():
    cfg = CheckerConfig(s_heads=frozenset({"john"}))
    assert check_eprime("John's late and it's odd", cfg).count == 1


def test_quote_exemption_is_opt_in():
    text = 'He wrote "this is fine" and left.'
    assert check_eprime(text).count == 1
    assert check_eprime(text, CheckerConfig(quote_exempt=True)).count == 0


# ---- No-Have -----------------------------------------------------------------


@pytest.mark.parametrize(
    "text, count",
    [
        ("has completed", 0),
        ("The argument has a flaw", 1),
        ("She has not yet finished", 0),
        ("They have three dogs", 1),
        ("They have been told", 0),
        ("I'd rather wait", 0),
        ("We'd a long day", 1),
        ("We have to go", 1),
        ("It has, finally, arrived", 1),
        ("has not not just finished", 1),
    ],
)
def test_nohave_examples(text, count):
    assert check_nohave(text).count == count


def test_have_to_switch():
    assert check_nohave("We have to go", CheckerConfig(flag_have_to=False)).count == 0


def test_participle_heuristic():
    assert is_participle("completed") and is_participle("written") and is_participle("been")
    assert not is_participle("need") and not is_participle("garden") and not is_participle("red")


def test_lexicons_disjoint():
    assert not (lexicon.IRREGULAR_PARTICIPLES & lexicon.NON_PARTICIPLE_ED_EN)


# ---- validate ----------------------------------------------------------------


def test_validate_dispatch():
    control = ConditionSpec("control", "", "none")
    assert validate(control, "This is fine").count == 0
    assert validate(ConditionSpec("e_prime", "", "e_prime"), "This is fine").count == 1
    assert validate("no_have", "They have three dogs").count == 1


def test_validate_unknown():
    with pytest.raises(ConfigError):
        validate("toki_pona", "text")


def test_report_round_trip():
    rep = check_eprime("It is. They were.")
    assert ViolationReport.from_dict(json.loads(json.dumps(rep.to_dict()))) == rep
    assert rep.to_dict()["count"] == rep.count == 2


# ---- fixture corpus ----------------------------------------------------------

CORPUS = load_jsonl("compliance_corpus.jsonl")


def test_corpus_shape():
    groups = [r["group"] for r in CORPUS]
    assert len(CORPUS) == 60
    assert groups.count("e_prime") == groups.count("no_have") == groups.count("negative") == 20
    exemptions = [r for r in CORPUS if r["group"] == "no_have" and r["nohave"] == 0]
    assert len(exemptions) == 8


@pytest.mark.parametrize("row", CORPUS, ids=lambda r: r["text"][:40])
def test_corpus_labels(row):
    assert check_eprime(row["text"]).count == row["eprime"]
    assert check_nohave(row["text"]).count == row["nohave"]


# ---- properties --------------------------------------------------------------

WORDS = [
    "is", "was", "be", "it's", "that's", "John's", "has", "have", "had", "I've", "she'd",
    "completed", "written", "a", "dog", "not", "yet", "rather", "runs", "the", "being",
    "IS", "Were", "having", "to", "go", ",", ".", "quickly", "been", "hasn't", "isn't",
]
sentences = st.lists(st.sampled_from(WORDS), max_size=12).map(" ".join)
CHECKERS = [check_eprime, check_nohave]


@pytest.mark.parametrize("check", CHECKERS)
@given(text=sentences)
def test_determinism(check, text):
    assert check(text) == check(text)
    assert json.dumps(check(text).to_dict()) == json.dumps(check(text).to_dict())


@pytest.mark.parametrize("check", CHECKERS)
@given(text=sentences)
def test_case_insensitive(check, text):
    assert check(text.upper()).count == check(text).count
    assert check(text.lower()).count == check(text).count


@pytest.mark.parametrize("check", CHECKERS)
@given(text=st.one_of(sentences, st.text(max_size=60)))
def test_span_validity(check, text):
    for v in check(text).violations:
        a, b = v.span
        assert 0 <= a < b <= len(text)
        assert text[a:b].casefold() == v.matched_form


def _trailing_have(text: str) -> bool:
    """True when a have-form is followed only by skip words up to the end of ``text``."""
    toks = [t for t in tokenize(text)]
    for i, t in enumerate(toks):
        if not t.is_word:
            continue
        head = t.norm
        if head in lexicon.HAVE_FORMS or head in lexicon.HAVE_NEGATIONS or head.endswith(("'ve", "'d")):
            rest = toks[i + 1 :]
            if all(r.is_word and r.norm in lexicon.DEFAULT_SKIP_WORDS for r in rest):
                return True
    return False


@pytest.mark.parametrize("check", CHECKERS)
@settings(max_examples=200)
@given(a=sentences, b=sentences)
def test_monotone_under_concatenation(check, a, b):
    boundary = lambda s, i: s.split()[i].casefold() if s.split() else ""
    left, right = boundary(a, -1), boundary(b, 0)
    have_like = lexicon.HAVE_FORMS | lexicon.HAVE_NEGATIONS
    if check is check_nohave and (
        left in have_like or left.endswith(("'ve", "'d")) or is_participle(right) or _trailing_have(a)
    ):
        return
    assert check(a + " " + b).count == check(a).count + check(b).count


# ---- registry ----------------------------------------------------------------


def test_shipped_registry():
    reg = load_registry()
    assert list(reg.conditions) == ["control", "e_prime", "no_have"]
    assert reg.condition("control").validator == "none"
    assert "E-Prime" in reg.condition("e_prime").system_prompt
    assert "The argument has a flaw" in reg.condition("no_have").system_prompt
    assert len(reg.agents) == 16
    assert reg.agent("counterfactual").axis == "modal"
    assert len(reg.taxonomy) == 8


def test_registry_rejects_duplicates_and_bad_validators():
    cond = {"name": "control", "system_prompt": "", "validator": "none"}
    with pytest.raises(ConfigError):
        registry_from_dict({"conditions": [cond, cond]})
    with pytest.raises(ConfigError):
        registry_from_dict({"conditions": [{"name": "x", "system_prompt": "", "validator": "none"}]})
    with pytest.raises(ConfigError):
        registry_from_dict({"conditions": [{"name": "x", "system_prompt": "", "validator": "nvc"}]})
    with pytest.raises(ConfigError):
        load_registry().condition("nope")


def test_registry_round_trip():
    reg = load_registry()
    assert registry_from_dict(reg.to_dict()) == reg
