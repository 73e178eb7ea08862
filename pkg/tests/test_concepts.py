import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clinsum.concepts import (
    NEGATED,
    POSITIVE,
    ConceptDictionary,
    ConceptEntry,
    SemanticGroups,
    assign_polarity,
    identify,
    load_dictionary,
    load_groups,
    read_dictionary,
    read_groups,
    semantic_filter,
)
from clinsum.errors import ResourceError
from clinsum.tree import char_span

from helpers import brute_longest_spans

DICT = load_dictionary()
GROUPS = load_groups()


def test_bundled_groups_are_the_clinical_table():
    assert GROUPS.groups == {
        "Disorder/Syndrome": {"T047", "T191"},
        "Symptom/Sign": {"T033", "T040", "T046", "T048", "T049", "T184"},
        "Medication": {"T116", "T123", "T126", "T131"},
        "Diagnostic procedure": {"T061"},
        "Anatomy": {"T017", "T024", "T025"},
    }
    assert GROUPS.group_of("T047") == "Disorder/Syndrome"
    assert GROUPS.group_of("T028") is None


def test_dictionary_row_loads():
    d = read_dictionary("DVT\tC0149871\tDeep Vein Thrombosis\tT047\n")
    (e,) = d
    assert e == ConceptEntry(("dvt",), "C0149871", "Deep Vein Thrombosis", "T047")
    assert len(read_dictionary("")) == 0


@pytest.mark.parametrize(
    "row",
    ["dvt\tC0149871\tDVT\tT47", "dvt\t\tDVT\tT047", "dvt\tC0149871\tDVT", "dvt\tC1\tDVT\tX047"],
)
def test_dictionary_errors_carry_line(row):
    with pytest.raises(ResourceError) as exc:
        read_dictionary("# c\nok\tC1\tOk\tT047\n" + row + "\n", "d.tsv")
    assert exc.value.line == 3


def test_groups_file_errors():
    with pytest.raises(ResourceError):
        read_groups("Bad\tT04\n")
    with pytest.raises(ResourceError):
        read_groups("NoTab T047\n")
    assert read_groups("A\tT001, T002\n").groups == {"A": {"T001", "T002"}}


def test_ulcerative_colitis_is_one_mention():
    toks = "recent diagnosis of ulcerative colitis".split()
    clinical = semantic_filter(identify(toks, DICT), GROUPS)
    assert [(m.text, m.cui) for m in clinical] == [("ulcerative colitis", "C0009324")]
    everything = identify(toks, DICT)
    assert "colitis" not in [m.text for m in everything]


def test_dvt_mention_and_span():
    s = "no evidence of dvt ."
    (m,) = identify(s.split(), DICT, s)
    assert (m.text, m.cui, m.tui) == ("dvt", "C0149871", "T047")
    assert m.char_span == char_span(s, ["dvt"]) == (16, 18)
    assert identify("nothing here".split(), DICT) == []


def test_ambiguous_surface_keeps_alternatives():
    (m,) = identify(["IVF"], DICT)
    assert m.preferred == "Fertilization in Vitro"
    assert m.alternatives == ("C0184629",)


def test_partial_overlaps_both_survive():
    d = ConceptDictionary(
        [ConceptEntry(("a", "b"), "C1", "AB", "T047"), ConceptEntry(("b", "c"), "C2", "BC", "T047")]
    )
    assert [(m.token_start, m.token_end) for m in identify("a b c".split(), d)] == [(0, 1), (1, 2)]


def test_semantic_filter():
    ms = identify("BRCA1 gene mutation with malignancy".split(), DICT)
    kept = semantic_filter(ms, GROUPS)
    assert [m.tui for m in kept] == ["T191"]
    assert semantic_filter(kept, GROUPS) == kept
    assert semantic_filter(ms, SemanticGroups({})) == []


def test_polarity_by_overlap():
    s = "CXR showed cardiomegaly but no infiltrate ."

    class Neg:
        span = (32, 43)
        possible = False

    ms = assign_polarity(semantic_filter(identify(s.split(), DICT, s), GROUPS), [Neg()])
    assert [m.label() for m in ms] == ["Cardiomegaly(+)", "Infiltration(-)"]
    assert ms[1].polarity == NEGATED and ms[0].polarity == POSITIVE


def test_polarity_uses_segments_and_possible():
    s = "no chf which caused edema ."
    base = identify(s.split(), DICT, s)

    class Neg:
        span = (4, 26)
        segments = ((4, 6), (26, 26))
        possible = True

    out = assign_polarity(base, [Neg()])
    assert [(m.text, m.polarity, m.possible) for m in out] == [
        ("chf", NEGATED, True),
        ("edema", POSITIVE, False),
    ]
    assert [(m.char_span, m.cui) for m in out] == [(m.char_span, m.cui) for m in base]


VOCAB = ["a", "b", "c", "d"]


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.sampled_from(VOCAB), min_size=0, max_size=12),
    st.lists(st.lists(st.sampled_from(VOCAB), min_size=1, max_size=3), min_size=0, max_size=6),
)
def test_longest_span_matches_oracle(tokens, surfaces):
    d = ConceptDictionary(ConceptEntry(tuple(s), f"C{i}", "x", "T047") for i, s in enumerate(surfaces))
    got = [(m.token_start, m.token_end) for m in identify(tokens, d)]
    assert got == brute_longest_spans(tokens, {tuple(s) for s in surfaces})
    for x in got:
        for y in got:
            assert x == y or not (x[0] <= y[0] and y[1] <= x[1])
