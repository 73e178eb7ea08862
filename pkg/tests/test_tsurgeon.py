import random

import pytest

from clinsum.errors import ScriptError, SurgeryError
from clinsum.tree import parse_ptb, to_ptb, yield_tokens
from clinsum.tregex import match_first
from clinsum.tsurgeon import delete, excise, extract, parse_script, run_script

from helpers import is_subsequence, random_tree

T = parse_ptb("(TOP (S (NP (DT no) (NN fever)) (VP (VBZ is) (ADJP (JJ seen))) (. .)))")


def by_label(tree, label):
    return next(n for n in tree.preorder() if n.label == label)


def test_delete_removes_subtree():
    out = delete(T, by_label(T, "DT").node_id)
    assert to_ptb(out) == "(TOP (S (NP (NN fever)) (VP (VBZ is) (ADJP (JJ seen))) (. .)))"


def test_delete_cascades_empty_parents():
    out = delete(T, by_label(T, "JJ").node_id)
    assert to_ptb(out) == "(TOP (S (NP (DT no) (NN fever)) (VP (VBZ is)) (. .)))"


def test_delete_keeps_ids_of_survivors():
    nn = by_label(T, "NN").node_id
    out = delete(T, by_label(T, "DT").node_id)
    assert out.find(nn).token == "fever"


def test_delete_errors():
    with pytest.raises(SurgeryError):
        delete(T, T.node_id)
    with pytest.raises(SurgeryError):
        delete(T, 999)
    chain = parse_ptb("(TOP (S (NN x)))")
    with pytest.raises(SurgeryError):
        delete(chain, by_label(chain, "S").node_id)


def test_excise_splices_bottom_children():
    out = excise(T, by_label(T, "VP").node_id, by_label(T, "ADJP").node_id)
    assert to_ptb(out) == "(TOP (S (NP (DT no) (NN fever)) (JJ seen) (. .)))"


def test_excise_same_node_removes_only_that_node():
    np = by_label(T, "NP").node_id
    out = excise(T, np, np)
    assert to_ptb(out) == "(TOP (S (DT no) (NN fever) (VP (VBZ is) (ADJP (JJ seen))) (. .)))"


def test_excise_with_leaf_bottom_promotes_leaf():
    out = excise(T, by_label(T, "NP").node_id, by_label(T, "NN").node_id)
    assert to_ptb(out) == "(TOP (S (NN fever) (VP (VBZ is) (ADJP (JJ seen))) (. .)))"


def test_excise_errors():
    with pytest.raises(SurgeryError):
        excise(T, T.node_id, by_label(T, "NN").node_id)
    with pytest.raises(SurgeryError, match="does not dominate"):
        excise(T, by_label(T, "NP").node_id, by_label(T, "JJ").node_id)


def test_extract_wraps_in_top():
    out = extract(T, by_label(T, "NP").node_id)
    assert to_ptb(out) == "(TOP (NP (DT no) (NN fever)))"
    assert out.node_id > T.max_id()
    assert extract(T, T.node_id) is T


def test_script_parsing():
    s = parse_script("excise s head")
    assert s.ops == (("excise", ("s", "head")),)
    s = parse_script("delete head,delete neg")
    assert [v for v, _ in s.ops] == ["delete", "delete"]
    assert parse_script("excise s,head").ops == (("excise", ("s", "head")),)
    assert parse_script("").ops == ()
    assert str(parse_script("delete a, excise b c")) == "delete a,excise b c"


@pytest.mark.parametrize("text", ["relabel x NP", "move x $+ y", "delete", "excise a", "x y", "delete a b"])
def test_script_errors(text):
    with pytest.raises(ScriptError):
        parse_script(text)


def test_run_script_with_binding():
    tree = parse_ptb("(TOP (NP (NP (DT no) (NN evidence)) (PP (IN of) (NP (NN dvt)))))")
    b = match_first("NP=target << DT=neg <<, /no|without/ !> NP >> TOP=t", tree)
    out = run_script(tree, b, parse_script("delete neg"))
    assert yield_tokens(extract(out, b["target"])) == ["evidence", "of", "dvt"]


def test_run_script_unbound_name():
    with pytest.raises(ScriptError, match="unbound"):
        run_script(T, {"a": 1}, parse_script("delete b"))


def _check_well_formed(tree):
    ids = [n.node_id for n in tree.preorder()]
    assert len(ids) == len(set(ids))
    for n in tree.preorder():
        assert (n.token is not None) == (not n.children)


def test_random_surgery_is_well_formed():
    rng = random.Random(2024)
    done = 0
    while done < 300:
        t = random_tree(rng)
        nodes = list(t.preorder())[1:]
        target = rng.choice(nodes)
        if rng.random() < 0.5:
            outside = [x for x in t.leaves() if target.find(x.node_id) is None]
            if not outside:
                continue
            out = delete(t, target.node_id)
        else:
            out = excise(t, target.node_id, rng.choice(list(target.preorder())).node_id)
        _check_well_formed(out)
        assert is_subsequence(yield_tokens(out), yield_tokens(t))
        done += 1
