import dataclasses
import math
import random

import pytest

from rubyeval.core.metrics import (
    BleuConfig,
    BpMode,
    MetricError,
    MetricOptions,
    RubyError,
    RubyLevel,
    StsNorm,
    ZeroPolicy,
    bleu,
    bleu_stats,
    bleu_with_flags,
    grs,
    ruby,
    sed,
    sts,
    sts_with_flags,
    ted,
    trs,
)
from rubyeval.core.minilang import SyntaxTree, TokenMode, TokenSequence, parse_source, tokenize, tree_from_nested
from rubyeval.core.pdg import build_pdg
from conftest import random_method


def toks(text):
    return TokenSequence.from_lexemes(text.split())


# --- BLEU -------------------------------------------------------------------

def test_bleu_identity():
    """A candidate equal to the reference scores 1"""
    seq = toks("a b c d e f")
    for n in range(1, 5):
        assert bleu(seq, seq, BleuConfig(max_n=n)) == pytest.approx(1.0)


def test_bleu_hand_example():
    """BLEU of the hand-worked example"""
    score = bleu(toks("A B C D"), toks("A B E C D"), BleuConfig(max_n=2))
    assert score == pytest.approx(math.sqrt(0.8 * 0.5), abs=1e-12)
    assert score == pytest.approx(0.632455, abs=1e-6)


@pytest.mark.parametrize("max_n", [1, 2, 3, 4])
@pytest.mark.parametrize("policy", list(ZeroPolicy))
def test_reordered_translations_share_bleu(max_n, policy):
    """Block-reordered candidates share BLEU under every setting"""
    ref = toks("A B C D")
    cfg = BleuConfig(max_n=max_n, zero_ngram_policy=policy)
    t1, t2 = toks("A B E C D"), toks("C D E A B")
    assert bleu_stats(ref, t1, max_n) == bleu_stats(ref, t2, max_n)
    assert bleu(ref, t1, cfg) == bleu(ref, t2, cfg)


def test_clipped_counts():
    """Candidate n-gram counts are clipped by the reference"""
    stats = bleu_stats(toks("A"), toks("A A A"), 1)
    assert stats.matches == (1,) and stats.totals == (3,)
    assert bleu(toks("A"), toks("A A A"), BleuConfig(max_n=1)) == pytest.approx(1 / 3)


def test_zero_precision_scores_zero():
    """A missing n-gram order scores zero without smoothing"""
    assert bleu(toks("A B C D"), toks("A B E C D")) == 0.0


def test_add_one_smoothing_leaves_unigrams_alone():
    """Smoothing touches only orders of 2 and above"""
    cfg = BleuConfig(max_n=4, zero_ngram_policy=ZeroPolicy.ADD_ONE)
    # p = 4/5, 3/5, 1/4, 1/3
    assert bleu(toks("A B C D"), toks("A B E C D"), cfg) == pytest.approx(math.sqrt(0.2), abs=1e-12)
    assert bleu(toks("A B"), toks("X Y Z"), cfg) == 0.0


def test_brevity_penalty_modes():
    """Ratio and exponential brevity penalties"""
    ref, cand = toks("A B C D"), toks("A B")
    assert bleu(ref, cand, BleuConfig(max_n=1)) == pytest.approx(0.5)
    assert bleu(ref, cand, BleuConfig(max_n=1, bp_mode=BpMode.EXPONENTIAL)) == pytest.approx(math.exp(-1))
    assert bleu_stats(ref, toks("A B C D E"), 1).brevity_penalty() == 1


def test_empty_candidate_and_reference():
    """Empty inputs score zero or raise"""
    assert bleu_with_flags(toks("A"), toks("")) == (0.0, ["bleu-empty-candidate"])
    with pytest.raises(MetricError):
        bleu(toks(""), toks("A"))


def test_bleu_config_rejects_zero_order():
    """n-gram order must be at least 1"""
    with pytest.raises(ValueError):
        BleuConfig(max_n=0)


# --- STS --------------------------------------------------------------------

def test_sts_example():
    """STS of the hand-worked token example"""
    ref, cand = toks("a b c d"), toks("a x c")
    assert sed(ref, cand) == 2
    assert sts(ref, cand) == pytest.approx(0.5)
    assert sts(ref, ref) == 1.0


def test_sts_character_mode_on_broken_constructor(csharp_constructor, broken_translation):
    """Character-level STS of the broken constructor translation"""
    ref = tokenize(csharp_constructor, TokenMode.CHARACTER)
    cand = tokenize(broken_translation, TokenMode.CHARACTER)
    assert (len(ref), len(cand)) == (84, 87)
    assert sed(ref, cand) == 4
    assert sts(ref, cand, StsNorm.REFERENCE_LENGTH) == pytest.approx(0.952, abs=1e-3)


def test_sts_reference_length_clamps():
    """Reference-length normalisation clamps at zero and flags it"""
    score, flags = sts_with_flags(toks("a"), toks("b c d"), StsNorm.REFERENCE_LENGTH)
    assert score == 0.0
    assert flags == ["sts-clamped"]
    assert sts(toks("a"), toks("b c d")) == 0.0


def test_sts_bounds():
    """STS stays in [0, 1]"""
    for cand in ["", "a", "z z z z z z", "d c b a"]:
        assert 0.0 <= sts(toks("a b c d"), toks(cand)) <= 1.0
    with pytest.raises(MetricError):
        sts(toks(""), toks("a"))


# --- TRS --------------------------------------------------------------------

def test_trs_if_else_example(if_tree_pair):
    """TRS of the if statement that gains an else branch"""
    before, after = if_tree_pair
    assert (before.size, after.size) == (6, 10)
    assert ted(before, after) == (6, False)
    assert trs(before, after) == pytest.approx(0.625)


def test_trs_single_relabel():
    """One relabel costs one edit"""
    a = tree_from_nested(("Name", "a", ()))
    b = tree_from_nested(("Name", "b", ()))
    assert trs(a, b) == 0.5
    assert trs(a, a) == 1.0


def test_trs_kind_change_costs_two():
    """Changing a node kind costs a delete plus an insert"""
    a = tree_from_nested(("Name", "a", ()))
    b = tree_from_nested(("Literal", "a", ()))
    assert ted(a, b)[0] == 2
    assert trs(a, b) == 0.0


def test_trs_falls_back_above_limit(if_tree_pair):
    """Large trees use the top-down bound"""
    before, after = if_tree_pair
    distance, approximate = ted(before, after, exact_limit=5)
    assert approximate
    assert distance >= 6


# --- GRS --------------------------------------------------------------------

def test_grs_code_fragments(code1, code2):
    """GRS of the two if/else fragments"""
    g1 = build_pdg(parse_source(code1).tree)
    g2 = build_pdg(parse_source(code2).tree)
    assert grs(g1, g2) == pytest.approx(0.6, abs=1e-9)
    assert grs(g1, g1) == 1.0


def test_grs_disjoint_labels():
    """Graphs with no shared label have zero similarity"""
    g1 = build_pdg(parse_source("void f() { a(); }").tree)
    g2 = build_pdg(parse_source("void f() { b(); }").tree)
    assert grs(g1, g2) == 0.0


# --- RUBY -------------------------------------------------------------------

def test_ruby_identity_is_graph_level(code1):
    """Identical methods score 1 on the graph level"""
    record = ruby(code1, code1, pair_id="p1")
    assert record.ruby_level is RubyLevel.GRS
    assert record.ruby == record.grs == record.trs == record.sts == 1.0
    assert record.pair_id == "p1"
    assert record.flags == []


def test_ruby_code_fragments(code1, code2):
    """The two fragments are scored on graphs"""
    record = ruby(code1, code2)
    assert record.ruby_level is RubyLevel.GRS
    assert record.ruby == pytest.approx(0.6, abs=1e-9)
    assert record.trs is not None and record.trs < 1.0


def test_ruby_broken_candidate_falls_to_sts(csharp_constructor, broken_translation):
    """A candidate that does not parse is scored on tokens"""
    record = ruby(csharp_constructor, broken_translation, semantic=0.75)
    assert record.ruby_level is RubyLevel.STS
    assert record.trs is None and record.grs is None
    assert record.ruby == record.sts
    assert record.semantic == 0.75


def test_ruby_empty_body_stops_at_trees():
    """Without a dependence graph the cascade stops at trees"""
    record = ruby("void f(int a) { }", "void f(int b) { }")
    assert record.ruby_level is RubyLevel.TRS
    assert record.ruby == record.trs
    assert "pdg-not-applicable:reference" in record.flags
    assert "pdg-not-applicable:candidate" in record.flags


def test_ruby_rename_keeps_graph_score(code1, code1_renamed):
    """Renaming locals keeps the graph score at 1"""
    record = ruby(code1, code1_renamed)
    assert record.ruby_level is RubyLevel.GRS
    assert record.grs == 1.0
    assert record.sts < 1.0
    assert record.trs < 1.0


def test_ruby_approximate_tree_distance_is_flagged(code1, code2):
    """A top-down tree distance is flagged"""
    record = ruby(code1, code2, MetricOptions(ted_exact_limit=3))
    assert "trs-approximate" in record.flags


def test_ruby_unparseable_reference(broken_translation, csharp_constructor):
    """A reference that does not parse is an error"""
    with pytest.raises(RubyError):
        ruby(broken_translation, csharp_constructor)


def test_ruby_respects_token_mode(code1, code2):
    """Token mode changes the token scores only"""
    lexical = ruby(code1, code2)
    chars = ruby(code1, code2, MetricOptions(token_mode=TokenMode.CHARACTER))
    assert lexical.ruby == chars.ruby
    assert lexical.sts != chars.sts


def test_options_from_settings():
    """Options follow the settings object"""
    from rubyeval.config import Settings

    opts = MetricOptions.from_settings(Settings(BLEU_MAX_N=2, TOKEN_MODE="whitespace", GRS_MAX_PATH_LENGTH=3))
    assert opts.bleu.max_n == 2
    assert opts.token_mode is TokenMode.WHITESPACE
    assert opts.grs_max_path_length == 3


# --- corruption ---------------------------------------------------------------

def corrupt_tokens(tokens, positions):
    lexemes = list(tokens.lexemes)
    for p in positions:
        lexemes[p] = "$"
    return TokenSequence.from_lexemes(lexemes)


def corrupt_tree(tree, node_ids):
    nodes = list(tree.nodes)
    for k, nid in enumerate(node_ids):
        nodes[nid] = dataclasses.replace(nodes[nid], value=f"#{k}")
    return SyntaxTree(tuple(nodes), tree.root)


def test_sts_and_trs_fall_as_corruptions_accumulate():
    """Each extra corrupted token or node can only lower the score"""
    rng = random.Random(99)
    for _ in range(100):
        source = random_method(rng, statements=2, depth=1)
        tokens, tree = tokenize(source), parse_source(source).tree
        token_spots = rng.sample(range(len(tokens)), 4)
        node_spots = rng.sample(range(tree.size), 3)

        sts_scores = [sts(tokens, corrupt_tokens(tokens, token_spots[:k])) for k in range(5)]
        trs_scores = [trs(tree, corrupt_tree(tree, node_spots[:k])) for k in range(4)]
        assert sts_scores[0] == 1.0 and trs_scores[0] == 1.0
        assert all(x >= y for x, y in zip(sts_scores, sts_scores[1:]))
        assert all(x >= y for x, y in zip(trs_scores, trs_scores[1:]))
        # a fresh token or value costs exactly one edit
        assert sts_scores[-1] == pytest.approx(1 - 4 / len(tokens))
        assert trs_scores[-1] == pytest.approx(1 - 3 / (2 * tree.size))
