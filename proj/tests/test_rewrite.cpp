#include "fusemr/rewrite.hpp"

#include <set>

#include <gtest/gtest.h>

#include "fusemr/clusters.hpp"
#include "support/checks.hpp"
#include "support/synth.hpp"

using namespace fusemr;

namespace {

const ConnectiveDictionaries& dicts() {
    static const ConnectiveDictionaries d = ConnectiveDictionaries::builtin();
    return d;
}

FusionExample make_example(const char* s1, const char* s2, const char* gold,
                           DiscoursePhenomenon p, const char* connective = nullptr) {
    FusionExample ex;
    ex.id = "t";
    ex.s1 = tokenize(s1);
    ex.s2 = tokenize(s2);
    ex.gold = tokenize(gold);
    ex.phenomenon = p;
    if (connective && *connective) ex.connective = tokenize(connective);
    return ex;
}

std::set<std::string> fusions(const VariantSet& set) {
    std::set<std::string> out;
    for (const auto& v : set.variants) out.insert(join(v.fusion));
    return out;
}

const Variant* find_variant(const VariantSet& set, const std::string& fusion) {
    for (const auto& v : set.variants)
        if (join(v.fusion) == fusion) return &v;
    return nullptr;
}

}  // namespace

// --- primitives -------------------------------------------------------------

TEST(Primitives, ReplaceSwapsFirstFoldedOccurrence) {
    auto out = replace_once(tokenize("a but b"), tokenize("but"), tokenize("yet"));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "a yet b");
    EXPECT_FALSE(replace_once(tokenize("a b"), tokenize("x"), tokenize("y")).has_value());
}

TEST(Primitives, ReplacePreservesSentenceInitialCapitalization) {
    auto out = replace_once(tokenize("Plus , we are both willing"), tokenize("plus ,"),
                            tokenize("furthermore ,"));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "Furthermore , we are both willing");

    out = replace_once(tokenize("x . Therefore y ."), tokenize("therefore"), tokenize("hence"));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "x . Hence y .");
}

TEST(Primitives, ReplaceRecasesAcrossSentenceBoundaries) {
    // a split capitalizes inside the replacement
    auto out = replace_once(tokenize("a nightmare but this news"), tokenize("but"),
                            tokenize(". yet ,"));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "a nightmare . Yet , this news");

    // a merge lowercases the token that stops being sentence-initial
    out = replace_once(tokenize("It rained . However we Left ."), tokenize(". however"),
                       tokenize(", although"));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "It rained , although we Left .");

    out = replace_once(tokenize("x . He left ."), tokenize("."), tokenize(". as a result ,"));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "x . As a result , he left .");
}

TEST(Primitives, ReplaceKeepsProperNounsCapitalized) {
    // "Gair" also appears capitalized mid-sentence, so it survives the merge
    auto out = replace_once(tokenize("He saw Gair . Therefore Gair left ."),
                            tokenize(". therefore"), tokenize(", hence"));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "He saw Gair , hence Gair left .");
}

TEST(Primitives, ReplaceRejectsDoubledPunctuation) {
    EXPECT_FALSE(
        replace_once(tokenize("a , but b"), tokenize("but"), tokenize(", but")).has_value());
    EXPECT_FALSE(
        replace_once(tokenize("x . Yet , y"), tokenize("yet ,"), tokenize(". however ,"))
            .has_value());
}

TEST(Primitives, ConcatWithIdentities) {
    EXPECT_EQ(join(concat(tokenize("a"), tokenize("b"))), "a b");
    EXPECT_EQ(join(concat(Tokens{}, tokenize("b"))), "b");
    EXPECT_EQ(join(concat(tokenize("a"), Tokens{})), "a");
    EXPECT_EQ(join(concat(".", tokenize("but"))), ". but");
}

TEST(Primitives, DeleteRemovesFirstFoldedOccurrence) {
    auto out = delete_once(tokenize("x ."), tokenize("."));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "x");

    out = delete_once(tokenize("which is a slash"), tokenize("which is"));
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(join(*out), "a slash");

    EXPECT_FALSE(delete_once(tokenize("a b"), tokenize("c")).has_value());
}

// --- rule engine ------------------------------------------------------------

TEST(ExpandVariants, ForwardConnectiveRebuild) {
    const auto ex = make_example(
        "The company had bigger facilities at Wembley in the west of the capital .",
        "It was easier to attract stars and audiences to central London .",
        "Although the company had bigger facilities at Wembley in the west of the capital , "
        "it was easier to attract stars and audiences to central London .",
        DiscoursePhenomenon::ForwardConnective, "although");
    const auto set = expand_variants(ex, dicts());
    const char* expected =
        "The company had bigger facilities at Wembley in the west of the capital , but "
        "it was easier to attract stars and audiences to central London .";
    const Variant* v = find_variant(set, expected);
    ASSERT_NE(v, nullptr);
    EXPECT_EQ(v->rule_id, "comparison.7");
    EXPECT_EQ(v->marker, tokenize(", but"));
    // the rebuild consumes the inputs but never rewrites them
    EXPECT_EQ(set.example.s1, ex.s1);
    EXPECT_EQ(set.example.s2, ex.s2);
}

TEST(ExpandVariants, CausePlainSwapAfterPeriod) {
    const auto ex = make_example(
        "But the client is on a break .", "I'm on a break .",
        "But the client is on a break . Therefore I'm on a break .",
        DiscoursePhenomenon::DiscourseConnective, "therefore");
    const auto set = expand_variants(ex, dicts());
    EXPECT_TRUE(fusions(set).count("But the client is on a break . Hence I'm on a break ."));
    EXPECT_TRUE(
        fusions(set).count("But the client is on a break . Consequently I'm on a break ."));
    // sentence-initial marker: the inner-period rule must not fire
    for (const auto& v : set.variants) EXPECT_NE(v.rule_id, "cause.2");
}

TEST(ExpandVariants, RelativeClausePrefixDeletion) {
    const auto ex = make_example(
        "She is famed for her noble art Raikiri .",
        "Raikiri is a slash powered by lightning , that is believed to be inevitable .",
        "She is famed for her noble art Raikiri , which is a slash powered by lightning , "
        "that is believed to be inevitable .",
        DiscoursePhenomenon::RelativeClause);
    const auto set = expand_variants(ex, dicts());
    const Variant* v = find_variant(set,
                                    "She is famed for her noble art Raikiri , a slash powered "
                                    "by lightning , that is believed to be inevitable .");
    ASSERT_NE(v, nullptr);
    EXPECT_EQ(v->rule_id, "relative.1");
}

TEST(ExpandVariants, OutOfClusterConnectiveYieldsNothing) {
    const auto ex = make_example(
        "Of the three , purple is preferred .", "Purple reinforces the red .",
        "Of the three , purple is preferred because it reinforces the red .",
        DiscoursePhenomenon::DiscourseConnectiveAnaphora, "because");
    EXPECT_TRUE(expand_variants(ex, dicts()).variants.empty());
}

TEST(ExpandVariants, ConjunctionMergeRequiresShortFusion) {
    const auto fire = make_example("a .", "b .", "The garden opened . Plus , the market closed .",
                                   DiscoursePhenomenon::DiscourseConnective, "plus ,");
    EXPECT_TRUE(
        fusions(expand_variants(fire, dicts()))
            .count("The garden opened , and the market closed ."));

    // same row padded past the length bound: the merge rule stays quiet
    std::string long_tail;
    for (int i = 0; i < 40; ++i) long_tail += " very";
    const auto skip = make_example(
        "a .", "b .",
        ("The garden opened . Plus , the market closed" + long_tail + " .").c_str(),
        DiscoursePhenomenon::DiscourseConnective, "plus ,");
    for (const auto& v : expand_variants(skip, dicts()).variants)
        EXPECT_NE(v.rule_id, "conjunction.3");
}

TEST(ExpandVariants, SentenceCoordinationSplit) {
    const auto ex = make_example(
        "It might sound like a nightmare .",
        "This news made this day one of the greatest of my life .",
        "It might sound like a nightmare but this news made this day one of the greatest of "
        "my life .",
        DiscoursePhenomenon::SentenceCoordination, "but");
    const auto set = expand_variants(ex, dicts());
    EXPECT_TRUE(fusions(set).count(
        "It might sound like a nightmare . Yet , this news made this day one of the greatest "
        "of my life ."));
    // punctuation-closure variant of the annotated marker
    EXPECT_TRUE(fusions(set).count(
        "It might sound like a nightmare , but this news made this day one of the greatest "
        "of my life ."));
}

TEST(ExpandVariants, InnerConnectiveRules) {
    const auto ex = make_example("Gair was born in Dunedin .", "Gair moved to Wellington .",
                                 "Gair was born in Dunedin but moved to Wellington .",
                                 DiscoursePhenomenon::InnerConnective, "but");
    const auto set = expand_variants(ex, dicts());
    EXPECT_TRUE(fusions(set).count("Gair was born in Dunedin , yet moved to Wellington ."));
    EXPECT_TRUE(fusions(set).count("Gair was born in Dunedin . However , moved to Wellington ."));
    const Variant* v = find_variant(set, "Gair was born in Dunedin , yet moved to Wellington .");
    ASSERT_NE(v, nullptr);
    EXPECT_EQ(v->rule_id, "comparison.3");
}

TEST(ExpandVariants, CauseInnerMarkerMovesToBoundary) {
    const auto ex = make_example("The rain stopped .", "He went out .",
                                 "The rain stopped . He therefore went out .",
                                 DiscoursePhenomenon::InnerConnective, "therefore");
    const auto set = expand_variants(ex, dicts());
    EXPECT_TRUE(fusions(set).count("The rain stopped . As a result , he went out ."));
    const Variant* v = find_variant(set, "The rain stopped . As a result , he went out .");
    ASSERT_NE(v, nullptr);
    EXPECT_EQ(v->rule_id, "cause.2");
}

TEST(ExpandVariants, DiscourseConnectiveMergeAndComma) {
    const auto ex = make_example("It rained .", "We stayed home .",
                                 "It rained . However we stayed home .",
                                 DiscoursePhenomenon::DiscourseConnective, "however");
    const auto set = expand_variants(ex, dicts());
    EXPECT_TRUE(fusions(set).count("It rained , although we stayed home ."));   // comparison.6
    EXPECT_TRUE(fusions(set).count("It rained . However , we stayed home ."));  // comparison.5
    EXPECT_TRUE(fusions(set).count("It rained . Still , we stayed home ."));
}

TEST(ExpandVariants, RepeatedMarkerDisablesRules) {
    const auto ex = make_example("a .", "b .", "Although a , although b .",
                                 DiscoursePhenomenon::ForwardConnective, "although");
    EXPECT_TRUE(expand_variants(ex, dicts()).variants.empty());
}

TEST(ExpandVariants, NoVariantEqualsGoldAndAllDistinct) {
    synth::Generator gen(7);
    for (const auto& ex : gen.corpus(500)) {
        const auto set = expand_variants(ex, dicts());
        std::set<std::string> seen;
        for (const auto& v : set.variants) {
            EXPECT_FALSE(equal_folded(v.fusion, ex.gold)) << ex.id;
            EXPECT_TRUE(seen.insert(join(fold(v.fusion))).second) << ex.id;
        }
    }
}

TEST(ExpandVariants, DeterministicOrdering) {
    synth::Generator gen(11);
    for (const auto& ex : gen.corpus(200)) {
        const auto a = expand_variants(ex, dicts());
        const auto b = expand_variants(ex, dicts());
        ASSERT_EQ(a.variants.size(), b.variants.size());
        for (std::size_t i = 0; i < a.variants.size(); ++i) {
            EXPECT_EQ(a.variants[i].fusion, b.variants[i].fusion);
            EXPECT_EQ(a.variants[i].rule_id, b.variants[i].rule_id);
        }
    }
}

TEST(ExpandVariants, MaxVariantsCapsThePrefix) {
    const auto ex = make_example(
        "It might sound like a nightmare .", "This news made this day .",
        "It might sound like a nightmare but this news made this day .",
        DiscoursePhenomenon::SentenceCoordination, "but");
    const auto full = expand_variants(ex, dicts());
    ASSERT_GT(full.variants.size(), 3u);
    const auto capped = expand_variants(ex, dicts(), 3);
    ASSERT_EQ(capped.variants.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_EQ(capped.variants[i].fusion, full.variants[i].fusion);
}

TEST(ExpandVariants, SymmetricSwapRoundTrip) {
    synth::Generator gen(23);
    std::size_t firings = 0;
    for (const auto& ex : gen.corpus(2000)) {
        const auto set = expand_variants(ex, dicts());
        for (const auto& v : set.variants) {
            if (v.rule_id != "conjunction.1" && v.rule_id != "comparison.1" &&
                v.rule_id != "cause.1")
                continue;
            ++firings;
            FusionExample back = ex;
            back.gold = v.fusion;
            back.connective = v.marker;
            const auto back_set = expand_variants(back, dicts());
            bool restored = false;
            for (const auto& bv : back_set.variants)
                if (bv.rule_id == v.rule_id && equal_folded(bv.marker, *ex.connective)) {
                    EXPECT_EQ(bv.fusion, ex.gold) << ex.id;
                    restored = true;
                    break;
                }
            EXPECT_TRUE(restored) << ex.id << " via " << v.rule_id;
        }
    }
    EXPECT_GT(firings, 500u);
}

TEST(ExpandVariants, LocalityAndClosureProperties) {
    synth::Generator gen(31);
    std::size_t variants = 0;
    for (const auto& ex : gen.corpus(2000)) {
        const auto set = expand_variants(ex, dicts());
        for (const auto& v : set.variants) {
            ++variants;
            auto locality = checks::locality_violation(ex, v);
            EXPECT_FALSE(locality.has_value())
                << ex.id << " " << v.rule_id << ": " << *locality << "\n  gold: "
                << join(ex.gold) << "\n  var:  " << join(v.fusion);
            auto closure = checks::closure_violation(ex, v, dicts());
            EXPECT_FALSE(closure.has_value()) << ex.id << " " << v.rule_id << ": " << *closure;
            if (locality || closure) return;  // one detailed failure is enough
        }
    }
    EXPECT_GT(variants, 2000u);
}
