// Acceptance suite. Each test prints one PASS/FAIL line; run this binary
// directly to see the full checklist, or let ctest run it per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fusemr/analysis.hpp"
#include "fusemr/cli.hpp"
#include "fusemr/clusters.hpp"
#include "fusemr/metrics.hpp"
#include "fusemr/rewrite.hpp"
#include "support/checks.hpp"
#include "support/oracle_sari.hpp"
#include "support/synth.hpp"

using namespace fusemr;

namespace {

const ConnectiveDictionaries& dicts() {
    static const ConnectiveDictionaries d = ConnectiveDictionaries::builtin();
    return d;
}

class Acceptance : public ::testing::Test {
  protected:
    void criterion(int number, const char* name) {
        number_ = number;
        name_ = name;
    }

    void TearDown() override {
        std::printf("[CRITERION %d] %s: %s\n", number_, name_, HasFailure() ? "FAIL" : "PASS");
        std::fflush(stdout);
    }

  private:
    int number_ = 0;
    const char* name_ = "";
};

std::set<std::string> fusion_strings(const VariantSet& set) {
    std::set<std::string> out;
    for (const auto& v : set.variants) out.insert(join(v.fusion));
    return out;
}

}  // namespace

TEST_F(Acceptance, Criterion1WorkedExampleFidelity) {
    criterion(1, "worked-example fidelity (fronted-although rebuild)");
    FusionExample ex;
    ex.id = "1";
    ex.s1 = tokenize(
        "The company had bigger facilities at Wembley in the west of the capital .");
    ex.s2 = tokenize("It was easier to attract stars and audiences to central London .");
    ex.gold = tokenize(
        "Although the company had bigger facilities at Wembley in the west of the capital , "
        "it was easier to attract stars and audiences to central London .");
    ex.phenomenon = DiscoursePhenomenon::ForwardConnective;
    ex.connective = tokenize("although");

    const auto set = expand_variants(ex, dicts());
    const std::string expected =
        "The company had bigger facilities at Wembley in the west of the capital , but "
        "it was easier to attract stars and audiences to central London .";
    EXPECT_TRUE(fusion_strings(set).count(expected))
        << "generated:\n" << [&] {
               std::string all;
               for (const auto& v : set.variants) all += "  " + join(v.fusion) + "\n";
               return all;
           }();
}

TEST_F(Acceptance, Criterion2GoldenVariantSet) {
    criterion(2, "golden variant set (one row per phenomenon)");

    // conjunction: trailing-comma swap and sentence merge
    FusionExample conj;
    conj.id = "c";
    conj.s1 = tokenize("It'll work because god says so .");
    conj.s2 = tokenize("We are both willing to fight for it .");
    conj.gold = tokenize("It'll work because god says so . Plus , we are both willing to fight for it .");
    conj.phenomenon = DiscoursePhenomenon::DiscourseConnective;
    conj.connective = tokenize("plus ,");
    auto got = fusion_strings(expand_variants(conj, dicts()));
    EXPECT_TRUE(got.count(
        "It'll work because god says so . Furthermore , we are both willing to fight for it ."));
    EXPECT_TRUE(got.count(
        "It'll work because god says so , and we are both willing to fight for it ."));

    // cause: plain swap after a sentence boundary
    FusionExample cause;
    cause.id = "e";
    cause.s1 = tokenize("But the client is on a break .");
    cause.s2 = tokenize("I'm on a break .");
    cause.gold = tokenize("But the client is on a break . Therefore I'm on a break .");
    cause.phenomenon = DiscoursePhenomenon::DiscourseConnective;
    cause.connective = tokenize("therefore");
    got = fusion_strings(expand_variants(cause, dicts()));
    EXPECT_TRUE(got.count("But the client is on a break . Hence I'm on a break ."));

    // comparison: sentence split with a trailing-comma marker
    FusionExample comp;
    comp.id = "q";
    comp.s1 = tokenize("It might sound like a nightmare .");
    comp.s2 = tokenize("This news made this day one of the greatest of my life .");
    comp.gold = tokenize(
        "It might sound like a nightmare but this news made this day one of the greatest of my life .");
    comp.phenomenon = DiscoursePhenomenon::SentenceCoordination;
    comp.connective = tokenize("but");
    got = fusion_strings(expand_variants(comp, dicts()));
    EXPECT_TRUE(got.count(
        "It might sound like a nightmare . Yet , this news made this day one of the greatest of my life ."));

    // relative clause: pronoun+copula deletion
    FusionExample rel;
    rel.id = "r";
    rel.s1 = tokenize("She is famed for her noble art Raikiri .");
    rel.s2 = tokenize("Raikiri is a slash powered by lightning , that is believed to be inevitable .");
    rel.gold = tokenize(
        "She is famed for her noble art Raikiri , which is a slash powered by lightning , "
        "that is believed to be inevitable .");
    rel.phenomenon = DiscoursePhenomenon::RelativeClause;
    got = fusion_strings(expand_variants(rel, dicts()));
    EXPECT_TRUE(got.count(
        "She is famed for her noble art Raikiri , a slash powered by lightning , "
        "that is believed to be inevitable ."));
}

TEST_F(Acceptance, Criterion3MultiReferenceDominance) {
    criterion(3, "MR dominance over 10,000 perturbed predictions");
    const auto start = std::chrono::steady_clock::now();

    synth::Generator gen(1001);
    const auto corpus = gen.corpus(1000);
    std::vector<VariantSet> sets;
    sets.reserve(corpus.size());
    for (const auto& ex : corpus) sets.push_back(expand_variants(ex, dicts()));

    std::mt19937 rng(1002);
    static const std::vector<std::string> junk = {"however", "and", "the", ",", "garden"};
    std::size_t violations = 0;
    for (std::size_t round = 0; round < 10; ++round) {
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const auto& set = sets[i];
            Tokens pred = set.example.gold;
            if (!set.variants.empty() && rng() % 3 == 0)
                pred = set.variants[rng() % set.variants.size()].fusion;
            const int mutations = static_cast<int>(rng() % 3);
            for (int m = 0; m < mutations && !pred.empty(); ++m) {
                switch (rng() % 4) {
                    case 0: pred.erase(pred.begin() + rng() % pred.size()); break;
                    case 1: pred.insert(pred.begin() + rng() % pred.size(),
                                        junk[rng() % junk.size()]); break;
                    case 2: pred[rng() % pred.size()] = junk[rng() % junk.size()]; break;
                    default: pred[0] = lowercased_first(pred[0]); break;
                }
            }
            const auto s = score_example(set.example, set.variants, &pred);
            if (s.mr_exact < s.exact || s.mr_sari < s.sari - 1e-12) ++violations;
        }
    }
    EXPECT_EQ(violations, 0u);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(seconds, 30.0);
}

TEST_F(Acceptance, Criterion4SariOracleEquivalence) {
    criterion(4, "SARI equals the enumeration oracle on 200 random instances");
    static const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", ",", "."};
    std::mt19937 rng(2003);
    auto draw = [&](std::size_t min_len) {
        std::uniform_int_distribution<std::size_t> len(min_len, 8);
        std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
        Tokens out;
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) out.push_back(vocab[pick(rng)]);
        return out;
    };
    for (int i = 0; i < 200; ++i) {
        const Tokens s1 = draw(1), s2 = draw(1), pred = draw(0), ref = draw(0);
        const double fast = sari(s1, s2, pred, ref).total;
        const double slow = oracle::sari_total(s1, s2, pred, ref);
        ASSERT_LE(std::abs(fast - slow), 1e-9)
            << join(s1) << " | " << join(s2) << " | " << join(pred) << " | " << join(ref);
    }
}

TEST_F(Acceptance, Criterion5RoundTripAndClosure) {
    criterion(5, "swap round trip, cluster closure, locality, no gold duplicates");
    synth::Generator gen(3001);
    const auto corpus = gen.corpus(10000);

    std::size_t swap_firings = 0, total_variants = 0, failures = 0;
    for (const auto& ex : corpus) {
        const auto set = expand_variants(ex, dicts());
        for (const auto& v : set.variants) {
            ++total_variants;

            if (equal_folded(v.fusion, ex.gold)) {
                ADD_FAILURE() << "variant equals gold for " << ex.id;
                ++failures;
            }
            if (auto why = checks::locality_violation(ex, v)) {
                ADD_FAILURE() << ex.id << " " << v.rule_id << ": " << *why;
                ++failures;
            }
            if (auto why = checks::closure_violation(ex, v, dicts())) {
                ADD_FAILURE() << ex.id << " " << v.rule_id << ": " << *why;
                ++failures;
            }

            if (v.rule_id == "conjunction.1" || v.rule_id == "comparison.1" ||
                v.rule_id == "cause.1") {
                ++swap_firings;
                FusionExample back = ex;
                back.gold = v.fusion;
                back.connective = v.marker;
                bool restored = false;
                for (const auto& bv : expand_variants(back, dicts()).variants)
                    if (bv.rule_id == v.rule_id && equal_folded(bv.marker, *ex.connective) &&
                        bv.fusion == ex.gold) {
                        restored = true;
                        break;
                    }
                if (!restored) {
                    ADD_FAILURE() << "swap round trip failed for " << ex.id << " via "
                                  << v.rule_id << " (" << join(v.marker) << ")";
                    ++failures;
                }
            }
            if (failures > 5) return;  // the first few failures tell the story
        }
    }
    EXPECT_GT(swap_firings, 3000u);
    EXPECT_GT(total_variants, 10000u);
}

TEST_F(Acceptance, Criterion6EntropySanity) {
    criterion(6, "entropy of uniform and one-hot distributions");
    for (std::size_t k = 2; k <= 9; ++k) {
        std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
        const auto d = VariantDistribution::from_probs("u", uniform);
        EXPECT_NEAR(d.entropy, std::log(static_cast<double>(k)), 1e-9) << "k=" << k;

        std::vector<double> onehot(k, 0.0);
        onehot[k / 2] = 0.73;
        EXPECT_NEAR(VariantDistribution::from_probs("o", onehot).entropy, 0.0, 1e-9);
    }
}

TEST_F(Acceptance, Criterion7DictionaryCardinalities) {
    criterion(7, "dictionary cardinalities");
    EXPECT_EQ(dicts().c_e.size(), 3u);
    EXPECT_EQ(dicts().c_e_comma.size(), 5u);
    EXPECT_EQ(dicts().p_r.size(), 4u);
    EXPECT_EQ(dicts().e_r.size(), 24u);
    EXPECT_EQ(dicts().c_comma_a.size(), 1u);
}

namespace {

std::string big_corpus_path() {
    static std::string path = [] {
        const std::string p = ::testing::TempDir() + "acceptance_100k.tsv";
        synth::Generator gen(8080);
        std::ofstream out(p);
        synth::write_corpus_tsv(out, gen.corpus(100000));
        return p;
    }();
    return path;
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_F(Acceptance, Criterion8DeterminismAcrossThreadCounts) {
    criterion(8, "byte-identical augmentation across thread counts (100k rows)");
    RunConfig cfg;
    cfg.command = RunConfig::Command::Augment;
    cfg.input = big_corpus_path();

    cfg.output = ::testing::TempDir() + "acceptance_aug_t1.tsv";
    cfg.threads = 1;
    ASSERT_EQ(run(cfg), kExitOk);

    cfg.output = ::testing::TempDir() + "acceptance_aug_t4.tsv";
    cfg.threads = 4;
    ASSERT_EQ(run(cfg), kExitOk);

    const std::string a = file_bytes(::testing::TempDir() + "acceptance_aug_t1.tsv");
    const std::string b = file_bytes(::testing::TempDir() + "acceptance_aug_t4.tsv");
    ASSERT_FALSE(a.empty());
    EXPECT_TRUE(a == b) << "outputs differ between thread counts";
}

TEST_F(Acceptance, Criterion9ThroughputSanity) {
    criterion(9, "augmenting 100k examples completes within the time budget");
    RunConfig cfg;
    cfg.command = RunConfig::Command::Augment;
    cfg.input = big_corpus_path();
    cfg.output = ::testing::TempDir() + "acceptance_aug_timed.tsv";

    const auto start = std::chrono::steady_clock::now();
    ASSERT_EQ(run(cfg), kExitOk);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("  (100k-example augmentation took %.1f s)\n", seconds);
    EXPECT_LT(seconds, 60.0);
}
