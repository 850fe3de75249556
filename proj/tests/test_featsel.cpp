#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "asd/featsel.hpp"
#include "asd/rng.hpp"
#include "asd/screening.hpp"

using namespace asd;

namespace {

// Three binary attributes against a 3-no/5-yes class: a perfect copy of
// the class, a partially informative column, and a constant.
Dataset hand_eight() {
    Dataset d;
    d.schema.push_back({"a", AttributeKind::BinaryItem, {}});
    d.schema.push_back({"quiet", AttributeKind::BinaryItem, {}});
    d.schema.push_back({"copy", AttributeKind::BinaryItem, {}});
    d.schema.push_back({"Class", AttributeKind::Class, {}});
    const int a[] = {0, 0, 0, 0, 1, 1, 1, 1};
    const int cls[] = {0, 0, 0, 1, 1, 1, 1, 1};
    for (int i = 0; i < 8; ++i) {
        Record r;
        r.cells = {Cell::number(a[i]), Cell::number(0), Cell::number(cls[i]),
                   Cell::label(cls[i] == 1)};
        d.records.push_back(std::move(r));
    }
    return d;
}

// Two binary attributes over six records: y copies the class, x opposes
// it weakly, z is constant. Weights below are hand-traced with k=1.
Dataset hand_six() {
    Dataset d;
    d.schema.push_back({"x", AttributeKind::BinaryItem, {}});
    d.schema.push_back({"y", AttributeKind::BinaryItem, {}});
    d.schema.push_back({"z", AttributeKind::BinaryItem, {}});
    d.schema.push_back({"Class", AttributeKind::Class, {}});
    const int x[] = {0, 0, 1, 1, 1, 0};
    const int cls[] = {0, 0, 0, 1, 1, 1};
    for (int i = 0; i < 6; ++i) {
        Record r;
        r.cells = {Cell::number(x[i]), Cell::number(cls[i]), Cell::number(1),
                   Cell::label(cls[i] == 1)};
        d.records.push_back(std::move(r));
    }
    return d;
}

const RankedAttribute& entry_for(const FeatureRanking& r, const std::string& name) {
    for (const RankedAttribute& e : r.entries) {
        if (e.attribute == name) return e;
    }
    throw std::runtime_error("no entry for " + name);
}

Dataset shuffled(const Dataset& d, std::uint64_t seed) {
    std::vector<std::size_t> order(d.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    shuffle(order, rng);
    return d.subset(order);
}

}  // namespace

TEST_CASE("information gain on the eight-record table") {
    const FeatureRanking r = rank_info_gain(hand_eight());
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].attribute == "copy");
    CHECK(r.entries[0].score == doctest::Approx(0.9544340029249652).epsilon(1e-15));
    CHECK(r.entries[1].attribute == "a");
    CHECK(r.entries[1].score == doctest::Approx(0.5487949406953988).epsilon(1e-15));
    CHECK(r.entries[2].attribute == "quiet");
    CHECK(r.entries[2].score == 0.0);
}

TEST_CASE("chi-squared ranker on the eight-record table") {
    const FeatureRanking r = rank_chi_squared(hand_eight());
    CHECK(r.entries[0].attribute == "copy");
    CHECK(r.entries[0].score == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.entries[1].attribute == "a");
    CHECK(r.entries[1].score == doctest::Approx(4.8).epsilon(1e-12));
    CHECK(r.entries[2].attribute == "quiet");
    CHECK(r.entries[2].score == 0.0);
}

TEST_CASE("correlation ranker uses absolute coefficients") {
    Dataset d = hand_eight();
    // flip `a` into its complement; |r| must not change
    const FeatureRanking before = rank_correlation(d);
    for (Record& rec : d.records) {
        rec.cells[0] = Cell::number(rec.cells[0].number() == 1.0 ? 0.0 : 1.0);
    }
    const FeatureRanking after = rank_correlation(d);
    CHECK(entry_for(before, "copy").score == 1.0);
    CHECK(entry_for(before, "a").score == doctest::Approx(std::sqrt(0.6)).epsilon(1e-12));
    CHECK(entry_for(after, "a").score ==
          doctest::Approx(entry_for(before, "a").score).epsilon(1e-12));
    CHECK(entry_for(before, "quiet").score == 0.0);
}

TEST_CASE("single-rule ranker scores training accuracy") {
    const FeatureRanking r = rank_one_r(hand_eight());
    CHECK(r.entries[0].attribute == "copy");
    CHECK(r.entries[0].score == 1.0);
    CHECK(r.entries[1].attribute == "a");
    CHECK(r.entries[1].score == doctest::Approx(7.0 / 8.0));
    CHECK(r.entries[2].attribute == "quiet");
    CHECK(r.entries[2].score == doctest::Approx(5.0 / 8.0));  // majority-class fraction
}

TEST_CASE("neighbor-based weights match the hand trace") {
    ReliefFConfig cfg;
    cfg.neighbors = 1;
    const FeatureRanking r = rank_relief_f(hand_six(), cfg);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].attribute == "y");
    CHECK(r.entries[0].score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.entries[1].attribute == "z");  // constant, weight exactly 0
    CHECK(r.entries[1].score == 0.0);
    CHECK(r.entries[2].attribute == "x");
    CHECK(r.entries[2].score == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("neighbor-based weights scale numeric differences by the range") {
    Dataset d;
    d.schema.push_back({"Age", AttributeKind::Numeric, {}});
    d.schema.push_back({"Class", AttributeKind::Class, {}});
    const double ages[] = {0, 1, 9, 10};
    const bool cls[] = {false, false, true, true};
    for (int i = 0; i < 4; ++i) {
        Record r;
        r.cells = {Cell::number(ages[i]), Cell::label(cls[i])};
        d.records.push_back(std::move(r));
    }
    ReliefFConfig cfg;
    cfg.neighbors = 1;
    const FeatureRanking r = rank_relief_f(d, cfg);
    CHECK(r.entries[0].score == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("neighbor search validates its inputs") {
    ReliefFConfig cfg;
    cfg.neighbors = 3;  // classes have only 3 members each
    CHECK_THROWS_AS(rank_relief_f(hand_six(), cfg), Error);
    cfg.neighbors = 0;
    CHECK_THROWS_AS(rank_relief_f(hand_six(), cfg), Error);

    Dataset empty;
    empty.schema = hand_six().schema;
    CHECK_THROWS_AS(rank_relief_f(empty, ReliefFConfig{}), Error);
    CHECK_THROWS_AS(rank_info_gain(empty), Error);
    CHECK_THROWS_AS(rank_chi_squared(empty), Error);
    CHECK_THROWS_AS(rank_correlation(empty), Error);
    CHECK_THROWS_AS(rank_one_r(empty), Error);
}

TEST_CASE("a planted copy of the class tops every ranking") {
    SynthConfig cfg;
    cfg.profile = group_profile(Group::Child);
    cfg.n = 300;
    cfg.seed = 21;
    Dataset d = generate(cfg);
    const auto cls = static_cast<std::size_t>(d.require_class_index());
    const auto jaundice = static_cast<std::size_t>(d.attribute_index("Jaundice"));
    for (Record& r : d.records) {
        r.cells[jaundice] = Cell::category(r.cells[cls].label() ? 1 : 0);
    }
    for (RankMethod m : kAllRankMethods) {
        const FeatureRanking r = rank(d, m);
        CHECK(r.entries[0].attribute == "Jaundice");
    }
}

TEST_CASE("rankings cover every feature exactly once") {
    SynthConfig cfg;
    cfg.profile = group_profile(Group::Adult);
    cfg.n = 120;
    cfg.seed = 31;
    const Dataset d = generate(cfg);
    const std::vector<std::string> expected = feature_names(d);
    for (RankMethod m : kAllRankMethods) {
        const FeatureRanking r = rank(d, m);
        CHECK(r.method == m);
        REQUIRE(r.entries.size() == expected.size());
        std::set<std::string> seen;
        for (const RankedAttribute& e : r.entries) seen.insert(e.attribute);
        CHECK(seen == std::set<std::string>(expected.begin(), expected.end()));
        for (std::size_t i = 1; i < r.entries.size(); ++i) {
            CHECK(r.entries[i - 1].score >= r.entries[i].score);  // sorted descending
        }
    }
}

TEST_CASE("rankings do not depend on record order") {
    SynthConfig cfg;
    cfg.profile = group_profile(Group::Child);
    cfg.n = 150;
    cfg.seed = 8;
    const Dataset d = generate(cfg);
    const Dataset p = shuffled(d, 99);
    for (RankMethod m : kAllRankMethods) {
        const FeatureRanking a = rank(d, m);
        const FeatureRanking b = rank(p, m);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            CHECK(a.entries[i].attribute == b.entries[i].attribute);
            CHECK(a.entries[i].score == doctest::Approx(b.entries[i].score).epsilon(1e-9));
        }
    }
}

TEST_CASE("screening items outrank demographics on rule-labeled data") {
    SynthConfig cfg;
    cfg.profile = group_profile(Group::Child);
    cfg.n = 600;
    cfg.seed = 12;
    for (auto& rate : cfg.item_positive_rate) rate = 0.5;
    const Dataset d = generate(cfg);
    const FeatureRanking r = rank_relief_f(d);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(aq_item_number(r.entries[i].attribute).has_value());
    }
}

TEST_CASE("prefix selection preserves rank order") {
    const FeatureRanking r = rank_info_gain(hand_eight());
    CHECK(top_k(r, 1) == std::vector<std::string>{"copy"});
    CHECK(top_k(r, 2) == std::vector<std::string>{"copy", "a"});
    CHECK(top_k(r, 3) == std::vector<std::string>{"copy", "a", "quiet"});
    CHECK_THROWS_AS(top_k(r, 0), Error);
    CHECK_THROWS_AS(top_k(r, 4), Error);
}

TEST_CASE("ranking names round-trip and serialize") {
    for (RankMethod m : kAllRankMethods) {
        CHECK(rank_method_from_name(rank_method_name(m)) == m);
    }
    CHECK(rank_method_from_name("relief-f") == RankMethod::ReliefF);
    CHECK(rank_method_from_name("information gain") == RankMethod::InfoGain);
    CHECK_FALSE(rank_method_from_name("pca").has_value());

    const std::string csv = rankings_csv({rank_info_gain(hand_eight()), rank_one_r(hand_eight())});
    CHECK(csv.find("method,rank,attribute,score\n") == 0);
    CHECK(csv.find("InfoGain,1,copy,") != std::string::npos);
    CHECK(csv.find("InfoGain,3,quiet,0\n") != std::string::npos);
    CHECK(csv.find("OneR,1,copy,1\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}
