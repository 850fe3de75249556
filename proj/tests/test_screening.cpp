#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "asd/rng.hpp"
#include "asd/screening.hpp"

using namespace asd;

namespace {

Record record_with_items(const GroupProfile& p, const std::vector<int>& items) {
    Record r;
    r.cells.resize(p.attribute_template.size());
    std::size_t item = 0;
    for (std::size_t i = 0; i < p.attribute_template.size(); ++i) {
        const AttributeSchema& attr = p.attribute_template[i];
        if (aq_item_number(attr.name)) {
            r.cells[i] = Cell::number(items.at(item++));
        } else if (attr.kind == AttributeKind::Numeric) {
            r.cells[i] = Cell::number(20);
        } else if (attr.kind == AttributeKind::Categorical) {
            r.cells[i] = Cell::category(0);
        } else {
            r.cells[i] = Cell::label(false);
        }
    }
    return r;
}

SynthConfig child_config(std::size_t n, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.profile = group_profile(Group::Child);
    cfg.n = n;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("group profiles carry the cutoffs and attribute layout") {
    const GroupProfile toddler = group_profile(Group::Toddler);
    const GroupProfile child = group_profile(Group::Child);
    const GroupProfile adolescent = group_profile(Group::Adolescent);
    const GroupProfile adult = group_profile(Group::Adult);

    CHECK(toddler.cutoff == 4);
    CHECK(child.cutoff == 7);
    CHECK(adolescent.cutoff == 7);
    CHECK(adult.cutoff == 7);

    CHECK(toddler.attribute_template.size() == 16);  // no residence column
    CHECK(child.attribute_template.size() == 17);
    CHECK(adolescent.attribute_template.size() == 17);
    CHECK(adult.attribute_template.size() == 17);

    for (const GroupProfile* p : {&toddler, &child, &adolescent, &adult}) {
        int items = 0;
        int classes = 0;
        for (const AttributeSchema& a : p->attribute_template) {
            if (aq_item_number(a.name)) {
                ++items;
                CHECK(a.kind == AttributeKind::BinaryItem);
            }
            if (a.kind == AttributeKind::Class) ++classes;
        }
        CHECK(items == 10);
        CHECK(classes == 1);
    }
}

TEST_CASE("the scoring rule sums the items against the group cutoff") {
    const GroupProfile child = group_profile(Group::Child);
    const GroupProfile toddler = group_profile(Group::Toddler);

    const ScoreOutcome all_ones = score(record_with_items(child, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}), child);
    CHECK(all_ones.score == 10);
    CHECK(all_ones.label);

    CHECK_FALSE(score(record_with_items(toddler, {1, 1, 1, 0, 0, 0, 0, 0, 0, 0}), toddler).label);
    CHECK(score(record_with_items(toddler, {1, 1, 1, 1, 0, 0, 0, 0, 0, 0}), toddler).label);

    CHECK(score(record_with_items(child, {1, 1, 1, 1, 1, 1, 1, 0, 0, 0}), child).label);
    CHECK_FALSE(score(record_with_items(child, {1, 1, 1, 1, 1, 1, 0, 0, 0, 0}), child).label);

    SUBCASE("missing answers are rejected") {
        Record r = record_with_items(child, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
        r.cells[3] = Cell::missing();
        CHECK_THROWS_AS(score(r, child), Error);
    }
    SUBCASE("permutation-invariant and monotone") {
        Rng rng(7);
        const GroupProfile& p = child;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> items(10);
            for (int& v : items) v = rng.bernoulli(0.4) ? 1 : 0;
            const ScoreOutcome base = score(record_with_items(p, items), p);
            std::vector<int> shuffled = items;
            shuffle(shuffled, rng);
            CHECK(score(record_with_items(p, shuffled), p).score == base.score);
            for (std::size_t i = 0; i < 10; ++i) {
                if (items[i] == 1) continue;
                std::vector<int> flipped = items;
                flipped[i] = 1;
                const ScoreOutcome up = score(record_with_items(p, flipped), p);
                CHECK(up.score == base.score + 1);
                if (base.label) CHECK(up.label);
            }
        }
    }
}

TEST_CASE("generated data obeys the scoring rule when noise is zero") {
    for (Group g : {Group::Toddler, Group::Child, Group::Adolescent, Group::Adult}) {
        SynthConfig cfg;
        cfg.profile = group_profile(g);
        cfg.n = 100;
        cfg.seed = 42;
        const Dataset d = generate(cfg);
        REQUIRE(d.records.size() == 100);
        CHECK(d.group == g);
        const auto class_col = static_cast<std::size_t>(d.require_class_index());
        for (std::size_t r = 0; r < d.size(); ++r) {
            CHECK_FALSE(d.records[r].has_missing());
            const ScoreOutcome s = score(d, r);
            CHECK(d.records[r].cells[class_col].label() == s.label);
            // the fixed hyperplane that separates rule-labeled data
            const double margin = s.score - (cfg.profile.cutoff - 0.5);
            CHECK((margin > 0) == s.label);
        }
    }
}

TEST_CASE("generation is deterministic per seed") {
    const Dataset a = generate(child_config(60, 9001));
    const Dataset b = generate(child_config(60, 9001));
    const Dataset c = generate(child_config(60, 9002));
    CHECK(a.schema == b.schema);
    CHECK(a.records == b.records);
    CHECK(serialize_csv(a) == serialize_csv(b));
    CHECK(a.records != c.records);
}

TEST_CASE("positive fraction tracks the binomial tail at even rates") {
    const Dataset d = generate(child_config(1000, 5));
    const auto class_col = static_cast<std::size_t>(d.require_class_index());
    std::size_t positives = 0;
    for (const Record& r : d.records) {
        if (r.cells[class_col].label()) ++positives;
    }
    // P(at least 7 of 10 fair coins) = 176/1024
    const double expected = 0.171875;
    CHECK(std::abs(static_cast<double>(positives) / 1000.0 - expected) < 0.05);
}

TEST_CASE("label noise flips roughly the configured fraction") {
    SynthConfig clean = child_config(2000, 11);
    SynthConfig noisy = clean;
    noisy.label_noise = 0.1;
    const Dataset a = generate(clean);
    const Dataset b = generate(noisy);
    const auto class_col = static_cast<std::size_t>(a.require_class_index());
    std::size_t flips = 0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a.records[r].cells[class_col].label() != b.records[r].cells[class_col].label()) ++flips;
    }
    CHECK(flips > 2000 * 0.05);
    CHECK(flips < 2000 * 0.15);
}

TEST_CASE("generator rejects bad configuration") {
    SynthConfig cfg = child_config(10, 1);
    cfg.n = 0;
    CHECK_THROWS_AS(generate(cfg), Error);
    cfg = child_config(10, 1);
    cfg.item_positive_rate[3] = 1.5;
    CHECK_THROWS_AS(generate(cfg), Error);
    cfg = child_config(10, 1);
    cfg.label_noise = 1.0;
    CHECK_THROWS_AS(generate(cfg), Error);
}

TEST_CASE("response summary matches a brute-force tally") {
    const Dataset d = generate(child_config(50, 77));
    const std::vector<ItemResponseCounts> summary = response_summary(d);
    REQUIRE(summary.size() == 10);
    const auto class_col = static_cast<std::size_t>(d.require_class_index());
    for (std::size_t i = 0; i < 10; ++i) {
        const int col = d.attribute_index("A" + std::to_string(i + 1));
        REQUIRE(col >= 0);
        std::size_t oy = 0, on = 0, zy = 0, zn = 0;
        for (const Record& r : d.records) {
            const bool one = r.cells[static_cast<std::size_t>(col)].number() == 1.0;
            const bool yes = r.cells[class_col].label();
            if (one && yes) ++oy;
            else if (one) ++on;
            else if (yes) ++zy;
            else ++zn;
        }
        CHECK(summary[i].attribute == d.schema[static_cast<std::size_t>(col)].name);
        CHECK(summary[i].one_yes == oy);
        CHECK(summary[i].one_no == on);
        CHECK(summary[i].zero_yes == zy);
        CHECK(summary[i].zero_no == zn);
        CHECK(oy + on + zy + zn == d.size());
    }
}

TEST_CASE("demographic summary counts categories by class") {
    SUBCASE("single record puts one count in one cell") {
        const GroupProfile p = group_profile(Group::Adult);
        Dataset d;
        d.schema = p.attribute_template;
        d.group = Group::Adult;
        Record r = record_with_items(p, {1, 1, 1, 1, 1, 1, 1, 0, 0, 0});
        r.cells[p.attribute_template.size() - 1] = Cell::label(true);
        d.records.push_back(r);
        const auto rows = demographic_summary(d, "Jaundice");
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].category == "no");
        CHECK(rows[0].yes == 1);
        CHECK(rows[0].no == 0);
        CHECK(rows[1].yes == 0);
        CHECK(rows[1].no == 0);
    }
    SUBCASE("totals partition the dataset and match a tally") {
        const Dataset d = generate(child_config(50, 123));
        for (const char* attr : {"Gender", "Ethnicity", "Jaundice", "Family_ASD"}) {
            const auto rows = demographic_summary(d, attr);
            const int col = d.attribute_index(attr);
            REQUIRE(col >= 0);
            const auto class_col = static_cast<std::size_t>(d.require_class_index());
            std::size_t total = 0;
            for (std::size_t k = 0; k < rows.size(); ++k) {
                std::size_t yes = 0, no = 0;
                for (const Record& r : d.records) {
                    if (static_cast<std::size_t>(r.cells[static_cast<std::size_t>(col)].category()) != k) continue;
                    if (r.cells[class_col].label()) ++yes;
                    else ++no;
                }
                CHECK(rows[k].yes == yes);
                CHECK(rows[k].no == no);
                total += rows[k].yes + rows[k].no;
            }
            CHECK(total == d.size());
        }
    }
    SUBCASE("numeric attributes are rejected") {
        const Dataset d = generate(child_config(10, 1));
        CHECK_THROWS_AS(demographic_summary(d, "Age"), Error);
        CHECK_THROWS_AS(demographic_summary(d, "nope"), Error);
    }
}

TEST_CASE("demographic columns are found under the public files' spellings") {
    Dataset d;
    d.schema.push_back({"A1_Score", AttributeKind::BinaryItem, {}});
    d.schema.push_back({"jundice", AttributeKind::Categorical, {"no", "yes"}});
    d.schema.push_back({"austim", AttributeKind::Categorical, {"no", "yes"}});
    d.schema.push_back({"contry_of_res", AttributeKind::Categorical, {"Egypt"}});
    d.schema.push_back({"Sex", AttributeKind::Categorical, {"f", "m"}});
    d.schema.push_back({"Age_Mons", AttributeKind::Numeric, {}});
    d.schema.push_back({"Class/ASD", AttributeKind::Class, {}});
    CHECK(find_demographic(d, DemographicField::Jaundice) == 1);
    CHECK(find_demographic(d, DemographicField::FamilyAsd) == 2);
    CHECK(find_demographic(d, DemographicField::Residence) == 3);
    CHECK(find_demographic(d, DemographicField::Gender) == 4);
    CHECK(find_demographic(d, DemographicField::Age) == 5);
    CHECK(find_demographic(d, DemographicField::Ethnicity) == -1);

    const Dataset synth = generate(child_config(5, 3));
    CHECK(find_demographic(synth, DemographicField::Jaundice) ==
          synth.attribute_index("Jaundice"));
    CHECK(find_demographic(synth, DemographicField::FamilyAsd) ==
          synth.attribute_index("Family_ASD"));
}
