#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "asd/tabular.hpp"

namespace asd {

// Post-preprocessing attribute layout and decision threshold for one
// screening group: the ten questionnaire items plus demographics and the
// class column (toddlers have no residence attribute), with a positive
// screen at score >= 4 for toddlers and >= 7 for everyone else.
struct GroupProfile {
    Group group = Group::Adult;
    int cutoff = 7;
    std::vector<AttributeSchema> attribute_template;
};

GroupProfile group_profile(Group g);

struct ScoreOutcome {
    int score = 0;   // 0..10, sum of the ten item answers
    bool label = false;  // score >= cutoff
};

// Sums the ten items of a record laid out like `profile.attribute_template`.
// Throws when an item cell is Missing.
ScoreOutcome score(const Record& record, const GroupProfile& profile);

// Same rule against an arbitrary dataset's schema.
ScoreOutcome score(const Dataset& d, std::size_t row);

struct SynthConfig {
    GroupProfile profile;
    std::size_t n = 100;
    std::uint64_t seed = 0;
    std::array<double, 10> item_positive_rate{0.5, 0.5, 0.5, 0.5, 0.5,
                                              0.5, 0.5, 0.5, 0.5, 0.5};
    double label_noise = 0.0;  // probability of flipping the rule's label
};

// Deterministic synthetic dataset: items are independent coin flips with
// the configured rates, demographics uniform over their category lists
// (ages uniform over a group-appropriate range), labels from the scoring
// rule and then flipped with probability `label_noise`. No Missing cells.
Dataset generate(const SynthConfig& config);

// Per-item response counts split by class, one entry per screening item.
struct ItemResponseCounts {
    std::string attribute;
    std::size_t one_yes = 0;
    std::size_t one_no = 0;
    std::size_t zero_yes = 0;
    std::size_t zero_no = 0;
};

std::vector<ItemResponseCounts> response_summary(const Dataset& d);

// Per-category class counts for one categorical attribute.
struct CategoryCounts {
    std::string category;
    std::size_t yes = 0;
    std::size_t no = 0;
};

std::vector<CategoryCounts> demographic_summary(const Dataset& d, std::string_view attribute);

// Demographic columns located by the spellings the public files use
// (gender/sex, jundice/jaundice, austim/family_mem_with_asd, ...).
enum class DemographicField { Age, Gender, Ethnicity, Jaundice, FamilyAsd, Residence };

std::string demographic_label(DemographicField field);

// Attribute index in `d`, or -1 when the dataset has no such column.
int find_demographic(const Dataset& d, DemographicField field);

}  // namespace asd
