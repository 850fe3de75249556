#include "asd/screening.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "asd/error.hpp"
#include "asd/rng.hpp"

namespace asd {

namespace {

const std::vector<std::string>& ethnicity_categories() {
    static const std::vector<std::string> list = {
        "White-European", "Latino",   "Black",       "Asian",    "Middle Eastern",
        "South Asian",    "Pasifika", "Hispanic",    "Turkish",  "Others",
    };
    return list;
}

const std::vector<std::string>& residence_categories() {
    static const std::vector<std::string> list = {
        "United States", "United Kingdom", "India",  "Brazil", "Jordan",
        "New Zealand",   "Australia",      "Canada", "Egypt",  "United Arab Emirates",
    };
    return list;
}

struct AgeRange {
    double lo;
    double hi;
};

// Toddler ages are months; the other groups are years.
AgeRange age_range(Group g) {
    switch (g) {
        case Group::Toddler: return {12, 36};
        case Group::Child: return {4, 11};
        case Group::Adolescent: return {12, 16};
        case Group::Adult: return {17, 64};
    }
    return {17, 64};
}

// The ten item columns in item order; throws unless all ten are present.
std::array<std::size_t, 10> item_columns(const std::vector<AttributeSchema>& schema) {
    std::array<std::size_t, 10> cols{};
    std::array<bool, 10> seen{};
    for (std::size_t i = 0; i < schema.size(); ++i) {
        const auto item = aq_item_number(schema[i].name);
        if (!item) continue;
        if (schema[i].kind != AttributeKind::BinaryItem) {
            throw Error("item attribute '" + schema[i].name + "' is not binary");
        }
        cols[static_cast<std::size_t>(*item - 1)] = i;
        seen[static_cast<std::size_t>(*item - 1)] = true;
    }
    for (int i = 0; i < 10; ++i) {
        if (!seen[static_cast<std::size_t>(i)]) {
            throw Error("missing item attribute A" + std::to_string(i + 1));
        }
    }
    return cols;
}

ScoreOutcome score_with_schema(const Record& record, const std::vector<AttributeSchema>& schema,
                               int cutoff) {
    const std::array<std::size_t, 10> cols = item_columns(schema);
    int total = 0;
    for (std::size_t c : cols) {
        const Cell& cell = record.cells.at(c);
        if (cell.is_missing()) throw Error("cannot score a record with a missing item answer");
        total += cell.number() != 0.0 ? 1 : 0;
    }
    return {total, total >= cutoff};
}

}  // namespace

GroupProfile group_profile(Group g) {
    GroupProfile p;
    p.group = g;
    p.cutoff = g == Group::Toddler ? 4 : 7;
    for (int i = 1; i <= 10; ++i) {
        p.attribute_template.push_back({"A" + std::to_string(i), AttributeKind::BinaryItem, {}});
    }
    p.attribute_template.push_back({"Age", AttributeKind::Numeric, {}});
    p.attribute_template.push_back({"Gender", AttributeKind::Categorical, {"f", "m"}});
    p.attribute_template.push_back({"Ethnicity", AttributeKind::Categorical, ethnicity_categories()});
    p.attribute_template.push_back({"Jaundice", AttributeKind::Categorical, {"no", "yes"}});
    p.attribute_template.push_back({"Family_ASD", AttributeKind::Categorical, {"no", "yes"}});
    if (g != Group::Toddler) {
        p.attribute_template.push_back(
            {"Residence", AttributeKind::Categorical, residence_categories()});
    }
    p.attribute_template.push_back({"Class", AttributeKind::Class, {}});
    return p;
}

ScoreOutcome score(const Record& record, const GroupProfile& profile) {
    return score_with_schema(record, profile.attribute_template, profile.cutoff);
}

ScoreOutcome score(const Dataset& d, std::size_t row) {
    const int cutoff = d.group == Group::Toddler ? 4 : 7;
    return score_with_schema(d.records.at(row), d.schema, cutoff);
}

Dataset generate(const SynthConfig& config) {
    if (config.n < 1) throw Error("synthetic dataset needs at least one record");
    for (double p : config.item_positive_rate) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error("item rate outside [0,1]");
    }
    if (!(config.label_noise >= 0.0 && config.label_noise < 1.0)) {
        throw Error("label noise outside [0,1)");
    }

    const GroupProfile& profile = config.profile;
    const std::array<std::size_t, 10> items = item_columns(profile.attribute_template);
    std::unordered_set<std::size_t> item_set(items.begin(), items.end());

    Dataset d;
    d.group = profile.group;
    d.schema = profile.attribute_template;
    const AgeRange ages = age_range(profile.group);

    Rng rng(config.seed);
    d.records.reserve(config.n);
    for (std::size_t r = 0; r < config.n; ++r) {
        Record rec;
        rec.cells.resize(d.schema.size());
        for (int i = 0; i < 10; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            rec.cells[items[idx]] =
                Cell::number(rng.bernoulli(config.item_positive_rate[idx]) ? 1.0 : 0.0);
        }
        int class_col = -1;
        for (std::size_t a = 0; a < d.schema.size(); ++a) {
            if (item_set.contains(a)) continue;
            const AttributeSchema& attr = d.schema[a];
            switch (attr.kind) {
                case AttributeKind::Numeric:
                    rec.cells[a] = Cell::number(static_cast<double>(
                        rng.int_in(static_cast<long long>(ages.lo), static_cast<long long>(ages.hi))));
                    break;
                case AttributeKind::Categorical:
                    rec.cells[a] = Cell::category(static_cast<int>(
                        rng.index(static_cast<std::uint64_t>(attr.categories.size()))));
                    break;
                case AttributeKind::Class:
                    class_col = static_cast<int>(a);
                    break;
                case AttributeKind::BinaryItem:
                    throw Error("unexpected extra binary item '" + attr.name + "'");
            }
        }
        if (class_col < 0) throw Error("profile has no class attribute");
        bool label = score_with_schema(rec, d.schema, profile.cutoff).label;
        if (rng.bernoulli(config.label_noise)) label = !label;
        rec.cells[static_cast<std::size_t>(class_col)] = Cell::label(label);
        d.records.push_back(std::move(rec));
    }
    return d;
}

std::vector<ItemResponseCounts> response_summary(const Dataset& d) {
    const std::array<std::size_t, 10> items = item_columns(d.schema);
    const auto class_col = static_cast<std::size_t>(d.require_class_index());
    std::vector<ItemResponseCounts> out(10);
    for (int i = 0; i < 10; ++i) {
        out[static_cast<std::size_t>(i)].attribute = d.schema[items[static_cast<std::size_t>(i)]].name;
    }
    for (const Record& rec : d.records) {
        const bool yes = rec.cells[class_col].label();
        for (std::size_t i = 0; i < 10; ++i) {
            ItemResponseCounts& c = out[i];
            const bool one = rec.cells[items[i]].number() != 0.0;
            if (one && yes) ++c.one_yes;
            else if (one) ++c.one_no;
            else if (yes) ++c.zero_yes;
            else ++c.zero_no;
        }
    }
    return out;
}

std::vector<CategoryCounts> demographic_summary(const Dataset& d, std::string_view attribute) {
    const int idx = d.attribute_index_canonical(attribute);
    if (idx < 0) throw Error("no attribute named '" + std::string(attribute) + "'");
    const AttributeSchema& attr = d.schema[static_cast<std::size_t>(idx)];
    if (attr.kind != AttributeKind::Categorical) {
        throw Error("'" + attr.name + "' is not categorical");
    }
    const auto class_col = static_cast<std::size_t>(d.require_class_index());
    std::vector<CategoryCounts> out(attr.categories.size());
    for (std::size_t k = 0; k < attr.categories.size(); ++k) out[k].category = attr.categories[k];
    for (const Record& rec : d.records) {
        const Cell& cell = rec.cells[static_cast<std::size_t>(idx)];
        if (cell.is_missing()) throw Error("missing value in '" + attr.name + "'");
        auto& row = out.at(static_cast<std::size_t>(cell.category()));
        if (rec.cells[class_col].label()) ++row.yes;
        else ++row.no;
    }
    return out;
}

std::string demographic_label(DemographicField field) {
    switch (field) {
        case DemographicField::Age: return "age";
        case DemographicField::Gender: return "gender";
        case DemographicField::Ethnicity: return "ethnicity";
        case DemographicField::Jaundice: return "jaundice";
        case DemographicField::FamilyAsd: return "family_asd";
        case DemographicField::Residence: return "residence";
    }
    return "";
}

int find_demographic(const Dataset& d, DemographicField field) {
    static const std::unordered_set<std::string> age = {"age", "agemons", "ageyears"};
    static const std::unordered_set<std::string> gender = {"gender", "sex"};
    static const std::unordered_set<std::string> ethnicity = {"ethnicity"};
    static const std::unordered_set<std::string> jaundice = {"jaundice", "jundice"};
    static const std::unordered_set<std::string> family = {"familyasd", "austim", "autism",
                                                           "familymemwithasd"};
    static const std::unordered_set<std::string> residence = {"residence", "contryofres",
                                                              "countryofres", "country"};
    const std::unordered_set<std::string>* names = nullptr;
    switch (field) {
        case DemographicField::Age: names = &age; break;
        case DemographicField::Gender: names = &gender; break;
        case DemographicField::Ethnicity: names = &ethnicity; break;
        case DemographicField::Jaundice: names = &jaundice; break;
        case DemographicField::FamilyAsd: names = &family; break;
        case DemographicField::Residence: names = &residence; break;
    }
    for (std::size_t i = 0; i < d.schema.size(); ++i) {
        if (names->contains(canonical_name(d.schema[i].name))) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace asd
