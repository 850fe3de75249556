#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asd/error.hpp"

namespace asd {

enum class Group { Toddler, Child, Adolescent, Adult };

std::string group_name(Group g);
std::optional<Group> group_from_name(std::string_view name);

enum class AttributeKind { BinaryItem, Numeric, Categorical, Class };

struct AttributeSchema {
    std::string name;
    AttributeKind kind = AttributeKind::Numeric;
    std::vector<std::string> categories;  // Categorical only, declared order

    bool operator==(const AttributeSchema&) const = default;
};

// Lower-cased name with everything but [a-z0-9] removed. Screening files in
// the wild disagree on capitalisation and separators, so all name matching
// in this library goes through this form.
std::string canonical_name(std::string_view name);

// Shortest decimal form that parses back to exactly the same double; the
// CSV writers use it so that emitted numbers round-trip bit for bit.
std::string format_number(double v);

// Returns the 1..10 item number when the name denotes one of the ten
// screening questions (A1, a4_score, ...), nullopt otherwise.
std::optional<int> aq_item_number(std::string_view name);

// One table cell: a concrete value of the attribute's kind, or Missing.
class Cell {
public:
    Cell() = default;

    static Cell missing() { return Cell(); }
    static Cell number(double v);
    static Cell category(int index);
    static Cell label(bool yes);

    bool is_missing() const { return tag_ == Tag::Missing; }
    bool is_number() const { return tag_ == Tag::Number; }
    bool is_category() const { return tag_ == Tag::Category; }
    bool is_label() const { return tag_ == Tag::Label; }

    double number() const;
    int category() const;
    bool label() const;

    bool operator==(const Cell&) const = default;

private:
    enum class Tag { Missing, Number, Category, Label };
    Tag tag_ = Tag::Missing;
    double number_ = 0.0;
    int category_ = 0;
    bool yes_ = false;
};

struct Record {
    std::vector<Cell> cells;

    bool has_missing() const;

    bool operator==(const Record&) const = default;
};

struct Dataset {
    std::vector<AttributeSchema> schema;
    std::vector<Record> records;
    Group group = Group::Adult;

    std::size_t size() const { return records.size(); }
    std::size_t attribute_count() const { return schema.size(); }

    // Exact-name lookup; -1 when absent.
    int attribute_index(std::string_view name) const;
    // Canonical-name lookup; -1 when absent.
    int attribute_index_canonical(std::string_view name) const;
    // Index of the single Class attribute; -1 when absent.
    int class_index() const;
    // Throws Error when no Class attribute exists.
    int require_class_index() const;

    Dataset subset(const std::vector<std::size_t>& rows) const;
};

// --- parsing ------------------------------------------------------------

// Attribute-relation format subset: @relation, @attribute <name> <type>,
// @data, '%' comments, '?' missing, case-insensitive keywords. Nominal
// {0,1} attributes become BinaryItem; a nominal attribute whose canonical
// name contains "class" and whose two values map to no/yes becomes the
// Class attribute; `string` attributes become Categorical with categories
// collected in order of first appearance.
Dataset parse_arff(std::istream& in, std::optional<Group> group = std::nullopt);
Dataset parse_arff(const std::string& text, std::optional<Group> group = std::nullopt);
Dataset parse_arff_file(const std::string& path, std::optional<Group> group = std::nullopt);

// CSV with a mandatory header row matching `schema` names in order.
// Empty cells and "?" are Missing.
Dataset parse_csv(std::istream& in, const std::vector<AttributeSchema>& schema,
                  std::optional<Group> group = std::nullopt);
Dataset parse_csv(const std::string& text, const std::vector<AttributeSchema>& schema,
                  std::optional<Group> group = std::nullopt);
Dataset parse_csv_file(const std::string& path, const std::vector<AttributeSchema>& schema,
                       std::optional<Group> group = std::nullopt);

// CSV without a known schema: kinds are inferred from the header and the
// observed values (all 0/1 -> BinaryItem, numeric -> Numeric, class-named
// no/yes column -> Class, anything else -> Categorical in first-appearance
// order).
Dataset parse_csv_inferred(std::istream& in, std::optional<Group> group = std::nullopt);
Dataset parse_csv_inferred(const std::string& text, std::optional<Group> group = std::nullopt);
Dataset parse_csv_inferred_file(const std::string& path, std::optional<Group> group = std::nullopt);

// Loads a dataset by file extension: .arff or .csv (inferred schema).
Dataset load_dataset(const std::string& path, std::optional<Group> group = std::nullopt);

// RFC-style CSV with header row; '?' for Missing, labels as no/yes.
// parse_csv(serialize_csv(d), d.schema) reproduces d exactly.
std::string serialize_csv(const Dataset& d);

// --- preprocessing ------------------------------------------------------

struct PreprocessStats {
    std::size_t dropped_attributes = 0;
    std::size_t removed_records = 0;
};

// Drops the bookkeeping/score columns that would leak or add nothing
// (case, used-app-before, user/relation, language, why-taken, age-desc,
// screening-type and the raw screening score, matched by canonical name
// including the spellings found in the public files), then removes every
// record that still has a Missing cell. Throws when the result lacks a
// Class attribute.
Dataset preprocess(const Dataset& raw, PreprocessStats* stats = nullptr);

// --- numeric encoding ---------------------------------------------------

enum class LabelScheme { PlusMinusOne, ZeroOne };

struct ColumnOrigin {
    std::string attribute;
    int category = -1;  // -1 for non-categorical columns

    bool operator==(const ColumnOrigin&) const = default;
};

struct EncodedMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major
    std::vector<double> labels;
    std::vector<ColumnOrigin> column_map;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(values.data() + r * cols, cols);
    }
};

// Fitted column transform: binary items pass through, numeric attributes
// are min-max scaled by the *fit* dataset's range (constant columns map to
// 0), categorical attributes one-hot over the declared category list.
// Column order follows schema order; categories follow declared order.
class Encoder {
public:
    Encoder() = default;

    static Encoder fit(const Dataset& d, const std::vector<std::string>& selected);

    EncodedMatrix transform(const Dataset& d, LabelScheme scheme) const;
    std::vector<double> transform_record(const Record& r) const;

    const std::vector<ColumnOrigin>& column_map() const { return column_map_; }
    const std::vector<AttributeSchema>& fit_schema() const { return schema_; }
    std::size_t feature_count() const { return column_map_.size(); }

    // Internals exposed for serialization.
    struct Column {
        int attribute = 0;   // index into fit schema
        int category = -1;   // one-hot category index, -1 otherwise
        double min = 0.0;    // numeric scaling only
        double range = 0.0;  // 0 for constant columns
    };
    const std::vector<Column>& columns() const { return columns_; }
    static Encoder from_parts(std::vector<AttributeSchema> schema, std::vector<Column> columns);

private:
    std::vector<AttributeSchema> schema_;
    std::vector<Column> columns_;
    std::vector<ColumnOrigin> column_map_;
};

// One-shot fit + transform on the same dataset.
EncodedMatrix encode(const Dataset& d, const std::vector<std::string>& selected,
                     LabelScheme scheme);

// Every non-Class attribute name, schema order.
std::vector<std::string> feature_names(const Dataset& d);

}  // namespace asd
