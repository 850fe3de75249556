#include "asd/tabular.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace asd {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
    }
    return std::string(s);
}

bool parse_double(std::string_view s, double* out) {
    const std::string buf(trim(s));
    if (buf.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return false;
    *out = v;
    return true;
}

// yes/no synonyms used by class columns in the public screening files.
std::optional<bool> parse_label(std::string_view raw) {
    const std::string v = lower(trim(raw));
    if (v == "yes" || v == "y" || v == "1" || v == "true" || v == "t") return true;
    if (v == "no" || v == "n" || v == "0" || v == "false" || v == "f") return false;
    return std::nullopt;
}

bool is_class_name(std::string_view name) {
    return canonical_name(name).find("class") != std::string::npos;
}

// Splits one ARFF data line on commas, honouring single- and double-quoted
// fields. Quotes inside quoted fields are not escaped in this format.
std::vector<std::string> split_arff_row(std::string_view line, long line_number) {
    std::vector<std::string> fields;
    std::string cur;
    char quote = '\0';
    for (char c : line) {
        if (quote != '\0') {
            if (c == quote) {
                quote = '\0';
            } else {
                cur.push_back(c);
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == ',') {
            fields.push_back(std::string(trim(cur)));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quote != '\0') throw ParseError("unterminated quote in data row", line_number);
    fields.push_back(std::string(trim(cur)));
    return fields;
}

struct CsvRow {
    std::vector<std::string> fields;
    long line = 0;
};

// RFC-style CSV: double-quoted fields with "" escapes, quoted fields may
// span lines, rows end on \n or \r\n.
std::vector<CsvRow> split_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool any = false;
    long line = 1;
    long row_start = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                cur.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any = true;
                break;
            case ',':
                fields.push_back(cur);
                cur.clear();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                if (any || !cur.empty()) {
                    fields.push_back(cur);
                    rows.push_back({std::move(fields), row_start});
                    fields = {};
                    cur.clear();
                    any = false;
                }
                ++line;
                row_start = line;
                break;
            default:
                cur.push_back(c);
                any = true;
                break;
        }
    }
    if (quoted) throw ParseError("unterminated quote", row_start);
    if (any || !cur.empty()) {
        fields.push_back(cur);
        rows.push_back({std::move(fields), row_start});
    }
    return rows;
}

std::string csv_escape(std::string_view s) {
    const bool needs_quotes =
        s.find_first_of(",\"\n\r") != std::string_view::npos ||
        (!s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) ||
                        std::isspace(static_cast<unsigned char>(s.back()))));
    if (!needs_quotes) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

Cell cell_from_text(std::string_view raw, AttributeSchema& attr, bool allow_new_categories,
                    long line_number) {
    const std::string value(trim(raw));
    if (value.empty() || value == "?") return Cell::missing();
    switch (attr.kind) {
        case AttributeKind::BinaryItem: {
            double v = 0.0;
            if (!parse_double(value, &v) || (v != 0.0 && v != 1.0)) {
                throw ParseError("expected 0 or 1 for '" + attr.name + "', got '" + value + "'",
                                 line_number);
            }
            return Cell::number(v);
        }
        case AttributeKind::Numeric: {
            double v = 0.0;
            if (!parse_double(value, &v)) {
                throw ParseError("expected a number for '" + attr.name + "', got '" + value + "'",
                                 line_number);
            }
            return Cell::number(v);
        }
        case AttributeKind::Categorical: {
            for (std::size_t i = 0; i < attr.categories.size(); ++i) {
                if (attr.categories[i] == value) return Cell::category(static_cast<int>(i));
            }
            const std::string folded = lower(value);
            for (std::size_t i = 0; i < attr.categories.size(); ++i) {
                if (lower(attr.categories[i]) == folded) return Cell::category(static_cast<int>(i));
            }
            if (allow_new_categories) {
                attr.categories.push_back(value);
                return Cell::category(static_cast<int>(attr.categories.size() - 1));
            }
            throw ParseError("unknown category '" + value + "' for '" + attr.name + "'",
                             line_number);
        }
        case AttributeKind::Class: {
            const auto label = parse_label(value);
            if (!label) {
                throw ParseError("expected a yes/no class value, got '" + value + "'", line_number);
            }
            return Cell::label(*label);
        }
    }
    throw ParseError("unhandled attribute kind", line_number);
}

}  // namespace

std::string group_name(Group g) {
    switch (g) {
        case Group::Toddler: return "toddler";
        case Group::Child: return "child";
        case Group::Adolescent: return "adolescent";
        case Group::Adult: return "adult";
    }
    return "adult";
}

std::optional<Group> group_from_name(std::string_view name) {
    const std::string c = canonical_name(name);
    if (c == "toddler" || c == "toddlers") return Group::Toddler;
    if (c == "child" || c == "children") return Group::Child;
    if (c == "adolescent" || c == "adolescents") return Group::Adolescent;
    if (c == "adult" || c == "adults") return Group::Adult;
    return std::nullopt;
}

std::string canonical_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (unsigned char c : name) {
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::optional<int> aq_item_number(std::string_view name) {
    const std::string c = canonical_name(name);
    if (c.size() < 2 || c[0] != 'a' || !std::isdigit(static_cast<unsigned char>(c[1]))) {
        return std::nullopt;
    }
    std::size_t pos = 1;
    int number = 0;
    while (pos < c.size() && std::isdigit(static_cast<unsigned char>(c[pos]))) {
        number = number * 10 + (c[pos] - '0');
        ++pos;
    }
    const std::string_view rest = std::string_view(c).substr(pos);
    if (rest != "" && rest != "score") return std::nullopt;
    if (number < 1 || number > 10) return std::nullopt;
    return number;
}

Cell Cell::number(double v) {
    Cell c;
    c.tag_ = Tag::Number;
    c.number_ = v;
    return c;
}

Cell Cell::category(int index) {
    Cell c;
    c.tag_ = Tag::Category;
    c.category_ = index;
    return c;
}

Cell Cell::label(bool yes) {
    Cell c;
    c.tag_ = Tag::Label;
    c.yes_ = yes;
    return c;
}

double Cell::number() const {
    if (tag_ != Tag::Number) throw Error("cell holds no number");
    return number_;
}

int Cell::category() const {
    if (tag_ != Tag::Category) throw Error("cell holds no category");
    return category_;
}

bool Cell::label() const {
    if (tag_ != Tag::Label) throw Error("cell holds no class label");
    return yes_;
}

bool Record::has_missing() const {
    return std::any_of(cells.begin(), cells.end(), [](const Cell& c) { return c.is_missing(); });
}

int Dataset::attribute_index(std::string_view name) const {
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int Dataset::attribute_index_canonical(std::string_view name) const {
    const std::string c = canonical_name(name);
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (canonical_name(schema[i].name) == c) return static_cast<int>(i);
    }
    return -1;
}

int Dataset::class_index() const {
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].kind == AttributeKind::Class) return static_cast<int>(i);
    }
    return -1;
}

int Dataset::require_class_index() const {
    const int idx = class_index();
    if (idx < 0) throw Error("dataset has no class attribute");
    return idx;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.schema = schema;
    out.group = group;
    out.records.reserve(rows.size());
    for (std::size_t r : rows) out.records.push_back(records.at(r));
    return out;
}

// --- ARFF ----------------------------------------------------------------

Dataset parse_arff(std::istream& in, std::optional<Group> group) {
    Dataset d;
    if (group) d.group = *group;
    std::vector<bool> open;  // string attributes collect categories from the data
    bool in_data = false;
    bool saw_relation = false;
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '%') continue;
        if (!in_data && stripped.front() == '@') {
            const std::size_t space = stripped.find_first_of(" \t");
            const std::string keyword = lower(stripped.substr(0, space));
            const std::string_view rest =
                space == std::string_view::npos ? std::string_view() : trim(stripped.substr(space));
            if (keyword == "@relation") {
                saw_relation = true;
            } else if (keyword == "@attribute") {
                std::string_view r = rest;
                std::string name;
                if (!r.empty() && (r.front() == '\'' || r.front() == '"')) {
                    const char q = r.front();
                    const std::size_t close = r.find(q, 1);
                    if (close == std::string_view::npos) {
                        throw ParseError("unterminated attribute name", line_number);
                    }
                    name = std::string(r.substr(1, close - 1));
                    r = trim(r.substr(close + 1));
                } else {
                    const std::size_t end = r.find_first_of(" \t");
                    if (end == std::string_view::npos) {
                        throw ParseError("attribute without a type", line_number);
                    }
                    name = std::string(r.substr(0, end));
                    r = trim(r.substr(end));
                }
                if (name.empty()) throw ParseError("empty attribute name", line_number);
                AttributeSchema attr;
                attr.name = name;
                if (!r.empty() && r.front() == '{') {
                    const std::size_t close = r.find('}');
                    if (close == std::string_view::npos) {
                        throw ParseError("unterminated nominal value list", line_number);
                    }
                    std::vector<std::string> values;
                    std::string_view body = r.substr(1, close - 1);
                    while (true) {
                        const std::size_t comma = body.find(',');
                        values.push_back(unquote(body.substr(0, comma)));
                        if (comma == std::string_view::npos) break;
                        body = body.substr(comma + 1);
                    }
                    const bool binary01 =
                        values.size() == 2 && ((values[0] == "0" && values[1] == "1") ||
                                               (values[0] == "1" && values[1] == "0"));
                    bool yes_no = values.size() == 2;
                    for (const std::string& v : values) {
                        if (!parse_label(v)) yes_no = false;
                    }
                    if (is_class_name(name) && yes_no) {
                        attr.kind = AttributeKind::Class;
                    } else if (binary01) {
                        attr.kind = AttributeKind::BinaryItem;
                    } else {
                        attr.kind = AttributeKind::Categorical;
                        attr.categories = std::move(values);
                    }
                } else {
                    const std::string type = lower(std::string_view(r).substr(0, r.find_first_of(" \t")));
                    if (type == "numeric" || type == "real" || type == "integer") {
                        attr.kind = AttributeKind::Numeric;
                    } else if (type == "string") {
                        attr.kind = AttributeKind::Categorical;
                    } else {
                        throw ParseError("unsupported attribute type '" + type + "'", line_number);
                    }
                }
                open.push_back(attr.kind == AttributeKind::Categorical && attr.categories.empty());
                d.schema.push_back(std::move(attr));
            } else if (keyword == "@data") {
                if (!saw_relation) throw ParseError("@data before @relation", line_number);
                if (d.schema.empty()) throw ParseError("@data with no attributes", line_number);
                in_data = true;
            } else {
                throw ParseError("unknown directive '" + keyword + "'", line_number);
            }
            continue;
        }
        if (!in_data) throw ParseError("expected a directive, got '" + std::string(stripped) + "'",
                                       line_number);
        if (stripped.front() == '{') throw ParseError("sparse data rows not supported", line_number);
        const std::vector<std::string> fields = split_arff_row(stripped, line_number);
        if (fields.size() != d.schema.size()) {
            throw ParseError("expected " + std::to_string(d.schema.size()) + " values, got " +
                                 std::to_string(fields.size()),
                             line_number);
        }
        Record rec;
        rec.cells.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            rec.cells.push_back(cell_from_text(fields[i], d.schema[i], open[i], line_number));
        }
        d.records.push_back(std::move(rec));
    }
    if (!saw_relation) throw ParseError("missing @relation header", 0);
    if (!in_data) throw ParseError("missing @data section", 0);
    return d;
}

Dataset parse_arff(const std::string& text, std::optional<Group> group) {
    std::istringstream in(text);
    return parse_arff(in, group);
}

Dataset parse_arff_file(const std::string& path, std::optional<Group> group) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse_arff(in, group);
}

// --- CSV -----------------------------------------------------------------

namespace {

Dataset parse_csv_rows(const std::vector<CsvRow>& rows, const std::vector<AttributeSchema>& schema,
                       std::optional<Group> group) {
    if (rows.empty()) throw ParseError("empty input", 0);
    Dataset d;
    d.schema = schema;
    if (group) d.group = *group;
    const CsvRow& header = rows.front();
    if (header.fields.size() != schema.size()) {
        throw ParseError("expected " + std::to_string(schema.size()) + " columns, got " +
                             std::to_string(header.fields.size()),
                         header.line);
    }
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (std::string(trim(header.fields[i])) != schema[i].name) {
            throw ParseError("header mismatch: expected '" + schema[i].name + "', got '" +
                                 std::string(trim(header.fields[i])) + "'",
                             header.line);
        }
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        if (row.fields.size() != schema.size()) {
            throw ParseError("expected " + std::to_string(schema.size()) + " values, got " +
                                 std::to_string(row.fields.size()),
                             row.line);
        }
        Record rec;
        rec.cells.reserve(schema.size());
        for (std::size_t i = 0; i < schema.size(); ++i) {
            rec.cells.push_back(cell_from_text(row.fields[i], d.schema[i], false, row.line));
        }
        d.records.push_back(std::move(rec));
    }
    return d;
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::vector<AttributeSchema>& schema,
                  std::optional<Group> group) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema, group);
}

Dataset parse_csv(const std::string& text, const std::vector<AttributeSchema>& schema,
                  std::optional<Group> group) {
    return parse_csv_rows(split_csv(text), schema, group);
}

Dataset parse_csv_file(const std::string& path, const std::vector<AttributeSchema>& schema,
                       std::optional<Group> group) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse_csv(in, schema, group);
}

Dataset parse_csv_inferred(std::istream& in, std::optional<Group> group) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_inferred(buf.str(), group);
}

Dataset parse_csv_inferred(const std::string& text, std::optional<Group> group) {
    const std::vector<CsvRow> rows = split_csv(text);
    if (rows.empty()) throw ParseError("empty input", 0);
    const CsvRow& header = rows.front();
    const std::size_t cols = header.fields.size();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].fields.size() != cols) {
            throw ParseError("expected " + std::to_string(cols) + " values, got " +
                                 std::to_string(rows[r].fields.size()),
                             rows[r].line);
        }
    }
    std::vector<AttributeSchema> schema(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        AttributeSchema& attr = schema[c];
        attr.name = std::string(trim(header.fields[c]));
        if (attr.name.empty()) throw ParseError("empty column name", header.line);
        bool all_binary = true;
        bool all_numeric = true;
        bool all_labels = true;
        bool seen_value = false;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const std::string value(trim(rows[r].fields[c]));
            if (value.empty() || value == "?") continue;
            seen_value = true;
            double v = 0.0;
            if (parse_double(value, &v)) {
                if (v != 0.0 && v != 1.0) all_binary = false;
            } else {
                all_binary = all_numeric = false;
            }
            if (!parse_label(value)) all_labels = false;
        }
        if (is_class_name(attr.name) && seen_value && all_labels) {
            attr.kind = AttributeKind::Class;
        } else if (seen_value && all_binary) {
            attr.kind = AttributeKind::BinaryItem;
        } else if (seen_value && all_numeric) {
            attr.kind = AttributeKind::Numeric;
        } else {
            attr.kind = AttributeKind::Categorical;
        }
    }
    Dataset d;
    d.schema = std::move(schema);
    if (group) d.group = *group;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        Record rec;
        rec.cells.reserve(cols);
        for (std::size_t c = 0; c < cols; ++c) {
            rec.cells.push_back(cell_from_text(rows[r].fields[c], d.schema[c],
                                               d.schema[c].kind == AttributeKind::Categorical,
                                               rows[r].line));
        }
        d.records.push_back(std::move(rec));
    }
    return d;
}

Dataset parse_csv_inferred_file(const std::string& path, std::optional<Group> group) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse_csv_inferred(in, group);
}

Dataset load_dataset(const std::string& path, std::optional<Group> group) {
    const std::size_t dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot + 1));
    if (ext == "arff") return parse_arff_file(path, group);
    if (ext == "csv") return parse_csv_inferred_file(path, group);
    throw Error("unsupported dataset extension in " + path + " (expected .arff or .csv)");
}

std::string serialize_csv(const Dataset& d) {
    std::string out;
    for (std::size_t i = 0; i < d.schema.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += csv_escape(d.schema[i].name);
    }
    out.push_back('\n');
    for (const Record& rec : d.records) {
        for (std::size_t i = 0; i < d.schema.size(); ++i) {
            if (i > 0) out.push_back(',');
            const Cell& cell = rec.cells[i];
            if (cell.is_missing()) {
                out.push_back('?');
            } else if (cell.is_number()) {
                out += format_number(cell.number());
            } else if (cell.is_category()) {
                out += csv_escape(d.schema[i].categories.at(static_cast<std::size_t>(cell.category())));
            } else {
                out += cell.label() ? "yes" : "no";
            }
        }
        out.push_back('\n');
    }
    return out;
}

// --- preprocessing -------------------------------------------------------

Dataset preprocess(const Dataset& raw, PreprocessStats* stats) {
    // Identifier, bookkeeping and outcome-derived columns, under every
    // spelling the public screening files use for them.
    static const std::unordered_set<std::string> dropped = {
        "case", "caseno", "casenumber", "id",
        "usedappbefore", "usedscreeningappbefore",
        "user", "whocompletedthetest", "relation",
        "language", "languagespoken",
        "whytaken", "whytakenthescreening", "whyaretakingthescreening",
        "agedesc", "agedescription",
        "screeningtype", "screeningmethodtype", "qchatmethod",
        "score", "result", "screeningscore", "qchat10score", "qchatscore",
    };
    Dataset out;
    out.group = raw.group;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < raw.schema.size(); ++i) {
        if (dropped.contains(canonical_name(raw.schema[i].name))) continue;
        kept.push_back(i);
        out.schema.push_back(raw.schema[i]);
    }
    if (stats) stats->dropped_attributes = raw.schema.size() - kept.size();
    std::size_t removed = 0;
    for (const Record& rec : raw.records) {
        Record slim;
        slim.cells.reserve(kept.size());
        for (std::size_t i : kept) slim.cells.push_back(rec.cells.at(i));
        if (slim.has_missing()) {
            ++removed;
            continue;
        }
        out.records.push_back(std::move(slim));
    }
    if (stats) stats->removed_records = removed;
    out.require_class_index();
    return out;
}

// --- numeric encoding ----------------------------------------------------

Encoder Encoder::fit(const Dataset& d, const std::vector<std::string>& selected) {
    std::unordered_set<std::string> wanted(selected.begin(), selected.end());
    Encoder enc;
    enc.schema_ = d.schema;
    for (std::size_t a = 0; a < d.schema.size(); ++a) {
        const AttributeSchema& attr = d.schema[a];
        if (attr.kind == AttributeKind::Class) continue;
        if (!wanted.erase(attr.name)) continue;
        switch (attr.kind) {
            case AttributeKind::BinaryItem: {
                enc.columns_.push_back({static_cast<int>(a), -1, 0.0, 0.0});
                break;
            }
            case AttributeKind::Numeric: {
                double lo = 0.0, hi = 0.0;
                bool seen = false;
                for (const Record& rec : d.records) {
                    const Cell& cell = rec.cells[a];
                    if (cell.is_missing()) continue;
                    const double v = cell.number();
                    if (!seen) {
                        lo = hi = v;
                        seen = true;
                    } else {
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                }
                enc.columns_.push_back({static_cast<int>(a), -1, lo, hi - lo});
                break;
            }
            case AttributeKind::Categorical: {
                for (std::size_t k = 0; k < attr.categories.size(); ++k) {
                    enc.columns_.push_back({static_cast<int>(a), static_cast<int>(k), 0.0, 0.0});
                }
                break;
            }
            case AttributeKind::Class:
                break;
        }
    }
    if (!wanted.empty()) throw Error("unknown attribute '" + *wanted.begin() + "' in selection");
    for (const Column& col : enc.columns_) {
        enc.column_map_.push_back({enc.schema_[static_cast<std::size_t>(col.attribute)].name,
                                   col.category});
    }
    return enc;
}

Encoder Encoder::from_parts(std::vector<AttributeSchema> schema, std::vector<Column> columns) {
    Encoder enc;
    enc.schema_ = std::move(schema);
    enc.columns_ = std::move(columns);
    for (const Column& col : enc.columns_) {
        enc.column_map_.push_back({enc.schema_.at(static_cast<std::size_t>(col.attribute)).name,
                                   col.category});
    }
    return enc;
}

std::vector<double> Encoder::transform_record(const Record& r) const {
    std::vector<double> out;
    out.reserve(columns_.size());
    for (const Column& col : columns_) {
        const Cell& cell = r.cells.at(static_cast<std::size_t>(col.attribute));
        const AttributeSchema& attr = schema_[static_cast<std::size_t>(col.attribute)];
        if (cell.is_missing()) throw Error("missing value for '" + attr.name + "'");
        switch (attr.kind) {
            case AttributeKind::BinaryItem:
                out.push_back(cell.number());
                break;
            case AttributeKind::Numeric:
                out.push_back(col.range == 0.0 ? 0.0 : (cell.number() - col.min) / col.range);
                break;
            case AttributeKind::Categorical:
                out.push_back(cell.category() == col.category ? 1.0 : 0.0);
                break;
            case AttributeKind::Class:
                throw Error("class attribute in feature columns");
        }
    }
    return out;
}

EncodedMatrix Encoder::transform(const Dataset& d, LabelScheme scheme) const {
    for (const Column& col : columns_) {
        const auto a = static_cast<std::size_t>(col.attribute);
        if (a >= d.schema.size() || d.schema[a].name != schema_[a].name ||
            d.schema[a].kind != schema_[a].kind) {
            throw Error("dataset schema does not match the fitted encoder");
        }
    }
    const int class_idx = d.require_class_index();
    EncodedMatrix m;
    m.rows = d.records.size();
    m.cols = columns_.size();
    m.column_map = column_map_;
    m.values.reserve(m.rows * m.cols);
    m.labels.reserve(m.rows);
    for (const Record& rec : d.records) {
        const std::vector<double> row = transform_record(rec);
        m.values.insert(m.values.end(), row.begin(), row.end());
        const Cell& cls = rec.cells[static_cast<std::size_t>(class_idx)];
        if (cls.is_missing()) throw Error("missing class label");
        const bool yes = cls.label();
        m.labels.push_back(scheme == LabelScheme::PlusMinusOne ? (yes ? 1.0 : -1.0)
                                                               : (yes ? 1.0 : 0.0));
    }
    return m;
}

EncodedMatrix encode(const Dataset& d, const std::vector<std::string>& selected,
                     LabelScheme scheme) {
    return Encoder::fit(d, selected).transform(d, scheme);
}

std::vector<std::string> feature_names(const Dataset& d) {
    std::vector<std::string> names;
    for (const AttributeSchema& attr : d.schema) {
        if (attr.kind != AttributeKind::Class) names.push_back(attr.name);
    }
    return names;
}

}  // namespace asd
