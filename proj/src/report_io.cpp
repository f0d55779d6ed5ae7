#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "covert/config.hpp"
#include "covert/errors.hpp"

namespace covert {
namespace {

using detail::require;

const std::vector<std::string> kLeadColumns{"schema", "record", "experiment", "master_seed", "point_index",
                                            "point_seed"};
const std::vector<std::string> kFitColumns{"fit_axis",  "fit_response",   "fit_group", "slope",
                                           "intercept", "r_squared",      "fit_points", "expected_slope",
                                           "tolerance", "rule_fit"};

std::string csv_quote(std::string_view s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string csv_value(const FieldValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) return format_double(x);
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else return csv_quote(x);
        },
        v);
}

std::string json_value(const FieldValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) return std::isfinite(x) ? format_double(x) : "null";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else return json_string(x);
        },
        v);
}

std::vector<std::string> point_columns(const ExperimentReport& report) {
    std::vector<std::string> names;
    if (report.points.empty()) return names;
    for (const auto& f : report.points.front().fields) names.push_back(f.name);
    for (const auto& rec : report.points) {
        require(rec.fields.size() == names.size(), "report points carry different field sets");
        for (std::size_t i = 0; i < names.size(); ++i)
            require(rec.fields[i].name == names[i], "report points carry different field sets");
    }
    return names;
}

std::vector<FieldValue> fit_values(const FitRecord& fit) {
    return {fit.axis,
            fit.response,
            fit.group,
            fit.fit.slope,
            fit.fit.intercept,
            fit.fit.r_squared,
            static_cast<std::int64_t>(fit.fit.points),
            fit.expected_slope,
            fit.tolerance,
            std::string(fit.pass ? kRulePass : kRuleFail)};
}

void emit_csv(const ExperimentReport& report, std::ostream& out) {
    const auto columns = point_columns(report);
    std::string line;
    auto append = [&](const std::string& cell) {
        if (!line.empty()) line += ',';
        line += cell;
    };
    for (const auto& c : kLeadColumns) append(c);
    for (const auto& c : columns) append(c);
    for (const auto& c : kFitColumns) append(c);
    out << line << '\n';

    const std::string schema = csv_quote(report.schema);
    const std::string experiment = csv_quote(report.experiment);
    const std::string seed = std::to_string(report.seed);
    for (const auto& rec : report.points) {
        line.clear();
        append(schema);
        append(csv_quote("point"));
        append(experiment);
        append(seed);
        append(std::to_string(rec.index));
        append(std::to_string(rec.seed));
        for (const auto& f : rec.fields) append(csv_value(f.value));
        for (std::size_t i = 0; i < kFitColumns.size(); ++i) append("");
        out << line << '\n';
    }
    for (const auto& fit : report.fits) {
        line.clear();
        append(schema);
        append(csv_quote("fit"));
        append(experiment);
        append(seed);
        append("");
        append("");
        for (std::size_t i = 0; i < columns.size(); ++i) append("");
        for (const auto& v : fit_values(fit)) append(csv_value(v));
        out << line << '\n';
    }
}

void emit_json_lines(const ExperimentReport& report, std::ostream& out) {
    point_columns(report);
    const std::string lead = "{\"schema\":" + json_string(report.schema);
    const std::string common = ",\"experiment\":" + json_string(report.experiment) +
                               ",\"master_seed\":" + std::to_string(report.seed);
    out << lead << ",\"record\":\"header\"" << common << ",\"points\":" << report.points.size()
        << ",\"fits\":" << report.fits.size() << "}\n";
    for (const auto& rec : report.points) {
        out << lead << ",\"record\":\"point\"" << common << ",\"point_index\":" << rec.index
            << ",\"point_seed\":" << rec.seed;
        for (const auto& f : rec.fields) out << ',' << json_string(f.name) << ':' << json_value(f.value);
        out << "}\n";
    }
    for (const auto& fit : report.fits) {
        out << lead << ",\"record\":\"fit\"" << common;
        const auto values = fit_values(fit);
        for (std::size_t i = 0; i < kFitColumns.size(); ++i)
            out << ',' << json_string(kFitColumns[i]) << ':' << json_value(values[i]);
        out << "}\n";
    }
}

// --- parsing ------------------------------------------------------------

struct Cell {
    std::string text;
    bool quoted = false;
};

std::vector<Cell> split_csv_line(std::string_view line) {
    std::vector<Cell> cells;
    Cell cell;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell.text += '"';
                ++i;
            } else if (ch == '"') {
                in_quotes = false;
            } else {
                cell.text += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
            cell.quoted = true;
        } else if (ch == ',') {
            cells.push_back(std::move(cell));
            cell = Cell{};
        } else {
            cell.text += ch;
        }
    }
    require(!in_quotes, "unterminated quoted CSV field");
    cells.push_back(std::move(cell));
    return cells;
}

FieldValue parse_scalar(const Cell& cell) {
    if (cell.quoted) return cell.text;
    const std::string& t = cell.text;
    if (t == "true") return true;
    if (t == "false") return false;
    if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (t == "inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (t.find_first_of(".eE") == std::string::npos) {
        std::int64_t i = 0;
        const auto [ptr, ec] = std::from_chars(first, last, i);
        require(ec == std::errc() && ptr == last, "malformed integer '" + t + "'");
        return i;
    }
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, d);
    require(ec == std::errc() && ptr == last, "malformed number '" + t + "'");
    return d;
}

std::uint64_t parse_u64(const std::string& t) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    require(ec == std::errc() && ptr == t.data() + t.size(), "malformed unsigned integer '" + t + "'");
    return v;
}

template <class T>
T get_as(const FieldValue& v, std::string_view what) {
    const auto* x = std::get_if<T>(&v);
    require(x != nullptr, "unexpected type for " + std::string(what));
    return *x;
}

FitRecord fit_from_values(const std::vector<FieldValue>& v) {
    FitRecord fit;
    fit.axis = get_as<std::string>(v[0], "fit_axis");
    fit.response = get_as<std::string>(v[1], "fit_response");
    fit.group = get_as<std::string>(v[2], "fit_group");
    fit.fit.slope = get_as<double>(v[3], "slope");
    fit.fit.intercept = get_as<double>(v[4], "intercept");
    fit.fit.r_squared = get_as<double>(v[5], "r_squared");
    fit.fit.points = static_cast<std::size_t>(get_as<std::int64_t>(v[6], "fit_points"));
    fit.expected_slope = get_as<double>(v[7], "expected_slope");
    fit.tolerance = get_as<double>(v[8], "tolerance");
    fit.pass = get_as<std::string>(v[9], "rule_fit") == kRulePass;
    return fit;
}

ExperimentReport parse_csv(std::string_view text) {
    ExperimentReport report;
    std::istringstream in{std::string(text)};
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "CSV report has no header");
    std::vector<std::string> header;
    for (auto& c : split_csv_line(line)) header.push_back(std::move(c.text));
    const std::size_t lead = kLeadColumns.size();
    require(header.size() >= lead + kFitColumns.size(), "CSV header is too short");
    for (std::size_t i = 0; i < lead; ++i) require(header[i] == kLeadColumns[i], "unexpected CSV header");
    const std::size_t fit_start = header.size() - kFitColumns.size();
    for (std::size_t i = 0; i < kFitColumns.size(); ++i)
        require(header[fit_start + i] == kFitColumns[i], "unexpected CSV header");

    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        require(cells.size() == header.size(), "CSV row has the wrong number of cells");
        if (first) {
            report.schema = cells[0].text;
            report.experiment = cells[2].text;
            report.seed = parse_u64(cells[3].text);
            first = false;
        }
        require(cells[0].text == report.schema, "mixed schemas in one report");
        if (cells[1].text == "point") {
            PointRecord rec;
            rec.index = static_cast<std::size_t>(parse_u64(cells[4].text));
            rec.seed = parse_u64(cells[5].text);
            for (std::size_t i = lead; i < fit_start; ++i) rec.fields.push_back({header[i], parse_scalar(cells[i])});
            report.points.push_back(std::move(rec));
        } else if (cells[1].text == "fit") {
            std::vector<FieldValue> values;
            for (std::size_t i = fit_start; i < header.size(); ++i) values.push_back(parse_scalar(cells[i]));
            report.fits.push_back(fit_from_values(values));
        } else {
            throw InvalidArgument("unknown CSV record type '" + cells[1].text + "'");
        }
    }
    return report;
}

FieldValue from_json(const nlohmann::ordered_json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) return j.get<std::string>();
    throw InvalidArgument("unsupported JSON value in report");
}

ExperimentReport parse_json_lines(std::string_view text) {
    ExperimentReport report;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::ordered_json::parse(line);
        const auto record = j.at("record").get<std::string>();
        if (record == "header") {
            report.schema = j.at("schema").get<std::string>();
            report.experiment = j.at("experiment").get<std::string>();
            report.seed = j.at("master_seed").get<std::uint64_t>();
            header_seen = true;
            continue;
        }
        require(header_seen, "JSON-lines report must start with a header record");
        if (record == "point") {
            PointRecord rec;
            for (const auto& [key, value] : j.items()) {
                if (key == "point_index") rec.index = value.get<std::size_t>();
                else if (key == "point_seed") rec.seed = value.get<std::uint64_t>();
                else if (key == "schema" || key == "record" || key == "experiment" || key == "master_seed") continue;
                else rec.fields.push_back({key, from_json(value)});
            }
            report.points.push_back(std::move(rec));
        } else if (record == "fit") {
            std::vector<FieldValue> values;
            for (const auto& c : kFitColumns) values.push_back(from_json(j.at(c)));
            report.fits.push_back(fit_from_values(values));
        } else {
            throw InvalidArgument("unknown JSON record type '" + record + "'");
        }
    }
    require(header_seen, "JSON-lines report has no header record");
    return report;
}

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "jsonl" || name == "json-lines") return OutputFormat::json_lines;
    throw InvalidArgument("format: expected csv or jsonl, got '" + std::string(name) + "'");
}

std::string_view file_extension(OutputFormat format) { return format == OutputFormat::csv ? ".csv" : ".jsonl"; }

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void emit_report(const ExperimentReport& report, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv) emit_csv(report, out);
    else emit_json_lines(report, out);
}

void write_report(const ExperimentReport& report, OutputFormat format, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    emit_report(report, format, out);
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

ExperimentReport parse_report(std::string_view text, OutputFormat format) {
    auto report = format == OutputFormat::csv ? parse_csv(text) : parse_json_lines(text);
    report.refresh_rules();
    return report;
}

}  // namespace covert
