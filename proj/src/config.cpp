#include "covert/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "covert/errors.hpp"

namespace covert {
namespace {

[[noreturn]] void fail(std::string_view key, std::string_view reason) {
    throw InvalidArgument(std::string(key) + ": " + std::string(reason));
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view key, std::string_view value) {
    std::vector<std::string_view> items;
    std::size_t start = 0;
    while (true) {
        const auto comma = value.find(',', start);
        const auto item = trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
        if (item.empty()) fail(key, "empty list element");
        items.push_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return items;
}

double to_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        fail(key, "expected a number, got '" + std::string(text) + "'");
    return v;
}

// Counts may be written as 1e6; they must still be whole numbers.
std::uint64_t to_count(std::string_view key, std::string_view text) {
    const double v = to_double(key, text);
    if (v < 0.0 || v != std::floor(v) || v > 1.8e19) fail(key, "expected a non-negative integer, got '" + std::string(text) + "'");
    return static_cast<std::uint64_t>(v);
}

bool to_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    fail(key, "expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> doubles(std::string_view key, std::string_view value) {
    std::vector<double> out;
    for (auto item : split_list(key, value)) out.push_back(to_double(key, item));
    return out;
}

template <class T>
std::vector<T> counts(std::string_view key, std::string_view value) {
    std::vector<T> out;
    for (auto item : split_list(key, value)) out.push_back(static_cast<T>(to_count(key, item)));
    return out;
}

std::string_view scalar(std::string_view key, std::string_view value) {
    if (value.find(',') != std::string_view::npos) fail(key, "expected a single value, not a list");
    return value;
}

}  // namespace

bool ParsedConfig::has(std::string_view key) const {
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

ParsedConfig parse_config(std::string_view text, std::optional<int> theorem) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw InvalidArgument("line " + std::to_string(line_no) + ": missing key");
        if (value.empty()) fail(key, "missing value");
        for (const auto& [k, v] : entries)
            if (k == key) fail(key, "given more than once");
        entries.emplace_back(key, value);
    }

    ParsedConfig parsed;
    std::optional<int> file_theorem;
    bool converse = false;
    for (const auto& [key, value] : entries) {
        if (key == "theorem") {
            const auto t = to_count(key, scalar(key, value));
            if (t < 1 || t > 3) fail(key, "must be 1, 2 or 3");
            file_theorem = static_cast<int>(t);
        } else if (key == "converse") {
            converse = to_bool(key, scalar(key, value));
        }
    }
    if (file_theorem && theorem && *file_theorem != *theorem)
        fail("theorem", "file says " + std::to_string(*file_theorem) + " but " + std::to_string(*theorem) +
                            " was requested");
    if (!file_theorem && !theorem) fail("theorem", "missing required key");
    if (theorem && (*theorem < 1 || *theorem > 3)) fail("theorem", "must be 1, 2 or 3");

    SweepSpec& s = parsed.spec;
    s = SweepSpec::defaults(file_theorem.value_or(theorem.value_or(1)), converse);

    for (const auto& [key, value] : entries) {
        parsed.keys.push_back(key);
        const std::string_view k = key;
        if (k == "theorem" || k == "converse") continue;
        if (k == "n") s.n = counts<std::uint64_t>(k, value);
        else if (k == "m") s.m = doubles(k, value);
        else if (k == "N_w") s.N_w = counts<std::size_t>(k, value);
        else if (k == "gamma") s.gamma = doubles(k, value);
        else if (k == "P_r") s.P_r = doubles(k, value);
        else if (k == "epsilon") s.epsilon = doubles(k, value);
        else if (k == "rho") s.rho = doubles(k, value);
        else if (k == "zeta") s.zeta = doubles(k, value);
        else if (k == "lambda") s.lambda = doubles(k, value);
        else if (k == "lambda_prime") s.lambda_prime = doubles(k, value);
        else if (k == "K") s.K = doubles(k, value);
        else if (k == "xi") s.xi = doubles(k, value);
        else if (k == "sigma2_w0") s.sigma2_w0 = doubles(k, value);
        else if (k == "sigma2_b0") s.sigma2_b0 = doubles(k, value);
        else if (k == "trials") s.trials = to_count(k, scalar(k, value));
        else if (k == "decode_trials") s.decode_trials = to_count(k, scalar(k, value));
        else if (k == "codebook_cap") s.codebook_cap = to_count(k, scalar(k, value));
        else if (k == "seed") s.seed = to_count(k, scalar(k, value));
        else if (k == "workers") s.workers = to_count(k, scalar(k, value));
        else if (k == "confidence") s.confidence = to_double(k, scalar(k, value));
        else if (k == "simulate") s.simulate = to_bool(k, scalar(k, value));
        else if (k == "synthesis") {
            const auto v = scalar(k, value);
            if (v == "auto") s.synthesis = SynthesisMode::automatic;
            else if (v == "samples") s.synthesis = SynthesisMode::samples;
            else if (v == "statistic") s.synthesis = SynthesisMode::statistic;
            else fail(k, "expected auto, samples or statistic");
        } else if (k == "moment_constant") {
            const auto v = scalar(k, value);
            if (v == "exact") s.moment_constant = MomentConstant::exact;
            else if (v == "published") s.moment_constant = MomentConstant::published;
            else fail(k, "expected exact or published");
        } else if (k == "detector") {
            const auto v = scalar(k, value);
            if (v == "lrt") s.detector = DetectorKind::lrt;
            else if (v == "radiometer") s.detector = DetectorKind::radiometer;
            else if (v == "joint_lrt") s.detector = DetectorKind::joint_lrt;
            else fail(k, "expected lrt, radiometer or joint_lrt");
        } else if (k == "P_f") s.P_f = to_double(k, scalar(k, value));
        else if (k == "t") s.radiometer_t = to_double(k, scalar(k, value));
        else if (k == "rate") s.rate = to_double(k, scalar(k, value));
        else if (k == "sigma2_b") s.sigma2_b = to_double(k, scalar(k, value));
        else fail(k, "unknown key");
    }
    s.validate();
    return parsed;
}

}  // namespace covert
