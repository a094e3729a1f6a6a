#include "stlf/config.hpp"

#include "stlf/error.hpp"
#include "stlf/text.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

namespace stlf {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
    throw Error(ErrorKind::InvalidArgument, "config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double as_double(const std::string& key, const std::string& value) {
    const auto v = text::parse_double(value);
    if (!v) bad_value(key, value, "a number");
    return *v;
}

std::size_t as_count(const std::string& key, const std::string& value) {
    const auto v = text::parse_int(value);
    if (!v || *v < 0) bad_value(key, value, "a non-negative integer");
    return static_cast<std::size_t>(*v);
}

bool as_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    bad_value(key, value, "true or false");
}

std::uint64_t as_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    std::istringstream in(value);
    if (value.empty() || value.front() == '-' || !(in >> v) || !in.eof()) bad_value(key, value, "an unsigned integer");
    return v;
}

std::vector<std::string> as_list(const std::string& value) {
    std::vector<std::string> out;
    for (auto part : text::split(value)) {
        const auto t = text::trim(part);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

similarity::AcfWeights as_omega(const std::string& key, const std::string& value) {
    // identity | geometric:<lambda> | diagonal:<w1>;<w2>;...
    if (value == "identity") return similarity::AcfWeights::identity();
    if (value.rfind("geometric:", 0) == 0) {
        return similarity::AcfWeights::geometric(as_double(key, value.substr(10)));
    }
    if (value.rfind("diagonal:", 0) == 0) {
        std::vector<double> w;
        for (auto part : text::split(value.substr(9), ';')) w.push_back(as_double(key, std::string(text::trim(part))));
        return similarity::AcfWeights::user_diagonal(std::move(w));
    }
    bad_value(key, value, "identity, geometric:<lambda> or diagonal:<w1>;<w2>;...");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"out", [](RunConfig& c, const auto&, const auto& v) { c.out_dir = v; }},
        {"seed", [](RunConfig& c, const auto& k, const auto& v) { c.seed = as_u64(k, v); }},
        {"dataset", [](RunConfig& c, const auto&, const auto& v) { c.dataset_dir = v; }},
        {"load_file", [](RunConfig& c, const auto&, const auto& v) { c.load_file = v; }},
        {"temperature_file", [](RunConfig& c, const auto&, const auto& v) { c.temperature_file = v; }},
        {"zones", [](RunConfig& c, const auto&, const auto& v) { c.zones = as_list(v); }},
        {"models",
         [](RunConfig& c, const auto& k, const auto& v) {
             c.models.clear();
             for (const auto& m : as_list(v)) c.models.push_back(parse_model_kind(m));
             if (c.models.empty()) bad_value(k, v, "f1, f2 or f1,f2");
         }},
        {"split.ratio", [](RunConfig& c, const auto& k, const auto& v) { c.split_ratio = as_double(k, v); }},
        {"weekday_only", [](RunConfig& c, const auto& k, const auto& v) { c.design.weekday_only = as_bool(k, v); }},
        {"synth.hours", [](RunConfig& c, const auto& k, const auto& v) { c.synth.n_hours = as_count(k, v); }},
        {"synth.zones", [](RunConfig& c, const auto& k, const auto& v) { c.synth.zone_count = as_count(k, v); }},
        {"synth.shared_weather_weight",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.shared_weather_weight = as_double(k, v); }},
        {"synth.noise_sd", [](RunConfig& c, const auto& k, const auto& v) { c.synth.noise_sd = as_double(k, v); }},
        {"synth.start", [](RunConfig& c, const auto&, const auto& v) { c.synth.start = HourlyTimestamp::parse(v); }},
        {"ingest.max_gap",
         [](RunConfig& c, const auto& k, const auto& v) { c.clean.max_interpolated_gap = as_count(k, v); }},
        {"ingest.min_length", [](RunConfig& c, const auto& k, const auto& v) { c.clean.min_length = as_count(k, v); }},
        {"similarity.minkowski_p",
         [](RunConfig& c, const auto& k, const auto& v) { c.similarity.minkowski_p = as_double(k, v); }},
        {"similarity.cor2_beta",
         [](RunConfig& c, const auto& k, const auto& v) { c.similarity.cor2_beta = as_double(k, v); }},
        {"similarity.max_lag", [](RunConfig& c, const auto& k, const auto& v) { c.similarity.max_lag = as_count(k, v); }},
        {"similarity.omega", [](RunConfig& c, const auto& k, const auto& v) { c.similarity.omega = as_omega(k, v); }},
        {"similarity.sax_word_length",
         [](RunConfig& c, const auto& k, const auto& v) { c.similarity.sax_word_length = as_count(k, v); }},
        {"similarity.sax_alphabet",
         [](RunConfig& c, const auto& k, const auto& v) { c.similarity.sax_alphabet = static_cast<int>(as_count(k, v)); }},
        {"similarity.znormalize",
         [](RunConfig& c, const auto& k, const auto& v) { c.similarity.znormalize_first = as_bool(k, v); }},
        {"attack.kind", [](RunConfig& c, const auto&, const auto& v) { c.attack.kind = parse_attack_kind(v); }},
        {"attack.zone", [](RunConfig& c, const auto&, const auto& v) { c.attack.target_zone = v; }},
        {"attack.model", [](RunConfig& c, const auto&, const auto& v) { c.attack_model = parse_model_kind(v); }},
        {"attack.mean", [](RunConfig& c, const auto& k, const auto& v) { c.attack.mean = as_double(k, v); }},
        {"attack.sd", [](RunConfig& c, const auto& k, const auto& v) { c.attack.sd = as_double(k, v); }},
        {"attack.epsilon", [](RunConfig& c, const auto& k, const auto& v) { c.attack.epsilon = as_double(k, v); }},
        {"attack.p", [](RunConfig& c, const auto&, const auto& v) { c.attack.p = parse_norm_order(v); }},
        {"attack.direction",
         [](RunConfig& c, const auto& k, const auto& v) {
             if (v == "inflate" || v == "+1" || v == "1") {
                 c.attack.direction = 1;
             } else if (v == "deflate" || v == "-1") {
                 c.attack.direction = -1;
             } else {
                 bad_value(k, v, "inflate or deflate");
             }
         }},
        {"attack.max_iters", [](RunConfig& c, const auto& k, const auto& v) { c.attack.max_iters = as_count(k, v); }},
        {"attack.step_size", [](RunConfig& c, const auto& k, const auto& v) { c.attack.step_size = as_double(k, v); }},
        {"detect.tau", [](RunConfig& c, const auto& k, const auto& v) { c.tau = as_double(k, v); }},
        {"detect.vote_k", [](RunConfig& c, const auto& k, const auto& v) { c.vote_k = as_count(k, v); }},
        {"detect.trials", [](RunConfig& c, const auto& k, const auto& v) { c.trials = as_count(k, v); }},
        {"detect.window", [](RunConfig& c, const auto& k, const auto& v) { c.window = as_count(k, v); }},
        {"detect.windows", [](RunConfig& c, const auto& k, const auto& v) { c.windows = as_count(k, v); }},
        {"detect.reference_zone", [](RunConfig& c, const auto&, const auto& v) { c.reference_zone = v; }},
    };
    return table;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
    it->second(*this, key, value);
}

void RunConfig::apply_text(const std::string& content, const std::string& origin) {
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto t = text::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidArgument,
                        origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        set(std::string(text::trim(t.substr(0, eq))), std::string(text::trim(t.substr(eq + 1))));
    }
}

void RunConfig::apply_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorKind::Io, "config file not found: " + path);
    apply_text(text::read_file(path), path);
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> out = [] {
        std::vector<std::string> k;
        for (const auto& [key, _] : setters()) k.push_back(key);
        return k;
    }();
    return out;
}

}  // namespace stlf
