#include "nirfuse/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nirfuse/errors.hpp"

namespace nirfuse {

std::vector<FusionMethod> RunConfig::method_list() const {
    std::vector<FusionMethod> out;
    out.reserve(methods.size());
    for (FusionTag t : methods) out.push_back(method(t));
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects a number, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("key '" + key + "' expects a boolean, got '" + value + "'");
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"dataset_root", [](RunConfig& c, const std::string&, const std::string& v) { c.dataset_root = v; }},
        {"output_dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
        {"manifest", [](RunConfig& c, const std::string&, const std::string& v) { c.manifest = v; }},
        {"methods",
         [](RunConfig& c, const std::string&, const std::string& v) {
             c.methods.clear();
             for (const std::string& m : split_list(v)) c.methods.push_back(fusion_tag_from_string(m));
         }},
        {"transforms",
         [](RunConfig& c, const std::string&, const std::string& v) {
             c.transforms.clear();
             for (const std::string& t : split_list(v)) c.transforms.push_back(transform_from_string(t));
         }},
        {"sigma_spatial", [](RunConfig& c, const std::string& k, const std::string& v) { c.bf.sigma_spatial = parse_double(k, v); }},
        {"sigma_range", [](RunConfig& c, const std::string& k, const std::string& v) { c.bf.sigma_range = parse_double(k, v); }},
        {"edge_min", [](RunConfig& c, const std::string& k, const std::string& v) { c.bf.edge_min = parse_double(k, v); }},
        {"edge_max", [](RunConfig& c, const std::string& k, const std::string& v) { c.bf.edge_max = parse_double(k, v); }},
        {"lambda", [](RunConfig& c, const std::string& k, const std::string& v) { c.wls.lambda = parse_double(k, v); }},
        {"alpha", [](RunConfig& c, const std::string& k, const std::string& v) { c.wls.alpha = parse_double(k, v); }},
        {"epsilon", [](RunConfig& c, const std::string& k, const std::string& v) { c.wls.epsilon = parse_double(k, v); }},
        {"solver_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.wls.solver_tol = parse_double(k, v); }},
        {"max_iter", [](RunConfig& c, const std::string& k, const std::string& v) { c.wls.max_iter = parse_int(k, v); }},
        {"bin_size", [](RunConfig& c, const std::string& k, const std::string& v) { c.eval.bin_size = parse_int(k, v); }},
        {"step", [](RunConfig& c, const std::string& k, const std::string& v) { c.eval.step = parse_int(k, v); }},
        {"match_threshold", [](RunConfig& c, const std::string& k, const std::string& v) { c.eval.match_threshold = parse_double(k, v); }},
        {"max_variant",
         [](RunConfig& c, const std::string&, const std::string& v) {
             if (v == "magnitude") c.max_variant = MaxVariant::Magnitude;
             else if (v == "signed") c.max_variant = MaxVariant::Signed;
             else throw ConfigError("key 'max_variant' expects 'magnitude' or 'signed', got '" + v + "'");
         }},
        {"threads", [](RunConfig& c, const std::string& k, const std::string& v) { c.threads = parse_int(k, v); }},
        {"emit_images", [](RunConfig& c, const std::string& k, const std::string& v) { c.emit_images = parse_bool(k, v); }},
        {"max_pairs", [](RunConfig& c, const std::string& k, const std::string& v) { c.max_pairs = parse_int(k, v); }},
    };
    return table;
}

} // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, fn] : setters()) keys.push_back(k);
    return keys;
}

KeyValues read_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        }
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

void apply_key_values(RunConfig& cfg, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        const auto it = setters().find(key);
        if (it == setters().end()) {
            std::string best;
            std::size_t best_d = 4; // suggest only close misses
            for (const auto& [known, fn] : setters()) {
                const std::size_t d = edit_distance(key, known);
                if (d < best_d) {
                    best_d = d;
                    best = known;
                }
            }
            std::string msg = "unknown config key '" + key + "'";
            if (!best.empty()) msg += " (did you mean '" + best + "'?)";
            throw ConfigError(msg);
        }
        it->second(cfg, key, value);
    }
}

RunConfig parse_config(const std::filesystem::path& file, const KeyValues& overrides) {
    RunConfig cfg;
    if (!file.empty()) apply_key_values(cfg, read_key_value_file(file));
    apply_key_values(cfg, overrides);
    return cfg;
}

std::string config_hash(const RunConfig& cfg) {
    std::string canon;
    auto add = [&canon](const std::string& key, const std::string& value) {
        canon += key;
        canon += '=';
        canon += value;
        canon += '\n';
    };
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string m;
    for (FusionTag t : cfg.methods) m += to_string(t) + ",";
    add("methods", m);
    std::string tr;
    for (TransformKind t : cfg.transforms) tr += to_string(t) + ",";
    add("transforms", tr);
    add("sigma_spatial", num(cfg.bf.sigma_spatial));
    add("sigma_range", num(cfg.bf.sigma_range));
    add("edge_min", num(cfg.bf.edge_min));
    add("edge_max", num(cfg.bf.edge_max));
    add("lambda", num(cfg.wls.lambda));
    add("alpha", num(cfg.wls.alpha));
    add("epsilon", num(cfg.wls.epsilon));
    add("solver_tol", num(cfg.wls.solver_tol));
    add("max_iter", std::to_string(cfg.wls.max_iter));
    add("bin_size", std::to_string(cfg.eval.bin_size));
    add("step", std::to_string(cfg.eval.step));
    add("match_threshold", num(cfg.eval.match_threshold));
    add("max_variant", cfg.max_variant == MaxVariant::Magnitude ? "magnitude" : "signed");

    std::uint64_t hash = 1469598103934665603ull; // FNV-1a
    for (unsigned char c : canon) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

} // namespace nirfuse
