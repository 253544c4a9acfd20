#include "talos/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "talos/errors.hpp"

namespace talos {

const std::vector<std::string>& RunConfig::known_keys() {
    static const std::vector<std::string> keys = {
        // paths
        "out_dir", "graph", "features", "labels", "split",
        "scores", "attack_record", "purified_graph",
        // dataset generation
        "seed", "n", "classes", "p_intra", "p_inter", "feature_dim", "feature_flip",
        "split_train", "split_val", "stratified",
        // attack
        "attack_method", "attack_rate", "attack_budget", "attack_seed", "targets",
        "target_count", "candidate_pool",
        // purification
        "method", "alpha", "alpha_safety", "removal_count", "threshold",
        "neumann", "neumann_tol", "max_terms",
        // gcn
        "hidden_dim", "dropout", "lr", "weight_decay", "momentum", "max_epochs",
        "patience", "gcn_seed", "lp_iters",
        // metrics / report / bench
        "bins", "seeds", "rates", "methods", "repetitions", "jobs",
    };
    return keys;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(path.string() + ": config must be a JSON object");
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        std::string v;
        if (value.is_string())
            v = value.get<std::string>();
        else if (value.is_boolean())
            v = value.get<bool>() ? "true" : "false";
        else if (value.is_number() || value.is_array()) {
            if (value.is_array()) {
                std::string joined;
                for (const auto& item : value) {
                    if (!joined.empty()) joined += ",";
                    joined += item.dump();
                }
                v = joined;
            } else {
                v = value.dump();
            }
        } else {
            throw ConfigError("config key '" + key + "' has unsupported value type");
        }
        cfg.set(key, v);
    }
    return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto& known = known_keys();
    if (std::find(known.begin(), known.end(), key) == known.end())
        throw ConfigError("unknown config key '" + key + "'");
    values_[key] = value;
}

void RunConfig::apply_override(const std::string& assignment) {
    auto pos = assignment.find('=');
    if (pos == std::string::npos)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    set(assignment.substr(0, pos), assignment.substr(pos + 1));
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string RunConfig::get_str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string RunConfig::require_str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
    return it->second;
}

long long RunConfig::get_int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        long long v = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not an integer: " + it->second);
    }
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not a number: " + it->second);
    }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: " + it->second);
}

std::vector<std::string> RunConfig::get_list(const std::string& key,
                                             const std::vector<std::string>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<std::string> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string RunConfig::echo_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j.dump();
}

}  // namespace talos
