#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace talos {

/// Flat key-value experiment configuration. Loaded from a flat JSON object;
/// values normalize to strings. Unknown keys are rejected up front so typos
/// fail before any computation.
class RunConfig {
public:
    static RunConfig from_file(const std::filesystem::path& path);
    static const std::vector<std::string>& known_keys();

    /// "key=value" command line override.
    void apply_override(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    std::string require_str(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key,
                                      const std::vector<std::string>& fallback) const;

    /// Canonical JSON echo, embedded in every output for provenance.
    std::string echo_json() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace talos
