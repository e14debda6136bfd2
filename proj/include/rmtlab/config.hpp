#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace rmtlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value file with dotted sections (one level), '#' comments.
// Unknown keys are rejected against a per-command allowlist; seed is
// mandatory (no wall-clock defaults).
class Config {
public:
    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& dflt) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long dflt) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double dflt) const;

    void require_known_keys(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& items() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

} // namespace rmtlab
