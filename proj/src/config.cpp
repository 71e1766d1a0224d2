#include "mhd1d/config.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <unistd.h>

namespace mhd1d {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration";
    for (const auto& p : problems) out += "\n  " + p;
    return out;
}

/// Reads one JSON object, recording type errors and unknown keys against
/// the dotted path of the section.
class Section {
public:
    Section(const json& j, std::string path, std::vector<std::string>& problems)
        : j_(j), path_(std::move(path)), problems_(problems) {
        if (!j_.is_object()) {
            problems_.push_back(where("") + "expected an object");
            ok_ = false;
        }
    }

    ~Section() {
        if (!ok_) return;
        for (const auto& [key, value] : j_.items())
            if (!known_.count(key)) problems_.push_back(where(key) + "unknown key");
    }

    bool has(const std::string& key) {
        known_.insert(key);
        return ok_ && j_.contains(key);
    }

    const json& at(const std::string& key) const { return j_.at(key); }

    void number(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number()) {
            problems_.push_back(where(key) + "expected a number");
            return;
        }
        out = v.get<double>();
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_number_integer() || (std::is_unsigned_v<Int> && v.get<long long>() < 0)) {
            problems_.push_back(where(key) + "expected a non-negative integer");
            return;
        }
        out = v.get<Int>();
    }

    void string(const std::string& key, std::string& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        if (!v.is_string()) {
            problems_.push_back(where(key) + "expected a string");
            return;
        }
        out = v.get<std::string>();
    }

    void numbers(const std::string& key, std::vector<double>& out) {
        if (!has(key)) return;
        const json& v = j_.at(key);
        bool good = v.is_array();
        if (good)
            for (const auto& e : v) good = good && e.is_number();
        if (!good) {
            problems_.push_back(where(key) + "expected an array of numbers");
            return;
        }
        out = v.get<std::vector<double>>();
    }

    template <class Enum>
    void choice(const std::string& key, Enum& out, Enum (*parse)(const std::string&)) {
        std::string s;
        if (!has(key)) return;
        string(key, s);
        if (!j_.at(key).is_string()) return;
        try {
            out = parse(s);
        } catch (const std::exception&) {
            problems_.push_back(where(key) + "unknown value \"" + s + "\"");
        }
    }

    std::string where(const std::string& key) const {
        std::string p = path_;
        if (!key.empty()) p += (p.empty() ? "" : ".") + key;
        return p.empty() ? "" : p + ": ";
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& problems_;
    std::set<std::string> known_;
    bool ok_ = true;
};

/// Attaches a field path to each invariant message from a component.
void report(std::vector<std::string>& problems, const std::string& section,
            const std::vector<std::string>& messages, const std::map<std::string, std::string>& field_of) {
    for (const auto& m : messages) {
        auto it = field_of.find(m);
        const std::string path = it == field_of.end() ? section : section + "." + it->second;
        problems.push_back(path + ": " + m);
    }
}

void validate(const RunConfig& c, std::vector<std::string>& problems) {
    report(problems, "physics", c.physics.violations(),
           {{"mu > 0", "mu"},
            {"nu >= 0", "nu"},
            {"gamma > 1", "gamma"},
            {"rho_bar >= 1", "rho_bar"},
            {"b_bar != 0", "b_bar"},
            {"1 < α ≤ 2", "alpha"}});
    report(problems, "scheme", c.scheme.violations(),
           {{"0 < cfl_number <= 1", "cfl_number"},
            {"0 < diffusion_number <= 0.5", "diffusion_number"},
            {"end_time >= 0", "end_time"},
            {"samples >= 1", "samples"},
            {"tvb_constant >= 0", "tvb_constant"}});
    report(problems, "scenario", c.scenario.violations(c.physics),
           {{"sigma > 0", "sigma"},
            {"a_rho > -rho_bar", "a_rho"},
            {"custom fields have equal nonzero length", "custom"},
            {"custom rho >= 0", "custom.rho"}});

    if (!(c.half_width > 0.0) || !std::isfinite(c.half_width)) problems.emplace_back("grid.half_width: half_width > 0");
    if (c.n_cells < 4) problems.emplace_back("grid.n_cells: n_cells >= 4");
    if (c.scenario.preset != Preset::Custom && c.scenario.sigma > 0.0 && c.half_width < 5.0 * c.scenario.sigma)
        problems.emplace_back("grid.half_width: half_width >= 5 sigma");
    if (c.scenario.preset == Preset::Custom && c.scenario.custom_rho.size() != c.n_cells)
        problems.emplace_back("scenario.custom: custom fields have n_cells entries");

    if (c.nu_list.empty()) problems.emplace_back("nu_list: at least one value");
    std::set<double> seen;
    for (double v : c.nu_list) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            problems.emplace_back("nu_list: nu >= 0");
            break;
        }
        if (!seen.insert(v).second) {
            problems.emplace_back("nu_list: distinct values");
            break;
        }
    }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

PairConfig RunConfig::pair_config() const {
    PairConfig p;
    p.params = physics;
    p.scenario = scenario;
    p.scheme = scheme;
    p.half_width = half_width;
    p.n_cells = n_cells;
    p.config_tag = comparison_tag(*this);
    return p;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    std::vector<std::string> problems;
    {
        Section root(j, "", problems);
        if (root.has("physics")) {
            Section s(root.at("physics"), "physics", problems);
            s.number("mu", c.physics.mu);
            s.number("nu", c.physics.nu);
            s.number("gamma", c.physics.gamma);
            s.number("rho_bar", c.physics.rho_bar);
            s.number("b_bar", c.physics.b_bar);
            s.number("alpha", c.physics.alpha);
        }
        if (root.has("scenario")) {
            Section s(root.at("scenario"), "scenario", problems);
            s.choice("preset", c.scenario.preset, preset_from_string);
            s.number("a_rho", c.scenario.a_rho);
            s.number("a_u", c.scenario.a_u);
            s.number("a_b", c.scenario.a_b);
            s.number("sigma", c.scenario.sigma);
            if (s.has("custom")) {
                Section cu(s.at("custom"), "scenario.custom", problems);
                cu.numbers("rho", c.scenario.custom_rho);
                cu.numbers("u", c.scenario.custom_u);
                cu.numbers("b", c.scenario.custom_b);
            }
        }
        if (root.has("scheme")) {
            Section s(root.at("scheme"), "scheme", problems);
            s.number("cfl_number", c.scheme.cfl_number);
            s.number("diffusion_number", c.scheme.diffusion_number);
            s.choice("reconstruction", c.scheme.reconstruction, reconstruction_from_string);
            s.number("tvb_constant", c.scheme.tvb_constant);
            s.choice("time_integrator", c.scheme.integrator, integrator_from_string);
            s.number("end_time", c.scheme.end_time);
            s.integer("samples", c.scheme.samples);
        }
        if (root.has("grid")) {
            Section s(root.at("grid"), "grid", problems);
            s.number("half_width", c.half_width);
            s.integer("n_cells", c.n_cells);
        }
        root.choice("mode", c.mode, mode_from_string);
        root.string("output_dir", c.output_dir);
        root.numbers("nu_list", c.nu_list);
    }
    if (problems.empty()) validate(c, problems);
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return c;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& ex) {
        const auto [line, col] = line_column(text, ex.byte);
        std::ostringstream msg;
        msg << "parse error at line " << line << ", column " << col << ": " << ex.what();
        throw ConfigError({msg.str()});
    }
    return config_from_json(j);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({"cannot read config file " + path.string()});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json to_json(const RunConfig& c) {
    json j;
    j["physics"] = {{"mu", c.physics.mu},           {"nu", c.physics.nu},         {"gamma", c.physics.gamma},
                    {"rho_bar", c.physics.rho_bar}, {"b_bar", c.physics.b_bar}, {"alpha", c.physics.alpha}};
    j["scenario"] = {{"preset", to_string(c.scenario.preset)},
                     {"a_rho", c.scenario.a_rho},
                     {"a_u", c.scenario.a_u},
                     {"a_b", c.scenario.a_b},
                     {"sigma", c.scenario.sigma},
                     {"custom", {{"rho", c.scenario.custom_rho}, {"u", c.scenario.custom_u}, {"b", c.scenario.custom_b}}}};
    j["scheme"] = {{"cfl_number", c.scheme.cfl_number},
                   {"diffusion_number", c.scheme.diffusion_number},
                   {"reconstruction", to_string(c.scheme.reconstruction)},
                   {"tvb_constant", c.scheme.tvb_constant},
                   {"time_integrator", to_string(c.scheme.integrator)},
                   {"end_time", c.scheme.end_time},
                   {"samples", c.scheme.samples}};
    j["grid"] = {{"half_width", c.half_width}, {"n_cells", c.n_cells}};
    j["mode"] = to_string(c.mode);
    j["output_dir"] = c.output_dir;
    j["nu_list"] = c.nu_list;
    return j;
}

std::string canonical_config(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

std::string config_fingerprint(const RunConfig& c) {
    json j = to_json(c);
    j.erase("output_dir");
    return sha256_hex(j.dump());
}

std::string comparison_tag(const RunConfig& c) {
    json j = to_json(c);
    j.erase("output_dir");
    j.erase("nu_list");
    j.erase("mode");
    j["physics"].erase("nu");
    return sha256_hex(j.dump());
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::filesystem::filesystem_error("cannot open for writing", tmp, std::error_code());
        out << contents;
        out.flush();
        if (!out) throw std::filesystem::filesystem_error("write failed", tmp, std::error_code());
    }
    std::filesystem::rename(tmp, path);
}

json to_json(const RunManifest& m) {
    return {{"command", m.command},
            {"fingerprint", m.fingerprint},
            {"tool_version", m.tool_version},
            {"start_time", m.start_time},
            {"end_time", m.end_time},
            {"clipping_count", m.clipping_count},
            {"boundary_monitor", m.boundary_monitor},
            {"status", m.status},
            {"outputs", m.outputs},
            {"notes", m.notes}};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace mhd1d
