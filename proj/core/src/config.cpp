#include "crossflow/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crossflow {

Mode parse_mode(const std::string& s) {
    if (s == "E") return Mode::Rules;
    if (s == "EE") return Mode::RulesEdge;
    if (s == "EEC") return Mode::RulesEdgeCloud;
    if (s == "signal") return Mode::Signal;
    throw std::invalid_argument("unknown mode: " + s + " (expected E, EE, EEC or signal)");
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Rules: return "E";
        case Mode::RulesEdge: return "EE";
        case Mode::RulesEdgeCloud: return "EEC";
        case Mode::Signal: return "signal";
    }
    throw std::logic_error("mode_name: bad enum");
}

void ScenarioConfig::validate() const {
    if (rows < 1 || cols < 1) throw std::invalid_argument("grid must be at least 1x1");
    if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
    if (episodes < 1) throw std::invalid_argument("episodes must be at least 1");
    if (steps < 1) throw std::invalid_argument("steps must be at least 1");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (mode == Mode::RulesEdge || mode == Mode::RulesEdgeCloud) {
        if (checkpoint.empty()) {
            throw std::invalid_argument("mode " + mode_name(mode) + " requires --checkpoint");
        }
    }
    if (mode == Mode::RulesEdgeCloud && cloud_checkpoint.empty()) {
        throw std::invalid_argument("mode EEC requires --cloud-checkpoint");
    }
}

std::string ScenarioConfig::canonical() const {
    char buf[64];
    std::ostringstream os;
    os << "cols=" << cols << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", density);
    os << "density=" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", dt);
    os << "dt=" << buf << '\n';
    os << "episodes=" << episodes << '\n';
    os << "mode=" << mode_name(mode) << '\n';
    os << "rows=" << rows << '\n';
    os << "seed=" << seed << '\n';
    os << "steps=" << steps << '\n';
    return os.str();
}

std::string ScenarioConfig::hash() const {
    // FNV-1a 64-bit over the canonical text.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int to_int(const std::string& k, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int n = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + k + ": " + v);
    }
}

double to_double(const std::string& k, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + k + ": " + v);
    }
}

std::uint64_t to_u64(const std::string& k, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long n = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + k + ": " + v);
    }
}

}  // namespace

void apply_config_pairs(ScenarioConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "rows") cfg.rows = to_int(k, v);
        else if (k == "cols") cfg.cols = to_int(k, v);
        else if (k == "density") cfg.density = to_double(k, v);
        else if (k == "seed") cfg.seed = to_u64(k, v);
        else if (k == "episodes") cfg.episodes = to_int(k, v);
        else if (k == "steps") cfg.steps = to_int(k, v);
        else if (k == "mode") cfg.mode = parse_mode(v);
        else if (k == "dt") cfg.dt = to_double(k, v);
        else if (k == "checkpoint") cfg.checkpoint = v;
        else if (k == "cloud_checkpoint") cfg.cloud_checkpoint = v;
        else if (k == "out") cfg.out_dir = v;
        else throw std::invalid_argument("config: unknown key: " + k);
    }
}

void apply_config_file(ScenarioConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: " + path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        }
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    apply_config_pairs(cfg, kv);
}

}  // namespace crossflow
