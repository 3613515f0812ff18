#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dscdma/harness.hpp"

namespace dscdma {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        parts.push_back(trim(cur));
    }
    return parts;
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': expected integer, got '" +
                                    value + "'");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': expected number, got '" + value +
                                    "'");
    }
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& p : split(value, ',')) {
        if (!p.empty()) {
            out.push_back(parse_real(key, p));
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const auto& p : split(value, ',')) {
        if (!p.empty()) {
            out.push_back(static_cast<int>(parse_int(key, p)));
        }
    }
    return out;
}

unsigned parse_octal(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long v = std::stoul(value, &pos, 8);
        if (pos != value.size()) throw std::invalid_argument(value);
        return static_cast<unsigned>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': expected octal tap mask, got '" +
                                    value + "'");
    }
}

Detector parse_detector(const std::string& name) {
    if (name == "mf") return Detector::mf;
    if (name == "sic") return Detector::sic;
    if (name == "sicmf") return Detector::sicmf;
    throw std::invalid_argument("unknown detector '" + name + "' (valid: mf, sic, sicmf)");
}

}  // namespace

void apply_config_key(ExperimentConfig& config, const std::string& key,
                      const std::string& value) {
    if (key == "k_users") {
        config.k_users = static_cast<int>(parse_int(key, value));
    } else if (key == "nc") {
        config.nc = static_cast<int>(parse_int(key, value));
    } else if (key == "n_bits") {
        config.n_bits = static_cast<int>(parse_int(key, value));
    } else if (key == "ns") {
        config.ns = static_cast<int>(parse_int(key, value));
    } else if (key == "snr_grid_db") {
        config.snr_grid_db = parse_real_list(key, value);
    } else if (key == "trials") {
        config.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "master_seed") {
        config.master_seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "amplitude_profile_db") {
        config.amplitude_profile_db = parse_real_list(key, value);
    } else if (key == "delay_mode") {
        if (value == "random_sorted") {
            config.delay_mode = DelayMode::random_sorted;
        } else if (value.rfind("fixed:", 0) == 0) {
            config.delay_mode = DelayMode::fixed;
            config.fixed_delays = parse_int_list(key, value.substr(6));
        } else {
            throw std::invalid_argument(
                "config key 'delay_mode': expected random_sorted or fixed:<d0,d1,...>");
        }
    } else if (key == "channel_mode") {
        if (value == "known") {
            config.channel_mode = ChannelMode::known;
        } else if (value == "estimated") {
            config.channel_mode = ChannelMode::estimated;
        } else {
            throw std::invalid_argument("config key 'channel_mode': expected known or estimated");
        }
    } else if (key == "detectors") {
        config.detectors.clear();
        for (const auto& name : split(value, ',')) {
            if (!name.empty()) {
                config.detectors.push_back(parse_detector(name));
            }
        }
    } else if (key == "code_taps") {
        const auto parts = split(value, ',');
        if (parts.size() != 2) {
            throw std::invalid_argument("config key 'code_taps': expected two octal masks");
        }
        config.code_taps = {parse_octal(key, parts[0]), parse_octal(key, parts[1])};
    } else if (key == "code_indices") {
        config.code_indices = parse_int_list(key, value);
    } else if (key == "output_path") {
        config.output_path = value;
    } else if (key == "threads") {
        config.threads = static_cast<int>(parse_int(key, value));
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot read config file: " + path);
    }
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << path << ':' << line_no << ": expected key=value";
            throw std::invalid_argument(msg.str());
        }
        apply_config_key(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return config;
}

}  // namespace dscdma
