#include "dkp/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dkp::cli {

namespace {

std::string_view trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string const& key, std::string const& text)
{
    std::string const s(trim(text));
    char* end = nullptr;
    errno = 0;
    double const v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        throw UsageError(key + ": '" + text + "' is not a finite number");
    }
    return v;
}

unsigned parse_unsigned(std::string const& key, std::string const& text)
{
    std::string const s(trim(text));
    char* end = nullptr;
    errno = 0;
    long long const v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || v < 0 || v > 100000) {
        throw UsageError(key + ": '" + text + "' is not an integer in [0, 100000]");
    }
    return static_cast<unsigned>(v);
}

std::vector<double> parse_list(std::string const& key, std::string const& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) {
        throw UsageError(key + ": empty list");
    }
    return out;
}

bool known_key(std::string_view key)
{
    return std::find(std::begin(kConfigKeys), std::end(kConfigKeys), key) != std::end(kConfigKeys);
}

} // namespace

char const* to_string(BranchSelector b)
{
    switch (b) {
    case BranchSelector::paper:
        return "paper";
    case BranchSelector::physical:
        return "physical";
    case BranchSelector::both:
        return "both";
    }
    return "?";
}

char const* to_string(Format f)
{
    return f == Format::csv ? "csv" : "json";
}

PhysicalParams RunConfig::physical(double a) const
{
    PhysicalParams p{mass_mev, u0_mev_fm, a, hbar_c};
    try {
        p.validate();
    } catch (std::exception const& e) {
        throw UsageError(e.what());
    }
    return p;
}

std::vector<double> RunConfig::screenings(std::vector<double> const& fallback) const
{
    return a_inv_fm.empty() ? fallback : a_inv_fm;
}

KeyValues parse_config_text(std::string_view text, std::string_view origin)
{
    KeyValues kv;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto const nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (auto const hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto const eq = line.find('=');
        std::string const where = std::string(origin) + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos) {
            throw UsageError(where + ": expected key=value");
        }
        std::string const key(trim(line.substr(0, eq)));
        std::string const value(trim(line.substr(eq + 1)));
        if (!known_key(key)) {
            throw UsageError(where + ": unknown key '" + key + "'");
        }
        kv[key] = value;
    }
    return kv;
}

KeyValues load_config_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

KeyValues overlay(KeyValues base, KeyValues const& top)
{
    for (auto const& [k, v] : top) {
        base[k] = v;
    }
    return base;
}

void apply_values(RunConfig& cfg, KeyValues const& kv)
{
    for (auto const& [key, value] : kv) {
        if (key == "mass_mev") {
            cfg.mass_mev = parse_double(key, value);
        } else if (key == "u0_mev_fm") {
            cfg.u0_mev_fm = parse_double(key, value);
        } else if (key == "a_inv_fm") {
            cfg.a_inv_fm = parse_list(key, value);
        } else if (key == "hbar_c") {
            cfg.hbar_c = parse_double(key, value);
        } else if (key == "n_max") {
            cfg.n_max = parse_unsigned(key, value);
        } else if (key == "j_max") {
            cfg.j_max = parse_unsigned(key, value);
        } else if (key == "branch") {
            if (value == "paper") {
                cfg.branch = BranchSelector::paper;
            } else if (value == "physical") {
                cfg.branch = BranchSelector::physical;
            } else if (value == "both") {
                cfg.branch = BranchSelector::both;
            } else {
                throw UsageError("branch: expected paper, physical or both, got '" + value + "'");
            }
        } else if (key == "format") {
            if (value == "csv") {
                cfg.format = Format::csv;
            } else if (value == "json") {
                cfg.format = Format::json;
            } else {
                throw UsageError("format: expected csv or json, got '" + value + "'");
            }
        } else if (key == "tolerance") {
            double const t = parse_double(key, value);
            if (!(t > 0.0)) {
                throw UsageError("tolerance must be positive");
            }
            cfg.tolerance = t;
        } else {
            throw UsageError("unknown key '" + key + "'");
        }
    }
}

} // namespace dkp::cli
