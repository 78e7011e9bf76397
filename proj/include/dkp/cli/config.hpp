#pragma once

// Run configuration for dkp-spectra: built-in defaults, key=value config
// files and command-line flags, merged in that order of increasing priority.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dkp/dkp_yukawa.hpp"

namespace dkp::cli {

/// Bad flag, bad config entry or out-of-range parameter (exit code 2).
class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class BranchSelector
{
    paper,
    physical,
    both
};

enum class Format
{
    csv,
    json
};

char const* to_string(BranchSelector b);
char const* to_string(Format f);

/// Keys accepted in config files; flags map onto the same names.
inline constexpr char const* kConfigKeys[] = {"mass_mev", "n_max",  "j_max",  "u0_mev_fm", "a_inv_fm",
                                             "hbar_c",   "branch", "format", "tolerance"};

using KeyValues = std::map<std::string, std::string>;

struct RunConfig
{
    double mass_mev{938.0};
    double u0_mev_fm{67.54};
    /// Empty: the command's own default screening values.
    std::vector<double> a_inv_fm;
    double hbar_c{kHbarC};
    unsigned n_max{5};
    unsigned j_max{5};
    std::optional<BranchSelector> branch;
    std::optional<Format> format;
    std::optional<double> tolerance;

    /// Empty: stdout.
    std::string output;
    std::optional<double> r_max_fm;
    std::optional<unsigned> samples;
    std::vector<std::string> components{"F", "G", "H_plus", "H_minus"};
    bool exact_oracle{false};
    unsigned n{0};
    unsigned J{0};

    PhysicalParams physical(double a_inv_fm) const;
    std::vector<double> screenings(std::vector<double> const& fallback) const;
};

/// Parses `key=value` lines; `#` starts a comment. Throws UsageError on
/// malformed lines and unknown keys.
KeyValues parse_config_text(std::string_view text, std::string_view origin = "config");

KeyValues load_config_file(std::string const& path);

/// Entries of `top` replace those of `base`.
KeyValues overlay(KeyValues base, KeyValues const& top);

/// Applies config-key entries to `cfg`. Throws UsageError on bad values.
void apply_values(RunConfig& cfg, KeyValues const& kv);

} // namespace dkp::cli
