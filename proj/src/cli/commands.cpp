#include "dkp/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dkp/errors.hpp"
#include "dkp/oracle.hpp"

namespace dkp::cli {

namespace {

// ---------------------------------------------------------------- output

std::string format_double(double v)
{
    if (!std::isfinite(v)) {
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::string cell_text(Cell const& c)
{
    struct Visitor
    {
        std::string operator()(std::monostate) const
        {
            return {};
        }
        std::string operator()(double v) const
        {
            return format_double(v);
        }
        std::string operator()(long long v) const
        {
            return std::to_string(v);
        }
        std::string operator()(std::string const& s) const
        {
            return s;
        }
        std::string operator()(bool b) const
        {
            return b ? "true" : "false";
        }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json cell_json(Cell const& c)
{
    struct Visitor
    {
        nlohmann::ordered_json operator()(std::monostate) const
        {
            return nullptr;
        }
        nlohmann::ordered_json operator()(double v) const
        {
            return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
        }
        nlohmann::ordered_json operator()(long long v) const
        {
            return v;
        }
        nlohmann::ordered_json operator()(std::string const& s) const
        {
            return s;
        }
        nlohmann::ordered_json operator()(bool b) const
        {
            return b;
        }
    };
    return std::visit(Visitor{}, c);
}

// ---------------------------------------------------------------- helpers

using Row = std::vector<Cell>;

Cell opt(std::optional<double> v)
{
    return v ? Cell{*v} : Cell{};
}

char const* status_of(NoBoundState const& e)
{
    return e.reason() == NoBoundState::Reason::ambiguous ? "ambiguous_root" : "no_bound_state";
}

std::vector<Branch> branches_for(BranchSelector s)
{
    switch (s) {
    case BranchSelector::paper:
        return {kPaperBranch};
    case BranchSelector::physical:
        return {kPhysicalBranch};
    case BranchSelector::both:
        return {kPaperBranch, kPhysicalBranch};
    }
    return {};
}

double single_screening(RunConfig const& cfg, char const* command)
{
    auto const a = cfg.screenings({0.005});
    if (a.size() != 1) {
        throw UsageError(std::string(command) + " takes a single --a value");
    }
    return a.front();
}

void common_meta(Table& t, RunConfig const& cfg, char const* command)
{
    t.meta.emplace_back("command", std::string(command));
    t.meta.emplace_back("mass_mev", cfg.mass_mev);
    t.meta.emplace_back("u0_mev_fm", cfg.u0_mev_fm);
    t.meta.emplace_back("hbar_c", cfg.hbar_c);
    t.meta.emplace_back("g", cfg.u0_mev_fm / cfg.hbar_c);
}

/// 1 - x / sinh(x), with the series below x = 0.1 where the difference cancels.
double sinh_deviation(double x)
{
    if (x < 0.1) {
        double const x2 = x * x;
        return x2 * (1.0 / 6.0 - x2 * (7.0 / 360.0 - x2 * (31.0 / 15120.0 - x2 * 127.0 / 604800.0)));
    }
    return 1.0 - x / std::sinh(x);
}

} // namespace

// ---------------------------------------------------------------- writers

void write_csv(Table const& t, std::ostream& os)
{
    for (auto const& [k, v] : t.meta) {
        os << "# " << k << ": " << cell_text(v) << '\n';
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << csv_field(t.columns[i]);
    }
    os << '\n';
    for (auto const& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << csv_field(cell_text(row[i]));
        }
        os << '\n';
    }
}

void write_json(Table const& t, std::ostream& os)
{
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (auto const& [k, v] : t.meta) {
        doc["meta"][k] = cell_json(v);
    }
    doc["rows"] = nlohmann::ordered_json::array();
    for (auto const& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            obj[t.columns[i]] = cell_json(row[i]);
        }
        doc["rows"].push_back(std::move(obj));
    }
    os << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------- energies

CommandResult cmd_energies(RunConfig const& cfg)
{
    CommandResult res;
    Table& t = res.table;
    BranchSelector const sel = cfg.branch.value_or(BranchSelector::paper);
    auto const screenings = cfg.screenings({0.005});

    common_meta(t, cfg, "energies");
    t.meta.emplace_back("branch", std::string(to_string(sel)));
    t.meta.emplace_back("n_max", static_cast<long long>(cfg.n_max));
    t.meta.emplace_back("j_max", static_cast<long long>(cfg.j_max));
    t.columns = {"n", "J", "a_inv_fm", "branch", "E_MeV", "epsilon_MeV", "residual", "status"};
    if (cfg.exact_oracle) {
        t.columns.emplace_back("E_exact_oracle_MeV");
    }

    std::vector<NaturalParams> params;
    for (double a : screenings) {
        params.push_back(natural_units(cfg.physical(a)));
    }

    // Yukawa-equation levels, one scan per (a, J).
    std::vector<std::vector<std::future<std::vector<double>>>> exact(params.size());
    if (cfg.exact_oracle) {
        oracle::OracleConfig ocfg;
        ocfg.variant = oracle::Variant::exact;
        for (std::size_t i = 0; i < params.size(); ++i) {
            for (unsigned J = 0; J <= cfg.j_max; ++J) {
                exact[i].push_back(std::async(std::launch::async, [np = params[i], J, n_max = cfg.n_max, ocfg] {
                    try {
                        return oracle::find_levels(np, J, n_max, ocfg);
                    } catch (Error const&) {
                        return std::vector<double>{};
                    }
                }));
            }
        }
    }
    std::vector<std::vector<std::vector<double>>> exact_levels(params.size());
    for (std::size_t i = 0; i < exact.size(); ++i) {
        for (auto& f : exact[i]) {
            exact_levels[i].push_back(f.get());
        }
    }

    for (std::size_t i = 0; i < params.size(); ++i) {
        for (Branch b : branches_for(sel)) {
            for (unsigned n = 0; n <= cfg.n_max; ++n) {
                for (unsigned J = 0; J <= cfg.j_max; ++J) {
                    Row row{static_cast<long long>(n), static_cast<long long>(J), screenings[i],
                            std::string(branch_label(b))};
                    try {
                        auto const L = energy(params[i], {n, J}, b);
                        row.insert(row.end(), {L.energy, L.epsilon, L.residual, std::string("ok")});
                    } catch (NoBoundState const& e) {
                        row.insert(row.end(), {Cell{}, Cell{}, Cell{}, std::string(status_of(e))});
                    } catch (SupercriticalCoupling const&) {
                        row.insert(row.end(), {Cell{}, Cell{}, Cell{}, std::string("supercritical")});
                    }
                    if (cfg.exact_oracle) {
                        auto const& lv = exact_levels[i][J];
                        row.push_back(n < lv.size() ? Cell{lv[n]} : Cell{});
                    }
                    t.rows.push_back(std::move(row));
                }
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------- table2

CommandResult cmd_table2(RunConfig const& cfg)
{
    CommandResult res;
    Table& t = res.table;
    auto const screenings = cfg.screenings({kTable2Screening[0], kTable2Screening[1]});
    if (screenings.size() > 2) {
        throw UsageError("table2 compares at most two screening columns");
    }
    double const tol = cfg.tolerance.value_or(1e-3);

    common_meta(t, cfg, "table2");
    t.columns = {"n", "J", "a_inv_fm", "E_MeV", "E_reference_MeV", "rel_deviation", "status"};

    double worst = 0.0;
    bool missing = false;
    for (std::size_t c = 0; c < screenings.size(); ++c) {
        NaturalParams const np = natural_units(cfg.physical(screenings[c]));
        for (unsigned n = 0; n < 6; ++n) {
            for (unsigned J = 0; J < 6; ++J) {
                double const ref = kTable2[c][n][J];
                bool const suspect = table2_suspect(static_cast<unsigned>(c), n, J);
                Row row{static_cast<long long>(n), static_cast<long long>(J), screenings[c]};
                std::optional<double> E;
                std::string status;
                try {
                    E = energy_paper(np, {n, J}).energy;
                } catch (NoBoundState const& e) {
                    status = status_of(e);
                } catch (SupercriticalCoupling const&) {
                    status = "supercritical";
                }
                std::optional<double> dev;
                if (E) {
                    dev = std::abs(*E - ref) / std::abs(ref);
                }
                if (suspect) {
                    status = status.empty() ? "suspect_typo" : "suspect_typo;" + status;
                } else if (!E) {
                    missing = true;
                } else {
                    worst = std::max(worst, *dev);
                    status = *dev <= tol ? "ok" : "exceeds";
                }
                row.insert(row.end(), {opt(E), ref, opt(dev), status});
                t.rows.push_back(std::move(row));
            }
        }
    }
    bool const pass = !missing && worst <= tol;
    t.meta.emplace_back("tolerance", tol);
    t.meta.emplace_back("max_rel_deviation", worst);
    t.meta.emplace_back("suspect_entry", std::string("n=5 J=5 a_inv_fm=0.015 (excluded)"));
    t.meta.emplace_back("result", std::string(pass ? "pass" : "fail"));
    res.exit_code = pass ? kSuccess : kPhysicsFailure;
    return res;
}

// ---------------------------------------------------------------- wavefunction

CommandResult cmd_wavefunction(RunConfig const& cfg)
{
    CommandResult res;
    Table& t = res.table;
    double const a_fm = single_screening(cfg, "wavefunction");
    BranchSelector const sel = cfg.branch.value_or(BranchSelector::physical);
    if (sel == BranchSelector::both) {
        throw UsageError("wavefunction needs --branch paper or --branch physical");
    }
    double const r_max = cfg.r_max_fm.value_or(10.0);
    unsigned const samples = cfg.samples.value_or(200);
    if (!(r_max > 0.0) || samples < 1) {
        throw UsageError("wavefunction needs --r-max > 0 and --samples >= 1");
    }
    for (auto const& c : cfg.components) {
        if (c != "F" && c != "G" && c != "H_plus" && c != "H_minus") {
            throw UsageError("unknown component '" + c + "' (expected F, G, H_plus, H_minus)");
        }
    }

    NaturalParams const np = natural_units(cfg.physical(a_fm));
    Branch const b = sel == BranchSelector::paper ? kPaperBranch : kPhysicalBranch;
    EnergyLevel const level = energy(np, {cfg.n, cfg.J}, b);
    SpinorSet const set = spinors(level, np, {}, cfg.hbar_c);

    common_meta(t, cfg, "wavefunction");
    t.meta.emplace_back("a_inv_fm", a_fm);
    t.meta.emplace_back("n", static_cast<long long>(cfg.n));
    t.meta.emplace_back("J", static_cast<long long>(cfg.J));
    t.meta.emplace_back("branch", std::string(branch_label(b)));
    t.meta.emplace_back("E_MeV", level.energy);
    t.meta.emplace_back("epsilon_MeV", level.epsilon);
    t.meta.emplace_back("N_nJ", set.norm_constant());
    if (set.radial().inconsistent()) {
        t.meta.emplace_back("note", std::string("printed closed form; exponent and Jacobi parameter disagree"));
    }

    t.columns = {"r_fm"};
    t.columns.insert(t.columns.end(), cfg.components.begin(), cfg.components.end());
    for (unsigned i = 1; i <= samples; ++i) {
        double const r = r_max * i / samples;
        SpinorSample const s = set.sample(r);
        Row row{r};
        for (auto const& c : cfg.components) {
            row.emplace_back(c == "F" ? s.F : c == "G" ? s.G : c == "H_plus" ? s.H_plus : s.H_minus);
        }
        t.rows.push_back(std::move(row));
    }
    return res;
}

// ---------------------------------------------------------------- verify

CommandResult cmd_verify(RunConfig const& cfg)
{
    CommandResult res;
    Table& t = res.table;
    double const tol = cfg.tolerance.value_or(1e-6);
    double const ode_bound = 1e-8;
    QuantumNumbers const qn{cfg.n, cfg.J};

    common_meta(t, cfg, "verify");
    t.meta.emplace_back("n", static_cast<long long>(qn.n));
    t.meta.emplace_back("J", static_cast<long long>(qn.J));
    t.meta.emplace_back("tolerance", tol);
    t.columns = {"a_inv_fm", "quantity", "value", "bound", "status"};

    bool pass = true;
    bool any_bound = false;
    for (double a_fm : cfg.screenings({0.005})) {
        NaturalParams const np = natural_units(cfg.physical(a_fm));
        auto add = [&](std::string q, Cell value, Cell bound, std::string status) {
            t.rows.push_back(Row{a_fm, std::move(q), std::move(value), std::move(bound), std::move(status)});
        };
        if (np.g == 0.0) {
            add("bound_states", std::string("none"), Cell{}, "no bound states");
            continue;
        }
        any_bound = true;

        std::optional<EnergyLevel> paper;
        std::optional<EnergyLevel> phys;
        try {
            paper = energy_paper(np, qn);
            add("E_paper_MeV", paper->energy, Cell{}, "info");
        } catch (Error const& e) {
            add("E_paper_MeV", Cell{}, Cell{}, e.what());
        }
        try {
            phys = energy_physical(np, qn);
            add("E_physical_MeV", phys->energy, Cell{}, "info");
        } catch (Error const& e) {
            add("E_physical_MeV", Cell{}, Cell{}, std::string("fail: ") + e.what());
            pass = false;
        }

        oracle::OracleConfig exact_cfg;
        exact_cfg.variant = oracle::Variant::exact;
        auto launch = [&](oracle::OracleConfig c) {
            return std::async(std::launch::async, [np, qn, c]() -> std::optional<double> {
                try {
                    return oracle::find_level(np, qn, c);
                } catch (Error const&) {
                    return std::nullopt;
                }
            });
        };
        auto f_approx = launch({});
        auto f_exact = launch(exact_cfg);
        std::optional<double> const e_approx = f_approx.get();
        std::optional<double> const e_exact = f_exact.get();
        add("E_oracle_approx_MeV", opt(e_approx), Cell{}, e_approx ? "info" : "no level");
        add("E_oracle_exact_MeV", opt(e_exact), Cell{}, e_exact ? "info" : "no level");

        if (phys && e_approx) {
            double const d = std::abs(phys->energy - *e_approx) / np.m;
            bool const ok = d <= tol;
            pass = pass && ok;
            add("rel_dE_physical_vs_oracle", d, tol, ok ? "pass" : "fail");
        } else {
            add("rel_dE_physical_vs_oracle", Cell{}, tol, "fail");
            pass = false;
        }
        if (e_approx && e_exact) {
            add("dE_exact_minus_approx_MeV", *e_exact - *e_approx, Cell{}, "info");
        }
        if (paper) {
            // An eigenvalue lies in [E - d, E + d] iff the counting function steps there.
            double const d = tol * np.m;
            double const lo = std::max(paper->energy - d, -np.m * (1.0 - 1e-12));
            double const hi = std::min(paper->energy + d, np.m * (1.0 - 1e-12));
            bool const found =
                oracle::shoot(np, qn.J, lo).level_index() != oracle::shoot(np, qn.J, hi).level_index();
            add("paper_level_in_oracle_spectrum", found, Cell{}, "info");
        }

        if (phys) {
            RadialFunction const F = radial_F(*phys, np);
            RadialEvaluator const ev = [F](double r) { return F(r); };
            auto const grid = oracle::geometric_grid(0.01 / phys->epsilon, 10.0 / phys->epsilon, 400);
            double const r_approx = oracle::ode_residual(oracle::Variant::approx, ev, np, qn.J, phys->energy, grid);
            double const r_exact = oracle::ode_residual(oracle::Variant::exact, ev, np, qn.J, phys->energy, grid);
            bool const ok = r_approx <= ode_bound;
            pass = pass && ok;
            add("ode_residual_physical_approx", r_approx, ode_bound, ok ? "pass" : "fail");
            add("ode_residual_physical_exact", r_exact, Cell{}, "info");
            SpinorSet const set = spinors(*phys, np, {}, cfg.hbar_c);
            add("system_residual_physical", oracle::system_residual(set, np, qn.J, phys->energy, grid), Cell{},
                "info");
        }
        if (paper) {
            RadialFunction const F = radial_function(*paper, np);
            RadialEvaluator const ev = [F](double r) { return F(r); };
            auto const grid = oracle::geometric_grid(0.01 / paper->epsilon, 10.0 / paper->epsilon, 400);
            add("ode_residual_paper_approx",
                oracle::ode_residual(oracle::Variant::approx, ev, np, qn.J, paper->energy, grid), Cell{}, "info");
        }
    }
    if (!any_bound) {
        t.meta.emplace_back("result", std::string("no bound states"));
        return res;
    }
    t.meta.emplace_back("result", std::string(pass ? "pass" : "fail"));
    res.exit_code = pass ? kSuccess : kPhysicsFailure;
    return res;
}

// ---------------------------------------------------------------- approx

CommandResult cmd_approx(RunConfig const& cfg)
{
    CommandResult res;
    Table& t = res.table;
    double const a_fm = single_screening(cfg, "approx");
    double const r_max = cfg.r_max_fm.value_or(20.0);
    unsigned const samples = cfg.samples.value_or(200);
    if (!(r_max > 0.0) || samples < 2) {
        throw UsageError("approx needs --r-max > 0 and --samples >= 2");
    }
    NaturalParams const np = natural_units(cfg.physical(a_fm));

    common_meta(t, cfg, "approx");
    t.meta.emplace_back("a_inv_fm", a_fm);
    t.columns = {"r_fm", "V_yukawa_MeV", "V_approx_MeV", "relative_deviation"};
    for (unsigned i = 1; i <= samples; ++i) {
        double const r = r_max * i / samples;
        double const r_nat = r / cfg.hbar_c;
        t.rows.push_back(
            Row{r, potential_yukawa(np, r_nat), potential_approx(np, r_nat), sinh_deviation(a_fm * r)});
    }
    return res;
}

// ---------------------------------------------------------------- front end

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spin-0 DKP bound states in a vector Yukawa potential", "dkp-spectra"};
    app.require_subcommand(1);

    // Options that double as config keys are kept as strings and parsed by apply_values().
    std::map<std::string, std::string> flag_values;
    std::vector<std::string> a_values;
    struct KeyFlag
    {
        char const* flag;
        char const* key;
        char const* help;
    };
    KeyFlag const key_flags[] = {
        {"--mass-mev", "mass_mev", "Boson mass m, MeV"},
        {"--u0", "u0_mev_fm", "Yukawa strength U0, MeV fm"},
        {"--hbar-c", "hbar_c", "Conversion constant, MeV fm"},
        {"--n-max", "n_max", "Largest radial number"},
        {"--j-max", "j_max", "Largest total angular momentum"},
        {"--branch", "branch", "paper | physical | both"},
        {"--format", "format", "csv | json"},
        {"--tolerance", "tolerance", "Pass/fail bound of table2 and verify"},
    };
    for (auto const& kf : key_flags) {
        app.add_option(kf.flag, flag_values[kf.key], kf.help);
    }
    app.add_option("--a", a_values, "Screening a, fm^-1 (repeatable or comma separated)")->delimiter(',');

    RunConfig cfg;
    std::string config_path;
    double r_max = 0.0;
    unsigned samples = 0;
    std::vector<std::string> components;
    app.add_option("--output", cfg.output, "Write to this file instead of stdout");
    app.add_option("--config", config_path, "key=value config file (default: $DKP_SPECTRA_CONFIG)");
    app.add_option("--r-max", r_max, "Largest radius, fm");
    app.add_option("--samples", samples, "Number of radial samples");
    app.add_option("--components", components, "Subset of F,G,H_plus,H_minus")->delimiter(',');
    app.add_flag("--exact-oracle", cfg.exact_oracle, "Add Yukawa-equation shooting eigenvalues");
    app.add_option("--n", cfg.n, "Radial number for wavefunction and verify");
    app.add_option("--j", cfg.J, "Angular momentum for wavefunction and verify");

    std::map<std::string, CommandResult (*)(RunConfig const&)> const commands = {
        {"energies", cmd_energies}, {"table2", cmd_table2}, {"wavefunction", cmd_wavefunction},
        {"verify", cmd_verify},     {"approx", cmd_approx},
    };
    std::map<std::string, char const*> const descriptions = {
        {"energies", "Closed-form spectra"},
        {"table2", "Reproduce the reference eigenvalue table"},
        {"wavefunction", "Sample the normalized spinor components"},
        {"verify", "Cross-check closed forms against the shooting oracle"},
        {"approx", "Yukawa potential against its a/sinh(ar) surrogate"},
    };
    for (auto const& [name, desc] : descriptions) {
        app.add_subcommand(name, desc)->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (CLI::CallForHelp const&) {
        out << app.help();
        return kSuccess;
    } catch (CLI::CallForAllHelp const&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (CLI::ParseError const& e) {
        err << "dkp-spectra: " << e.what() << '\n';
        return kUsageError;
    }

    std::string const name = app.get_subcommands().front()->get_name();
    try {
        KeyValues flags;
        for (auto const& kf : key_flags) {
            if (app.count(kf.flag) > 0) {
                flags[kf.key] = flag_values[kf.key];
            }
        }
        if (app.count("--a") > 0) {
            std::string joined;
            for (auto const& v : a_values) {
                joined += (joined.empty() ? "" : ",") + v;
            }
            flags["a_inv_fm"] = joined;
        }

        KeyValues file;
        if (!config_path.empty()) {
            file = load_config_file(config_path);
        } else if (char const* env = std::getenv("DKP_SPECTRA_CONFIG"); env && *env) {
            file = load_config_file(env);
        }
        apply_values(cfg, overlay(file, flags));

        if (app.count("--r-max") > 0) {
            cfg.r_max_fm = r_max;
        }
        if (app.count("--samples") > 0) {
            cfg.samples = samples;
        }
        if (app.count("--components") > 0) {
            cfg.components = components;
        }

        CommandResult const result = commands.at(name)(cfg);
        Format const fmt = cfg.format.value_or(name == "verify" ? Format::json : Format::csv);

        std::ofstream file_out;
        std::ostream* sink = &out;
        if (!cfg.output.empty()) {
            file_out.open(cfg.output, std::ios::binary);
            if (!file_out) {
                throw UsageError("cannot write '" + cfg.output + "'");
            }
            sink = &file_out;
        }
        if (fmt == Format::csv) {
            write_csv(result.table, *sink);
        } else {
            write_json(result.table, *sink);
        }
        if (result.exit_code != kSuccess) {
            err << "dkp-spectra " << name << ": failed (see result)\n";
        }
        return result.exit_code;
    } catch (UsageError const& e) {
        err << "dkp-spectra " << name << ": " << e.what() << '\n';
        return kUsageError;
    } catch (DomainError const& e) {
        err << "dkp-spectra " << name << ": " << e.what() << '\n';
        return kUsageError;
    } catch (Error const& e) {
        err << "dkp-spectra " << name << ": " << e.what() << '\n';
        return kPhysicsFailure;
    }
}

} // namespace dkp::cli
