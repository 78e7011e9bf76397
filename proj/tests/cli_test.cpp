#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dkp/cli/commands.hpp"
#include "dkp/cli/config.hpp"
#include "dkp/dkp_yukawa.hpp"

using namespace dkp::cli;
using nlohmann::json;

namespace {

struct Outcome
{
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> const& args)
{
    std::ostringstream out;
    std::ostringstream err;
    int const code = run(args, out, err);
    return {code, out.str(), err.str()};
}

json invoke_json(std::vector<std::string> args)
{
    args.push_back("--format");
    args.push_back("json");
    auto const r = invoke(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

std::vector<std::string> lines_of(std::string const& text)
{
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split(std::string const& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

/// Header and data rows of a CSV table, comment lines dropped.
std::vector<std::vector<std::string>> csv_rows(std::string const& text)
{
    std::vector<std::vector<std::string>> rows;
    for (auto const& line : lines_of(text)) {
        if (!line.empty() && line[0] != '#') {
            rows.push_back(split(line, ','));
        }
    }
    return rows;
}

struct TempFile
{
    std::filesystem::path path;

    explicit TempFile(std::string const& name, std::string const& content)
        : path(std::filesystem::temp_directory_path() / name)
    {
        std::ofstream(path) << content;
    }
    ~TempFile()
    {
        std::filesystem::remove(path);
    }
};

struct EnvGuard
{
    explicit EnvGuard(std::string const& value)
    {
        ::setenv("DKP_SPECTRA_CONFIG", value.c_str(), 1);
    }
    ~EnvGuard()
    {
        ::unsetenv("DKP_SPECTRA_CONFIG");
    }
};

} // namespace

TEST_CASE("config precedence per key")
{
    struct Case
    {
        char const* key;
        char const* file_value;
        char const* flag_value;
    };
    Case const cases[] = {
        {"mass_mev", "900", "950"},  {"u0_mev_fm", "60", "70"}, {"a_inv_fm", "0.01", "0.02,0.03"},
        {"hbar_c", "197", "198"},    {"n_max", "2", "3"},       {"j_max", "1", "4"},
        {"branch", "both", "paper"}, {"format", "json", "csv"}, {"tolerance", "1e-4", "1e-5"},
    };
    for (auto const& c : cases) {
        CAPTURE(c.key);
        RunConfig defaults;
        RunConfig from_file;
        RunConfig from_flag;
        KeyValues const file{{c.key, c.file_value}};
        KeyValues const flag{{c.key, c.flag_value}};
        apply_values(from_file, overlay(file, {}));
        apply_values(from_flag, overlay(file, flag));

        RunConfig only_flag;
        apply_values(only_flag, flag);
        auto same = [](RunConfig const& x, RunConfig const& y) {
            return x.mass_mev == y.mass_mev && x.u0_mev_fm == y.u0_mev_fm && x.a_inv_fm == y.a_inv_fm &&
                   x.hbar_c == y.hbar_c && x.n_max == y.n_max && x.j_max == y.j_max && x.branch == y.branch &&
                   x.format == y.format && x.tolerance == y.tolerance;
        };
        CHECK(same(from_flag, only_flag));
        CHECK_FALSE(same(from_file, from_flag));
        CHECK_FALSE(same(from_file, defaults));
    }

    auto const kv = parse_config_text("# comment\nmass_mev = 940  # trailing\n\n u0_mev_fm=60\n", "inline");
    CHECK(kv.at("mass_mev") == "940");
    CHECK(kv.at("u0_mev_fm") == "60");
    CHECK_THROWS_AS(parse_config_text("mass = 1\n", "inline"), UsageError);
    CHECK_THROWS_AS(parse_config_text("mass_mev 1\n", "inline"), UsageError);
}

TEST_CASE("config file, environment and flag layering end to end")
{
    TempFile const file("dkp_cli_test_a.cfg", "mass_mev = 900\nu0_mev_fm = 60\n");
    TempFile const env_file("dkp_cli_test_b.cfg", "mass_mev = 920\nhbar_c = 197\n");

    auto meta = [](std::vector<std::string> args) {
        args.insert(args.begin(), "energies");
        args.insert(args.end(), {"--n-max", "0", "--j-max", "0"});
        return invoke_json(args)["meta"];
    };

    auto const plain = meta({});
    CHECK(plain["mass_mev"] == 938.0);
    CHECK(plain["u0_mev_fm"] == 67.54);

    auto const with_file = meta({"--config", file.path.string()});
    CHECK(with_file["mass_mev"] == 900.0);
    CHECK(with_file["u0_mev_fm"] == 60.0);

    auto const flag_wins = meta({"--config", file.path.string(), "--mass-mev", "950"});
    CHECK(flag_wins["mass_mev"] == 950.0);
    CHECK(flag_wins["u0_mev_fm"] == 60.0);

    EnvGuard const env(env_file.path.string());
    auto const from_env = meta({});
    CHECK(from_env["mass_mev"] == 920.0);
    CHECK(from_env["hbar_c"] == 197.0);
    CHECK(from_env["u0_mev_fm"] == 67.54);

    auto const explicit_file = meta({"--config", file.path.string()});
    CHECK(explicit_file["mass_mev"] == 900.0);
    CHECK(explicit_file["hbar_c"] == doctest::Approx(dkp::kHbarC));
}

TEST_CASE("energies table shape")
{
    auto const r = invoke({"energies"});
    REQUIRE(r.code == 0);
    auto const rows = csv_rows(r.out);
    REQUIRE(rows.size() == 37);
    CHECK(rows[0] == std::vector<std::string>{"n", "J", "a_inv_fm", "branch", "E_MeV", "epsilon_MeV", "residual",
                                              "status"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].size() == rows[0].size());
        CHECK(rows[i][3] == "paper");
        CHECK(rows[i][7] == "ok");
    }
    CHECK(rows[1][0] == "0");
    CHECK(rows[1][1] == "0");
    CHECK(std::abs(std::stod(rows[1][4]) + 871.79) <= 0.01);
    CHECK(r.out.find('\r') == std::string::npos);
    CHECK(r.out.back() == '\n');

    auto const both = csv_rows(invoke({"energies", "--branch", "both", "--a", "0.005", "--a", "0.015"}).out);
    CHECK(both.size() == 1 + 2 * 2 * 36);

    auto const single = csv_rows(invoke({"energies", "--n-max", "0", "--j-max", "0"}).out);
    CHECK(single.size() == 2);

    auto const phys = invoke_json({"energies", "--branch", "physical", "--n-max", "0", "--j-max", "0"});
    REQUIRE(phys["rows"].size() == 1);
    CHECK(std::abs(phys["rows"][0]["E_MeV"].get<double>() - 872.47) <= 0.01);

    auto const with_oracle = invoke_json({"energies", "--n-max", "1", "--j-max", "1", "--exact-oracle"});
    REQUIRE(with_oracle["rows"].size() == 4);
    for (auto const& row : with_oracle["rows"]) {
        CHECK(row["E_exact_oracle_MeV"].is_number());
        CHECK(row["E_exact_oracle_MeV"].get<double>() > 0.0);
    }
}

TEST_CASE("json output round trips byte for byte and runs are deterministic")
{
    for (auto const& args : std::vector<std::vector<std::string>>{
             {"energies", "--format", "json", "--branch", "both"},
             {"table2", "--format", "json"},
             {"wavefunction", "--format", "json", "--n", "1", "--j", "1", "--samples", "20"},
             {"approx", "--format", "json", "--samples", "20"},
             {"verify", "--n", "1", "--j", "2"},
         }) {
        CAPTURE(args[0]);
        auto const first = invoke(args);
        auto const second = invoke(args);
        REQUIRE(first.code == 0);
        CHECK(first.out == second.out);
        auto const ordered = nlohmann::ordered_json::parse(first.out);
        CHECK(ordered.dump(2) + "\n" == first.out);
    }
}

TEST_CASE("csv quoting")
{
    Table t;
    t.meta.emplace_back("note", std::string("a, b"));
    t.columns = {"x", "y"};
    t.rows.push_back({std::string("say \"hi\", ok"), Cell{}});
    t.rows.push_back({1.5, 42LL});
    std::ostringstream os;
    write_csv(t, os);
    CHECK(os.str() == "# note: a, b\nx,y\n\"say \"\"hi\"\", ok\",\n1.5,42\n");

    std::ostringstream js;
    t.rows.push_back({std::nan(""), true});
    write_json(t, js);
    auto const doc = json::parse(js.str());
    CHECK(doc["rows"][1]["y"] == 42);
    CHECK(doc["rows"][2]["x"].is_null());
    CHECK(doc["rows"][2]["y"] == true);
}

TEST_CASE("table2 comparison")
{
    auto const r = invoke({"table2"});
    CHECK(r.code == 0);
    auto const rows = csv_rows(r.out);
    REQUIRE(rows.size() == 73);
    int suspects = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto const& row = rows[i];
        if (row[6].rfind("suspect_typo", 0) == 0) {
            ++suspects;
            CHECK(row[0] == "5");
            CHECK(row[1] == "5");
            CHECK(row[2] == "0.015");
        } else {
            CHECK(row[6] == "ok");
            CHECK(std::stod(row[5]) <= 1e-3);
        }
    }
    CHECK(suspects == 1);
    CHECK(r.out.find("# result: pass") != std::string::npos);

    auto const tight = invoke({"table2", "--tolerance", "1e-6"});
    CHECK(tight.code == 1);
    CHECK(tight.out.find("# result: fail") != std::string::npos);
    CHECK(tight.out.find(",exceeds") != std::string::npos);

    CHECK(csv_rows(invoke({"table2", "--a", "0.005"}).out).size() == 37);
    CHECK(invoke({"table2", "--a", "0.005,0.01,0.015"}).code == 2);
}

TEST_CASE("natural constants reproduce the MeV table")
{
    double const hc = dkp::kHbarC;
    auto text = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (double a_fm : {0.005, 0.015}) {
        auto const mev = invoke_json({"energies", "--a", text(a_fm)});
        auto const nat =
            invoke_json({"energies", "--hbar-c", "1", "--u0", text(67.54 / hc), "--a", text(a_fm * hc)});
        REQUIRE(mev["rows"].size() == nat["rows"].size());
        for (std::size_t i = 0; i < mev["rows"].size(); ++i) {
            auto const& x = mev["rows"][i]["E_MeV"];
            auto const& y = nat["rows"][i]["E_MeV"];
            REQUIRE(x.is_null() == y.is_null());
            if (!x.is_null()) {
                CHECK(std::abs(x.get<double>() - y.get<double>()) <= 1e-9 * std::abs(x.get<double>()));
            }
        }
    }
}

TEST_CASE("wavefunction samples")
{
    auto const doc = invoke_json({"wavefunction", "--n", "2", "--j", "0", "--r-max", "25", "--samples", "5000"});
    auto const& rows = doc["rows"];
    REQUIRE(rows.size() == 5000);
    CHECK(doc["meta"]["branch"] == "physical");
    CHECK(rows[0]["r_fm"].get<double>() == doctest::Approx(0.005));
    CHECK(rows[4999]["r_fm"].get<double>() == 25.0);

    // Trapezoid from r = 0, where every component vanishes; F carries the unit norm.
    double norm = 0.0;
    double prev_r = 0.0;
    double prev_d = 0.0;
    int sign_changes = 0;
    double prev_F = 0.0;
    for (auto const& row : rows) {
        double const r = row["r_fm"];
        double const F = row["F"];
        CHECK(std::isfinite(row["G"].get<double>()));
        CHECK(std::isfinite(row["H_plus"].get<double>()));
        CHECK(row["H_minus"].get<double>() == 0.0);
        double const d = F * F;
        norm += 0.5 * (d + prev_d) * (r - prev_r);
        if (prev_F != 0.0 && std::signbit(F) != std::signbit(prev_F)) {
            ++sign_changes;
        }
        prev_r = r;
        prev_d = d;
        prev_F = F;
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(sign_changes == 2);

    auto const sub = csv_rows(invoke({"wavefunction", "--components", "G,F", "--samples", "4"}).out);
    REQUIRE(sub.size() == 5);
    CHECK(sub[0] == std::vector<std::string>{"r_fm", "G", "F"});

    CHECK(invoke({"wavefunction", "--components", "X"}).code == 2);
    CHECK(invoke({"wavefunction", "--branch", "both"}).code == 2);
    CHECK(invoke({"wavefunction", "--a", "0.005,0.015"}).code == 2);
    CHECK(invoke({"wavefunction", "--u0", "0"}).code == 1);
    CHECK(invoke({"wavefunction", "--branch", "physical", "--n", "5", "--j", "5", "--a", "0.015"}).code == 1);
}

TEST_CASE("verify report")
{
    auto const r = invoke({"verify", "--n", "0", "--j", "0"});
    REQUIRE(r.code == 0);
    auto const doc = json::parse(r.out);
    CHECK(doc["meta"]["result"] == "pass");
    bool saw_delta = false;
    for (auto const& row : doc["rows"]) {
        if (row["quantity"] == "rel_dE_physical_vs_oracle") {
            saw_delta = true;
            CHECK(row["value"].get<double>() <= 1e-6);
            CHECK(row["status"] == "pass");
        }
        if (row["quantity"] == "paper_level_in_oracle_spectrum") {
            CHECK(row["value"] == false);
        }
    }
    CHECK(saw_delta);

    auto const csv = invoke({"verify", "--format", "csv", "--a", "0.005,0.015", "--n", "1", "--j", "1"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("# command: verify", 0) == 0);

    auto const free = invoke({"verify", "--u0", "0"});
    CHECK(free.code == 0);
    CHECK(json::parse(free.out)["meta"]["result"] == "no bound states");

    auto const absent = invoke({"verify", "--n", "5", "--j", "5", "--a", "0.015"});
    CHECK(absent.code == 1);
}

TEST_CASE("approx deviation")
{
    auto const doc = invoke_json({"approx"});
    auto const& rows = doc["rows"];
    REQUIRE(rows.size() == 200);
    double prev = 0.0;
    for (auto const& row : rows) {
        double const dev = row["relative_deviation"];
        CHECK(dev > prev);
        double const ratio = row["V_approx_MeV"].get<double>() / row["V_yukawa_MeV"].get<double>();
        CHECK(std::abs((1.0 - ratio) - dev) <= 1e-12);
        prev = dev;
    }
    // a r = 0.1 at the last sample.
    double const x = 0.1;
    CHECK(rows[199]["r_fm"].get<double>() == 20.0);
    CHECK(rows[199]["relative_deviation"].get<double>() == doctest::Approx(1.0 - x / std::sinh(x)).epsilon(1e-10));
    CHECK(rows[199]["relative_deviation"].get<double>() == doctest::Approx(x * x / 6.0).epsilon(0.01));

    // Small radii use a series, which must stay positive and O(x^2).
    auto const small = invoke_json({"approx", "--r-max", "1e-3", "--samples", "2"});
    double const tiny = small["rows"][1]["relative_deviation"];
    CHECK(tiny == doctest::Approx(std::pow(0.005e-3, 2) / 6.0).epsilon(1e-9));

    CHECK(invoke({"approx", "--samples", "1"}).code == 2);
    CHECK(invoke({"approx", "--r-max", "0"}).code == 2);
    CHECK(invoke({"approx", "--r-max", "-3"}).code == 2);
}

TEST_CASE("usage errors exit with 2")
{
    std::vector<std::vector<std::string>> const bad = {
        {},
        {"nonsense"},
        {"energies", "--mass-mev", "-1"},
        {"energies", "--mass-mev", "abc"},
        {"energies", "--u0", "-5"},
        {"energies", "--a", "0"},
        {"energies", "--a", "-0.01"},
        {"energies", "--hbar-c", "0"},
        {"energies", "--n-max", "-1"},
        {"energies", "--j-max", "2.5"},
        {"energies", "--branch", "sideways"},
        {"energies", "--format", "xml"},
        {"table2", "--tolerance", "0"},
        {"table2", "--tolerance", "-1e-3"},
        {"energies", "--config", "/nonexistent/dkp.cfg"},
        {"energies", "--output", "/nonexistent/dir/out.csv"},
        {"energies", "--no-such-flag"},
    };
    for (auto const& args : bad) {
        std::string joined;
        for (auto const& a : args) {
            joined += a + " ";
        }
        CAPTURE(joined);
        auto const r = invoke(args);
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
    }

    TempFile const cfg("dkp_cli_test_c.cfg", "mass_mev = 938\nscreening = 3\n");
    auto const r = invoke({"energies", "--config", cfg.path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find(":2") != std::string::npos);

    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("output file")
{
    auto const path = std::filesystem::temp_directory_path() / "dkp_cli_test_out.csv";
    auto const r = invoke({"energies", "--output", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == invoke({"energies"}).out);
    std::filesystem::remove(path);
}
