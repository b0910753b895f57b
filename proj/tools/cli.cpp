#include "rtm/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtm/cmc.hpp"
#include "rtm/proof.hpp"
#include "rtm/published_tables.hpp"
#include "rtm/round_taylor.hpp"

namespace rtm {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    return out;
}

Rational parse_flag_rational(const std::string& text, const char* flag)
{
    try {
        return Rational::parse(text);
    } catch (const std::exception& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

// Turns the JSON config of a subcommand into flag tokens placed before the
// command-line flags, so that later (command-line) values win.
std::vector<std::string> config_tokens(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config file '" + path + "': " + e.what());
    }
    if (!j.is_object())
        throw UsageError("config file must hold a JSON object");
    std::vector<std::string> tokens;
    auto scalar = [&](const std::string& key, const json& v) {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_number_integer() || v.is_number_unsigned())
            return v.dump();
        throw UsageError("config key '" + key + "' must be a string or an integer");
    };
    for (const auto& [key, v] : j.items()) {
        if (key == "config")
            throw UsageError("config files cannot nest");
        if (v.is_boolean()) {
            if (v.get<bool>())
                tokens.push_back("--" + key);
        } else if (v.is_array()) {
            for (const auto& e : v) {
                tokens.push_back("--" + key);
                tokens.push_back(scalar(key, e));
            }
        } else {
            tokens.push_back("--" + key);
            tokens.push_back(scalar(key, v));
        }
    }
    return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
    std::vector<std::string> out;
    std::vector<std::string> rest;
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size())
                throw UsageError("--config needs a file");
            path = args[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (!path)
        return rest;
    if (rest.empty() || rest.front().rfind("-", 0) == 0)
        throw UsageError("--config must follow a subcommand");
    out.push_back(rest.front());
    for (auto& t : config_tokens(*path))
        out.push_back(std::move(t));
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw UsageError("cannot write '" + path + "'");
    return f;
}

struct ProveFlags {
    std::string out = "certificate.json";
    std::optional<long> steps;
    std::optional<int> samples;
    std::optional<std::string> epsilon, resolution, a, t, u1;
    std::string constants = "published";
    unsigned jobs = 0;
    bool quiet = false;
};

RationalInterval parse_range(const std::string& text, const char* flag)
{
    const auto parts = split(text, ',');
    if (parts.size() != 2)
        throw UsageError(std::string(flag) + " expects 'lo,hi'");
    const Rational lo = parse_flag_rational(parts[0], flag), hi = parse_flag_rational(parts[1], flag);
    if (hi < lo)
        throw UsageError(std::string(flag) + " needs lo <= hi");
    return {lo, hi};
}

int cmd_prove(const ProveFlags& f, std::ostream& out)
{
    ProofConfig cfg;
    if (f.steps) {
        if (*f.steps < 1)
            throw UsageError("--steps must be positive");
        cfg.steps = *f.steps;
    }
    if (f.samples) {
        if (*f.samples < 2)
            throw UsageError("--samples must be at least 2");
        cfg.samples = *f.samples;
    }
    if (f.epsilon) {
        cfg.constants.epsilon = parse_flag_rational(*f.epsilon, "--epsilon");
        if (cfg.constants.epsilon.sign() < 0)
            throw UsageError("--epsilon must be nonnegative");
    }
    if (f.resolution) {
        cfg.resolution = parse_flag_rational(*f.resolution, "--R");
        if (cfg.resolution.sign() <= 0)
            throw UsageError("--R must be positive");
    }
    if (f.u1) {
        const auto axes = split(*f.u1, ';');
        if (axes.size() != 3)
            throw UsageError("--u1 expects 'b1,c1;b2,c2;b3,c3'");
        for (std::size_t i = 0; i < 3; ++i)
            cfg.constants.u1[i] = parse_range(axes[i], "--u1");
    }
    if (f.constants != "published" && f.constants != "derived")
        throw UsageError("--constants expects published or derived");
    cfg.derived_constants = f.constants == "derived";
    if (f.a)
        cfg.rect.a = parse_range(*f.a, "--a");
    if (f.t)
        cfg.rect.t = parse_range(*f.t, "--t");
    cfg.rect.validate();
    cfg.jobs = f.jobs;

    // Open the output before the long computation so a bad path fails fast.
    std::ofstream file = open_output(f.out);
    const ProofCertificate cert = run_full_proof(cfg);
    file << cert.to_json().dump(2) << '\n';
    if (!file)
        throw UsageError("failed writing '" + f.out + "'");
    if (!f.quiet)
        print_summary(out, cert);
    out << "certificate written to " << f.out << '\n';
    return cert.verdict ? 0 : 1;
}

struct IntegrateFlags {
    std::string field = "cmc-s4";
    std::optional<std::string> y0, theta0, h, out;
    long k = -1;
    int m = 1;
    std::string resolution = "1e-10";
    bool no_round = false;
    bool box_check = false;
};

int cmd_integrate(const IntegrateFlags& f, std::ostream& out)
{
    RTMConfig cfg;
    try {
        cfg.field = make_field(f.field);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (f.no_round && !cfg.field->exact_rational())
        throw UsageError(f.field + " is transcendental; --no-round is only allowed for exact rational fields");
    if (!f.h)
        throw UsageError("--h is required");
    if (f.k < 0)
        throw UsageError("--k is required and must be nonnegative");
    cfg.step = parse_flag_rational(*f.h, "--h");
    cfg.steps = f.k;
    cfg.order = f.m;
    if (!f.no_round) {
        const Rational r = parse_flag_rational(f.resolution, "--R");
        if (r.sign() <= 0)
            throw UsageError("--R must be positive (use --no-round for R = 0)");
        cfg.grid = GridSpec(r);
    }

    if (f.theta0 && f.y0)
        throw UsageError("give either --theta0 or --y0");
    if (f.theta0) {
        if (f.field != "cmc-s4")
            throw UsageError("--theta0 only applies to cmc-s4");
        cfg.initial = {InitialValue::parse("pi/2"), InitialValue::parse(*f.theta0), InitialValue::parse("pi")};
    } else if (f.y0) {
        for (const auto& part : split(*f.y0, ','))
            cfg.initial.push_back(InitialValue::parse(part));
    } else {
        throw UsageError("--y0 (or --theta0 for cmc-s4) is required");
    }

    RunChecks checks;
    checks.keep_points = f.out.has_value();
    if (f.box_check) {
        if (f.field != "cmc-s4")
            throw UsageError("--box-check only applies to cmc-s4");
        checks.box = CmcConstants::published().u1;
    }
    std::optional<std::ofstream> csv;
    if (f.out)
        csv = open_output(*f.out);

    const Trajectory tr = rtm_run(cfg, checks);
    if (csv)
        write_trajectory_csv(*csv, tr);

    out << "field " << tr.field << ", h = " << tr.step.str() << ", k = " << tr.steps
        << ", R = " << tr.resolution.str() << '\n';
    out << "final state (exact):\n";
    for (std::size_t i = 0; i < tr.final_point.size(); ++i)
        out << "  u" << i + 1 << " = " << tr.final_point[i].str() << '\n';
    out << "final state (decimal preview, truncated, not rigorous):\n";
    for (std::size_t i = 0; i < tr.final_point.size(); ++i)
        out << "  u" << i + 1 << " ~ " << tr.final_point[i].to_decimal(12) << '\n';
    for (std::size_t i = 0; i < tr.monotone.size(); ++i) {
        const auto& m = tr.monotone[i];
        out << "  u" << i + 1 << " monotone: "
            << (m.strictly_increasing ? "strictly increasing"
                                      : m.strictly_decreasing ? "strictly decreasing" : "no") << '\n';
    }
    if (tr.box_checked)
        out << "all iterates inside U1\n";
    if (f.out)
        out << "trajectory written to " << *f.out << '\n';
    return 0;
}

struct BoundsFlags {
    std::vector<std::string> boxes;
    std::optional<std::string> epsilon;
};

int cmd_bounds(const BoundsFlags& f, std::ostream& out)
{
    CmcConstants c = CmcConstants::published();
    for (const auto& spec : f.boxes) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw UsageError("--box expects 'u1=lo,hi', 'u2=lo,hi' or 'u3=lo,hi'");
        const std::string axis = spec.substr(0, eq);
        if (axis != "u1" && axis != "u2" && axis != "u3")
            throw UsageError("unknown axis '" + axis + "'");
        c.u1[static_cast<std::size_t>(axis[1] - '1')] = parse_range(spec.substr(eq + 1), "--box");
    }
    if (f.epsilon) {
        c.epsilon = parse_flag_rational(*f.epsilon, "--epsilon");
        if (c.epsilon.sign() < 0)
            throw UsageError("--epsilon must be nonnegative");
    }

    out << "U1 =";
    for (const auto& ax : c.u1.axes())
        out << " [" << ax.lo().str() << ", " << ax.hi().str() << "]";
    out << ", epsilon = " << c.epsilon.str() << '\n';

    bool all = true;
    std::vector<LemmaReport> reports;
    try {
        reports = verify_all_lemmas(c);
    } catch (const std::exception& e) {
        out << "FAIL  bounds could not be evaluated on this box: " << e.what() << '\n';
        return 1;
    }
    for (const auto& r : reports) {
        out << r.name << (r.passed() ? "  pass" : "  FAIL") << '\n';
        for (const auto& q : r.checks) {
            all = all && q.holds();
            out << "  " << (q.holds() ? "ok  " : "FAIL") << "  " << q.label << "\n        " << q.lhs.str() << ' '
                << to_string(q.relation) << ' ' << q.rhs.str() << "  slack " << q.slack().str()
                << "  (decimal preview " << q.slack().to_decimal(10) << ")\n";
        }
        for (const auto& n : r.notes)
            out << "  note: " << n << '\n';
    }
    out << (all ? "all bounds verified" : "some bounds failed") << '\n';
    return all ? 0 : 1;
}

struct CurveFlags {
    std::string in;
    std::optional<std::string> out;
};

int cmd_curve(const CurveFlags& f, std::ostream& out)
{
    std::ifstream in(f.in);
    if (!in)
        throw UsageError("cannot read '" + f.in + "'");
    std::optional<std::ofstream> file;
    if (f.out)
        file = open_output(*f.out);
    std::ostream& os = file ? *file : out;

    std::string line;
    std::vector<std::string> header;
    std::size_t r_col = 0, theta_col = 0, t_col = 0;
    bool wrote_header = false;
    long row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const auto cells = split(line, ',');
        if (header.empty()) {
            header = cells;
            auto col = [&](const char* name) {
                for (std::size_t i = 0; i < header.size(); ++i)
                    if (header[i] == name)
                        return i;
                throw UsageError(f.in + ": missing column '" + name + "'");
            };
            t_col = col("t");
            r_col = col("u1");
            theta_col = col("u2");
            continue;
        }
        ++row;
        if (cells.size() != header.size())
            throw UsageError(f.in + ": row " + std::to_string(row) + " has the wrong number of cells");
        if (!wrote_header) {
            os << "# non-rigorous: (sin r cos theta, sin r sin theta, cos r) in long double, 15 significant digits\n";
            os << "t,x,y,z\n";
            wrote_header = true;
        }
        const long double r = std::stold(Rational::parse(cells[r_col]).to_decimal(25));
        const long double th = std::stold(Rational::parse(cells[theta_col]).to_decimal(25));
        os << cells[t_col] << std::setprecision(15) << ',' << std::sin(r) * std::cos(th) << ','
           << std::sin(r) * std::sin(th) << ',' << std::cos(r) << '\n';
    }
    return 0;
}

int cmd_table(const std::string& which, std::ostream& out)
{
    if (which != "3966" && which != "3991" && which != "all")
        throw UsageError("--at expects 3966, 3991 or all");
    const auto a = sample_points(MirandaRectangle::published().a, 16);
    out << "t,j,a,r,theta,alpha\n";
    auto dump = [&](const EndpointTable& table, const char* t) {
        for (std::size_t j = 0; j < table.size(); ++j)
            out << t << ',' << j << ',' << a[j].str() << ',' << table[j][0] << ',' << table[j][1] << ','
                << table[j][2] << '\n';
    };
    if (which != "3991")
        dump(kTableAt3966, "1983/5000");
    if (which != "3966")
        dump(kTableAt3991, "3991/10000");
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Round Taylor Method integrator and CMC hypertorus existence proof", "rtm"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");
    app.add_option("--config", "JSON file whose keys mirror the subcommand flags");

    ProveFlags pf;
    auto* prove = app.add_subcommand("prove", "run the full existence proof and write a certificate");
    prove->add_option("--out", pf.out, "certificate path")->capture_default_str();
    prove->add_option("--steps,--k", pf.steps, "steps per run");
    prove->add_option("--samples", pf.samples, "sample count along the a edge");
    prove->add_option("--epsilon", pf.epsilon, "widening of U1 into U2");
    prove->add_option("--R", pf.resolution, "grid resolution");
    prove->add_option("--a", pf.a, "initial theta range lo,hi");
    prove->add_option("--t", pf.t, "time range lo,hi");
    prove->add_option("--u1", pf.u1, "box the iterates must stay in, b1,c1;b2,c2;b3,c3");
    prove->add_option("--constants", pf.constants, "published, or derived on U1")->capture_default_str();
    prove->add_option("--jobs", pf.jobs, "worker threads (0: RTM_JOBS or all cores)");
    prove->add_flag("--quiet", pf.quiet, "skip the summary table");

    IntegrateFlags inf;
    auto* integrate = app.add_subcommand("integrate", "run the Round Taylor Method on one initial value");
    integrate->add_option("--field", inf.field, "cmc-s4, logistic-demo or zero")->capture_default_str();
    integrate->add_option("--y0", inf.y0, "initial state, comma separated (rationals, pi, pi/2, ...)");
    integrate->add_option("--theta0", inf.theta0, "cmc-s4 shortcut for y0 = (pi/2, theta0, pi)");
    integrate->add_option("--h", inf.h, "step size");
    integrate->add_option("--k", inf.k, "number of steps");
    integrate->add_option("--m", inf.m, "Taylor order")->capture_default_str();
    integrate->add_option("--R", inf.resolution, "grid resolution")->capture_default_str();
    integrate->add_flag("--no-round", inf.no_round, "skip grid rounding (exact rational fields only)");
    integrate->add_flag("--box-check", inf.box_check, "fail if a cmc-s4 iterate leaves U1");
    integrate->add_option("--out", inf.out, "trajectory CSV");

    BoundsFlags bf;
    auto* bounds = app.add_subcommand("bounds", "verify the bound constants on U2");
    bounds->add_option("--box", bf.boxes, "replace an axis of U1, e.g. u2=0.4,0.9")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    bounds->add_option("--epsilon", bf.epsilon, "widening of U1 into U2");

    CurveFlags cf;
    auto* curve = app.add_subcommand("curve", "map a trajectory CSV to profile-curve points (not rigorous)");
    curve->add_option("--in", cf.in, "trajectory CSV from integrate --out")->required();
    curve->add_option("--out", cf.out, "output CSV (default stdout)");

    std::string at = "all";
    auto* table = app.add_subcommand("table", "print the tabulated endpoints");
    table->add_option("--at", at, "3966, 3991 or all")->capture_default_str();

    try {
        std::vector<std::string> argv = expand_config(args);
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*prove)
            return cmd_prove(pf, out);
        if (*integrate)
            return cmd_integrate(inf, out);
        if (*bounds)
            return cmd_bounds(bf, out);
        if (*curve)
            return cmd_curve(cf, out);
        if (*table)
            return cmd_table(at, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const BoxViolation& e) {
        err << "run left U1: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace rtm
