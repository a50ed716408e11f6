#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "polyorb/analysis.hpp"
#include "polyorb/curve.hpp"
#include "polyorb/errors.hpp"
#include "polyorb/integrator.hpp"
#include "polyorb/io.hpp"
#include "polyorb/measures.hpp"
#include "polyorb/parallel.hpp"
#include "polyorb/polygon.hpp"

namespace {

using nlohmann::json;
using namespace polyorb;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

bool is_set(double v) { return !std::isnan(v); }

double parse_number(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(value))
        throw std::invalid_argument(what + ": cannot parse number from '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

Vector3 parse_vec3(const std::string& text, const std::string& what) {
    auto parts = split(text, ',');
    if (parts.size() != 3)
        throw std::invalid_argument(what + ": expected three comma-separated numbers, got '" +
                                    text + "'");
    return Vector3{parse_number(parts[0], what), parse_number(parts[1], what),
                   parse_number(parts[2], what)};
}

std::vector<std::size_t> parse_sizes(const std::string& text, const std::string& what) {
    std::vector<std::size_t> sizes;
    for (const std::string& part : split(text, ',')) {
        double v = parse_number(part, what);
        if (v < 1.0 || v != std::floor(v))
            throw std::invalid_argument(what + ": grid sizes must be positive integers");
        sizes.push_back(static_cast<std::size_t>(v));
    }
    return sizes;
}

PlanarCurve parse_curve(const std::string& text) {
    auto pos = text.find(':');
    if (pos == std::string::npos)
        throw std::invalid_argument("curve argument '" + text +
                                    "' needs the form kind:args (e.g. circle:1)");
    std::string kind = text.substr(0, pos);
    std::string args = text.substr(pos + 1);
    if (kind == "circle") {
        return PlanarCurve::circle(parse_number(args, "circle radius"));
    }
    if (kind == "ellipse-center") {
        auto parts = split(args, ',');
        if (parts.size() != 2)
            throw std::invalid_argument("ellipse-center needs two semi-axes, e.g. "
                                        "ellipse-center:2,1");
        return PlanarCurve::ellipse_center(parse_number(parts[0], "semi-axis a"),
                                           parse_number(parts[1], "semi-axis b"));
    }
    if (kind == "ellipse-focus") {
        auto parts = split(args, ',');
        if (parts.size() != 2)
            throw std::invalid_argument("ellipse-focus needs semi-major axis and eccentricity, "
                                        "e.g. ellipse-focus:1,0.5");
        return PlanarCurve::ellipse_focus(parse_number(parts[0], "semi-major axis"),
                                          parse_number(parts[1], "eccentricity"));
    }
    if (kind == "custom") {
        return io::read_curve_csv(io::read_file(args));
    }
    throw std::invalid_argument("unknown curve kind '" + kind +
                                "' (use circle, ellipse-center, ellipse-focus, custom)");
}

ForceLaw parse_law(const std::string& text) {
    auto pos = text.find(':');
    if (pos == std::string::npos)
        throw std::invalid_argument("law argument '" + text +
                                    "' needs the form kind:args (e.g. inverse-square:1)");
    std::string kind = text.substr(0, pos);
    std::string args = text.substr(pos + 1);
    if (kind == "linear") return ForceLaw::linear(parse_number(args, "linear coefficient"));
    if (kind == "inverse-square")
        return ForceLaw::inverse_square(parse_number(args, "gravitational parameter"));
    if (kind == "power") {
        auto parts = split(args, ',');
        if (parts.size() != 2)
            throw std::invalid_argument("power law needs coefficient and exponent, e.g. "
                                        "power:1,-2");
        return ForceLaw::power(parse_number(parts[0], "power coefficient"),
                               parse_number(parts[1], "power exponent"));
    }
    throw std::invalid_argument("unknown force law '" + kind +
                                "' (use linear, inverse-square, power)");
}

unsigned thread_count() {
    const char* env = std::getenv("POLYORB_THREADS");
    if (!env || *env == '\0') return 1;
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0')
        throw std::invalid_argument("POLYORB_THREADS must be a non-negative integer");
    if (v == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }
    return static_cast<unsigned>(v);
}

void deliver(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        io::write_file(out_path, text);
    }
}

std::string plot_path(const std::string& out_path) {
    const std::string suffix = ".json";
    if (out_path.size() > suffix.size() &&
        out_path.compare(out_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return out_path.substr(0, out_path.size() - suffix.size()) + ".plot.csv";
    }
    return out_path + ".plot.csv";
}

/// Fills option targets from a JSON config file, but only for options that
/// were not given on the command line (flags win over the file).
class ConfigBinder {
public:
    explicit ConfigBinder(CLI::App* cmd) : cmd_(cmd) {}

    void text(const std::string& name, std::string& target) {
        entries_.emplace_back(name, [&target](const json& v) {
            target = v.is_string() ? v.get<std::string>() : v.dump();
        });
    }

    void number(const std::string& name, double& target) {
        entries_.emplace_back(name, [&target, name](const json& v) {
            if (v.is_number()) {
                target = v.get<double>();
            } else if (v.is_string()) {
                target = parse_number(v.get<std::string>(), name);
            } else {
                throw std::invalid_argument("config key '" + name + "' must be a number");
            }
        });
    }

    void size(const std::string& name, std::size_t& target) {
        entries_.emplace_back(name, [&target, name](const json& v) {
            if (!v.is_number_unsigned())
                throw std::invalid_argument("config key '" + name +
                                            "' must be a non-negative integer");
            target = v.get<std::size_t>();
        });
    }

    void flag(const std::string& name, bool& target) {
        entries_.emplace_back(name, [&target, name](const json& v) {
            if (!v.is_boolean())
                throw std::invalid_argument("config key '" + name + "' must be a boolean");
            target = v.get<bool>();
        });
    }

    void apply(const json& cfg) const {
        for (const auto& [name, setter] : entries_) {
            if (!cfg.contains(name)) continue;
            if (cmd_->get_option("--" + name)->count() > 0) continue;
            setter(cfg.at(name));
        }
    }

private:
    CLI::App* cmd_;
    std::vector<std::pair<std::string, std::function<void(const json&)>>> entries_;
};

json load_config(const std::string& path) {
    try {
        return json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        throw std::invalid_argument("config file " + path + ": " + e.what());
    }
}

void require_text(const std::string& value, const std::string& name) {
    if (value.empty())
        throw std::invalid_argument("missing required option --" + name);
}

void require_number(double value, const std::string& name) {
    if (!is_set(value))
        throw std::invalid_argument("missing required option --" + name);
}

struct ConstructOpts {
    std::string curve, center = "0,0,0", out, config;
    double u0 = kUnset, s1 = kUnset;
    std::size_t steps = 100000;
    bool plot = false;
};

struct IntegrateOpts {
    std::string law, center = "0,0,0", r0, v0, out, config;
    double time = kUnset, collision_radius = 1e-9;
    std::size_t steps = 0, store_limit = 1000000;
    bool plot = false;
};

struct ConvergeOpts {
    std::string study, curve, law, center = "0,0,0", r0, v0, n = "16,32,64,128", out, config;
    double u0 = kUnset, length = kUnset, u = kUnset, local_arc = 0.5, h0 = 0.01,
           margin = 1.5, time = kUnset;
    bool plot = false;
};

struct MeasureOpts {
    std::string curve, center = "0,0,0", out, config;
    double u = kUnset, h = 0.01;
};

int run_construct(const ConstructOpts& opt) {
    require_text(opt.curve, "curve");
    require_number(opt.s1, "s1");
    PlanarCurve curve = parse_curve(opt.curve);
    ForceCenter center{parse_vec3(opt.center, "center")};
    double u0 = is_set(opt.u0) ? opt.u0 : curve.domain().u_min;

    PolygonOrbit orbit = construct(curve, center, u0, opt.s1, opt.steps);
    deliver(opt.out, io::orbit_to_json(orbit));
    if (opt.plot) {
        require_text(opt.out, "out (needed by --emit-plot-data)");
        io::write_file(plot_path(opt.out), io::orbit_to_csv(orbit));
    }
    return orbit.termination == Termination::RadialTangency ? 2 : 0;
}

int run_integrate(const IntegrateOpts& opt) {
    require_text(opt.law, "law");
    require_text(opt.r0, "r0");
    require_text(opt.v0, "v0");
    require_number(opt.time, "time");
    if (opt.steps == 0) throw std::invalid_argument("missing required option --steps");

    ForceLaw law = parse_law(opt.law);
    Vector3 s = parse_vec3(opt.center, "center");
    IntegrateOptions options;
    options.store_limit = opt.store_limit;
    options.collision_radius = opt.collision_radius;
    ImpulseTrajectory trajectory =
        integrate(parse_vec3(opt.r0, "r0"), parse_vec3(opt.v0, "v0"), law, s, opt.time,
                  opt.steps, options);
    deliver(opt.out, io::trajectory_to_json(trajectory));
    if (opt.plot) {
        require_text(opt.out, "out (needed by --emit-plot-data)");
        io::write_file(plot_path(opt.out), io::trajectory_to_csv(trajectory));
    }
    return 0;
}

int run_converge(const ConvergeOpts& opt, unsigned threads) {
    std::vector<std::size_t> ns = parse_sizes(opt.n, "n");
    std::string text, plot_text;

    if (opt.study == "chords" || opt.study == "coverage" || opt.study == "bound") {
        require_text(opt.curve, "curve");
        require_number(opt.length, "length");
        PlanarCurve curve = parse_curve(opt.curve);
        ForceCenter center{parse_vec3(opt.center, "center")};
        double u0 = is_set(opt.u0) ? opt.u0 : curve.domain().u_min;
        if (opt.study == "chords") {
            ConvergenceReport report =
                chord_decay_study(curve, center, u0, opt.length, ns, threads);
            text = io::report_to_json(report);
            plot_text = io::report_to_csv(report);
        } else if (opt.study == "coverage") {
            ConvergenceReport report =
                coverage_convergence(curve, center, u0, opt.length, ns, threads);
            text = io::report_to_json(report);
            plot_text = io::report_to_csv(report);
        } else {
            if (ns.empty()) throw std::invalid_argument("bound study needs grid sizes");
            std::vector<BoundCheck> rows(ns.size());
            detail::parallel_for(ns.size(), threads, [&](std::size_t i) {
                double arc = opt.length / static_cast<double>(ns[i]);
                double s1 = curve.chord_for_arc(u0, arc);
                PolygonOrbit orbit = construct(curve, center, u0, s1, ns[i]);
                rows[i] = chord_growth_bound_check(orbit, curve, opt.margin);
            });
            text = io::bound_rows_to_json(ns, rows);
            plot_text = io::bound_rows_to_csv(ns, rows);
        }
    } else if (opt.study == "ratio") {
        require_text(opt.curve, "curve");
        require_number(opt.u, "u");
        PlanarCurve curve = parse_curve(opt.curve);
        ForceCenter center{parse_vec3(opt.center, "center")};
        ConvergenceReport report =
            ratio_convergence(curve, center, opt.u, ns, opt.local_arc, opt.h0, threads);
        text = io::report_to_json(report);
        plot_text = io::report_to_csv(report);
    } else if (opt.study == "order") {
        require_text(opt.law, "law");
        require_text(opt.r0, "r0");
        require_text(opt.v0, "v0");
        require_number(opt.time, "time");
        ConvergenceReport report = integrator_order_study(
            parse_law(opt.law), parse_vec3(opt.center, "center"), parse_vec3(opt.r0, "r0"),
            parse_vec3(opt.v0, "v0"), opt.time, ns, nullptr, threads);
        text = io::report_to_json(report);
        plot_text = io::report_to_csv(report);
    } else {
        throw std::invalid_argument("unknown study '" + opt.study +
                                    "' (use chords, coverage, ratio, order, bound)");
    }

    deliver(opt.out, text);
    if (opt.plot) {
        require_text(opt.out, "out (needed by --emit-plot-data)");
        io::write_file(plot_path(opt.out), plot_text);
    }
    return 0;
}

int run_measure(const MeasureOpts& opt) {
    require_text(opt.curve, "curve");
    require_number(opt.u, "u");
    PlanarCurve curve = parse_curve(opt.curve);
    ForceCenter center{parse_vec3(opt.center, "center")};
    json doc;
    doc["u"] = opt.u;
    doc["h"] = opt.h;
    doc["prop6"] = prop6_measure(curve, center, opt.u, opt.h);
    doc["prop6_extrapolated"] = prop6_extrapolated(curve, center, opt.u, opt.h);
    deliver(opt.out, doc.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polygonal orbit constructions for central forces"};
    app.require_subcommand(1);

    ConstructOpts c_opt;
    CLI::App* c_cmd = app.add_subcommand(
        "construct", "Inscribe an equal-area polygon in a plane curve");
    ConfigBinder c_bind(c_cmd);
    c_cmd->add_option("--curve", c_opt.curve,
                      "circle:R | ellipse-center:a,b | ellipse-focus:a,e | custom:file.csv");
    c_cmd->add_option("--center", c_opt.center, "force center x,y,z (default 0,0,0)");
    c_cmd->add_option("--u0", c_opt.u0, "starting parameter (default: domain start)");
    c_cmd->add_option("--s1", c_opt.s1, "first chord length");
    c_cmd->add_option("--steps", c_opt.steps, "maximum number of chords");
    c_cmd->add_option("--out", c_opt.out, "output JSON path (default: stdout)");
    c_cmd->add_option("--config", c_opt.config, "JSON config with option defaults");
    c_cmd->add_flag("--emit-plot-data", c_opt.plot, "also write <out>.plot.csv");
    c_bind.text("curve", c_opt.curve);
    c_bind.text("center", c_opt.center);
    c_bind.number("u0", c_opt.u0);
    c_bind.number("s1", c_opt.s1);
    c_bind.size("steps", c_opt.steps);
    c_bind.text("out", c_opt.out);
    c_bind.flag("emit-plot-data", c_opt.plot);

    IntegrateOpts i_opt;
    CLI::App* i_cmd = app.add_subcommand(
        "integrate", "Run the drift-kick impulse integrator");
    ConfigBinder i_bind(i_cmd);
    i_cmd->add_option("--law", i_opt.law, "linear:k | inverse-square:GM | power:A,p");
    i_cmd->add_option("--center", i_opt.center, "force center x,y,z (default 0,0,0)");
    i_cmd->add_option("--r0", i_opt.r0, "initial position x,y,z");
    i_cmd->add_option("--v0", i_opt.v0, "initial velocity x,y,z");
    i_cmd->add_option("--time", i_opt.time, "total integration time");
    i_cmd->add_option("--steps", i_opt.steps, "number of steps");
    i_cmd->add_option("--store-limit", i_opt.store_limit,
                      "maximum number of stored states (decimates beyond)");
    i_cmd->add_option("--collision-radius", i_opt.collision_radius,
                      "distance to the center treated as a collision");
    i_cmd->add_option("--out", i_opt.out, "output JSON path (default: stdout)");
    i_cmd->add_option("--config", i_opt.config, "JSON config with option defaults");
    i_cmd->add_flag("--emit-plot-data", i_opt.plot, "also write <out>.plot.csv");
    i_bind.text("law", i_opt.law);
    i_bind.text("center", i_opt.center);
    i_bind.text("r0", i_opt.r0);
    i_bind.text("v0", i_opt.v0);
    i_bind.number("time", i_opt.time);
    i_bind.size("steps", i_opt.steps);
    i_bind.size("store-limit", i_opt.store_limit);
    i_bind.number("collision-radius", i_opt.collision_radius);
    i_bind.text("out", i_opt.out);
    i_bind.flag("emit-plot-data", i_opt.plot);

    ConvergeOpts v_opt;
    CLI::App* v_cmd = app.add_subcommand(
        "converge", "Grid studies: chords, coverage, ratio, order, bound");
    ConfigBinder v_bind(v_cmd);
    v_cmd->add_option("--study", v_opt.study, "chords | coverage | ratio | order | bound");
    v_cmd->add_option("--n", v_opt.n, "comma-separated grid sizes (default 16,32,64,128)");
    v_cmd->add_option("--curve", v_opt.curve,
                      "circle:R | ellipse-center:a,b | ellipse-focus:a,e | custom:file.csv");
    v_cmd->add_option("--center", v_opt.center, "force center x,y,z (default 0,0,0)");
    v_cmd->add_option("--u0", v_opt.u0, "starting parameter (default: domain start)");
    v_cmd->add_option("--length", v_opt.length, "target arc length of the sweep");
    v_cmd->add_option("--u", v_opt.u, "curve parameter for the ratio study");
    v_cmd->add_option("--local-arc", v_opt.local_arc, "ratio study: first arc is local-arc/n");
    v_cmd->add_option("--h0", v_opt.h0, "ratio study: coarsest tangent-line offset");
    v_cmd->add_option("--margin", v_opt.margin, "bound study: safety factor on the bound");
    v_cmd->add_option("--law", v_opt.law, "order study: force law");
    v_cmd->add_option("--r0", v_opt.r0, "order study: initial position x,y,z");
    v_cmd->add_option("--v0", v_opt.v0, "order study: initial velocity x,y,z");
    v_cmd->add_option("--time", v_opt.time, "order study: total integration time");
    v_cmd->add_option("--out", v_opt.out, "output JSON path (default: stdout)");
    v_cmd->add_option("--config", v_opt.config, "JSON config with option defaults");
    v_cmd->add_flag("--emit-plot-data", v_opt.plot, "also write <out>.plot.csv");
    v_bind.text("study", v_opt.study);
    v_bind.text("n", v_opt.n);
    v_bind.text("curve", v_opt.curve);
    v_bind.text("center", v_opt.center);
    v_bind.number("u0", v_opt.u0);
    v_bind.number("length", v_opt.length);
    v_bind.number("u", v_opt.u);
    v_bind.number("local-arc", v_opt.local_arc);
    v_bind.number("h0", v_opt.h0);
    v_bind.number("margin", v_opt.margin);
    v_bind.text("law", v_opt.law);
    v_bind.text("r0", v_opt.r0);
    v_bind.text("v0", v_opt.v0);
    v_bind.number("time", v_opt.time);
    v_bind.text("out", v_opt.out);
    v_bind.flag("emit-plot-data", v_opt.plot);

    MeasureOpts m_opt;
    CLI::App* m_cmd = app.add_subcommand(
        "measure", "Tangent-line force measure at a curve point");
    ConfigBinder m_bind(m_cmd);
    m_cmd->add_option("--curve", m_opt.curve,
                      "circle:R | ellipse-center:a,b | ellipse-focus:a,e | custom:file.csv");
    m_cmd->add_option("--center", m_opt.center, "force center x,y,z (default 0,0,0)");
    m_cmd->add_option("--u", m_opt.u, "curve parameter of the measure point");
    m_cmd->add_option("--offset", m_opt.h, "arc offset h (also the extrapolation base)");
    m_cmd->add_option("--out", m_opt.out, "output JSON path (default: stdout)");
    m_cmd->add_option("--config", m_opt.config, "JSON config with option defaults");
    m_bind.text("curve", m_opt.curve);
    m_bind.text("center", m_opt.center);
    m_bind.number("u", m_opt.u);
    m_bind.number("offset", m_opt.h);
    m_bind.text("out", m_opt.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        unsigned threads = thread_count();
        if (c_cmd->parsed()) {
            if (!c_opt.config.empty()) c_bind.apply(load_config(c_opt.config));
            return run_construct(c_opt);
        }
        if (i_cmd->parsed()) {
            if (!i_opt.config.empty()) i_bind.apply(load_config(i_opt.config));
            return run_integrate(i_opt);
        }
        if (v_cmd->parsed()) {
            if (!v_opt.config.empty()) v_bind.apply(load_config(v_opt.config));
            return run_converge(v_opt, threads);
        }
        if (m_cmd->parsed()) {
            if (!m_opt.config.empty()) m_bind.apply(load_config(m_opt.config));
            return run_measure(m_opt);
        }
        throw std::invalid_argument("no subcommand given");
    } catch (const TangencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::logic_error& e) { // invalid_argument, domain_error, out_of_range
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
