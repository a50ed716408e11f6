#include "polyorb/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace polyorb::io {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::vector<std::string> non_empty_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream stream(text);
    while (std::getline(stream, line)) {
        line = trim(line);
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

double parse_cell(const std::string& cell, std::size_t row, const char* column) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw std::invalid_argument("csv row " + std::to_string(row) +
                                    ": cannot parse column '" + column + "' from '" + cell + "'");
    }
    return value;
}

json vec_to_json(const Vector3& v) { return json{v.x, v.y, v.z}; }

Vector3 vec_from_json(const json& j) {
    return Vector3{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

[[noreturn]] void rethrow_as_invalid(const char* what, const std::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
}

} // namespace

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string orbit_to_json(const PolygonOrbit& orbit) {
    json doc;
    doc["termination"] = to_string(orbit.termination);
    json vertices = json::array();
    for (std::size_t k = 0; k < orbit.vertices.size(); ++k) {
        const Vector3& p = orbit.vertices[k];
        vertices.push_back(json{{"u", orbit.params[k]}, {"x", p.x}, {"y", p.y}, {"z", p.z}});
    }
    doc["vertices"] = std::move(vertices);
    doc["chords"] = orbit.chords;
    doc["deflections"] = orbit.deflections;
    doc["deflection_angles"] = orbit.deflection_angles;
    doc["areas2"] = orbit.areas2;
    return doc.dump(2) + "\n";
}

PolygonOrbit orbit_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        PolygonOrbit orbit;
        orbit.termination = termination_from_string(doc.at("termination").get<std::string>());
        for (const json& entry : doc.at("vertices")) {
            orbit.params.push_back(entry.at("u").get<double>());
            orbit.vertices.push_back(Vector3{entry.at("x").get<double>(),
                                             entry.at("y").get<double>(),
                                             entry.at("z").get<double>()});
        }
        orbit.chords = doc.at("chords").get<std::vector<double>>();
        orbit.deflections = doc.at("deflections").get<std::vector<double>>();
        orbit.deflection_angles = doc.at("deflection_angles").get<std::vector<double>>();
        orbit.areas2 = doc.at("areas2").get<std::vector<double>>();
        for (std::size_t k = 0; k + 2 < orbit.vertices.size(); ++k) {
            orbit.deflection_vectors.push_back(orbit.vertices[k + 2] + orbit.vertices[k] -
                                               2.0 * orbit.vertices[k + 1]);
        }
        return orbit;
    } catch (const json::exception& e) {
        rethrow_as_invalid("polygon orbit json", e);
    }
}

std::string orbit_to_csv(const PolygonOrbit& orbit) {
    std::string out = "j,u,x,y,z,chord,deflection,theta,area2\n";
    const std::size_t n = orbit.vertices.size();
    for (std::size_t j = 0; j < n; ++j) {
        const Vector3& p = orbit.vertices[j];
        out += std::to_string(j) + ',' + format_double(orbit.params[j]) + ',' +
               format_double(p.x) + ',' + format_double(p.y) + ',' + format_double(p.z) + ',';
        if (j < orbit.chords.size()) out += format_double(orbit.chords[j]);
        out += ',';
        if (j >= 1 && j - 1 < orbit.deflections.size()) out += format_double(orbit.deflections[j - 1]);
        out += ',';
        if (j >= 1 && j - 1 < orbit.deflection_angles.size()) {
            out += format_double(orbit.deflection_angles[j - 1]);
        }
        out += ',';
        if (j < orbit.areas2.size()) out += format_double(orbit.areas2[j]);
        out += '\n';
    }
    return out;
}

PolygonOrbit orbit_from_csv(const std::string& text) {
    const std::vector<std::string> lines = non_empty_lines(text);
    if (lines.empty() || split_csv_line(lines[0]) !=
                             std::vector<std::string>{"j", "u", "x", "y", "z", "chord",
                                                      "deflection", "theta", "area2"}) {
        throw std::invalid_argument("polygon orbit csv: missing or malformed header");
    }
    PolygonOrbit orbit;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const std::vector<std::string> cells = split_csv_line(lines[row]);
        if (cells.size() != 9) {
            throw std::invalid_argument("polygon orbit csv row " + std::to_string(row) +
                                        ": expected 9 columns, found " + std::to_string(cells.size()));
        }
        orbit.params.push_back(parse_cell(cells[1], row, "u"));
        orbit.vertices.push_back(Vector3{parse_cell(cells[2], row, "x"),
                                         parse_cell(cells[3], row, "y"),
                                         parse_cell(cells[4], row, "z")});
        if (!cells[5].empty()) orbit.chords.push_back(parse_cell(cells[5], row, "chord"));
        if (!cells[6].empty()) orbit.deflections.push_back(parse_cell(cells[6], row, "deflection"));
        if (!cells[7].empty()) orbit.deflection_angles.push_back(parse_cell(cells[7], row, "theta"));
        if (!cells[8].empty()) orbit.areas2.push_back(parse_cell(cells[8], row, "area2"));
    }
    for (std::size_t k = 0; k + 2 < orbit.vertices.size(); ++k) {
        orbit.deflection_vectors.push_back(orbit.vertices[k + 2] + orbit.vertices[k] -
                                           2.0 * orbit.vertices[k + 1]);
    }
    return orbit;
}

std::string trajectory_to_json(const ImpulseTrajectory& trajectory) {
    json doc;
    doc["center"] = vec_to_json(trajectory.center);
    doc["law"] = json{{"kind", to_string(trajectory.law.kind)},
                      {"coeff", trajectory.law.coeff},
                      {"exponent", trajectory.law.exponent}};
    doc["n_steps"] = trajectory.n_steps;
    doc["dt"] = trajectory.dt;
    doc["total_time"] = trajectory.total_time;
    doc["stride"] = trajectory.stride;
    doc["diagnostics"] = json{{"max_rel_momentum_drift", trajectory.max_rel_momentum_drift},
                              {"max_rel_area_spread", trajectory.max_rel_area_spread},
                              {"max_out_of_plane", trajectory.max_out_of_plane},
                              {"energy_initial", trajectory.energy_initial},
                              {"energy_final", trajectory.energy_final},
                              {"max_rel_energy_drift", trajectory.max_rel_energy_drift}};
    json states = json::array();
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        const State& s = trajectory.states[k];
        const Vector3& l = trajectory.angular_momenta[k];
        json entry{{"j", trajectory.step_index[k]}, {"t", trajectory.time_of(k)},
                   {"x", s.r.x},  {"y", s.r.y},  {"z", s.r.z},
                   {"vx", s.v.x}, {"vy", s.v.y}, {"vz", s.v.z},
                   {"Lx", l.x},   {"Ly", l.y},   {"Lz", l.z}};
        if (k < trajectory.swept_areas2.size()) entry["area2_step"] = trajectory.swept_areas2[k];
        states.push_back(std::move(entry));
    }
    doc["states"] = std::move(states);
    return doc.dump(2) + "\n";
}

ImpulseTrajectory trajectory_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        ImpulseTrajectory trajectory;
        trajectory.center = vec_from_json(doc.at("center"));
        const json& law = doc.at("law");
        const std::string kind = law.at("kind").get<std::string>();
        const double coeff = law.at("coeff").get<double>();
        if (kind == "linear") {
            trajectory.law = ForceLaw::linear(coeff);
        } else if (kind == "inverse-square") {
            trajectory.law = ForceLaw::inverse_square(coeff);
        } else if (kind == "power") {
            trajectory.law = ForceLaw::power(coeff, law.at("exponent").get<double>());
        } else {
            throw std::invalid_argument("unknown force law kind '" + kind + "'");
        }
        trajectory.n_steps = doc.at("n_steps").get<std::size_t>();
        trajectory.dt = doc.at("dt").get<double>();
        trajectory.total_time = doc.at("total_time").get<double>();
        trajectory.stride = doc.at("stride").get<std::size_t>();
        const json& diag = doc.at("diagnostics");
        trajectory.max_rel_momentum_drift = diag.at("max_rel_momentum_drift").get<double>();
        trajectory.max_rel_area_spread = diag.at("max_rel_area_spread").get<double>();
        trajectory.max_out_of_plane = diag.at("max_out_of_plane").get<double>();
        trajectory.energy_initial = diag.at("energy_initial").get<double>();
        trajectory.energy_final = diag.at("energy_final").get<double>();
        trajectory.max_rel_energy_drift = diag.at("max_rel_energy_drift").get<double>();
        for (const json& entry : doc.at("states")) {
            trajectory.step_index.push_back(entry.at("j").get<std::size_t>());
            trajectory.states.push_back(State{
                Vector3{entry.at("x").get<double>(), entry.at("y").get<double>(),
                        entry.at("z").get<double>()},
                Vector3{entry.at("vx").get<double>(), entry.at("vy").get<double>(),
                        entry.at("vz").get<double>()}});
            trajectory.angular_momenta.push_back(Vector3{entry.at("Lx").get<double>(),
                                                         entry.at("Ly").get<double>(),
                                                         entry.at("Lz").get<double>()});
            if (entry.contains("area2_step")) {
                trajectory.swept_areas2.push_back(entry.at("area2_step").get<double>());
            }
        }
        return trajectory;
    } catch (const json::exception& e) {
        rethrow_as_invalid("trajectory json", e);
    }
}

std::string trajectory_to_csv(const ImpulseTrajectory& trajectory) {
    std::string out = "j,t,x,y,z,vx,vy,vz,Lx,Ly,Lz,area2_step\n";
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        const State& s = trajectory.states[k];
        const Vector3& l = trajectory.angular_momenta[k];
        out += std::to_string(trajectory.step_index[k]) + ',' +
               format_double(trajectory.time_of(k)) + ',' + format_double(s.r.x) + ',' +
               format_double(s.r.y) + ',' + format_double(s.r.z) + ',' + format_double(s.v.x) +
               ',' + format_double(s.v.y) + ',' + format_double(s.v.z) + ',' +
               format_double(l.x) + ',' + format_double(l.y) + ',' + format_double(l.z) + ',';
        if (k < trajectory.swept_areas2.size()) out += format_double(trajectory.swept_areas2[k]);
        out += '\n';
    }
    return out;
}

ImpulseTrajectory trajectory_from_csv(const std::string& text) {
    const std::vector<std::string> lines = non_empty_lines(text);
    if (lines.empty() || split_csv_line(lines[0]) !=
                             std::vector<std::string>{"j", "t", "x", "y", "z", "vx", "vy", "vz",
                                                      "Lx", "Ly", "Lz", "area2_step"}) {
        throw std::invalid_argument("trajectory csv: missing or malformed header");
    }
    ImpulseTrajectory trajectory;
    trajectory.law = ForceLaw::power(0.0, 0.0);
    double last_time = 0.0;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const std::vector<std::string> cells = split_csv_line(lines[row]);
        if (cells.size() != 12) {
            throw std::invalid_argument("trajectory csv row " + std::to_string(row) +
                                        ": expected 12 columns, found " +
                                        std::to_string(cells.size()));
        }
        trajectory.step_index.push_back(
            static_cast<std::size_t>(parse_cell(cells[0], row, "j")));
        last_time = parse_cell(cells[1], row, "t");
        trajectory.states.push_back(State{Vector3{parse_cell(cells[2], row, "x"),
                                                  parse_cell(cells[3], row, "y"),
                                                  parse_cell(cells[4], row, "z")},
                                          Vector3{parse_cell(cells[5], row, "vx"),
                                                  parse_cell(cells[6], row, "vy"),
                                                  parse_cell(cells[7], row, "vz")}});
        trajectory.angular_momenta.push_back(Vector3{parse_cell(cells[8], row, "Lx"),
                                                     parse_cell(cells[9], row, "Ly"),
                                                     parse_cell(cells[10], row, "Lz")});
        if (!cells[11].empty()) {
            trajectory.swept_areas2.push_back(parse_cell(cells[11], row, "area2_step"));
        }
    }
    for (std::size_t k = 0; k < trajectory.step_index.size(); ++k) {
        if (trajectory.step_index[k] > 0) {
            const std::size_t row = k;
            const double t = parse_cell(split_csv_line(lines[row + 1])[1], row + 1, "t");
            trajectory.dt = t / static_cast<double>(trajectory.step_index[k]);
            break;
        }
    }
    trajectory.total_time = last_time;
    trajectory.n_steps = trajectory.step_index.empty() ? 0 : trajectory.step_index.back();
    trajectory.stride = trajectory.step_index.size() > 1
                            ? trajectory.step_index[1] - trajectory.step_index[0]
                            : 1;
    return trajectory;
}

std::string report_to_json(const ConvergenceReport& report) {
    json doc;
    doc["study"] = report.study;
    doc["n"] = report.n_values;
    if (report.study == "ratio") {
        doc["ratio"] = report.metric;
        doc["extrapolated"] = report.extrapolated_limit;
        if (report.fit_valid) {
            doc["fit_order"] = -report.log_log_slope;
            doc["residual"] = report.residual;
        } else {
            doc["fit_order"] = nullptr;
            doc["residual"] = nullptr;
        }
    } else {
        doc["metric"] = report.metric;
        doc["slope"] = report.log_log_slope;
        doc["slope_ci"] = report.slope_ci;
        doc["residual"] = report.residual;
        doc["extrapolated"] = report.extrapolated_limit;
        doc["fit_valid"] = report.fit_valid;
        doc["dropped"] = report.dropped;
    }
    return doc.dump(2) + "\n";
}

ConvergenceReport report_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        ConvergenceReport report;
        report.study = doc.at("study").get<std::string>();
        report.n_values = doc.at("n").get<std::vector<double>>();
        if (report.study == "ratio") {
            report.metric = doc.at("ratio").get<std::vector<double>>();
            report.extrapolated_limit = doc.at("extrapolated").get<double>();
            const json& order = doc.at("fit_order");
            report.fit_valid = !order.is_null();
            if (report.fit_valid) {
                report.log_log_slope = -order.get<double>();
                report.residual = doc.at("residual").get<double>();
            }
        } else {
            report.metric = doc.at("metric").get<std::vector<double>>();
            report.log_log_slope = doc.at("slope").get<double>();
            report.slope_ci = doc.at("slope_ci").get<double>();
            report.residual = doc.at("residual").get<double>();
            report.extrapolated_limit = doc.at("extrapolated").get<double>();
            report.fit_valid = doc.at("fit_valid").get<bool>();
            report.dropped = doc.at("dropped").get<std::size_t>();
        }
        return report;
    } catch (const json::exception& e) {
        rethrow_as_invalid("convergence report json", e);
    }
}

std::string report_to_csv(const ConvergenceReport& report) {
    std::string out = report.study == "ratio" ? "n,ratio\n" : "n,metric\n";
    for (std::size_t k = 0; k < report.n_values.size(); ++k) {
        out += format_double(report.n_values[k]) + ',' + format_double(report.metric[k]) + '\n';
    }
    return out;
}

std::string bound_rows_to_json(const std::vector<std::size_t>& n_values,
                               const std::vector<BoundCheck>& rows) {
    json entries = json::array();
    bool all_satisfied = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const BoundCheck& row = rows[k];
        all_satisfied = all_satisfied && row.satisfied;
        entries.push_back(json{{"n", n_values[k]},
                               {"lhs", row.lhs},
                               {"rhs", row.rhs},
                               {"margin", row.margin},
                               {"max_curvature", row.max_curvature},
                               {"signed_sum", row.signed_sum},
                               {"satisfied", row.satisfied},
                               {"sign_flag", row.sign_flag},
                               {"n_chords", row.n_chords}});
    }
    json doc;
    doc["study"] = "bound";
    doc["rows"] = std::move(entries);
    doc["all_satisfied"] = all_satisfied;
    return doc.dump(2) + "\n";
}

std::string bound_rows_to_csv(const std::vector<std::size_t>& n_values,
                              const std::vector<BoundCheck>& rows) {
    std::string out = "n,lhs,rhs,margin,max_curvature,satisfied,sign_flag\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const BoundCheck& row = rows[k];
        out += std::to_string(n_values[k]) + ',' + format_double(row.lhs) + ',' +
               format_double(row.rhs) + ',' + format_double(row.margin) + ',' +
               format_double(row.max_curvature) + ',' + (row.satisfied ? "1" : "0") + ',' +
               (row.sign_flag ? "1" : "0") + '\n';
    }
    return out;
}

PlanarCurve read_curve_csv(const std::string& text) {
    const std::vector<std::string> lines = non_empty_lines(text);
    if (lines.empty() || split_csv_line(lines[0]) != std::vector<std::string>{"u", "x", "y", "z"}) {
        throw std::invalid_argument("curve csv: first line must be the header 'u,x,y,z'");
    }
    std::vector<double> params;
    std::vector<Vector3> points;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const std::vector<std::string> cells = split_csv_line(lines[row]);
        if (cells.size() != 4) {
            throw std::invalid_argument("curve csv row " + std::to_string(row) +
                                        ": expected 4 columns, found " +
                                        std::to_string(cells.size()));
        }
        params.push_back(parse_cell(cells[0], row, "u"));
        points.push_back(Vector3{parse_cell(cells[1], row, "x"), parse_cell(cells[2], row, "y"),
                                 parse_cell(cells[3], row, "z")});
        if (params.size() > 1 && params[params.size() - 2] >= params.back()) {
            throw std::invalid_argument("curve csv row " + std::to_string(row) +
                                        ": u values must be strictly increasing");
        }
    }
    if (params.size() < 4) {
        throw std::invalid_argument("curve csv: at least 4 sample rows are required");
    }
    return PlanarCurve::sampled(params, points);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed while writing file: " + path);
}

} // namespace polyorb::io
