// csv_io.cpp

#include "sbnm/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sbnm/errors.hpp"
#include "sbnm/format.hpp"

namespace sbnm::cli {

namespace {

void write_meta(std::ostream& os, const Metadata& meta) {
    os << "# toolkit: sbnm " << toolkit_version << '\n';
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& cell, std::size_t row, const char* column) {
    const std::string s = trim(cell);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("row " + std::to_string(row) + ", column '" + column + "': not a number: '" + s + "'");
    if (!std::isfinite(v))
        throw IoError("row " + std::to_string(row) + ", column '" + column + "': non-finite value");
    return v;
}

} // namespace

void write_trajectory_csv(std::ostream& os, const measure::BlochTrajectory& traj) {
    write_meta(os, traj.meta);
    os << trajectory_header << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k)
        os << format_double(traj.t[k]) << ',' << format_double(traj.sx[k]) << ',' << format_double(traj.sy[k]) << ','
           << format_double(traj.sz[k]) << '\n';
}

void write_distance_csv(std::ostream& os, const measure::TraceDistanceSeries& s, const Metadata& meta) {
    write_meta(os, meta);
    os << distance_header << '\n';
    for (std::size_t k = 0; k < s.size(); ++k)
        os << format_double(s.t[k]) << ',' << format_double(s.d[k]) << ',' << format_double(s.sigma[k]) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, const Metadata& meta) {
    write_meta(os, meta);
    os << sweep_header << '\n';
    for (const auto& r : rows) {
        std::string status = r.status;
        for (char& c : status)
            if (c == ',' || c == '\n' || c == '\r') c = ';';
        os << format_double(r.alpha) << ',' << format_double(r.omega_c) << ',' << r.solver << ','
           << format_double(r.n_value) << ',' << r.n_intervals << ',' << format_double(r.horizon) << ','
           << (r.converged ? "true" : "false") << ',' << status << '\n';
    }
}

measure::BlochTrajectory read_trajectory_csv(std::istream& is) {
    measure::BlochTrajectory traj;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<double> t;
    static constexpr const char* columns[] = {"time", "sx", "sy", "sz"};

    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            if (line.rfind('#', 0) == 0) {
                const std::string body = trim(line.substr(1));
                const auto colon = body.find(':');
                if (colon != std::string::npos) {
                    const std::string key = trim(body.substr(0, colon));
                    if (key != "toolkit") traj.set_meta(key, trim(body.substr(colon + 1)));
                }
                continue;
            }
            const auto cols = split(line, ',');
            for (std::size_t c = 0; c < 4; ++c)
                if (c >= cols.size() || trim(cols[c]) != columns[c])
                    throw IoError("line " + std::to_string(line_no) + ": header must be '" + trajectory_header +
                                  "', column '" + columns[c] + "' missing or misplaced");
            if (cols.size() != 4)
                throw IoError("line " + std::to_string(line_no) + ": unexpected extra column '" + trim(cols[4]) + "'");
            have_header = true;
            continue;
        }
        if (trim(line).empty()) continue;
        const std::size_t row = t.size() + 1;
        const auto cells = split(line, ',');
        if (cells.size() != 4)
            throw IoError("row " + std::to_string(row) + " (line " + std::to_string(line_no) + "): expected 4 columns, got " +
                          std::to_string(cells.size()));
        t.push_back(parse_cell(cells[0], row, columns[0]));
        traj.sx.push_back(parse_cell(cells[1], row, columns[1]));
        traj.sy.push_back(parse_cell(cells[2], row, columns[2]));
        traj.sz.push_back(parse_cell(cells[3], row, columns[3]));
    }
    if (!have_header) throw IoError("missing header line '" + std::string(trajectory_header) + "'");
    if (t.size() < 2) throw IoError("trajectory needs at least two rows");

    double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (const auto m = traj.get_meta("dt")) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(m->data(), m->data() + m->size(), v);
        if (ec == std::errc() && ptr == m->data() + m->size() && v > 0.0) dt = v;
    }
    if (!(dt > 0.0)) throw IoError("column 'time': not increasing");
    if (std::abs(t.front()) > 1e-8 * dt) throw IoError("row 1, column 'time': grid must start at 0");
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double expect = static_cast<double>(k) * dt;
        if (std::abs(t[k] - expect) > 1e-8 * std::max(1.0, std::abs(expect)))
            throw IoError("row " + std::to_string(k + 1) + ", column 'time': grid not uniform");
    }
    traj.dt = dt;
    traj.t.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) traj.t[k] = static_cast<double>(k) * dt;
    return traj;
}

measure::BlochTrajectory read_trajectory_file(const std::string& path) {
    if (path == "-") return read_trajectory_csv(std::cin);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return read_trajectory_csv(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    if (path == "-" || path.empty()) {
        std::cout << content << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace sbnm::cli
