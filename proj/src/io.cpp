#include "hirenet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hirenet/errors.hpp"

namespace hirenet::io {

std::string format_g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double round_g6(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format_g6(v));
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string digest_stream(std::istream& in) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        const auto got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    char hex[24];
    std::snprintf(hex, sizeof hex, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return hex;
}

namespace {

// Minimal RFC-4180 row splitter (quotes, doubled quotes; no embedded newlines).
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::string& filename) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw load_error(filename, 1, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

double to_double(const std::string& field, const std::string& filename, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw load_error(filename, lineno, "malformed number '" + field + "'");
    }
}

long long to_int(const std::string& field, const std::string& filename, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw load_error(filename, lineno, "malformed integer '" + field + "'");
    }
}

} // namespace

void write_prestige_csv(std::ostream& out, const HiringNetwork& net, const PrestigeScores& scores,
                        long long best_violations) {
    out << "id,label,mean_rank,best_violations,samples_used\n";
    for (NodeId v = 0; v < net.node_count(); ++v) {
        out << v << ',' << csv_escape(net.label(v)) << ','
            << format_g6(scores.mean_rank[static_cast<std::size_t>(v)]) << ',' << best_violations
            << ',' << scores.samples_used << '\n';
    }
}

PrestigeScores read_prestige_csv(std::istream& in, const std::string& filename) {
    std::string line;
    if (!std::getline(in, line)) throw load_error(filename, 0, "empty prestige file");
    const auto header = split_csv(line);
    const auto id_col = column_index(header, "id", filename);
    const auto rank_col = column_index(header, "mean_rank", filename);
    const auto samples_col = std::find(header.begin(), header.end(), "samples_used");

    std::vector<std::pair<long long, double>> rows;
    std::size_t samples = 1;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() <= std::max(id_col, rank_col))
            throw load_error(filename, lineno, "short row");
        rows.emplace_back(to_int(fields[id_col], filename, lineno),
                          to_double(fields[rank_col], filename, lineno));
        if (samples_col != header.end()) {
            const auto idx = static_cast<std::size_t>(samples_col - header.begin());
            if (idx < fields.size())
                samples = static_cast<std::size_t>(to_int(fields[idx], filename, lineno));
        }
    }
    if (rows.empty()) throw load_error(filename, lineno, "prestige file has no rows");

    PrestigeScores scores;
    scores.samples_used = samples;
    scores.mean_rank.assign(rows.size(), -1.0);
    for (const auto& [id, rank] : rows) {
        if (id < 0 || static_cast<std::size_t>(id) >= rows.size())
            throw load_error(filename, 0, "ids must be dense 0..N-1; got " + std::to_string(id));
        if (scores.mean_rank[static_cast<std::size_t>(id)] >= 0.0)
            throw load_error(filename, 0, "duplicate id " + std::to_string(id));
        scores.mean_rank[static_cast<std::size_t>(id)] = rank;
    }
    return scores;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "node,p,q,mean_size_frac,mean_length,mean_length_norm,trials\n";
    for (const auto& row : sweep.rows) {
        out << row.node << ',' << format_g6(row.p) << ',' << format_g6(row.q) << ','
            << format_g6(row.mean_size_frac) << ',' << format_g6(row.mean_length) << ',';
        if (row.mean_length_norm) out << format_g6(*row.mean_length_norm);
        out << ',' << row.trials << '\n';
    }
}

SweepResult read_sweep_csv(std::istream& in, const std::string& filename) {
    std::string line;
    if (!std::getline(in, line)) throw load_error(filename, 0, "empty sweep file");
    const auto header = split_csv(line);
    const auto node_col = column_index(header, "node", filename);
    const auto p_col = column_index(header, "p", filename);
    const auto q_col = column_index(header, "q", filename);
    const auto size_col = column_index(header, "mean_size_frac", filename);
    const auto len_col = column_index(header, "mean_length", filename);
    const auto norm_col = column_index(header, "mean_length_norm", filename);
    const auto trials_col = column_index(header, "trials", filename);

    SweepResult sweep;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size()) throw load_error(filename, lineno, "short row");
        SweepRow row;
        row.node = static_cast<NodeId>(to_int(fields[node_col], filename, lineno));
        row.p = to_double(fields[p_col], filename, lineno);
        row.q = to_double(fields[q_col], filename, lineno);
        row.mean_size_frac = to_double(fields[size_col], filename, lineno);
        row.mean_length = to_double(fields[len_col], filename, lineno);
        if (!fields[norm_col].empty())
            row.mean_length_norm = to_double(fields[norm_col], filename, lineno);
        row.trials = static_cast<std::uint64_t>(to_int(fields[trials_col], filename, lineno));
        sweep.rows.push_back(row);
    }
    return sweep;
}

void write_decile_matrix_csv(std::ostream& out, const DecileMatrix& matrix) {
    for (const auto& row : matrix) {
        for (std::size_t b = 0; b < row.size(); ++b) {
            if (b) out << ',';
            out << format_g6(row[b]);
        }
        out << '\n';
    }
}

void write_classifications_csv(std::ostream& out, std::span<const DeptClassification> rows) {
    out << "dept_id,classification,adopter_faculty_id,adoption_year\n";
    for (const auto& row : rows) {
        out << row.dept << ',' << to_string(row.scenario) << ',';
        if (row.scenario != Scenario::Null)
            out << csv_escape(row.adopter_faculty_id) << ',' << row.adoption_year;
        else
            out << ',';
        out << '\n';
    }
}

void write_arrows_csv(std::ostream& out, std::span<const TransmissionArrow> rows) {
    out << "from,to,year,faculty_id\n";
    for (const auto& row : rows)
        out << row.from << ',' << row.to << ',' << row.year << ',' << csv_escape(row.faculty_id)
            << '\n';
}

void write_decile_curves_csv(std::ostream& out, std::span<const DecileCurve> curves) {
    out << "decile,p,mean_size_frac\n";
    for (const auto& curve : curves)
        for (const auto& pt : curve.points)
            out << format_g6(curve.d) << ',' << format_g6(pt.x) << ',' << format_g6(pt.y) << '\n';
}

std::vector<double> parse_grid(const std::string& spec) {
    if (spec.empty()) throw std::invalid_argument("empty grid spec");
    std::vector<double> values;
    if (spec.find(':') != std::string::npos) {
        double a = 0.0, b = 0.0, step = 0.0;
        char extra = 0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &extra) != 3)
            throw std::invalid_argument("grid spec must be a:b:step, got '" + spec + "'");
        if (a == b) return {a};
        if (step <= 0.0) throw std::invalid_argument("grid step must be positive");
        if (b < a) throw std::invalid_argument("grid bounds must satisfy a <= b");
        const double slack = step * 1e-9;
        for (double v = a; v <= b + slack; v += step) values.push_back(std::min(v, b));
        return values;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument("trailing");
            values.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed grid value '" + item + "'");
        }
    }
    if (values.empty()) throw std::invalid_argument("empty grid spec");
    return values;
}

} // namespace hirenet::io
