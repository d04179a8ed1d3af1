#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hirenet/adoption.hpp"
#include "hirenet/epidemic.hpp"
#include "hirenet/graph.hpp"
#include "hirenet/prestige.hpp"
#include "hirenet/stats.hpp"

namespace hirenet::io {

// Floats are emitted at 6 significant digits everywhere.
std::string format_g6(double v);

// Round to the emitted precision; used before placing numbers in JSON.
double round_g6(double v);

std::string csv_escape(const std::string& field);

// FNV-1a 64 over the stream bytes, as "fnv1a64:<hex>".
std::string digest_stream(std::istream& in);

void write_prestige_csv(std::ostream& out, const HiringNetwork& net, const PrestigeScores& scores,
                        long long best_violations);

// Reads `id,label,mean_rank,...` back into mean ranks indexed by id.
// Ids must be dense. Extra columns are ignored.
PrestigeScores read_prestige_csv(std::istream& in, const std::string& filename = "<prestige>");

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
SweepResult read_sweep_csv(std::istream& in, const std::string& filename = "<sweep>");

void write_decile_matrix_csv(std::ostream& out, const DecileMatrix& matrix);

void write_classifications_csv(std::ostream& out, std::span<const DeptClassification> rows);
void write_arrows_csv(std::ostream& out, std::span<const TransmissionArrow> rows);

void write_decile_curves_csv(std::ostream& out, std::span<const DecileCurve> curves);

// "a:b:step" inclusive grid, a comma list, or a single value.
std::vector<double> parse_grid(const std::string& spec);

} // namespace hirenet::io
