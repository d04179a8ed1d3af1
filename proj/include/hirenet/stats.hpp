#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hirenet/adoption.hpp"
#include "hirenet/epidemic.hpp"
#include "hirenet/prestige.hpp"

namespace hirenet {

struct XY {
    double x;
    double y;
};

struct PermutationResult {
    double f_obs = 0.0;
    std::vector<double> null_samples; // one f_exp per permutation
    double f_exp_mean = 0.0;
    double f_exp_std = 0.0;
    double p_value = 1.0;
    std::size_t n_perms = 0;
};

// One-sided, add-one corrected: (1 + #{samples >= f_obs}) / (1 + n).
double empirical_pvalue(double f_obs, std::span<const double> null_samples);

// Null model: publication years and counts stay fixed per faculty, titles
// are reassigned by a uniform permutation of the global title pool. Each
// permutation reclassifies every department and records its hiring
// fraction (0 when the permuted corpus produces no adoptions).
PermutationResult permutation_null(std::span<const FacultyCareer> careers, const TopicSpec& topic,
                                   std::size_t n_perms, std::uint64_t seed, int grace = 2,
                                   unsigned workers = 1);

struct LogisticFit {
    double y_max = 0.0;
    double k = 0.0;
    double pi_mid = 0.0;
    double residual = 0.0; // RMSE
};

// Least squares for y = y_max / (1 + exp(-k (x - pi_mid))) by damped
// Gauss-Newton from a deterministic initializer. Throws numeric_error on
// degenerate (constant-y) data.
LogisticFit fit_logistic(std::span<const XY> points);

// Robust locally weighted linear regression (tricube kernel over the
// nearest ceil(frac*n) neighbours, two bisquare reweighting passes).
// Returns the smoothed value for each input point, in input order.
std::vector<double> lowess(std::span<const XY> points, double frac);

struct DecileCurve {
    int decile_index = 0; // 0 = most prestigious tenth
    double d = 0.0;       // decile variable: 0.1 for the top tenth, ... 1.0
    std::vector<XY> points; // (p, mean Y/N) sorted by p
};

// Averages a sweep's mean epidemic sizes across each prestige decile. The
// sweep must cover every node at every p with a single q value.
std::vector<DecileCurve> decile_curves(const SweepResult& sweep, const PrestigeScores& scores);

// p* = -p / log(1 - d); requires 0 < d < 1 and p >= 0.
double effective_p(double p, double d);

struct CollapseFit {
    double r = 0.0;
    double k = 0.0;
    double residual = 0.0; // RMSE
};

// Least squares for y = 1 / (1 + exp(r (k + log p*))) over (p*, y) points.
CollapseFit fit_collapse(std::span<const XY> points);

double collapse_predict(const CollapseFit& fit, double p_star);

// RMS over a shared evaluation grid of the between-curve standard
// deviation, for the raw and the rescaled families. Curves are linearly
// interpolated onto the overlap of their x ranges.
std::pair<double, double> collapse_dispersion(const std::vector<std::vector<XY>>& raw,
                                              const std::vector<std::vector<XY>>& rescaled);

} // namespace hirenet
