#include "hirenet/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hirenet/errors.hpp"
#include "hirenet/parallel.hpp"
#include "hirenet/rng.hpp"

namespace hirenet {

double empirical_pvalue(double f_obs, std::span<const double> null_samples) {
    if (null_samples.empty()) throw std::invalid_argument("empirical p-value needs null samples");
    std::size_t at_least = 0;
    for (const double s : null_samples)
        if (s >= f_obs) ++at_least;
    return static_cast<double>(1 + at_least) / static_cast<double>(1 + null_samples.size());
}

namespace {

struct Slot {
    std::size_t faculty; // index into canonical faculty order
    int year;
};

double hiring_fraction_or_zero(std::span<const DeptClassification> classifications) {
    return observed_hiring_fraction(classifications).value_or(0.0);
}

} // namespace

PermutationResult permutation_null(std::span<const FacultyCareer> careers, const TopicSpec& topic,
                                   std::size_t n_perms, std::uint64_t seed, int grace,
                                   unsigned workers) {
    if (careers.empty()) throw std::invalid_argument("permutation test needs a nonempty corpus");
    if (n_perms < 1) throw std::invalid_argument("n_perms must be >= 1");

    // Canonical faculty order: by faculty_id, so the null stream does not
    // depend on file row order.
    std::vector<const FacultyCareer*> faculty(careers.size());
    for (std::size_t i = 0; i < careers.size(); ++i) faculty[i] = &careers[i];
    std::sort(faculty.begin(), faculty.end(),
              [](const FacultyCareer* a, const FacultyCareer* b) { return a->faculty_id < b->faculty_id; });

    // One slot per publication; the pool entry carries only whether the
    // title is on topic, so permutations shuffle booleans, not strings.
    const TopicMatcher matcher(topic);
    std::vector<Slot> slots;
    std::vector<std::uint8_t> on_topic;
    for (std::size_t f = 0; f < faculty.size(); ++f) {
        for (const auto& pub : faculty[f]->publications) {
            slots.push_back({f, pub.year});
            on_topic.push_back(matcher.matches(pub.title) ? 1 : 0);
        }
    }

    std::map<NodeId, std::vector<std::size_t>> departments; // dept -> faculty indices
    for (std::size_t f = 0; f < faculty.size(); ++f)
        departments[faculty[f]->job_institution].push_back(f);

    const auto classify_assignment = [&](std::span<const std::uint8_t> flags) {
        std::vector<std::vector<int>> years(faculty.size());
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (flags[s]) years[slots[s].faculty].push_back(slots[s].year);
        for (auto& ys : years) {
            std::sort(ys.begin(), ys.end());
            ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        }
        std::vector<DeptClassification> classifications;
        classifications.reserve(departments.size());
        std::vector<FacultyActivity> activity;
        for (const auto& [dept, members] : departments) {
            activity.clear();
            for (const std::size_t f : members) activity.push_back({faculty[f], std::move(years[f])});
            classifications.push_back(classify_activity(dept, activity, grace));
            for (std::size_t i = 0; i < members.size(); ++i)
                years[members[i]] = std::move(activity[i].on_topic_years);
        }
        return classifications;
    };

    const auto observed = classify_assignment(on_topic);
    const auto f_obs = observed_hiring_fraction(observed);
    if (!f_obs)
        throw std::invalid_argument("topic '" + topic.name +
                                    "' produced no adoption events; observed fraction undefined");

    PermutationResult result;
    result.f_obs = *f_obs;
    result.n_perms = n_perms;
    result.null_samples.resize(n_perms);

    const rng::Stream master(seed);
    parallel_for(n_perms, workers, [&](std::size_t r) {
        std::vector<std::size_t> perm(slots.size());
        std::iota(perm.begin(), perm.end(), 0);
        rng::Sequence seq(master.derive(r));
        rng::shuffle(perm, seq);
        std::vector<std::uint8_t> flags(slots.size());
        for (std::size_t s = 0; s < slots.size(); ++s) flags[s] = on_topic[perm[s]];
        result.null_samples[r] = hiring_fraction_or_zero(classify_assignment(flags));
    });

    double mean = 0.0;
    for (const double v : result.null_samples) mean += v;
    mean /= static_cast<double>(n_perms);
    double var = 0.0;
    for (const double v : result.null_samples) var += (v - mean) * (v - mean);
    result.f_exp_mean = mean;
    result.f_exp_std = n_perms > 1 ? std::sqrt(var / static_cast<double>(n_perms - 1)) : 0.0;
    result.p_value = empirical_pvalue(result.f_obs, result.null_samples);
    return result;
}

namespace {

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Solves A x = b for small n with partial pivoting; A and b are overwritten.
bool solve_small(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        double acc = b[col];
        for (std::size_t k = col + 1; k < n; ++k) acc -= a[col][k] * b[k];
        b[col] = acc / a[col][col];
    }
    return true;
}

// Damped Gauss-Newton over a fixed-size parameter vector. `model` fills
// the prediction and the Jacobian row for one point.
template <std::size_t NP, typename Model>
double gauss_newton(std::span<const XY> pts, std::array<double, NP>& theta, Model&& model,
                    const std::array<std::pair<double, double>, NP>& bounds) {
    const auto sse = [&](const std::array<double, NP>& th) {
        double acc = 0.0;
        std::array<double, NP> grad_unused{};
        for (const auto& pt : pts) {
            const double f = model(th, pt.x, grad_unused);
            acc += (pt.y - f) * (pt.y - f);
        }
        return acc;
    };

    double current = sse(theta);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<std::vector<double>> jtj(NP, std::vector<double>(NP, 0.0));
        std::vector<double> jtr(NP, 0.0);
        std::array<double, NP> grad{};
        for (const auto& pt : pts) {
            const double f = model(theta, pt.x, grad);
            const double r = pt.y - f;
            for (std::size_t i = 0; i < NP; ++i) {
                jtr[i] += grad[i] * r;
                for (std::size_t j = 0; j < NP; ++j) jtj[i][j] += grad[i] * grad[j];
            }
        }
        double trace = 0.0;
        for (std::size_t i = 0; i < NP; ++i) trace += jtj[i][i];
        for (std::size_t i = 0; i < NP; ++i) jtj[i][i] += 1e-12 * (trace > 0.0 ? trace : 1.0);
        if (!solve_small(jtj, jtr)) break;

        double alpha = 1.0;
        bool moved = false;
        while (alpha >= 1e-12) {
            std::array<double, NP> trial = theta;
            for (std::size_t i = 0; i < NP; ++i)
                trial[i] = std::clamp(trial[i] + alpha * jtr[i], bounds[i].first, bounds[i].second);
            const double trial_sse = sse(trial);
            if (trial_sse < current) {
                double step = 0.0;
                for (std::size_t i = 0; i < NP; ++i)
                    step += (trial[i] - theta[i]) * (trial[i] - theta[i]);
                theta = trial;
                current = trial_sse;
                moved = true;
                if (std::sqrt(step) < 1e-10) return current;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break; // no descent direction left
    }
    return current;
}

void require_fit_points(std::span<const XY> pts, const char* what) {
    if (pts.size() < 4) throw std::invalid_argument(std::string(what) + " needs at least 4 points");
    double lo = pts.front().y, hi = pts.front().y;
    for (const auto& pt : pts) {
        lo = std::min(lo, pt.y);
        hi = std::max(hi, pt.y);
    }
    if (hi - lo < 1e-12)
        throw numeric_error(std::string(what) + ": degenerate data, y is constant at " +
                            std::to_string(lo));
}

} // namespace

LogisticFit fit_logistic(std::span<const XY> points) {
    require_fit_points(points, "logistic fit");
    for (const auto& pt : points)
        if (pt.y < 0.0 || pt.y > 1.0)
            throw std::invalid_argument("logistic fit expects y in [0, 1]");

    std::vector<XY> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const XY& a, const XY& b) { return a.x < b.x; });
    if (pts.back().x - pts.front().x < 1e-300)
        throw numeric_error("logistic fit: degenerate data, x is constant");

    double y_max0 = 0.0;
    for (const auto& pt : pts) y_max0 = std::max(y_max0, pt.y);
    if (y_max0 <= 0.0) throw numeric_error("logistic fit: all y are zero");
    double mid0 = pts.front().x;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& pt : pts) {
        const double gap = std::abs(pt.y - 0.5 * y_max0);
        if (gap < best_gap) {
            best_gap = gap;
            mid0 = pt.x;
        }
    }
    const double slope = (pts.back().y - pts.front().y) / (pts.back().x - pts.front().x);
    double k0 = slope != 0.0 ? 4.0 * slope / y_max0 : 1.0 / (pts.back().x - pts.front().x);

    std::array<double, 3> theta{y_max0, k0, mid0};
    const std::array<std::pair<double, double>, 3> bounds{{{1e-9, 1.0},
                                                           {-1e300, 1e300},
                                                           {-1e300, 1e300}}};
    const double sse =
        gauss_newton<3>(pts, theta,
                        [](const std::array<double, 3>& th, double x, std::array<double, 3>& grad) {
                            const double s = stable_sigmoid(th[1] * (x - th[2]));
                            grad[0] = s;
                            grad[1] = th[0] * s * (1.0 - s) * (x - th[2]);
                            grad[2] = -th[0] * s * (1.0 - s) * th[1];
                            return th[0] * s;
                        },
                        bounds);

    LogisticFit fit;
    fit.y_max = theta[0];
    fit.k = theta[1];
    fit.pi_mid = theta[2];
    fit.residual = std::sqrt(sse / static_cast<double>(pts.size()));
    return fit;
}

std::vector<double> lowess(std::span<const XY> points, double frac) {
    const std::size_t n = points.size();
    if (n < 2) throw std::invalid_argument("lowess needs at least 2 points");
    if (!(frac > 0.0) || frac > 1.0) throw std::invalid_argument("lowess frac must lie in (0, 1]");
    {
        double lo = points.front().x, hi = points.front().x;
        for (const auto& pt : points) {
            lo = std::min(lo, pt.x);
            hi = std::max(hi, pt.x);
        }
        if (hi <= lo) throw std::invalid_argument("lowess needs at least 2 distinct x values");
    }
    const auto window = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n)));
    if (window < 2) throw std::invalid_argument("lowess frac too small to include 2 points");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a].x < points[b].x; });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = points[order[i]].x;
        ys[i] = points[order[i]].y;
    }

    std::vector<double> robust(n, 1.0);
    std::vector<double> fitted(n, 0.0);
    const auto tricube = [](double u) {
        const double t = 1.0 - u * u * u;
        return t * t * t;
    };

    for (int pass = 0; pass <= 2; ++pass) {
        std::size_t left = 0;
        for (std::size_t i = 0; i < n; ++i) {
            // Slide the window of `window` nearest neighbours past x[i].
            while (left + window < n &&
                   xs[i] - xs[left] > xs[left + window] - xs[i])
                ++left;
            const std::size_t right = left + window - 1;
            const double h = std::max(xs[i] - xs[left], xs[right] - xs[i]);

            double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
            for (std::size_t j = left; j <= right; ++j) {
                double w = robust[j];
                if (h > 0.0) {
                    const double u = std::abs(xs[j] - xs[i]) / h;
                    w *= u < 1.0 ? tricube(u) : 0.0;
                }
                sw += w;
                swx += w * xs[j];
                swy += w * ys[j];
                swxx += w * xs[j] * xs[j];
                swxy += w * xs[j] * ys[j];
            }
            if (sw <= 0.0) { // every neighbour robust-rejected; keep the raw value
                fitted[i] = ys[i];
                continue;
            }
            const double xbar = swx / sw;
            const double denom = swxx / sw - xbar * xbar;
            if (denom > 1e-12 * std::max(1.0, xbar * xbar)) {
                const double beta = (swxy / sw - xbar * swy / sw) / denom;
                fitted[i] = swy / sw + beta * (xs[i] - xbar);
            } else {
                fitted[i] = swy / sw;
            }
        }
        if (pass == 2) break;

        std::vector<double> abs_resid(n);
        for (std::size_t i = 0; i < n; ++i) abs_resid[i] = std::abs(ys[i] - fitted[i]);
        std::vector<double> sorted = abs_resid;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
        const double s = 6.0 * sorted[n / 2];
        for (std::size_t i = 0; i < n; ++i) {
            if (s <= 0.0) {
                robust[i] = 1.0;
            } else {
                const double u = abs_resid[i] / s;
                robust[i] = u < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
            }
        }
    }

    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out[order[i]] = fitted[i];
    return out;
}

std::vector<DecileCurve> decile_curves(const SweepResult& sweep, const PrestigeScores& scores) {
    const std::size_t n = scores.mean_rank.size();
    const auto decile = prestige_deciles(scores.mean_rank);

    double q_seen = 0.0;
    bool first = true;
    std::map<double, std::vector<std::pair<NodeId, double>>> by_p;
    for (const auto& row : sweep.rows) {
        if (row.node < 0 || static_cast<std::size_t>(row.node) >= n)
            throw std::invalid_argument("sweep row references node outside the score set");
        if (first) {
            q_seen = row.q;
            first = false;
        } else if (row.q != q_seen) {
            throw std::invalid_argument("decile curves need a sweep with a single q value");
        }
        by_p[row.p].push_back({row.node, row.mean_size_frac});
    }
    if (by_p.empty()) throw std::invalid_argument("decile curves need a nonempty sweep");

    std::vector<DecileCurve> curves(10);
    for (int d = 0; d < 10; ++d) {
        curves[static_cast<std::size_t>(d)].decile_index = d;
        curves[static_cast<std::size_t>(d)].d = static_cast<double>(d + 1) / 10.0;
    }
    for (const auto& [p, entries] : by_p) {
        if (entries.size() != n)
            throw std::invalid_argument("sweep does not cover every node at p=" + std::to_string(p));
        std::array<double, 10> sum{};
        std::array<std::size_t, 10> cnt{};
        std::vector<char> seen(n, 0);
        for (const auto& [node, y] : entries) {
            if (seen[static_cast<std::size_t>(node)])
                throw std::invalid_argument("duplicate sweep row for node " + std::to_string(node));
            seen[static_cast<std::size_t>(node)] = 1;
            const auto d = static_cast<std::size_t>(decile[static_cast<std::size_t>(node)]);
            sum[d] += y;
            ++cnt[d];
        }
        for (std::size_t d = 0; d < 10; ++d)
            curves[d].points.push_back({p, sum[d] / static_cast<double>(cnt[d])});
    }
    return curves;
}

double effective_p(double p, double d) {
    if (!(d > 0.0) || !(d < 1.0)) throw std::domain_error("effective_p requires 0 < d < 1");
    if (p < 0.0) throw std::domain_error("effective_p requires p >= 0");
    return -p / std::log1p(-d);
}

CollapseFit fit_collapse(std::span<const XY> points) {
    require_fit_points(points, "collapse fit");
    std::vector<XY> logged(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].x > 0.0)) throw std::domain_error("collapse fit requires p* > 0");
        logged[i] = {std::log(points[i].x), points[i].y};
    }
    std::sort(logged.begin(), logged.end(), [](const XY& a, const XY& b) { return a.x < b.x; });
    if (logged.back().x - logged.front().x < 1e-300)
        throw numeric_error("collapse fit: degenerate data, p* is constant");

    // The model is a unit-height logistic in log p*; reuse its initializer.
    const double slope = (logged.back().y - logged.front().y) / (logged.back().x - logged.front().x);
    double mid0 = logged.front().x;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& pt : logged) {
        const double gap = std::abs(pt.y - 0.5);
        if (gap < best_gap) {
            best_gap = gap;
            mid0 = pt.x;
        }
    }
    const double k_log0 = slope != 0.0 ? 4.0 * slope : 1.0 / (logged.back().x - logged.front().x);

    std::array<double, 2> theta{-k_log0, -mid0}; // (r, k)
    const std::array<std::pair<double, double>, 2> bounds{{{-1e300, 1e300}, {-1e300, 1e300}}};
    const double sse =
        gauss_newton<2>(logged, theta,
                        [](const std::array<double, 2>& th, double x, std::array<double, 2>& grad) {
                            const double g = stable_sigmoid(-th[0] * (th[1] + x));
                            grad[0] = -g * (1.0 - g) * (th[1] + x);
                            grad[1] = -g * (1.0 - g) * th[0];
                            return g;
                        },
                        bounds);

    CollapseFit fit;
    fit.r = theta[0];
    fit.k = theta[1];
    fit.residual = std::sqrt(sse / static_cast<double>(logged.size()));
    return fit;
}

double collapse_predict(const CollapseFit& fit, double p_star) {
    if (!(p_star > 0.0)) throw std::domain_error("collapse prediction requires p* > 0");
    return stable_sigmoid(-fit.r * (fit.k + std::log(p_star)));
}

namespace {

double interpolate(const std::vector<XY>& curve, double x) {
    if (curve.size() == 1) return curve.front().y;
    auto hi = std::lower_bound(curve.begin(), curve.end(), x,
                               [](const XY& pt, double v) { return pt.x < v; });
    if (hi == curve.begin()) return curve.front().y;
    if (hi == curve.end()) return curve.back().y;
    const auto lo = hi - 1;
    const double span = hi->x - lo->x;
    if (span <= 0.0) return lo->y;
    const double t = (x - lo->x) / span;
    return lo->y + t * (hi->y - lo->y);
}

double family_dispersion(const std::vector<std::vector<XY>>& family) {
    if (family.size() < 2) throw std::invalid_argument("dispersion needs at least 2 curves");
    std::vector<std::vector<XY>> curves = family;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (auto& c : curves) {
        if (c.empty()) throw std::invalid_argument("dispersion: empty curve");
        std::sort(c.begin(), c.end(), [](const XY& a, const XY& b) { return a.x < b.x; });
        lo = std::max(lo, c.front().x);
        hi = std::min(hi, c.back().x);
    }
    if (!(lo <= hi)) throw std::invalid_argument("dispersion: curves have no overlapping x range");

    constexpr int kGrid = 101;
    double total = 0.0;
    int used = 0;
    for (int g = 0; g < kGrid; ++g) {
        const double x = kGrid == 1 ? lo : lo + (hi - lo) * g / (kGrid - 1);
        double mean = 0.0;
        for (const auto& c : curves) mean += interpolate(c, x);
        mean /= static_cast<double>(curves.size());
        double var = 0.0;
        for (const auto& c : curves) {
            const double y = interpolate(c, x);
            var += (y - mean) * (y - mean);
        }
        var /= static_cast<double>(curves.size() - 1);
        total += var;
        ++used;
    }
    return std::sqrt(total / used);
}

} // namespace

std::pair<double, double> collapse_dispersion(const std::vector<std::vector<XY>>& raw,
                                              const std::vector<std::vector<XY>>& rescaled) {
    return {family_dispersion(raw), family_dispersion(rescaled)};
}

} // namespace hirenet
