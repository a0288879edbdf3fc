#include "satloss/calibration.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace satloss {

namespace {

void check_map(const CalibrationMap& map) {
    if (map.samples.empty()) throw ValidationError("calibration map has no samples");
    const std::size_t n_nodes = map.nodes.size();
    if (n_nodes == 0) throw ValidationError("calibration map has no nodes");
    for (const auto& s : map.samples) {
        if (s.temps.size() != n_nodes) {
            throw DimensionMismatchError("sample node count differs from map node set");
        }
        if (!(s.p >= 0.0)) throw ValidationError("sample power must be >= 0");
        for (double t : s.temps) {
            if (!std::isfinite(t)) throw ValidationError("sample temperatures must be finite");
        }
    }
}

}  // namespace

StaticFitResult fit_static(const CalibrationMap& map) {
    check_map(map);
    const std::size_t n = map.samples.size();
    if (n < 2) throw UnderdeterminedError("static fit needs at least 2 samples");

    double p_min = map.samples.front().p;
    double p_max = p_min;
    for (const auto& s : map.samples) {
        p_min = std::min(p_min, s.p);
        p_max = std::max(p_max, s.p);
    }
    if (p_max - p_min < 1e-12) {
        throw DegenerateSpreadError("power spread below 1e-12 W, slope unidentifiable");
    }

    double p_mean = 0.0;
    for (const auto& s : map.samples) p_mean += s.p;
    p_mean /= static_cast<double>(n);
    double sxx = 0.0;
    for (const auto& s : map.samples) sxx += (s.p - p_mean) * (s.p - p_mean);

    StaticFitResult fit;
    fit.nodes = map.nodes;
    fit.r.resize(map.nodes.size());

    double rss = 0.0;
    double tss = 0.0;
    double intercept_sum = 0.0;
    for (std::size_t node = 0; node < map.nodes.size(); ++node) {
        double t_mean = 0.0;
        for (const auto& s : map.samples) t_mean += s.temps[node];
        t_mean /= static_cast<double>(n);
        double sxy = 0.0;
        for (const auto& s : map.samples) {
            sxy += (s.p - p_mean) * (s.temps[node] - t_mean);
        }
        const double slope = sxy / sxx;
        const double intercept = t_mean - slope * p_mean;
        fit.r[node] = slope;
        intercept_sum += intercept;
        for (const auto& s : map.samples) {
            const double e = s.temps[node] - (intercept + slope * s.p);
            rss += e * e;
            const double d = s.temps[node] - t_mean;
            tss += d * d;
        }
    }
    fit.ambient_est = intercept_sum / static_cast<double>(map.nodes.size());
    fit.residual_rms = std::sqrt(rss / static_cast<double>(n * map.nodes.size()));
    fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : (rss == 0.0 ? 1.0 : 0.0);
    return fit;
}

std::vector<double> dynamic_tau_grid(double span, std::size_t n) {
    if (!(span > 0.0)) throw ValidationError("trace span must be > 0");
    if (n == 0) throw ValidationError("n_tau must be >= 1");
    const double tau_min = span / 1000.0;
    const double tau_max = span;
    std::vector<double> grid(n);
    if (n == 1) {
        grid[0] = std::sqrt(tau_min * tau_max);
        return grid;
    }
    const double ratio = std::log(tau_max / tau_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = tau_min * std::exp(ratio * static_cast<double>(i));
    }
    return grid;
}

DynamicFitResult fit_dynamic(const std::vector<double>& time_s,
                             const std::vector<double>& delta_t_k,
                             double p_step, std::size_t n_tau) {
    if (time_s.size() != delta_t_k.size()) {
        throw DimensionMismatchError("time and temperature series differ in length");
    }
    if (n_tau == 0) throw ValidationError("n_tau must be >= 1");
    if (!(p_step > 0.0)) throw ValidationError("p_step must be > 0");
    if (time_s.size() < 2) throw UnderdeterminedError("step response needs at least 2 samples");
    for (std::size_t i = 1; i < time_s.size(); ++i) {
        if (time_s[i] <= time_s[i - 1]) throw NonMonotonicTimeError("time must be strictly increasing");
    }
    if (time_s.size() < n_tau) {
        throw UnderdeterminedError("fewer samples than requested stages");
    }
    const double final_rise = delta_t_k.back();
    if (!(final_rise > 0.0)) {
        throw NotAStepError("no temperature rise over the trace");
    }
    if (std::abs(delta_t_k.front()) > 0.05 * std::abs(final_rise)) {
        throw NotAStepError("trace does not start near zero rise");
    }

    const std::size_t m = time_s.size();
    const double t0 = time_s.front();
    const double span = time_s.back() - t0;
    const std::vector<double> taus = dynamic_tau_grid(span, n_tau);

    std::vector<double> a(m * n_tau);
    std::vector<double> b(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double ts = time_s[k] - t0;
        for (std::size_t i = 0; i < n_tau; ++i) {
            a[k * n_tau + i] = 1.0 - std::exp(-ts / taus[i]);
        }
        b[k] = delta_t_k[k] / p_step;
    }

    const std::vector<double> weights = nnls_solve(a, m, n_tau, b);

    DynamicFitResult fit;
    for (std::size_t i = 0; i < n_tau; ++i) {
        if (weights[i] > 0.0) {
            fit.stages.push_back({weights[i], taus[i] / weights[i]});
        }
    }
    double rss = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double model = 0.0;
        for (std::size_t i = 0; i < n_tau; ++i) model += a[k * n_tau + i] * weights[i];
        const double e = p_step * (model - b[k]);
        rss += e * e;
    }
    fit.residual_rms = std::sqrt(rss / static_cast<double>(m));
    return fit;
}

double fit_zth(const DynamicFitResult& fit, double t) {
    double z = 0.0;
    for (const auto& s : fit.stages) z += s.r * (1.0 - std::exp(-t / s.tau()));
    return z;
}

PowerEstimate estimate_power(const StaticFitResult& fit,
                             const std::vector<double>& measured_k, double ambient_k) {
    if (measured_k.size() != fit.r.size()) {
        throw DimensionMismatchError("measured node count differs from fitted node set");
    }
    double rr = 0.0;
    double rt = 0.0;
    for (std::size_t i = 0; i < fit.r.size(); ++i) {
        rr += fit.r[i] * fit.r[i];
        rt += fit.r[i] * (measured_k[i] - ambient_k);
    }
    if (rr == 0.0) throw ZeroModelError("all fitted resistances are zero");
    PowerEstimate est;
    est.p = rt / rr;
    est.discrepancy.reserve(fit.r.size());
    for (std::size_t i = 0; i < fit.r.size(); ++i) {
        est.discrepancy.push_back((measured_k[i] - ambient_k) - fit.r[i] * est.p);
    }
    return est;
}

std::vector<double> nnls_solve(const std::vector<double>& a, std::size_t rows,
                               std::size_t cols, const std::vector<double>& b) {
    if (a.size() != rows * cols || b.size() != rows) {
        throw DimensionMismatchError("nnls operand sizes disagree");
    }
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    MatrixXd A(rows, cols);
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t i = 0; i < cols; ++i) A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = a[k * cols + i];
    }
    VectorXd rhs = Eigen::Map<const VectorXd>(b.data(), static_cast<Eigen::Index>(rows));

    const Eigen::Index n = A.cols();
    VectorXd x = VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);

    const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                       A.lpNorm<Eigen::Infinity>() * static_cast<double>(std::max(rows, cols));

    // Lawson-Hanson: grow the passive set by the most violated gradient
    // component, fall back towards feasibility whenever the unconstrained
    // subproblem leaves the nonnegative orthant.
    const int max_outer = 3 * static_cast<int>(n) + 30;
    for (int outer = 0; outer < max_outer; ++outer) {
        const VectorXd w = A.transpose() * (rhs - A * x);
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!passive[static_cast<std::size_t>(i)] && w(i) > best_w) {
                best_w = w(i);
                best = i;
            }
        }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner <= static_cast<int>(n); ++inner) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
            }
            MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
            for (std::size_t j = 0; j < idx.size(); ++j) Ap.col(static_cast<Eigen::Index>(j)) = A.col(idx[j]);
            const VectorXd z = Ap.colPivHouseholderQr().solve(rhs);

            bool feasible = true;
            for (Eigen::Index j = 0; j < z.size(); ++j) {
                if (z(j) <= 0.0) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                x.setZero();
                for (std::size_t j = 0; j < idx.size(); ++j) x(idx[j]) = z(static_cast<Eigen::Index>(j));
                break;
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const double zj = z(static_cast<Eigen::Index>(j));
                if (zj <= 0.0) {
                    const double xj = x(idx[j]);
                    alpha = std::min(alpha, xj / (xj - zj));
                }
            }
            for (std::size_t j = 0; j < idx.size(); ++j) {
                const double zj = z(static_cast<Eigen::Index>(j));
                x(idx[j]) += alpha * (zj - x(idx[j]));
            }
            const double eps_x = 1e-12 * (1.0 + x.cwiseAbs().maxCoeff());
            for (Eigen::Index i = 0; i < n; ++i) {
                if (passive[static_cast<std::size_t>(i)] && x(i) <= eps_x) {
                    x(i) = 0.0;
                    passive[static_cast<std::size_t>(i)] = false;
                }
            }
        }
    }

    return std::vector<double>(x.data(), x.data() + n);
}

}  // namespace satloss
