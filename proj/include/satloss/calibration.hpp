#pragma once

#include <string>
#include <vector>

#include "satloss/errors.hpp"
#include "satloss/sim.hpp"
#include "satloss/thermal.hpp"

namespace satloss {

/// Per-node linear power-to-temperature model T = ambient_est + r * p.
struct StaticFitResult {
    std::vector<std::string> nodes;
    std::vector<double> r;      ///< per-node thermal resistance (K/W)
    double ambient_est = 0.0;   ///< K, mean of the per-node intercepts
    double residual_rms = 0.0;  ///< K, pooled over all nodes and samples
    double r_squared = 0.0;     ///< pooled coefficient of determination
};

/// Foster stages recovered from one node's step response.
struct DynamicFitResult {
    std::vector<FosterStage> stages;
    double residual_rms = 0.0;  ///< K
};

struct PowerEstimate {
    double p = 0.0;                    ///< W
    std::vector<double> discrepancy;   ///< per-node dT_i - r_i * p (K)
};

/// Ordinary least squares of steady-state temperature against power for
/// every node of the map. Needs >= 2 samples (UnderdeterminedError) with a
/// power spread above 1e-12 W (DegenerateSpreadError).
StaticFitResult fit_static(const CalibrationMap& map);

/// Fits a Foster network to one node's step response dT(t) under constant
/// power p_step. Fixes n_tau time constants on a logarithmic grid spanning
/// [span/1000, span] (span = duration of the trace), solves for nonnegative
/// stage resistances against dT/p_step = sum r_i*(1 - exp(-t/tau_i)), and
/// prunes zero-weight stages. Throws NotAStepError when the trace does not
/// start near zero rise, UnderdeterminedError with fewer samples than stages.
DynamicFitResult fit_dynamic(const std::vector<double>& time_s,
                             const std::vector<double>& delta_t_k,
                             double p_step, std::size_t n_tau);

/// Evaluates the fitted step response at time t (K/W).
double fit_zth(const DynamicFitResult& fit, double t);

/// Single-source power estimate from measured node temperatures:
/// p = sum r_i*dT_i / sum r_i^2, the least-squares projection onto the
/// fitted model. Throws ZeroModelError when all resistances vanish.
PowerEstimate estimate_power(const StaticFitResult& fit,
                             const std::vector<double>& measured_k, double ambient_k);

/// Nonnegative least squares min ||A x - b|| s.t. x >= 0 (Lawson-Hanson
/// active set). Row-major A of size rows x cols.
std::vector<double> nnls_solve(const std::vector<double>& a, std::size_t rows,
                               std::size_t cols, const std::vector<double>& b);

/// The tau grid used by fit_dynamic: n log-spaced values over
/// [span/1000, span]; the geometric midpoint when n == 1.
std::vector<double> dynamic_tau_grid(double span, std::size_t n);

}  // namespace satloss
