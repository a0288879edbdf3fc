#include "satloss/device.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace satloss;

namespace {

// Direct evaluation of the saturation-region current law, kept separate
// from the library's piecewise implementation.
double oracle_saturation_current(const DeviceParams& p, double v_gs, double v_ds, double t) {
    const double mu = p.mu0 * std::exp(-p.mobility_exp * std::log(t / p.t_ref));
    const double k = 0.5 * mu * p.c_ox * p.w_cell / p.l_ch;
    const double v_ov = v_gs - (p.vth0 - p.vth_tempco * (t - p.t_ref));
    if (v_ov <= 0.0) return 0.0;
    return k * v_ov * v_ov * (1.0 + p.lambda * v_ds);
}

double central_diff_alpha(const DeviceParams& p, const OperatingPoint& op, double dt = 0.01) {
    const double hi = drain_current(p, {op.v_gs, op.v_ds, op.t_j + 0.5 * dt});
    const double lo = drain_current(p, {op.v_gs, op.v_ds, op.t_j - 0.5 * dt});
    return (hi - lo) / dt;
}

// Bracketed bisection on alpha's sign change in the saturation region.
double root_find_vtcp(const DeviceParams& p, double t, double v_ds = 50.0) {
    double lo = vth(p, t) + 1e-6;  // alpha > 0 just above threshold
    double hi = lo + 50.0;         // mobility loss dominates far above
    REQUIRE(alpha(p, {lo, v_ds, t}) > 0.0);
    REQUIRE(alpha(p, {hi, v_ds, t}) < 0.0);
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (alpha(p, {mid, v_ds, t}) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("threshold voltage law") {
    DeviceParams p = DeviceParams::reference();
    CHECK(vth(p, 298.15) == doctest::Approx(3.4).epsilon(1e-15));
    CHECK(vth(p, 398.15) == doctest::Approx(2.6).epsilon(1e-12));
    p.vth_tempco = 0.0;
    CHECK(vth(p, 500.0) == 3.4);
}

TEST_CASE("mobility law") {
    DeviceParams p = DeviceParams::reference();
    CHECK(mobility(p, p.t_ref) == p.mu0);
    // (398.15/298.15)^(-2.2), evaluated through exp/log
    CHECK(mobility(p, 398.15) / p.mu0 ==
          doctest::Approx(0.5292413955613484).epsilon(1e-12));
    CHECK(mobility(p, 398.15) < mobility(p, 298.15));
    p.mobility_exp = 0.0;
    CHECK(mobility(p, 600.0) == p.mu0);
}

TEST_CASE("drain current at the anchor points") {
    const DeviceParams p = DeviceParams::reference();
    CHECK(p.gain() == doctest::Approx(44.44).epsilon(1e-12));

    // at threshold: no channel
    CHECK(drain_current(p, {3.4, 5.0, p.t_ref}) == 0.0);
    CHECK(drain_current(p, {2.0, 5.0, p.t_ref}) == 0.0);

    // 1 A anchor at v_gs = 3.55 V, 25 C
    const double i_ref = drain_current(p, {3.55, 5.0, p.t_ref});
    CHECK(i_ref == doctest::Approx(oracle_saturation_current(p, 3.55, 5.0, p.t_ref)).epsilon(1e-12));
    CHECK(i_ref == doctest::Approx(1.0).epsilon(2e-4));

    // hot device below the compensation point carries far more current
    const double i_hot = drain_current(p, {3.55, 5.0, 398.15});
    CHECK(i_hot == doctest::Approx(21.226337575918556).epsilon(1e-12));
    CHECK(i_hot == doctest::Approx(oracle_saturation_current(p, 3.55, 5.0, 398.15)).epsilon(1e-12));
}

TEST_CASE("drain current is continuous and monotone in v_ds") {
    DeviceParams p = DeviceParams::reference();
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u_vgs(3.45, 6.0);
    std::uniform_real_distribution<double> u_t(250.0, 450.0);
    std::uniform_real_distribution<double> u_lambda(0.0, 0.1);
    for (int it = 0; it < 200; ++it) {
        p.lambda = u_lambda(rng);
        const double v_gs = u_vgs(rng);
        const double t = u_t(rng);
        const double v_ov = v_gs - vth(p, t);
        if (v_ov <= 0.0) continue;
        const double at_boundary = drain_current(p, {v_gs, v_ov, t});
        const double below = drain_current(p, {v_gs, std::nextafter(v_ov, 0.0), t});
        CHECK(std::abs(at_boundary - below) <= 1e-12 * at_boundary);

        double prev = -1.0;
        for (double v_ds = 0.0; v_ds <= 2.0 * v_ov + 1.0; v_ds += v_ov / 17.0) {
            const double i = drain_current(p, {v_gs, v_ds, t});
            CHECK(i >= prev);
            prev = i;
        }
    }
}

TEST_CASE("alpha matches a central finite difference") {
    DeviceParams p = DeviceParams::reference();
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u_vgs(3.6, 7.0);
    std::uniform_real_distribution<double> u_t(260.0, 440.0);
    std::uniform_real_distribution<double> u_lambda(0.0, 0.05);
    for (int it = 0; it < 300; ++it) {
        p.lambda = u_lambda(rng);
        const double t = u_t(rng);
        const double v_gs = u_vgs(rng);
        const double v_ds = 30.0;  // deep saturation for every sampled overdrive
        const double analytic = alpha(p, {v_gs, v_ds, t});
        const double numeric = central_diff_alpha(p, {v_gs, v_ds, t});
        CHECK(analytic == doctest::Approx(numeric).epsilon(1e-6));
    }
}

TEST_CASE("alpha matches finite differences in the ohmic region too") {
    DeviceParams p = DeviceParams::reference();
    p.lambda = 0.03;
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> u_frac(0.05, 0.9);
    std::uniform_real_distribution<double> u_t(260.0, 440.0);
    for (int it = 0; it < 200; ++it) {
        const double t = u_t(rng);
        const double v_gs = 4.5;
        const double v_ov = v_gs - vth(p, t);
        const double v_ds = u_frac(rng) * v_ov;
        const double analytic = alpha(p, {v_gs, v_ds, t});
        const double numeric = central_diff_alpha(p, {v_gs, v_ds, t});
        CHECK(analytic == doctest::Approx(numeric).epsilon(1e-6));
    }
}

TEST_CASE("alpha sign partition around the compensation point") {
    const DeviceParams p = DeviceParams::reference();
    std::mt19937 rng(44);
    std::uniform_real_distribution<double> u_t(250.0, 450.0);
    std::uniform_real_distribution<double> u_frac(0.02, 0.98);
    for (int it = 0; it < 200; ++it) {
        const double t = u_t(rng);
        const auto pt = tcp(p, t);
        const double vt = vth(p, t);
        const double below = vt + u_frac(rng) * (pt.v_tcp - vt);
        const double above = pt.v_tcp + u_frac(rng) * 2.0;
        CHECK(alpha(p, {below, 30.0, t}) > 0.0);
        CHECK(alpha(p, {above, 30.0, t}) < 0.0);
        CHECK(std::abs(alpha(p, {pt.v_tcp, 30.0, t})) < 1e-9);
    }
}

TEST_CASE("compensation point: closed form, root find, and grid scan agree") {
    const DeviceParams p = DeviceParams::reference();
    const auto pt = tcp(p, 298.15);
    CHECK(pt.v_tcp == doctest::Approx(5.568363636363635).epsilon(1e-12));
    CHECK(pt.i_tcp == doctest::Approx(208.94803019636353).epsilon(1e-12));

    CHECK(std::abs(pt.v_tcp - root_find_vtcp(p, 298.15)) < 1e-9);
    CHECK(std::abs(tcp(p, 398.15).v_tcp - root_find_vtcp(p, 398.15)) < 1e-9);

    // coarse scan of |I(T+d) - I(T-d)| locates the same gate voltage
    const double d = 5.0;
    double best_v = 0.0;
    double best = 1e300;
    for (double v = 4.0; v <= 7.0; v += 1e-3) {
        const double diff = std::abs(drain_current(p, {v, 50.0, 298.15 + d}) -
                                     drain_current(p, {v, 50.0, 298.15 - d}));
        if (diff < best) {
            best = diff;
            best_v = v;
        }
    }
    CHECK(best_v == doctest::Approx(pt.v_tcp).epsilon(1e-2));
}

TEST_CASE("compensation point ignores drain bias") {
    DeviceParams p = DeviceParams::reference();
    p.lambda = 0.05;
    const auto pt = tcp(p, 320.0);
    // the (1 + lambda*v_ds) factor cancels in dI/dT = 0, so alpha vanishes
    // at the same gate voltage for any saturation drain bias
    CHECK(std::abs(alpha(p, {pt.v_tcp, 5.0, 320.0})) < 1e-9 * drain_current(p, {pt.v_tcp, 5.0, 320.0}));
    CHECK(std::abs(alpha(p, {pt.v_tcp, 50.0, 320.0})) < 1e-9 * drain_current(p, {pt.v_tcp, 50.0, 320.0}));
}

TEST_CASE("degenerate compensation point") {
    DeviceParams p = DeviceParams::reference();
    p.vth_tempco = 0.0;
    CHECK_THROWS_AS(tcp(p, 298.15), DegenerateTcpError);
    p = DeviceParams::reference();
    p.mobility_exp = 0.0;
    CHECK_THROWS_AS(tcp(p, 298.15), DegenerateTcpError);
}

TEST_CASE("solve_vds_for_current") {
    const DeviceParams p = DeviceParams::reference();
    CHECK(solve_vds_for_current(p, 0.0, 3.55, p.t_ref, 10.0) == 0.0);

    // quadratic-formula oracle for the ohmic root of 2K[(0.15)v - v^2/2] = 0.5
    const double k = p.gain();
    const double v_ov = 0.15;
    const double oracle = v_ov - std::sqrt(v_ov * v_ov - 0.5 / k);
    const double solved = solve_vds_for_current(p, 0.5, 3.55, p.t_ref, 10.0);
    CHECK(solved == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(oracle == doctest::Approx(0.04393928678587555).epsilon(1e-12));
    CHECK(drain_current(p, {3.55, solved, p.t_ref}) == doctest::Approx(0.5).epsilon(1e-9));

    // flat saturation characteristic cannot reach 2 A
    CHECK_THROWS_AS(solve_vds_for_current(p, 2.0, 3.55, p.t_ref, 100.0), ComplianceExceededError);
    CHECK_THROWS_AS(solve_vds_for_current(p, 0.5, 3.2, p.t_ref, 10.0), BelowThresholdError);

    // smallest root: at i = I_sat exactly the solution is the knee voltage
    const double i_sat = drain_current(p, {3.55, 10.0, p.t_ref});
    CHECK(solve_vds_for_current(p, i_sat, 3.55, p.t_ref, 10.0) ==
          doctest::Approx(v_ov).epsilon(1e-9));

    // with channel-length modulation the saturation branch is reachable
    DeviceParams pl = DeviceParams::reference();
    pl.lambda = 0.02;
    const double v = solve_vds_for_current(pl, 1.1, 3.55, pl.t_ref, 40.0);
    CHECK(drain_current(pl, {3.55, v, pl.t_ref}) == doctest::Approx(1.1).epsilon(1e-9));
    CHECK(v > 0.15);
}

TEST_CASE("transfer curves cross once at the compensation point") {
    const DeviceParams p = DeviceParams::reference();

    std::vector<double> below;
    for (double v = 2.0; v <= 3.3; v += 0.1) below.push_back(v);
    for (const auto& [v, i] : transfer_curve(p, 20.0, p.t_ref, below)) CHECK(i == 0.0);

    std::vector<double> grid;
    for (double v = 3.0; v <= 8.0; v += 0.01) grid.push_back(v);
    const auto cold = transfer_curve(p, 20.0, 298.15, grid);
    const auto hot = transfer_curve(p, 20.0, 398.15, grid);
    int crossings = 0;
    double cross_v = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double prev = cold[i - 1].i_d - hot[i - 1].i_d;
        const double cur = cold[i].i_d - hot[i].i_d;
        if (prev != 0.0 && cur != 0.0 && (prev < 0.0) != (cur < 0.0)) {
            ++crossings;
            cross_v = grid[i];
        }
    }
    CHECK(crossings == 1);
    // curves at two temperatures meet between their compensation points
    CHECK(cross_v > vth(p, 398.15));
    CHECK(cross_v == doctest::Approx(0.5 * (tcp(p, 298.15).v_tcp + tcp(p, 398.15).v_tcp)).epsilon(0.05));

    const std::vector<double> single{tcp(p, 298.15).v_tcp};
    const double i1 = transfer_curve(p, 20.0, 298.15, single)[0].i_d;
    const double i2 = transfer_curve(p, 20.0, 298.151, single)[0].i_d;
    CHECK(i1 == doctest::Approx(i2).epsilon(1e-6));

    CHECK_THROWS_AS(transfer_curve(p, 5.0, 298.15, {}), ValidationError);
    CHECK_THROWS_AS(transfer_curve(p, 5.0, 298.15, {3.5, 3.5}), ValidationError);
}

TEST_CASE("output curve flags points beyond the power limit") {
    const DeviceParams p = DeviceParams::reference();
    std::vector<double> grid;
    for (double v = 0.1; v <= 10.0; v += 0.1) grid.push_back(v);

    const auto limited = output_curve(p, 3.7, p.t_ref, grid, 4.0);
    REQUIRE(limited.points.size() == grid.size());
    REQUIRE(limited.soa.size() == grid.size());
    bool any_clipped = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& pt = limited.points[i];
        CHECK(pt.clipped == (pt.v_ds * pt.i_d > 4.0));
        CHECK(limited.soa[i] == doctest::Approx(4.0 / grid[i]).epsilon(1e-15));
        any_clipped |= pt.clipped;
    }
    CHECK(any_clipped);

    const auto open = output_curve(p, 3.7, p.t_ref, grid, std::nullopt);
    CHECK(open.soa.empty());
    for (const auto& pt : open.points) CHECK(!pt.clipped);

    // boundary rule: a point sitting exactly on the hyperbola is not flagged
    const double i_sat = drain_current(p, {3.55, 1.0, p.t_ref});
    const double v_exact = 4.0 / i_sat;  // saturation current is flat in v_ds
    const auto exact = output_curve(p, 3.55, p.t_ref, {1.0, v_exact}, i_sat * v_exact);
    CHECK(!exact.points[1].clipped);

    CHECK_THROWS_AS(output_curve(p, 3.7, p.t_ref, {1.0}, std::nullopt), ValidationError);
}

TEST_CASE("gan reverse conduction") {
    const GanReverseParams g;  // fitted defaults
    // worked anchors: 2 V at 0 V gate, 3 V at -1 V gate, both at 0.6 A
    CHECK(gan_reverse_vsd(g, 0.6, 0.0, g.t_ref) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(gan_reverse_vsd(g, 0.6, -1.0, g.t_ref) == doctest::Approx(3.0).epsilon(1e-15));

    CHECK(gan_reverse_vsd(g, 0.0, -2.0, g.t_ref) == doctest::Approx(g.v_offset0 + 2.0).epsilon(1e-15));

    // lowering the gate by dv raises V_SD by exactly dv (machine precision:
    // the gate term enters with coefficient -1 as the final operation)
    std::mt19937 rng(45);
    std::uniform_real_distribution<double> u_i(0.0, 5.0);
    std::uniform_real_distribution<double> u_v(-5.0, 0.0);
    std::uniform_real_distribution<double> u_t(250.0, 420.0);
    for (int it = 0; it < 100; ++it) {
        const double i = u_i(rng);
        const double t = u_t(rng);
        const double v1 = u_v(rng);
        const double v2 = u_v(rng);
        const double lhs = gan_reverse_vsd(g, i, v1, t) - gan_reverse_vsd(g, i, v2, t);
        CHECK(std::abs(lhs - (v2 - v1)) <= 1e-13);
        // warmer device drops more voltage
        CHECK(gan_reverse_vsd(g, i, v1, t + 50.0) >= gan_reverse_vsd(g, i, v1, t));
    }

    CHECK_THROWS_AS(gan_reverse_vsd(g, -0.1, 0.0, g.t_ref), ValidationError);
    CHECK_THROWS_AS(gan_reverse_vsd(g, 0.1, 0.5, g.t_ref), ValidationError);
}

TEST_CASE("parameter validation names the offending field") {
    DeviceParams p = DeviceParams::reference();
    p.c_ox = -1.0;
    CHECK_THROWS_WITH_AS(p.validate(), "device.c_ox must be > 0", ValidationError);
    p = DeviceParams::reference();
    p.lambda = -0.1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    GanReverseParams g;
    g.r_rev0 = 0.0;
    CHECK_THROWS_AS(g.validate(), ValidationError);
}
