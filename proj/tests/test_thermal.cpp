#include "satloss/thermal.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "doctest.h"

using namespace satloss;

namespace {

ThermalModel two_node_model() {
    ThermalModel model;
    model.t_ambient = 298.15;
    model.nodes.push_back({"T_h", {FosterStage{20.0, 0.025}, FosterStage{10.0, 0.5}}});
    model.nodes.push_back({"T_l", {FosterStage{8.0, 0.125}, FosterStage{4.0, 2.0}}});
    model.static_r = std::vector<std::vector<double>>{{30.0}, {12.0}};
    return model;
}

}  // namespace

TEST_CASE("steady state is linear in power") {
    const auto model = two_node_model();
    model.validate();

    const std::array<double, 1> zero{0.0};
    for (double t : steady_state_temp(model, zero)) CHECK(t == 298.15);

    const auto single = ThermalModel::single_node(30.0, 60.0, 298.15);
    const std::array<double, 1> four{4.0};
    CHECK(steady_state_temp(single, four)[0] == doctest::Approx(418.15).epsilon(1e-15));

    const std::array<double, 1> p1{1.3}, p2{2.4}, sum{3.7};
    const auto t1 = steady_state_temp(model, p1);
    const auto t2 = steady_state_temp(model, p2);
    const auto ts = steady_state_temp(model, sum);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(ts[i] - model.t_ambient ==
              doctest::Approx((t1[i] - model.t_ambient) + (t2[i] - model.t_ambient))
                  .epsilon(1e-12));
    }

    const std::array<double, 2> wrong{1.0, 1.0};
    CHECK_THROWS_AS(steady_state_temp(model, wrong), DimensionMismatchError);
}

TEST_CASE("multi-source static matrix") {
    ThermalModel model;
    model.t_ambient = 300.0;
    model.nodes.push_back({"T_h", {}});
    model.nodes.push_back({"T_l", {}});
    model.static_r = std::vector<std::vector<double>>{{30.0, 5.0}, {5.0, 25.0}};
    model.validate();
    const std::array<double, 2> p{2.0, 1.0};
    const auto t = steady_state_temp(model, p);
    CHECK(t[0] == doctest::Approx(300.0 + 30.0 * 2.0 + 5.0 * 1.0).epsilon(1e-15));
    CHECK(t[1] == doctest::Approx(300.0 + 5.0 * 2.0 + 25.0 * 1.0).epsilon(1e-15));
}

TEST_CASE("exact exponential step") {
    const auto model = ThermalModel::single_node(30.0, 60.0, 298.15);  // r=30, c=2

    auto state = ThermalState::zero(model);
    state = step(model, state, 0.0, 123.0);
    CHECK(state.rise[0][0] == 0.0);

    state = ThermalState::zero(model);
    state = step(model, state, 1.0, 60.0);  // dt = tau
    CHECK(state.rise[0][0] == doctest::Approx(18.96361676485673).epsilon(1e-14));

    // dt -> infinity drives every start to the stage steady state p*r
    ThermalState hot = ThermalState::zero(model);
    hot.rise[0][0] = 500.0;
    hot = step(model, hot, 1.0, 1e9);
    CHECK(hot.rise[0][0] == doctest::Approx(30.0).epsilon(1e-12));

    CHECK_THROWS_AS(step(model, state, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(step(model, state, -1.0, 1.0), ValidationError);
}

TEST_CASE("split steps compose exactly") {
    const auto model = two_node_model();
    const double p = 2.3;
    const double dt = 7.0;
    for (int n : {2, 7, 16}) {
        auto one = step(model, ThermalState::zero(model), p, dt);
        auto split = ThermalState::zero(model);
        for (int k = 0; k < n; ++k) split = step(model, split, p, dt / n);
        for (std::size_t i = 0; i < one.rise.size(); ++i) {
            for (std::size_t s = 0; s < one.rise[i].size(); ++s) {
                CHECK(split.rise[i][s] ==
                      doctest::Approx(one.rise[i][s]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("responses superpose") {
    const auto model = two_node_model();
    // power waveforms p1, p2 on a shared grid; response(a*p1 + b*p2) must
    // equal a*response(p1) + b*response(p2)
    const double a = 1.7, b = 0.6;
    std::vector<double> p1, p2;
    for (int k = 0; k < 50; ++k) {
        p1.push_back(0.5 + 0.3 * std::sin(0.21 * k));
        p2.push_back(1.0 + 0.5 * std::cos(0.37 * k));
    }
    auto s1 = ThermalState::zero(model);
    auto s2 = ThermalState::zero(model);
    auto sc = ThermalState::zero(model);
    const double dt = 0.2;
    for (int k = 0; k < 50; ++k) {
        s1 = step(model, s1, p1[k], dt);
        s2 = step(model, s2, p2[k], dt);
        sc = step(model, sc, a * p1[k] + b * p2[k], dt);
        for (std::size_t i = 0; i < model.nodes.size(); ++i) {
            const double combined = node_temperature(model, sc, i) - model.t_ambient;
            const double separate = a * (node_temperature(model, s1, i) - model.t_ambient) +
                                    b * (node_temperature(model, s2, i) - model.t_ambient);
            CHECK(combined == doctest::Approx(separate).epsilon(1e-9));
            CHECK(node_temperature(model, sc, i) >= model.t_ambient);
        }
    }
}

TEST_CASE("thermal impedance endpoints and shape") {
    ThermalModel model;
    model.t_ambient = 298.15;
    model.nodes.push_back({"T_j", {FosterStage{10.0, 0.1}, FosterStage{20.0, 5.0}}});

    CHECK(zth(model, "T_j", 0.0) == 0.0);
    CHECK(zth(model, "T_j", std::numeric_limits<double>::infinity()) == 30.0);
    // 10*(1 - e^-1) + 20*(1 - e^-0.01) at t = 1 s (tau = 1 s and 100 s)
    CHECK(zth(model, "T_j", 1.0) == doctest::Approx(6.5202089133022145).epsilon(1e-14));

    double prev = -1.0;
    for (double t = 0.0; t < 500.0; t += 0.5) {
        const double z = zth(model, "T_j", t);
        CHECK(z >= prev);
        prev = z;
    }
    CHECK_THROWS_AS(zth(model, "nope", 1.0), UnknownNodeError);
}

TEST_CASE("node temperature reaches the static answer") {
    const auto model = two_node_model();
    const auto fresh = ThermalState::zero(model);
    CHECK(node_temperature(model, fresh, "T_h") == model.t_ambient);
    CHECK_THROWS_AS(node_temperature(model, fresh, "T_x"), UnknownNodeError);

    const double p = 3.1;
    auto state = ThermalState::zero(model);
    for (int k = 0; k < 300; ++k) state = step(model, state, p, 1.0);  // 37 tau_max
    const std::array<double, 1> pv{p};
    const auto expected = steady_state_temp(model, pv);
    CHECK(node_temperature(model, state, "T_h") == doctest::Approx(expected[0]).epsilon(1e-9));
    CHECK(node_temperature(model, state, "T_l") == doctest::Approx(expected[1]).epsilon(1e-9));
}

TEST_CASE("model validation") {
    auto model = two_node_model();
    model.static_r = std::vector<std::vector<double>>{{29.0}, {12.0}};  // 20+10 != 29
    CHECK_THROWS_AS(model.validate(), ValidationError);

    model = two_node_model();
    model.nodes[1].name = "T_h";
    CHECK_THROWS_AS(model.validate(), ValidationError);

    model = two_node_model();
    model.nodes[0].stages[0].r = 0.0;
    CHECK_THROWS_AS(model.validate(), ValidationError);

    model = two_node_model();
    model.static_r = std::vector<std::vector<double>>{{30.0}};
    CHECK_THROWS_AS(model.validate(), ValidationError);

    CHECK_THROWS_AS(ThermalModel{}.validate(), ValidationError);
}
