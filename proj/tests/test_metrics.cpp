#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "odkl/errors.hpp"
#include "odkl/metrics.hpp"
#include "odkl/rng.hpp"

using namespace odkl;

namespace {

data::AgentStreams tiny_streams(int agents, int rounds, int dim, std::uint64_t seed) {
    auto ds = data::synthesize(agents * rounds, dim, 0.5, 0.1, seed).dataset;
    return data::shuffle_partition(ds, agents, seed);
}

// Gradient of the batch ridge objective sum (theta'z - y)^2 + lambda |theta|^2.
Eigen::VectorXd batch_gradient(const data::AgentStreams& streams, const features::RFBasis& basis,
                               double lambda, const Eigen::VectorXd& theta) {
    Eigen::VectorXd g = 2.0 * lambda * theta;
    for (int i = 0; i < streams.agents(); ++i)
        for (int t = 0; t < streams.rounds(); ++t) {
            const Eigen::VectorXd z = features::map(basis, streams.features[i].row(t).transpose());
            g += 2.0 * (theta.dot(z) - streams.labels[i](t)) * z;
        }
    return g;
}

} // namespace

TEST_CASE("centralized oracle: single-sample minimum-norm solution") {
    data::AgentStreams streams;
    streams.features.resize(1);
    streams.labels.resize(1);
    streams.features[0].resize(1, 1);
    streams.features[0](0, 0) = 0.0;
    streams.labels[0].resize(1);
    streams.labels[0](0) = 1.0;
    auto basis = features::sample_basis(2, 1, 0.5, 3);

    const Eigen::VectorXd theta = metrics::centralized_oracle(streams, basis, 0.0);
    const Eigen::VectorXd z = features::map(basis, streams.features[0].row(0).transpose());
    // rank-one ridge by hand: theta* = z y / (z'z), residual zero
    CHECK((theta - z / z.squaredNorm()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(theta.dot(z) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("centralized oracle vanishes under overwhelming regularization") {
    auto streams = tiny_streams(2, 10, 2, 31);
    auto basis = features::sample_basis(4, 2, 0.5, 4);
    const Eigen::VectorXd theta = metrics::centralized_oracle(streams, basis, 1e12);
    CHECK(theta.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("centralized oracle satisfies batch stationarity") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto streams = tiny_streams(2, 10, 2, 100 + seed);
        auto basis = features::sample_basis(4, 2, 0.5, seed);
        const double lambda = 1e-3;
        const Eigen::VectorXd theta = metrics::centralized_oracle(streams, basis, lambda);
        CHECK(batch_gradient(streams, basis, lambda, theta).norm() <= 1e-8);
    }
}

TEST_CASE("regret is zero when the trajectory sits at the comparator") {
    auto streams = tiny_streams(3, 5, 2, 77);
    auto basis = features::sample_basis(4, 2, 0.5, 7);
    losses::LossSpec loss{losses::LossKind::squared, 1e-4, 3};
    const Eigen::VectorXd star = metrics::centralized_oracle(streams, basis, 1e-4);

    std::vector<std::vector<Eigen::VectorXd>> traj(5, std::vector<Eigen::VectorXd>(3, star));
    auto curve = metrics::regret_curve(traj, streams, basis, star, loss);
    CHECK(curve.size() == 5);
    for (double r : curve)
        CHECK(std::abs(r) <= 1e-12);

    // zero trajectory against a zero comparator
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(8);
    std::vector<std::vector<Eigen::VectorXd>> zt(5, std::vector<Eigen::VectorXd>(3, zero));
    for (double r : metrics::regret_curve(zt, streams, basis, zero, loss))
        CHECK(r == 0.0);
}

TEST_CASE("streaming regret equals the brute-force double loop") {
    const int agents = 3, rounds = 200;
    auto streams = tiny_streams(agents, rounds, 3, 55);
    auto basis = features::sample_basis(5, 3, 0.5, 5);
    losses::LossSpec loss{losses::LossKind::squared, 1e-4, agents};
    const Eigen::VectorXd star = metrics::centralized_oracle(streams, basis, 1e-4);

    // an arbitrary wandering trajectory
    Rng rng(66);
    std::vector<std::vector<Eigen::VectorXd>> traj(
        rounds, std::vector<Eigen::VectorXd>(agents, Eigen::VectorXd::Zero(10)));
    for (int t = 0; t < rounds; ++t)
        for (int i = 0; i < agents; ++i)
            for (int k = 0; k < 10; ++k)
                traj[t][i](k) = 0.5 * rng.normal();

    const auto brute = metrics::regret_curve(traj, streams, basis, star, loss);

    metrics::RegretAccumulator acc(star, loss);
    for (int t = 1; t <= rounds; ++t) {
        std::vector<Eigen::VectorXd> zs(agents);
        Eigen::VectorXd ys(agents);
        for (int i = 0; i < agents; ++i) {
            zs[i] = features::map(basis, streams.features[i].row(t - 1).transpose());
            ys(i) = streams.labels[i](t - 1);
        }
        const double streaming = acc.add_round(traj[t - 1], zs, ys);
        CHECK(std::abs(streaming - brute[t - 1]) <= 1e-10);
    }
}

TEST_CASE("sublinearity fit recovers exact power laws") {
    std::vector<double> sqrt_curve(10000), linear_curve(10000);
    for (int t = 1; t <= 10000; ++t) {
        sqrt_curve[t - 1] = std::sqrt(static_cast<double>(t));
        linear_curve[t - 1] = static_cast<double>(t);
    }
    const std::vector<int> checkpoints{1000, 2000, 4000, 8000};
    CHECK(metrics::sublinearity_fit(sqrt_curve, checkpoints) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(metrics::sublinearity_fit(linear_curve, checkpoints) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("sublinearity fit rejects degenerate curves") {
    std::vector<double> curve(100, -1.0);
    CHECK_THROWS_AS(metrics::sublinearity_fit(curve, {10, 20, 40, 80}), DegenerateRegret);
    std::vector<double> ok(100, 1.0);
    CHECK_THROWS_AS(metrics::sublinearity_fit(ok, {10, 20}), Error);
}

TEST_CASE("broadcast error bound by hand") {
    comm::CensorSpec censor{2.0, 0.9, true};
    CHECK(metrics::error_bound_zeta(4, 50, censor, nullptr) == doctest::Approx(3.6).epsilon(1e-12));

    comm::QuantizerSpec quant(3, -4.0, 4.0); // delta 1
    comm::CensorSpec tiny{1e-12, 0.5, true};
    CHECK(metrics::error_bound_zeta(4, 50, tiny, &quant) == doctest::Approx(10.0).epsilon(1e-12));

    auto res = metrics::error_bound_check(0.0, 4, 50, censor, nullptr);
    CHECK(res.pass);
    CHECK(res.zeta == doctest::Approx(3.6));
    CHECK_FALSE(metrics::error_bound_check(3.7, 4, 50, censor, nullptr).pass);
}

TEST_CASE("metrics CSV carries the exact schema") {
    std::vector<metrics::MetricsRecord> rows(1);
    rows[0].t = 1;
    const auto path = std::filesystem::temp_directory_path() / "odkl_metrics_schema.csv";
    metrics::write_csv(rows, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "t,mse_inst,mse_running,regret_cum,triggers_cum,bits_cum,clip_events_cum,error_frob,"
          "error_bound,step_time_us");
    std::filesystem::remove(path);
}
