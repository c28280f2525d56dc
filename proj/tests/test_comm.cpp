#include <doctest.h>

#include <cmath>

#include "odkl/comm.hpp"
#include "odkl/errors.hpp"
#include "odkl/rng.hpp"

using namespace odkl;

namespace {

Eigen::VectorXd vec1(double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

struct Net {
    graph::Topology topo;
    std::vector<comm::HatTable> tables;
    std::vector<comm::HatTable*> ptrs;

    explicit Net(graph::Topology t, int dim) : topo(std::move(t)) {
        tables.resize(topo.size());
        for (int i = 0; i < topo.size(); ++i) {
            tables[i].self = Eigen::VectorXd::Zero(dim);
            tables[i].neighbors.assign(topo.neighbors(i).size(), Eigen::VectorXd::Zero(dim));
        }
        for (auto& t2 : tables)
            ptrs.push_back(&t2);
    }
};

} // namespace

TEST_CASE("censor decision against the decaying threshold") {
    comm::CensorSpec spec{4.0, 0.99, true};
    CHECK(comm::censor_decision(vec1(4.0), spec, 1));         // 4.0 >= 3.96
    CHECK_FALSE(comm::censor_decision(vec1(3.9), spec, 1));   // 3.9 < 3.96
    CHECK_FALSE(comm::censor_decision(vec1(0.0), spec, 5));   // zero update never informative
    CHECK(comm::censor_decision(vec1(0.0), comm::CensorSpec{4.0, 0.99, false}, 1));
}

TEST_CASE("rounding quantizer codes and reconstructions") {
    comm::QuantizerSpec spec(3, -4.0, 4.0); // delta = 1
    CHECK(spec.delta() == 1.0);

    int clips = 0;
    auto codes = comm::quantize(spec, vec1(0.3), &clips);
    CHECK(codes == std::vector<std::uint32_t>{4});
    CHECK(clips == 0);
    CHECK(comm::dequantize(spec, codes)(0) == 0.5);

    codes = comm::quantize(spec, vec1(-4.0), &clips);
    CHECK(codes == std::vector<std::uint32_t>{0});
    CHECK(clips == 0);
    CHECK(comm::dequantize(spec, codes)(0) == -3.5);

    codes = comm::quantize(spec, vec1(3.999), &clips);
    CHECK(codes == std::vector<std::uint32_t>{7});
    CHECK(clips == 0);
    CHECK(comm::dequantize(spec, codes)(0) == 3.5);
}

TEST_CASE("quantizer clips out-of-range elements and counts them") {
    comm::QuantizerSpec spec(3, -4.0, 4.0);
    int clips = 0;
    Eigen::VectorXd h(3);
    h << -5.0, 0.0, 4.0; // 4.0 is outside the half-open range
    auto codes = comm::quantize(spec, h, &clips);
    CHECK(clips == 2);
    CHECK(codes[0] == 0);
    CHECK(codes[2] == 7);
}

TEST_CASE("dequantize validates codes") {
    comm::QuantizerSpec spec(3, -4.0, 4.0);
    CHECK_THROWS_AS(comm::dequantize(spec, {8}), CodeOutOfRange);
}

TEST_CASE("quantize/dequantize round trip stays within half a cell") {
    comm::QuantizerSpec spec(5, -2.0, 2.0);
    const double delta = spec.delta();
    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXd h(8);
        for (int k = 0; k < 8; ++k)
            h(k) = -2.0 + 4.0 * rng.uniform01();
        int clips = 0;
        const Eigen::VectorXd rec = comm::dequantize(spec, comm::quantize(spec, h, &clips));
        CHECK(clips == 0);
        CHECK((rec - h).cwiseAbs().maxCoeff() <= delta / 2.0 + 1e-15);
    }
}

TEST_CASE("grid points are fixed points of the quantizer") {
    comm::QuantizerSpec spec(4, -1.0, 3.0);
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd h(4);
        for (int k = 0; k < 4; ++k)
            h(k) = -1.0 + 4.0 * rng.uniform01();
        const Eigen::VectorXd once = comm::dequantize(spec, comm::quantize(spec, h));
        const Eigen::VectorXd twice = comm::dequantize(spec, comm::quantize(spec, once));
        CHECK(once == twice);
    }
}

TEST_CASE("lossless exchange broadcasts the state exactly") {
    Net net(graph::Topology(3, {{0, 1}, {1, 2}}), 4);
    std::vector<Eigen::VectorXd> theta(3);
    Rng rng(5);
    for (auto& v : theta) {
        v.resize(4);
        for (int k = 0; k < 4; ++k)
            v(k) = rng.normal();
    }
    comm::ExchangeCounters counters;
    auto result = comm::round_exchange(net.topo, theta, net.ptrs, comm::CensorSpec{4, 0.99, false},
                                       nullptr, 1, 32, counters);
    CHECK(result.transmitters == 3);
    CHECK(counters.triggers == 3);
    CHECK(counters.bits == 3 * 4 * 32);
    for (int i = 0; i < 3; ++i)
        CHECK(net.tables[i].self == theta[i]);
    // receiver copies are bit-equal to the sender state
    CHECK(net.tables[0].neighbors[0] == theta[1]);
    CHECK(net.tables[2].neighbors[0] == theta[1]);
    CHECK(net.tables[1].neighbors[0] == theta[0]);
    CHECK(net.tables[1].neighbors[1] == theta[2]);
}

TEST_CASE("all-censored round changes nothing") {
    Net net(graph::Topology(3, {{0, 1}, {1, 2}}), 2);
    std::vector<Eigen::VectorXd> theta(3, vec1(0.0));
    for (auto& v : theta) {
        v.resize(2);
        v << 1e-6, 0.0; // far below alpha beta^1
    }
    comm::ExchangeCounters counters;
    auto result = comm::round_exchange(net.topo, theta, net.ptrs, comm::CensorSpec{4, 0.99, true},
                                       nullptr, 1, 32, counters);
    CHECK(result.transmitters == 0);
    CHECK(counters.triggers == 0);
    CHECK(counters.bits == 0);
    for (int i = 0; i < 3; ++i)
        CHECK(net.tables[i].self.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single transmitting agent on a path graph") {
    const int l = 2; // 2L = 4 elements
    comm::QuantizerSpec quant(3, -4.0, 4.0);
    Net net(graph::Topology(3, {{0, 1}, {1, 2}}), 2 * l);
    std::vector<Eigen::VectorXd> theta(3, Eigen::VectorXd::Zero(2 * l));
    theta[1] << 3.0, 2.0, -2.0, 0.5; // norm 4.15: only agent 1 clears alpha beta = 3.96
    comm::ExchangeCounters counters;
    auto result = comm::round_exchange(net.topo, theta, net.ptrs, comm::CensorSpec{4, 0.99, true},
                                       &quant, 1, 32, counters);
    CHECK(result.transmitters == 1);
    CHECK(counters.triggers == 1);
    CHECK(counters.bits == 2 * l * 3);
    REQUIRE(result.messages.size() == 1);
    CHECK(result.messages[0].sender == 1);
    CHECK(result.messages[0].codes.size() == 2 * l);
    // both neighbors hold the identical reconstruction of agent 1
    CHECK(net.tables[0].neighbors[0] == net.tables[1].self);
    CHECK(net.tables[2].neighbors[0] == net.tables[1].self);
    // untouched senders keep their zero state
    CHECK(net.tables[1].neighbors[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bit accounting is exactly triggers * 2Lb over random rounds") {
    const int l = 5;
    comm::QuantizerSpec quant(4, -4.0, 4.0);
    comm::CensorSpec censor{1.0, 0.9, true};
    Net net(graph::random_connected_graph(6, 0.5, 9), 2 * l);
    comm::ExchangeCounters counters;
    Rng rng(10);
    std::vector<Eigen::VectorXd> theta(6, Eigen::VectorXd::Zero(2 * l));
    for (int t = 1; t <= 50; ++t) {
        for (auto& v : theta)
            for (int k = 0; k < 2 * l; ++k)
                v(k) += 0.3 * rng.normal();
        comm::round_exchange(net.topo, theta, net.ptrs, censor, &quant, t, 32, counters);
        CHECK(counters.bits == counters.triggers * 2 * l * quant.bits);
        // sender/receiver consistency, bit-exact
        for (int i = 0; i < 6; ++i)
            for (std::size_t k = 0; k < net.topo.neighbors(i).size(); ++k) {
                const int j = net.topo.neighbors(i)[k];
                CHECK(net.tables[i].neighbors[k] == net.tables[j].self);
            }
    }
}

TEST_CASE("stacked broadcast error obeys the uniform bound") {
    // Random dynamics with moderate steps: no clipping, so the bound applies
    // every round, for the quantized and the censor-only variants.
    for (bool with_quant : {true, false}) {
        const int l = 4;
        const int n = 5;
        comm::QuantizerSpec quant(3, -4.0, 4.0);
        comm::CensorSpec censor{2.0, 0.9, true};
        Net net(graph::random_connected_graph(n, 0.6, 14), 2 * l);
        comm::ExchangeCounters counters;
        Rng rng(15);
        std::vector<Eigen::VectorXd> theta(n, Eigen::VectorXd::Zero(2 * l));
        const double quant_term = std::sqrt(2.0 * n * l) * quant.delta() / 2.0;
        const double censor_term = std::sqrt(static_cast<double>(n)) * censor.alpha * censor.beta;
        const double zeta = with_quant ? std::max(quant_term, censor_term) : censor_term;
        for (int t = 1; t <= 60; ++t) {
            for (auto& v : theta)
                for (int k = 0; k < 2 * l; ++k)
                    v(k) += 0.05 * rng.normal();
            auto result =
                comm::round_exchange(net.topo, theta, net.ptrs, censor,
                                     with_quant ? &quant : nullptr, t, 32, counters);
            CHECK(result.clipped_elements == 0);
            double err_sq = 0.0;
            for (int i = 0; i < n; ++i)
                err_sq += (theta[i] - net.tables[i].self).squaredNorm();
            CHECK(std::sqrt(err_sq) <= zeta + 1e-9);
        }
    }
}
