#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "odkl/graph.hpp"

namespace odkl::comm {

// Uniform midpoint quantizer over the half-open range [lo, hi) with
// 2^bits levels. Only the level index is ever transmitted.
struct QuantizerSpec {
    int bits = 3;
    double lo = -4.0;
    double hi = 4.0;

    QuantizerSpec() = default;
    QuantizerSpec(int bits_, double lo_, double hi_);

    int levels() const { return 1 << bits; }
    double delta() const { return (hi - lo) / levels(); }
};

// Transmit only when the pending update clears the decaying threshold
// alpha * beta^t.
struct CensorSpec {
    double alpha = 4.0;
    double beta = 0.99;
    bool enabled = false;
};

struct Message {
    int sender = -1;
    int round = 0;
    // Level indices, one per element; empty when the exchange is unquantized.
    std::vector<std::uint32_t> codes;
    std::int64_t bits = 0;
    int clipped_elements = 0;
};

// Per-agent broadcast bookkeeping: the agent's own last-broadcast state and
// its stored copies of each neighbor's, aligned with Topology::neighbors(i).
struct HatTable {
    Eigen::VectorXd self;
    std::vector<Eigen::VectorXd> neighbors;
};

struct ExchangeCounters {
    std::int64_t triggers = 0;
    std::int64_t bits = 0;
    std::int64_t clipped_elements = 0;
};

struct ExchangeResult {
    std::vector<Message> messages;
    int transmitters = 0;
    int clipped_elements = 0; // this round only
};

// True (transmit) iff ||h||_2 - alpha * beta^t >= 0; always true when
// censoring is disabled.
bool censor_decision(const Eigen::Ref<const Eigen::VectorXd>& h, const CensorSpec& spec, int t);

// Level index per element: floor((clip(h_l) - lo) / delta). Out-of-range
// elements are clipped into [lo, hi - delta/2) and counted in *clipped.
std::vector<std::uint32_t> quantize(const QuantizerSpec& spec,
                                    const Eigen::Ref<const Eigen::VectorXd>& h,
                                    int* clipped = nullptr);

// Reconstruction lo + (k + 1/2) * delta per element.
Eigen::VectorXd dequantize(const QuantizerSpec& spec, const std::vector<std::uint32_t>& codes);

// Synchronous broadcast round. For each agent, h_i = theta_next[i] - self
// state; transmitting agents update their own and all neighbors' stored
// copies with the identical reconstructed increment, so sender/receiver
// copies stay bit-equal. When no quantizer is given the new state is
// delivered exactly and charged at bits_per_element_unquantized.
ExchangeResult round_exchange(const graph::Topology& topology,
                              const std::vector<Eigen::VectorXd>& theta_next,
                              std::span<HatTable* const> tables, const CensorSpec& censor,
                              const QuantizerSpec* quantizer, int round,
                              int bits_per_element_unquantized, ExchangeCounters& counters);

} // namespace odkl::comm
