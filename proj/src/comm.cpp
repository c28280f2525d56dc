#include "odkl/comm.hpp"

#include <cmath>
#include <string>

#include "odkl/errors.hpp"

namespace odkl::comm {

QuantizerSpec::QuantizerSpec(int bits_, double lo_, double hi_) : bits(bits_), lo(lo_), hi(hi_) {
    if (bits < 1)
        throw Error("QuantizerSpec: bits must be >= 1");
    if (!(hi > lo))
        throw Error("QuantizerSpec: need hi > lo");
}

bool censor_decision(const Eigen::Ref<const Eigen::VectorXd>& h, const CensorSpec& spec, int t) {
    if (!spec.enabled)
        return true;
    return h.norm() - spec.alpha * std::pow(spec.beta, t) >= 0.0;
}

std::vector<std::uint32_t> quantize(const QuantizerSpec& spec,
                                    const Eigen::Ref<const Eigen::VectorXd>& h, int* clipped) {
    const double delta = spec.delta();
    const int q = spec.levels();
    std::vector<std::uint32_t> codes(static_cast<std::size_t>(h.size()));
    int clips = 0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        double v = h(i);
        if (v < spec.lo) {
            v = spec.lo;
            ++clips;
        } else if (v >= spec.hi) {
            v = spec.hi - delta / 2.0;
            ++clips;
        }
        auto k = static_cast<std::int64_t>(std::floor((v - spec.lo) / delta));
        if (k < 0)
            k = 0;
        if (k >= q)
            k = q - 1;
        codes[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(k);
    }
    if (clipped)
        *clipped = clips;
    return codes;
}

Eigen::VectorXd dequantize(const QuantizerSpec& spec, const std::vector<std::uint32_t>& codes) {
    const double delta = spec.delta();
    const auto q = static_cast<std::uint32_t>(spec.levels());
    Eigen::VectorXd out(static_cast<Eigen::Index>(codes.size()));
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] >= q)
            throw CodeOutOfRange("dequantize: code " + std::to_string(codes[i]) +
                                 " >= levels=" + std::to_string(q));
        out(static_cast<Eigen::Index>(i)) = spec.lo + (codes[i] + 0.5) * delta;
    }
    return out;
}

ExchangeResult round_exchange(const graph::Topology& topology,
                              const std::vector<Eigen::VectorXd>& theta_next,
                              std::span<HatTable* const> tables, const CensorSpec& censor,
                              const QuantizerSpec* quantizer, int round,
                              int bits_per_element_unquantized, ExchangeCounters& counters) {
    const int n = topology.size();
    ExchangeResult result;
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd h = theta_next[i] - tables[i]->self;
        if (!censor_decision(h, censor, round))
            continue;
        const auto elements = static_cast<std::int64_t>(h.size());
        Message msg;
        msg.sender = i;
        msg.round = round;
        std::int64_t bits;
        if (quantizer) {
            int clips = 0;
            msg.codes = quantize(*quantizer, h, &clips);
            const Eigen::VectorXd payload = dequantize(*quantizer, msg.codes);
            tables[i]->self += payload;
            for (int j : topology.neighbors(i))
                tables[j]->neighbors[topology.neighbor_position(j, i)] += payload;
            result.clipped_elements += clips;
            msg.clipped_elements = clips;
            bits = elements * quantizer->bits;
        } else {
            // Lossless broadcast: deliver the state itself so the stored
            // copies equal theta_next bit-for-bit.
            tables[i]->self = theta_next[i];
            for (int j : topology.neighbors(i))
                tables[j]->neighbors[topology.neighbor_position(j, i)] = theta_next[i];
            bits = elements * bits_per_element_unquantized;
        }
        msg.bits = bits;
        counters.triggers += 1;
        counters.bits += bits;
        ++result.transmitters;
        result.messages.push_back(std::move(msg));
    }
    counters.clipped_elements += result.clipped_elements;
    return result;
}

} // namespace odkl::comm
