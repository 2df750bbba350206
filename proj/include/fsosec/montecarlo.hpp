#pragma once

#include <cstdint>
#include <optional>

#include "fsosec/ew_fading.hpp"
#include "fsosec/secrecy.hpp"

namespace fsosec::mc
{

struct McConfig
{
    std::uint64_t samples = 10'000'000;
    std::uint64_t seed = 0x5EC2E7ULL;
    unsigned workers = 1;
    double ci_level = 0.95;

    void validate() const;
};

struct McEstimate
{
    double mean = 0.0;
    double ci_half_width = 0.0;
    std::uint64_t samples = 0;
};

//! Counter-based uniform stream: draw `index` of stream `stream` depends only on
//! (seed, stream, index), so any partition of the index range across threads
//! reproduces the same values. SplitMix64 finalizer over a Weyl sequence.
class CounterRng
{
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    //! Uniform double in [0, 1) with 53 random bits.
    double uniform(std::uint64_t index) const;

private:
    std::uint64_t key_;
};

//! gbar * ew_quantile(u, p)^2.
double sample_snr(double avg_snr, const ew::EWParams& p, double u);

//! Two-sided standard normal quantile for a central interval of mass `level`.
double normal_quantile_two_sided(double level);

//! Fraction of draws with C_s <= rs (exact event, threshold 2^rs (1 + g_E) - 1).
//! Without `eav` the eavesdropper SNR is the deterministic average (downlink).
//! Confidence half-width from the Wilson score interval.
McEstimate mc_sop(const secrecy::LinkBudget& budget, const ew::EWParams& legit,
                  const std::optional<ew::EWParams>& eav, double rs, const McConfig& cfg);

//! Mean clamped secrecy capacity; normal-approximation confidence half-width.
McEstimate mc_asc(const secrecy::LinkBudget& budget, const ew::EWParams& legit,
                  const std::optional<ew::EWParams>& eav, const McConfig& cfg);

//! Mean of gamma / gbar over the draws (E[I^2] check).
McEstimate mc_second_moment(const ew::EWParams& p, const McConfig& cfg);

}  // namespace fsosec::mc
