#include "fsosec/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "fsosec/error.hpp"

namespace fsosec::mc
{

namespace
{

constexpr std::uint64_t kBlockSize = 1u << 16;
constexpr std::uint64_t kStreamLegit = 0;
constexpr std::uint64_t kStreamEav = 1;

std::uint64_t splitmix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct BlockStats
{
    double sum = 0.0;
    double sum_sq = 0.0;
};

// Runs kernel(begin, end) over fixed-size index blocks. Blocks are handed out
// dynamically but reduced in block order, so the result does not depend on
// the number of workers.
template <class Kernel>
BlockStats run_blocks(std::uint64_t samples, unsigned workers, const Kernel& kernel)
{
    const std::uint64_t n_blocks = (samples + kBlockSize - 1) / kBlockSize;
    std::vector<BlockStats> partial(n_blocks);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (;;)
        {
            const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks)
                return;
            const std::uint64_t begin = b * kBlockSize;
            const std::uint64_t end = std::min(samples, begin + kBlockSize);
            partial[b] = kernel(begin, end);
        }
    };
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), n_blocks));
    if (n_threads <= 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(work);
    }
    BlockStats total;
    for (const auto& p : partial)
    {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
    }
    return total;
}

McEstimate wilson(double successes, std::uint64_t n, double level)
{
    const double z = normal_quantile_two_sided(level);
    const double nn = static_cast<double>(n);
    const double p = successes / nn;
    const double z2n = z * z / nn;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2n / (4.0 * nn)) / (1.0 + z2n);
    return {p, half, n};
}

McEstimate normal_interval(const BlockStats& s, std::uint64_t n, double level)
{
    const double nn = static_cast<double>(n);
    const double mean = s.sum / nn;
    const double var = std::max(0.0, (s.sum_sq - nn * mean * mean) / (nn - 1.0));
    return {mean, normal_quantile_two_sided(level) * std::sqrt(var / nn), n};
}

}  // namespace

void McConfig::validate() const
{
    if (samples < 1000)
        throw ConfigError("McConfig: samples must be >= 1000");
    if (workers < 1)
        throw ConfigError("McConfig: workers must be >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0))
        throw ConfigError("McConfig: ci_level must lie in (0, 1)");
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)))
{
}

double CounterRng::uniform(std::uint64_t index) const
{
    const std::uint64_t x = splitmix64(key_ + (index + 1) * 0x9E3779B97F4A7C15ULL);
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

double sample_snr(double avg_snr, const ew::EWParams& p, double u)
{
    const double i = ew::ew_quantile(u, p);
    return avg_snr * i * i;
}

double normal_quantile_two_sided(double level)
{
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("normal_quantile_two_sided: level must lie in (0, 1)");
    // Bisection on the upper tail erfc(z / sqrt 2) = 1 - level; monotone and
    // exact to double precision after ~60 halvings.
    const double target = 1.0 - level;
    double lo = 0.0;
    double hi = 40.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid / std::sqrt(2.0)) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

McEstimate mc_sop(const secrecy::LinkBudget& budget, const ew::EWParams& legit,
                  const std::optional<ew::EWParams>& eav, double rs, const McConfig& cfg)
{
    cfg.validate();
    legit.validate();
    if (eav)
        eav->validate();
    if (!(rs > 0.0))
        throw DomainError("mc_sop: secrecy rate must be > 0");
    const double g_th = std::exp2(rs);
    const double gl = budget.avg_snr_legit();
    const double ge = budget.avg_snr_eav();
    const CounterRng rng_l(cfg.seed, kStreamLegit);
    const CounterRng rng_e(cfg.seed, kStreamEav);

    auto kernel = [&](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = begin; i < end; ++i)
        {
            const double g_e = eav ? sample_snr(ge, *eav, rng_e.uniform(i)) : ge;
            const double g_l = sample_snr(gl, legit, rng_l.uniform(i));
            if (g_l <= g_th * (1.0 + g_e) - 1.0)
                ++hits;
        }
        const double h = static_cast<double>(hits);
        return BlockStats{h, h};
    };
    const BlockStats s = run_blocks(cfg.samples, cfg.workers, kernel);
    return wilson(s.sum, cfg.samples, cfg.ci_level);
}

McEstimate mc_asc(const secrecy::LinkBudget& budget, const ew::EWParams& legit,
                  const std::optional<ew::EWParams>& eav, const McConfig& cfg)
{
    cfg.validate();
    legit.validate();
    if (eav)
        eav->validate();
    const double gl = budget.avg_snr_legit();
    const double ge = budget.avg_snr_eav();
    const CounterRng rng_l(cfg.seed, kStreamLegit);
    const CounterRng rng_e(cfg.seed, kStreamEav);

    auto kernel = [&](std::uint64_t begin, std::uint64_t end) {
        BlockStats b;
        for (std::uint64_t i = begin; i < end; ++i)
        {
            const double g_e = eav ? sample_snr(ge, *eav, rng_e.uniform(i)) : ge;
            const double g_l = sample_snr(gl, legit, rng_l.uniform(i));
            const double cs = secrecy::secrecy_capacity_sample(g_l, g_e);
            b.sum += cs;
            b.sum_sq += cs * cs;
        }
        return b;
    };
    const BlockStats s = run_blocks(cfg.samples, cfg.workers, kernel);
    return normal_interval(s, cfg.samples, cfg.ci_level);
}

McEstimate mc_second_moment(const ew::EWParams& p, const McConfig& cfg)
{
    cfg.validate();
    p.validate();
    const CounterRng rng(cfg.seed, kStreamLegit);
    auto kernel = [&](std::uint64_t begin, std::uint64_t end) {
        BlockStats b;
        for (std::uint64_t i = begin; i < end; ++i)
        {
            const double g = sample_snr(1.0, p, rng.uniform(i));
            b.sum += g;
            b.sum_sq += g * g;
        }
        return b;
    };
    const BlockStats s = run_blocks(cfg.samples, cfg.workers, kernel);
    return normal_interval(s, cfg.samples, cfg.ci_level);
}

}  // namespace fsosec::mc
