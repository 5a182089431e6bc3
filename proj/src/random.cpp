#include "gtsim/random.hpp"

#include <stdexcept>

namespace gtsim {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::uint64_t device, StreamKind kind)
{
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ (device + 1) * 0xd1b54a32d192ed03ULL);
    s = splitmix64(s ^ static_cast<std::uint64_t>(kind));
    return RandomStream(s);
}

double RandomStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::below(std::uint64_t bound)
{
    if (bound == 0) {
        throw std::invalid_argument("empty range");
    }
    // rejection keeps the draw unbiased
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % bound;
}

double RandomStream::normal(double mean, double stddev)
{
    return mean + stddev * normal_(engine_);
}

} // namespace gtsim
