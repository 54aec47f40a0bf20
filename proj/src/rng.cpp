#include "r1nes/rng.hpp"

namespace r1nes {

Rng::Rng(std::uint64_t seed)
    : seed_(seed)
    , engine_(mix64(seed))
{
}

double Rng::normal()
{
    return normal_(engine_);
}

double Rng::uniform(double lo, double hi)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(engine_);
}

void Rng::fill_normal(Eigen::Ref<Vector> out)
{
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = normal_(engine_);
}

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index)
{
    return mix64(mix64(parent) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label)
{
    // FNV-1a over the label, then mixed with the parent.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : label) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return derive_seed(parent, h);
}

} // namespace r1nes
