#include "mcprc/quasirandom.hpp"

#include <stdexcept>

namespace mcprc {

namespace {

std::vector<unsigned> first_primes(std::size_t count) {
    std::vector<unsigned> primes;
    unsigned candidate = 2;
    while (primes.size() < count) {
        bool is_prime = true;
        for (unsigned p : primes) {
            if (p * p > candidate) break;
            if (candidate % p == 0) {
                is_prime = false;
                break;
            }
        }
        if (is_prime) primes.push_back(candidate);
        ++candidate;
    }
    return primes;
}

} // namespace

HaltonSequence::HaltonSequence(std::size_t dim) : bases_(first_primes(dim)) {
    if (dim == 0) throw std::invalid_argument("HaltonSequence: dim must be >= 1");
}

std::vector<double> HaltonSequence::point(std::size_t index) const {
    std::vector<double> x(bases_.size());
    for (std::size_t d = 0; d < bases_.size(); ++d) {
        const double base = bases_[d];
        double f = 1.0, value = 0.0;
        for (std::size_t i = index; i > 0; i /= bases_[d]) {
            f /= base;
            value += f * static_cast<double>(i % bases_[d]);
        }
        x[d] = value;
    }
    return x;
}

} // namespace mcprc
