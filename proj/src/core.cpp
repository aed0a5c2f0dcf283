#include "negadrift/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace negadrift {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    // splitmix64 over (master, index); two rounds so nearby indices decorrelate.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(master) ^ (index * 0xd1342543de82ef95ULL + 1));
}

BitString::BitString(std::size_t n, bool value)
    : n_(n), words_((n + kWordBits - 1) / kWordBits, value ? ~Word{0} : Word{0}) {
    clear_padding();
}

BitString BitString::from_string(std::string_view bits) {
    BitString x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
        x.set(i, bits[i] == '1');
    }
    return x;
}

BitString BitString::random(std::size_t n, Rng& rng) {
    BitString x(n);
    for (auto& w : x.words_) {
        w = rng();
    }
    x.clear_padding();
    return x;
}

void BitString::set(std::size_t i, bool value) noexcept {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
        words_[i / kWordBits] |= mask;
    } else {
        words_[i / kWordBits] &= ~mask;
    }
}

void BitString::flip_all() noexcept {
    for (auto& w : words_) {
        w = ~w;
    }
    clear_padding();
}

std::size_t BitString::count() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) {
        c += static_cast<std::size_t>(std::popcount(w));
    }
    return c;
}

std::string BitString::to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) {
        if ((*this)[i]) {
            s[i] = '1';
        }
    }
    return s;
}

void BitString::clear_padding() noexcept {
    const std::size_t tail = n_ % kWordBits;
    if (tail != 0 && !words_.empty()) {
        words_.back() &= (Word{1} << tail) - 1;
    }
}

BitString complement(BitString x) {
    x.flip_all();
    return x;
}

std::size_t hamming(const BitString& x, const BitString& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("hamming: length mismatch");
    }
    std::size_t d = 0;
    const auto xw = x.words();
    const auto yw = y.words();
    for (std::size_t i = 0; i < xw.size(); ++i) {
        d += static_cast<std::size_t>(std::popcount(xw[i] ^ yw[i]));
    }
    return d;
}

std::size_t onemax(const BitString& x) noexcept { return x.count(); }

Population::Population(std::vector<BitString> members) : members_(std::move(members)) {
    for (const auto& m : members_) {
        if (m.size() != members_.front().size()) {
            throw std::invalid_argument("population members must share one length");
        }
    }
}

PotentialSpec::PotentialSpec(BitString target) : target_(std::move(target)) {}

PotentialSpec::PotentialSpec(BitString target, Rule rule)
    : target_(std::move(target)), rule_(std::move(rule)) {}

std::size_t PotentialSpec::operator()(const BitString& x) const {
    return rule_ ? rule_(x) : hamming(x, target_);
}

std::vector<std::size_t> potentials(const Population& population, const PotentialSpec& g) {
    std::vector<std::size_t> out;
    out.reserve(population.lambda());
    for (const auto& x : population) {
        out.push_back(g(x));
    }
    return out;
}

double log_potential(std::span<const std::size_t> potentials, double kappa) {
    if (potentials.empty()) {
        throw std::invalid_argument("population_potential: empty population");
    }
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("population_potential: kappa must be positive");
    }
    // The largest term is exp(-kappa * min g); factor it out.
    const auto g_min = *std::min_element(potentials.begin(), potentials.end());
    double sum = 0.0;
    for (auto g : potentials) {
        sum += std::exp(-kappa * static_cast<double>(g - g_min));
    }
    return -kappa * static_cast<double>(g_min) + std::log(sum);
}

double population_potential(const Population& population, double kappa, const PotentialSpec& g) {
    const auto values = potentials(population, g);
    return log_potential(values, kappa);
}

}  // namespace negadrift
