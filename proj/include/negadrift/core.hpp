#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace negadrift {

/// Random stream used by every stochastic routine.
using Rng = std::mt19937_64;

/// Seed of replicate `index` under `master`. Independent of execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Fixed-length bit string, packed into 64-bit words.
class BitString {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitString() = default;
    explicit BitString(std::size_t n, bool value = false);

    /// Parses a string of '0'/'1' characters, most significant position first.
    static BitString from_string(std::string_view bits);
    static BitString random(std::size_t n, Rng& rng);

    std::size_t size() const noexcept { return n_; }
    bool operator[](std::size_t i) const noexcept {
        return (words_[i / kWordBits] >> (i % kWordBits)) & Word{1};
    }
    void set(std::size_t i, bool value) noexcept;
    void flip(std::size_t i) noexcept { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
    void flip_all() noexcept;

    std::size_t count() const noexcept;
    std::span<const Word> words() const noexcept { return words_; }
    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    void clear_padding() noexcept;

    std::size_t n_ = 0;
    std::vector<Word> words_;
};

BitString complement(BitString x);

/// Number of positions where x and y differ. Throws on length mismatch.
std::size_t hamming(const BitString& x, const BitString& y);

std::size_t onemax(const BitString& x) noexcept;

/// Ordered lambda-tuple of equal-length bit strings.
class Population {
public:
    Population() = default;
    explicit Population(std::vector<BitString> members);

    std::size_t lambda() const noexcept { return members_.size(); }
    std::size_t length() const noexcept { return members_.empty() ? 0 : members_.front().size(); }
    bool empty() const noexcept { return members_.empty(); }

    const BitString& operator[](std::size_t i) const { return members_[i]; }
    const std::vector<BitString>& members() const noexcept { return members_; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    friend bool operator==(const Population&, const Population&) = default;

private:
    std::vector<BitString> members_;
};

/// Potential g: Hamming distance to a target, or a caller-supplied rule.
class PotentialSpec {
public:
    using Rule = std::function<std::size_t(const BitString&)>;

    explicit PotentialSpec(BitString target);
    PotentialSpec(BitString target, Rule rule);

    static PotentialSpec all_ones(std::size_t n) { return PotentialSpec(BitString(n, true)); }

    const BitString& target() const noexcept { return target_; }
    std::size_t operator()(const BitString& x) const;

private:
    BitString target_;
    Rule rule_;
};

/// ln sum_i exp(-kappa * g(P_i)), accumulated with a max shift.
double population_potential(const Population& population, double kappa, const PotentialSpec& g);

/// Same, from precomputed potentials.
double log_potential(std::span<const std::size_t> potentials, double kappa);

std::vector<std::size_t> potentials(const Population& population, const PotentialSpec& g);

}  // namespace negadrift
