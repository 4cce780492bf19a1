#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace demis {

// Thrown for malformed inputs and contract violations; the CLI maps it to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-length binary word. Character j of the string form corresponds to
/// bit/site/vertex index j.
class Bitstring {
  public:
    Bitstring() = default;

    static Bitstring zeros(std::size_t n) {
        Bitstring b;
        b.size_ = n;
        b.words_.assign(word_count(n), 0);
        return b;
    }

    static Bitstring from_string(std::string_view s) {
        Bitstring b = zeros(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') {
                b.set(i, true);
            } else if (s[i] != '0') {
                throw ValidationError("bitstring may contain only '0'/'1', got '" +
                                      std::string(1, s[i]) + "' at index " + std::to_string(i));
            }
        }
        return b;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i) {
            if (get(i)) s[i] = '1';
        }
        return s;
    }

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool v) {
        if (v)
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t weight() const {
        std::size_t w = 0;
        for (std::uint64_t x : words_) w += static_cast<std::size_t>(std::popcount(x));
        return w;
    }

    bool any() const {
        for (std::uint64_t x : words_)
            if (x) return true;
        return false;
    }

    /// True iff this and other share a set bit. Sizes must match.
    bool intersects(const Bitstring& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    Bitstring operator^(const Bitstring& other) const {
        require_same_size(other, "xor");
        Bitstring r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] ^= other.words_[i];
        return r;
    }

    bool operator==(const Bitstring& other) const {
        return size_ == other.size_ && words_ == other.words_;
    }
    bool operator!=(const Bitstring& other) const { return !(*this == other); }

    /// Calls f(i) for every set bit, ascending.
    template <class F>
    void for_each_set_bit(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t x = words_[w];
            while (x) {
                f((w << 6) + static_cast<std::size_t>(std::countr_zero(x)));
                x &= x - 1;
            }
        }
    }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& mutable_words() { return words_; }

    /// String-lexicographic comparison of the "0101..." forms ('0' < '1').
    static bool lex_less(const Bitstring& a, const Bitstring& b) {
        for (std::size_t i = 0; i < a.size_ && i < b.size_; ++i) {
            bool x = a.get(i), y = b.get(i);
            if (x != y) return !x;
        }
        return a.size_ < b.size_;
    }

  private:
    static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

    void require_same_size(const Bitstring& other, const char* what) const {
        if (size_ != other.size_)
            throw ValidationError(std::string(what) + ": length mismatch (" +
                                  std::to_string(size_) + " vs " + std::to_string(other.size_) +
                                  ")");
    }

    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

inline std::size_t hamming_distance(const Bitstring& a, const Bitstring& b) {
    if (a.size() != b.size())
        throw ValidationError("hamming_distance: length mismatch (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.words().size(); ++i)
        d += static_cast<std::size_t>(std::popcount(a.words()[i] ^ b.words()[i]));
    return d;
}

}  // namespace demis
