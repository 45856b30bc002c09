#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace vflite {

/// Fixed-capacity bitset sized at construction. Cheaper than std::vector<bool>
/// for the union/intersection passes the contribution analysis runs in bulk.
class DynBitset {
public:
  DynBitset() = default;
  explicit DynBitset(std::size_t nbits)
      : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return nbits_; }

  bool operator==(const DynBitset &) const = default;

  void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  void reset(std::size_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  /// this |= other; returns true when any bit changed.
  bool orWith(const DynBitset &other) {
    bool changed = false;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t nv = words_[w] | other.words_[w];
      if (nv != words_[w]) {
        words_[w] = nv;
        changed = true;
      }
    }
    return changed;
  }

  void andWith(const DynBitset &other) {
    for (std::size_t w = 0; w < words_.size(); ++w)
      words_[w] &= other.words_[w];
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_)
      n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w)
        return true;
    return false;
  }

  /// Ascending indices of set bits.
  std::vector<std::uint32_t> toVector() const {
    std::vector<std::uint32_t> out;
    out.reserve(count());
    for (std::size_t i = 0; i < nbits_; ++i)
      if (test(i))
        out.push_back(static_cast<std::uint32_t>(i));
    return out;
  }

private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

/// FNV-1a over raw bytes; used to fingerprint program text so reports built
/// from different runs can refuse to mix inputs.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Shell-style glob over display names: '*' any run, '?' any single char.
bool globMatch(std::string_view pattern, std::string_view text);

} // namespace vflite
