#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pcgen {

// Finite 0/1 sequence with explicit length. Position 0 is the leftmost bit.
class BitString {
  public:
    BitString() = default;
    explicit BitString(size_t len) : bits_(len, 0) {}
    BitString(size_t len, uint8_t fill) : bits_(len, fill ? 1 : 0) {}

    // From a literal like "0101".
    static BitString parse(const std::string &s);

    // The w-bit big-endian representation of value (bit 0 is the MSB).
    static BitString from_index(uint64_t value, int width);

    // Decode hex, MSB-first per digit, truncated to len bits.
    static BitString from_hex(const std::string &hex, size_t len);

    size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    uint8_t operator[](size_t i) const { return bits_[i]; }
    void set(size_t i, uint8_t b) { bits_[i] = b ? 1 : 0; }

    void push_back(uint8_t b) { bits_.push_back(b ? 1 : 0); }
    void append(const BitString &other);
    BitString slice(size_t pos, size_t len) const;

    // Big-endian numeric value; requires size() <= 64.
    uint64_t to_index() const;

    uint8_t parity() const;
    size_t count_ones() const;

    std::string to_string() const;
    std::string to_hex() const;

    bool operator==(const BitString &o) const { return bits_ == o.bits_; }
    bool operator!=(const BitString &o) const { return bits_ != o.bits_; }
    bool operator<(const BitString &o) const { return bits_ < o.bits_; }

  private:
    std::vector<uint8_t> bits_;
};

BitString operator+(const BitString &a, const BitString &b);

// Smallest w with 2^w >= x, for x >= 1.  (ceil(log2 x), with ceil_log2(1) = 0.)
int ceil_log2(uint64_t x);

} // namespace pcgen
