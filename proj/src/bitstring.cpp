#include "pcgen/bitstring.hpp"

#include <stdexcept>

namespace pcgen {

BitString BitString::parse(const std::string &s) {
    BitString out;
    out.bits_.reserve(s.size());
    for (char c : s) {
        if (c == '0')
            out.bits_.push_back(0);
        else if (c == '1')
            out.bits_.push_back(1);
        else
            throw std::invalid_argument("BitString::parse: bad character");
    }
    return out;
}

BitString BitString::from_index(uint64_t value, int width) {
    if (width < 0 || width > 64)
        throw std::invalid_argument("BitString::from_index: width out of range");
    BitString out(static_cast<size_t>(width));
    for (int i = 0; i < width; ++i)
        out.bits_[i] = static_cast<uint8_t>((value >> (width - 1 - i)) & 1);
    return out;
}

static int hex_digit(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

BitString BitString::from_hex(const std::string &hex, size_t len) {
    if (hex.size() * 4 < len)
        throw std::invalid_argument("BitString::from_hex: hex too short for requested length");
    BitString out(len);
    for (size_t i = 0; i < len; ++i) {
        int d = hex_digit(hex[i / 4]);
        if (d < 0)
            throw std::invalid_argument("BitString::from_hex: bad hex digit");
        out.bits_[i] = static_cast<uint8_t>((d >> (3 - i % 4)) & 1);
    }
    return out;
}

void BitString::append(const BitString &other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::slice(size_t pos, size_t len) const {
    if (pos + len > bits_.size())
        throw std::out_of_range("BitString::slice: out of range");
    BitString out(len);
    for (size_t i = 0; i < len; ++i)
        out.bits_[i] = bits_[pos + i];
    return out;
}

uint64_t BitString::to_index() const {
    if (bits_.size() > 64)
        throw std::invalid_argument("BitString::to_index: longer than 64 bits");
    uint64_t v = 0;
    for (uint8_t b : bits_)
        v = (v << 1) | b;
    return v;
}

uint8_t BitString::parity() const {
    uint8_t p = 0;
    for (uint8_t b : bits_)
        p ^= b;
    return p;
}

size_t BitString::count_ones() const {
    size_t n = 0;
    for (uint8_t b : bits_)
        n += b;
    return n;
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (uint8_t b : bits_)
        s.push_back(b ? '1' : '0');
    return s;
}

std::string BitString::to_hex() const {
    static const char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve((bits_.size() + 3) / 4);
    for (size_t i = 0; i < bits_.size(); i += 4) {
        int d = 0;
        for (size_t j = 0; j < 4; ++j) {
            d <<= 1;
            if (i + j < bits_.size())
                d |= bits_[i + j];
        }
        s.push_back(digits[d]);
    }
    return s;
}

BitString operator+(const BitString &a, const BitString &b) {
    BitString out = a;
    out.append(b);
    return out;
}

int ceil_log2(uint64_t x) {
    if (x == 0)
        throw std::invalid_argument("ceil_log2(0)");
    int w = 0;
    while (w < 64 && (uint64_t(1) << w) < x)
        ++w;
    return w;
}

} // namespace pcgen
