#pragma once

// Points, restrictions and the symmetric chain matching of the n-cube.
//
// A point of {-1,+1}^n is stored as a bit word: bit i-1 set means
// coordinate i equals +1. That makes the canonical integer encoding
// index(x) = sum over {i : x_i = +1} of 2^(i-1) literally the word itself
// (coordinate 1 is the least significant bit), which the file formats rely
// on. Coordinates are 1-indexed throughout.

#include <cstdint>
#include <string>
#include <vector>

namespace disttest {

inline constexpr int kMaxPointDim = 64;

class Point {
  public:
    Point(int n, std::uint64_t word);

    // Parse from a string over {0,1}; character k-1 is coordinate k.
    static Point from_string(const std::string& bits);

    int dimension() const { return n_; }
    std::uint64_t index() const { return word_; }

    // Coordinate value in {-1,+1}; i is 1-based.
    int get(int i) const;
    Point with(int i, int value) const;  // copy with coordinate i forced to value

    // Number of +1 coordinates.
    int ones() const;

    std::string to_string() const;

    friend bool operator==(const Point& a, const Point& b) = default;

  private:
    int n_;
    std::uint64_t word_;
};

Point flip(const Point& x, int i);
bool leq(const Point& x, const Point& y);

class Restriction {
  public:
    // A subcube: fixed coordinates carry a value, the rest are stars.
    Restriction(int n, std::uint64_t fixed_mask, std::uint64_t value_word);

    static Restriction all_stars(int n);
    // One-dimensional subcube around x: everything fixed except coordinate i.
    static Restriction edge(const Point& x, int i);
    // Parse from a string over {0,1,*}.
    static Restriction from_string(const std::string& pattern);

    int dimension() const { return n_; }
    std::uint64_t fixed_mask() const { return fixed_; }
    std::uint64_t fixed_values() const { return value_; }
    int star_count() const;
    std::vector<int> star_coordinates() const;  // increasing

    bool is_fixed(int i) const;
    int fixed_value(int i) const;  // requires is_fixed(i)

    // Completion c assigns {-1,+1}^stars by its canonical encoding over the
    // star coordinates in increasing order; returns the full point.
    Point apply(std::uint64_t completion) const;
    bool consistent_with(const Point& x) const;
    // Encoding of x's star coordinates (increasing order), i.e. apply's inverse.
    std::uint64_t completion_of(const Point& x) const;

    std::string to_string() const;

    friend bool operator==(const Restriction& a, const Restriction& b) = default;

  private:
    int n_;
    std::uint64_t fixed_;
    std::uint64_t value_;
};

// Matching from the symmetric chain decomposition of {-1,+1}^m (the
// de Bruijn-Tengbergen-Kruyswijk chains, realized by bracket matching:
// -1 opens, +1 closes; the unmatched positions of a word always read as a
// run of +1s followed by a run of -1s, and the chain through the word
// varies exactly those positions). sigma pairs the element at level
// m/2 - r of each chain with the element at level m/2 + r, so it is an
// involution with z <= sigma(z) whenever |z| <= m/2.
class ChainMatching {
  public:
    explicit ChainMatching(int m);

    int dimension() const { return m_; }
    std::uint64_t sigma(std::uint64_t z) const;
    Point sigma(const Point& z) const;

  private:
    int m_;
    std::vector<std::uint32_t> sigma_;
};

ChainMatching chain_matching(int m);

}  // namespace disttest
