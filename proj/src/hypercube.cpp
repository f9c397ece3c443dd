#include "disttest/hypercube.hpp"

#include <bit>
#include <stdexcept>

namespace disttest {

namespace {

void check_dimension(int n) {
    if (n < 1 || n > kMaxPointDim)
        throw std::invalid_argument("dimension out of range [1,64]");
}

void check_coordinate(int n, int i) {
    if (i < 1 || i > n) throw std::invalid_argument("coordinate out of range");
}

}  // namespace

Point::Point(int n, std::uint64_t word) : n_(n), word_(word) {
    check_dimension(n);
    if (n < 64 && (word >> n) != 0)
        throw std::invalid_argument("point word has bits beyond the dimension");
}

Point Point::from_string(const std::string& bits) {
    const int n = static_cast<int>(bits.size());
    check_dimension(n);
    std::uint64_t word = 0;
    for (int i = 0; i < n; ++i) {
        if (bits[i] == '1')
            word |= (1ULL << i);
        else if (bits[i] != '0')
            throw std::invalid_argument("point string must be over {0,1}");
    }
    return Point(n, word);
}

int Point::get(int i) const {
    check_coordinate(n_, i);
    return (word_ >> (i - 1)) & 1 ? +1 : -1;
}

Point Point::with(int i, int value) const {
    check_coordinate(n_, i);
    std::uint64_t w = word_;
    if (value > 0)
        w |= (1ULL << (i - 1));
    else
        w &= ~(1ULL << (i - 1));
    return Point(n_, w);
}

int Point::ones() const { return std::popcount(word_); }

std::string Point::to_string() const {
    std::string s(n_, '0');
    for (int i = 0; i < n_; ++i)
        if ((word_ >> i) & 1) s[i] = '1';
    return s;
}

Point flip(const Point& x, int i) {
    check_coordinate(x.dimension(), i);
    return Point(x.dimension(), x.index() ^ (1ULL << (i - 1)));
}

bool leq(const Point& x, const Point& y) {
    if (x.dimension() != y.dimension())
        throw std::invalid_argument("leq: dimension mismatch");
    // x <= y coordinate-wise iff every +1 of x is a +1 of y.
    return (x.index() & ~y.index()) == 0;
}

Restriction::Restriction(int n, std::uint64_t fixed_mask, std::uint64_t value_word)
    : n_(n), fixed_(fixed_mask), value_(value_word & fixed_mask) {
    check_dimension(n);
    if (n < 64 && (fixed_mask >> n) != 0)
        throw std::invalid_argument("restriction mask has bits beyond the dimension");
}

Restriction Restriction::all_stars(int n) { return Restriction(n, 0, 0); }

Restriction Restriction::edge(const Point& x, int i) {
    check_coordinate(x.dimension(), i);
    const std::uint64_t free_bit = 1ULL << (i - 1);
    const std::uint64_t mask =
        (x.dimension() == 64 ? ~0ULL : (1ULL << x.dimension()) - 1) & ~free_bit;
    return Restriction(x.dimension(), mask, x.index());
}

Restriction Restriction::from_string(const std::string& pattern) {
    const int n = static_cast<int>(pattern.size());
    check_dimension(n);
    std::uint64_t fixed = 0, value = 0;
    for (int i = 0; i < n; ++i) {
        switch (pattern[i]) {
            case '*': break;
            case '1': value |= (1ULL << i); [[fallthrough]];
            case '0': fixed |= (1ULL << i); break;
            default: throw std::invalid_argument("restriction string must be over {0,1,*}");
        }
    }
    return Restriction(n, fixed, value);
}

int Restriction::star_count() const {
    const std::uint64_t all = n_ == 64 ? ~0ULL : (1ULL << n_) - 1;
    return std::popcount(all & ~fixed_);
}

std::vector<int> Restriction::star_coordinates() const {
    std::vector<int> stars;
    stars.reserve(star_count());
    for (int i = 1; i <= n_; ++i)
        if (!is_fixed(i)) stars.push_back(i);
    return stars;
}

bool Restriction::is_fixed(int i) const {
    check_coordinate(n_, i);
    return (fixed_ >> (i - 1)) & 1;
}

int Restriction::fixed_value(int i) const {
    if (!is_fixed(i)) throw std::invalid_argument("coordinate is a star");
    return (value_ >> (i - 1)) & 1 ? +1 : -1;
}

Point Restriction::apply(std::uint64_t completion) const {
    std::uint64_t word = value_;
    int bit = 0;
    for (int i = 1; i <= n_; ++i) {
        if (!is_fixed(i)) {
            if ((completion >> bit) & 1) word |= (1ULL << (i - 1));
            ++bit;
        }
    }
    if ((completion >> bit) != 0)
        throw std::invalid_argument("completion has bits beyond the star count");
    return Point(n_, word);
}

bool Restriction::consistent_with(const Point& x) const {
    if (x.dimension() != n_) return false;
    return ((x.index() ^ value_) & fixed_) == 0;
}

std::uint64_t Restriction::completion_of(const Point& x) const {
    if (x.dimension() != n_)
        throw std::invalid_argument("completion_of: dimension mismatch");
    std::uint64_t c = 0;
    int bit = 0;
    for (int i = 1; i <= n_; ++i) {
        if (!is_fixed(i)) {
            if ((x.index() >> (i - 1)) & 1) c |= (1ULL << bit);
            ++bit;
        }
    }
    return c;
}

std::string Restriction::to_string() const {
    std::string s(n_, '*');
    for (int i = 0; i < n_; ++i)
        if ((fixed_ >> i) & 1) s[i] = ((value_ >> i) & 1) ? '1' : '0';
    return s;
}

ChainMatching::ChainMatching(int m) : m_(m) {
    if (m < 1 || m > 24)
        throw std::invalid_argument("chain_matching: dimension out of range [1,24]");
    const std::uint64_t size = 1ULL << m;
    sigma_.resize(size);
    std::vector<int> open_stack;
    std::vector<int> unmatched;
    open_stack.reserve(m);
    unmatched.reserve(m);
    for (std::uint64_t z = 0; z < size; ++z) {
        open_stack.clear();
        unmatched.clear();
        // Bracket matching: -1 (bit 0) opens, +1 (bit 1) closes; a close pairs
        // with the nearest open to its left. Unmatched closes precede
        // unmatched opens, so the unmatched pattern is 1^j 0^(k-j).
        for (int pos = 0; pos < m; ++pos) {
            if ((z >> pos) & 1) {
                if (open_stack.empty())
                    unmatched.push_back(pos);  // unmatched close (+1)
                else
                    open_stack.pop_back();
            } else {
                open_stack.push_back(pos);
            }
        }
        int j = static_cast<int>(unmatched.size());  // unmatched +1s
        for (int pos : open_stack) unmatched.push_back(pos);  // unmatched -1s
        const int k = static_cast<int>(unmatched.size());
        // Partner on the same chain: k - j unmatched positions set to +1,
        // ones-first, which swaps levels (m-k)/2 + j and (m-k)/2 + (k-j).
        std::uint64_t w = z;
        for (int t = 0; t < k; ++t) {
            if (t < k - j)
                w |= (1ULL << unmatched[t]);
            else
                w &= ~(1ULL << unmatched[t]);
        }
        sigma_[z] = static_cast<std::uint32_t>(w);
    }
}

std::uint64_t ChainMatching::sigma(std::uint64_t z) const {
    if (z >= sigma_.size()) throw std::invalid_argument("sigma: point out of range");
    return sigma_[z];
}

Point ChainMatching::sigma(const Point& z) const {
    if (z.dimension() != m_) throw std::invalid_argument("sigma: dimension mismatch");
    return Point(m_, sigma(z.index()));
}

ChainMatching chain_matching(int m) { return ChainMatching(m); }

}  // namespace disttest
