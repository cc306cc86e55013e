#pragma once

#include "mbhalton/characteristic.hpp"
#include "mbhalton/wide.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbhalton {

using Digit = std::uint8_t;

/// Greedy m-bonacci digits, little-endian: digits[j] multiplies F_j.
/// Trailing (most significant) zeros are trimmed, so 0 has no digits.
struct Expansion
{
    std::vector<Digit> digits;

    /// Digit at index j; zero outside the stored range (including j < 0).
    Digit at(long j) const
    {
        if (j < 0 || static_cast<std::size_t>(j) >= digits.size())
            return 0;
        return digits[static_cast<std::size_t>(j)];
    }

    std::size_t size() const { return digits.size(); }

    bool operator==(const Expansion&) const = default;
};

/// True iff every digit is 0/1 and no run of m consecutive ones occurs.
inline bool is_admissible(int m, std::span<const Digit> digits)
{
    if (m < 2)
        throw std::invalid_argument("is_admissible: m must be >= 2");
    int run = 0;
    for (Digit d : digits) {
        if (d > 1)
            throw std::invalid_argument("is_admissible: non-binary digit " + std::to_string(int(d)));
        run = d ? run + 1 : 0;
        if (run >= m)
            return false;
    }
    return true;
}

/// Length r of the block of ones ending just below position k, i.e.
/// e_{k-1} = ... = e_{k-r} = 1 and e_{k-r-1} = 0. For admissible input r < m.
inline int trailing_ones_before(const Expansion& e, long k)
{
    int r = 0;
    for (long j = k - 1; j >= 0 && e.at(j) == 1; --j)
        ++r;
    return r;
}

/// Length of the block of ones starting at position k (e_k = ... = 1).
inline int ones_run_from(const Expansion& e, long k)
{
    int r = 0;
    for (long j = k; j < static_cast<long>(e.size()) && e.at(j) == 1; ++j)
        ++r;
    return r;
}

/// Numeration context for one m: exact basis terms F_0..F_K with F_K > max_n,
/// the m-bonacci number phi at extended precision, and power tables.
/// Immutable after construction.
class MBonacciSystem
{
  public:
    MBonacciSystem(int m, std::uint64_t max_n, double precision = default_root_precision)
        : m_(m)
    {
        if (m < 2)
            throw std::invalid_argument("MBonacciSystem: m must be >= 2, got " + std::to_string(m));
        if (max_n < 1)
            throw std::invalid_argument("MBonacciSystem: max_n must be >= 1");

        // F_k = 2^k for k < m, then F_k = F_{k-1} + ... + F_{k-m}
        for (std::size_t k = 0;; ++k) {
            std::uint64_t term = 0;
            if (k < static_cast<std::size_t>(m)) {
                if (k >= 64)
                    throw std::overflow_error("MBonacciSystem: basis exceeds 64-bit range");
                term = std::uint64_t{1} << k;
            } else {
                for (std::size_t j = k - m; j < k; ++j)
                    if (__builtin_add_overflow(term, basis_[j], &term))
                        throw std::overflow_error("MBonacciSystem: basis term F_" + std::to_string(k) +
                                                  " exceeds 64-bit range; max_n too large");
            }
            basis_.push_back(term);
            if (term > max_n)
                break;
        }

        phi_ = dominant_root(m, precision);
        const std::size_t K = basis_.size();
        // powers up to K + m cover mu_k, interval ends and level-k measures
        neg_powers_.resize(K + m + 2);
        pos_powers_.resize(K + m + 2);
        neg_powers_[0] = pos_powers_[0] = 1;
        const wide_real inv = 1 / phi_;
        for (std::size_t k = 1; k < neg_powers_.size(); ++k) {
            neg_powers_[k] = neg_powers_[k - 1] * inv;
            pos_powers_[k] = pos_powers_[k - 1] * phi_;
        }
    }

    int m() const { return m_; }

    std::span<const std::uint64_t> basis() const { return basis_; }
    std::uint64_t term(std::size_t k) const { return basis_.at(k); }
    std::size_t terms() const { return basis_.size(); }

    /// Every n < coverage() has an expansion with digits below index terms()-1.
    std::uint64_t coverage() const { return basis_.back(); }

    wide_real phi_wide() const { return phi_; }
    double phi() const { return static_cast<double>(phi_); }

    /// phi^{-k}, k in [0, terms() + m + 1].
    wide_real phi_neg_power(std::size_t k) const { return neg_powers_.at(k); }
    /// phi^{k}, same range.
    wide_real phi_power(std::size_t k) const { return pos_powers_.at(k); }
    std::size_t power_table_size() const { return neg_powers_.size(); }

  private:
    int m_;
    std::vector<std::uint64_t> basis_;
    wide_real phi_ = 0;
    std::vector<wide_real> neg_powers_;
    std::vector<wide_real> pos_powers_;
};

inline MBonacciSystem make_system(int m, std::uint64_t max_n, double precision = default_root_precision)
{
    return MBonacciSystem(m, max_n, precision);
}

/// Greedy expansion n = sum e_j F_j.
inline Expansion encode(const MBonacciSystem& sys, std::uint64_t n)
{
    if (n >= sys.coverage())
        throw std::out_of_range("encode: n=" + std::to_string(n) + " exceeds basis coverage " +
                                std::to_string(sys.coverage()));
    Expansion e;
    if (n == 0)
        return e;
    auto basis = sys.basis();
    std::size_t top = basis.size() - 1;
    while (basis[top] > n)
        --top;
    e.digits.assign(top + 1, 0);
    std::uint64_t rest = n;
    for (std::size_t j = top + 1; j-- > 0;) {
        if (basis[j] <= rest) {
            e.digits[j] = 1;
            rest -= basis[j];
        }
    }
    return e;
}

/// Inverse of encode. Rejects inadmissible strings and strings longer than the basis.
inline std::uint64_t decode(const MBonacciSystem& sys, const Expansion& e)
{
    if (!is_admissible(sys.m(), e.digits))
        throw std::invalid_argument("decode: digit string is not admissible for m=" + std::to_string(sys.m()));
    auto basis = sys.basis();
    std::uint64_t n = 0;
    for (std::size_t j = 0; j < e.digits.size(); ++j) {
        if (!e.digits[j])
            continue;
        if (j >= basis.size())
            throw std::out_of_range("decode: digit index beyond basis");
        if (__builtin_add_overflow(n, basis[j], &n))
            throw std::overflow_error("decode: value exceeds 64-bit range");
    }
    return n;
}

/// nu_k = sum_{j<k} e_j F_j, the value of the k lowest digits.
inline std::uint64_t low_digits_value(const MBonacciSystem& sys, const Expansion& e, std::size_t k)
{
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < k && j < e.size(); ++j)
        if (e.digits[j])
            v += sys.term(j);
    return v;
}

/// Digits most-significant-first, e.g. "101" for 4 when m=2; "0" for zero.
inline std::string format_digits(const Expansion& e)
{
    if (e.digits.empty())
        return "0";
    std::string s;
    s.reserve(e.digits.size());
    for (auto it = e.digits.rbegin(); it != e.digits.rend(); ++it)
        s.push_back(static_cast<char>('0' + *it));
    return s;
}

} // namespace mbhalton
