#ifndef PENCIL_TESTS_SUPPORT_HPP
#define PENCIL_TESTS_SUPPORT_HPP

#include <ostream>
#include <random>
#include <vector>

#include <pencil/pencil.hpp>

namespace pencil::testing
{

inline rational random_rational(std::mt19937 &gen, int range = 9)
{
    std::uniform_int_distribution<int> num(-range, range), den(1, range);
    return rational(num(gen), den(gen));
}

inline rational_series random_series(std::mt19937 &gen, std::size_t order, std::size_t min_valuation = 0)
{
    std::vector<rational> c(order + 1, rational(0));
    for (std::size_t i = min_valuation; i <= order; ++i) {
        c[i] = random_rational(gen);
    }
    return rational_series(std::move(c));
}

// Nonzero polynomial with P(0) = 0 and degree <= max_degree.
inline rational_polynomial random_polynomial(std::mt19937 &gen, std::size_t max_degree)
{
    std::uniform_int_distribution<std::size_t> deg(1, max_degree);
    std::vector<rational> c(deg(gen) + 1, rational(0));
    for (std::size_t i = 1; i < c.size(); ++i) {
        c[i] = random_rational(gen);
    }
    if (c.back() == 0) {
        c.back() = 1;
    }
    return rational_polynomial(std::move(c));
}

inline rational_series rseries(std::initializer_list<long> coeffs)
{
    std::vector<rational> c;
    for (long a : coeffs) {
        c.emplace_back(a);
    }
    return rational_series(std::move(c));
}

} // namespace pencil::testing

namespace pencil
{

template <coefficient R>
void PrintTo(const truncated_series<R> &s, std::ostream *os)
{
    *os << to_string(s) << " [order " << s.order() << "]";
}

} // namespace pencil

#endif
