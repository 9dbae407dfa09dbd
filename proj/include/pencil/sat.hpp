#ifndef PENCIL_SAT_HPP
#define PENCIL_SAT_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <pencil/coefficient.hpp>
#include <pencil/curve.hpp>
#include <pencil/error.hpp>
#include <pencil/series.hpp>

namespace pencil
{

template <coefficient R>
struct sat_curve_spec {
    std::vector<truncated_series<R>> H;
    std::vector<polynomial<R>> P;
    std::size_t k = 0;
    std::size_t q = 1;
};

template <coefficient R>
struct sat_curve {
    formal_curve<R> curve;
    std::vector<std::string> warnings;
};

// (x, (T_k H_1)(P_1), ..., (T_k H_n)(P_1), ..., (T_k H_n)(P_l)): grouped by
// the polynomial, the series index running fastest.
template <coefficient R>
sat_curve<R> build_sat_curve(const sat_curve_spec<R> &spec)
{
    if (spec.H.empty() || spec.P.empty()) {
        throw error("a test curve needs at least one series and one polynomial", error_class::usage);
    }
    sat_curve<R> out;
    for (std::size_t j = 0; j < spec.P.size(); ++j) {
        const auto &p = spec.P[j];
        if (p.is_zero()) {
            throw undefined_valuation("P_" + std::to_string(j + 1) + " is the zero polynomial");
        }
        if (!pencil::is_zero(p[0])) {
            throw composition_at_unit("P_" + std::to_string(j + 1) + " has a nonzero constant term");
        }
        const auto qs = q_short_check(p, spec.q);
        if (!qs.is_short) {
            out.warnings.push_back("P_" + std::to_string(j + 1) + " is not " + std::to_string(spec.q) + "-short");
        }
        if (!qs.is_positive) {
            out.warnings.push_back("P_" + std::to_string(j + 1) + " is not positive");
        }
        for (std::size_t i = 0; i < j; ++i) {
            if (spec.P[i] == p) {
                out.warnings.push_back("P_" + std::to_string(i + 1) + " and P_" + std::to_string(j + 1)
                                       + " coincide");
            }
        }
    }
    std::vector<truncated_series<R>> tails;
    for (const auto &h : spec.H) {
        if (h.valuation() == 0) {
            throw nonzero_constant_term("series in a test curve must vanish at 0");
        }
        tails.push_back(tail_T(h, spec.k));
    }
    std::vector<truncated_series<R>> comps;
    for (const auto &p : spec.P) {
        for (const auto &t : tails) {
            comps.push_back(compose(t, p));
        }
    }
    std::size_t n = comps.front().order();
    for (const auto &c : comps) {
        n = std::min(n, c.order());
    }
    std::vector<truncated_series<R>> all{truncated_series<R>::monomial(1, n, R(1))};
    for (auto &c : comps) {
        all.push_back(c.truncated(n));
    }
    out.curve = formal_curve<R>(std::move(all));
    return out;
}

// Exponent tuple of a monomial in the curve components (x, y1, ..., y_{m-1}).
using monomial_exponents = std::vector<unsigned>;

inline std::string variable_label(std::size_t i)
{
    return i == 0 ? "x" : "y" + std::to_string(i);
}

inline std::string monomial_label(const monomial_exponents &e)
{
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) {
            continue;
        }
        if (!s.empty()) {
            s += '*';
        }
        s += variable_label(i);
        if (e[i] > 1) {
            s += '^' + std::to_string(e[i]);
        }
    }
    return s.empty() ? "1" : s;
}

struct relation_basis {
    std::size_t max_degree = 0;
    std::size_t jet_order = 0;
    std::size_t variables = 0;
    std::vector<monomial_exponents> monomials;
    // Each relation: primitive integer coefficients, one per monomial, first
    // nonzero entry positive.
    std::vector<std::vector<integer>> basis;
    // N - M; may be negative.
    long evidence_margin = 0;
    bool transcendence_evidence = false;
    bool verified = false;
    std::vector<std::string> warnings;

    std::size_t monomial_count() const
    {
        return monomials.size();
    }

    std::string relation_text(std::size_t r) const
    {
        std::string s;
        for (std::size_t i = 0; i < monomials.size(); ++i) {
            const auto &c = basis.at(r)[i];
            if (c == 0) {
                continue;
            }
            const bool neg = c < 0;
            const integer mag = neg ? integer(-c) : c;
            const auto mono = monomial_label(monomials[i]);
            std::string term = mag == 1 ? mono : (mono == "1" ? mag.str() : mag.str() + "*" + mono);
            if (s.empty()) {
                s = neg ? "-" + term : term;
            } else {
                s += neg ? " - " + term : " + " + term;
            }
        }
        return s;
    }
};

// All exponent tuples in m variables of total degree <= d, by degree, then
// lexicographically with later variables first.
inline std::vector<monomial_exponents> monomials_up_to(std::size_t m, std::size_t d)
{
    std::vector<monomial_exponents> out;
    for (std::size_t deg = 0; deg <= d; ++deg) {
        std::vector<monomial_exponents> layer;
        monomial_exponents e(m, 0);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
            if (i + 1 == m) {
                e[i] = static_cast<unsigned>(left);
                layer.push_back(e);
                return;
            }
            for (std::size_t a = 0; a <= left; ++a) {
                e[i] = static_cast<unsigned>(a);
                rec(i + 1, left - a);
            }
            e[i] = 0;
        };
        rec(0, deg);
        std::sort(layer.begin(), layer.end(), [](const auto &a, const auto &b) {
            return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend(), std::greater<>());
        });
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

namespace detail
{

// N-jets of every monomial along the curve, sharing powers.
inline std::vector<rational_series> monomial_jets(const formal_curve<rational> &c,
                                                  const std::vector<monomial_exponents> &monos, std::size_t N,
                                                  std::size_t d)
{
    std::vector<std::vector<rational_series>> powers(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const auto base = c[i].truncated(N);
        powers[i].push_back(rational_series::one(N));
        for (std::size_t a = 1; a <= d; ++a) {
            powers[i].push_back(powers[i].back() * base);
        }
    }
    std::vector<rational_series> jets;
    for (const auto &e : monos) {
        auto s = rational_series::one(N);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] > 0) {
                s = s * powers[i][e[i]];
            }
        }
        jets.push_back(std::move(s));
    }
    return jets;
}

// Basis of the rational kernel of an integer matrix (rows x cols) through
// fraction-free (Bareiss) elimination; vectors are primitive integer with
// the first nonzero entry positive.
inline std::vector<std::vector<integer>> integer_kernel(std::vector<std::vector<integer>> a, std::size_t cols)
{
    const std::size_t rows = a.size();
    std::vector<std::size_t> pivot_cols;
    integer prev(1);
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t p = r;
        while (p < rows && a[p][col] == 0) {
            ++p;
        }
        if (p == rows) {
            continue;
        }
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) / prev;
            }
            a[i][col] = 0;
        }
        prev = a[r][col];
        pivot_cols.push_back(col);
        ++r;
    }
    // Back substitution over Q for each free column.
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) {
        is_pivot[c] = true;
    }
    std::vector<std::vector<integer>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        std::vector<rational> v(cols, rational(0));
        v[f] = 1;
        for (std::size_t pi = pivot_cols.size(); pi-- > 0;) {
            const std::size_t pc = pivot_cols[pi];
            rational s(0);
            for (std::size_t j = pc + 1; j < cols; ++j) {
                if (v[j] != 0 && a[pi][j] != 0) {
                    s += rational(a[pi][j]) * v[j];
                }
            }
            v[pc] = -s / rational(a[pi][pc]);
        }
        integer l(1);
        for (const auto &q : v) {
            l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(q));
        }
        std::vector<integer> iv;
        integer g(0);
        for (const auto &q : v) {
            iv.push_back(boost::multiprecision::numerator(q) * (l / boost::multiprecision::denominator(q)));
            g = boost::multiprecision::gcd(g, iv.back());
        }
        const auto first = std::find_if(iv.begin(), iv.end(), [](const integer &z) { return z != 0; });
        if (first != iv.end() && *first < 0) {
            g = -g;
        }
        for (auto &z : iv) {
            z /= g;
        }
        basis.push_back(std::move(iv));
    }
    return basis;
}

} // namespace detail

// f(c(x)) as an N-jet for f given by coefficients over `monos`.
inline rational_series evaluate_relation(const formal_curve<rational> &c, const std::vector<monomial_exponents> &monos,
                                         const std::vector<integer> &coeffs, std::size_t N, std::size_t d)
{
    const auto jets = detail::monomial_jets(c, monos, N, d);
    auto s = rational_series::zero(N);
    for (std::size_t i = 0; i < monos.size(); ++i) {
        if (coeffs[i] != 0) {
            s = s + scale(jets[i], rational(coeffs[i]));
        }
    }
    return s;
}

// Polynomial relations of total degree <= d satisfied by the N-jet of c.
// A trivial kernel with N >= 2M is reported as transcendence evidence at
// degree d (evidence only: the search is finite).
template <coefficient R>
relation_basis relation_search(const formal_curve<R> &c, std::size_t d, std::size_t N)
{
    if constexpr (!is_exact_v<R>) {
        throw exactness_required("relation search needs exact rational coefficients");
    } else {
        if (N > c.order()) {
            throw order_exceeded("jet order " + std::to_string(N) + " exceeds curve order "
                                 + std::to_string(c.order()));
        }
        relation_basis rb;
        rb.max_degree = d;
        rb.jet_order = N;
        rb.variables = c.dim();
        rb.monomials = monomials_up_to(c.dim(), d);
        const std::size_t M = rb.monomials.size();
        rb.evidence_margin = static_cast<long>(N) - static_cast<long>(M);
        if (N < M) {
            rb.warnings.push_back("insufficient jet: N = " + std::to_string(N) + " < M = " + std::to_string(M)
                                  + "; spurious relations are expected");
        }
        const auto jets = detail::monomial_jets(c, rb.monomials, N, d);
        // Row n: coefficient of x^n, scaled to integers.
        std::vector<std::vector<integer>> rows;
        for (std::size_t n = 0; n <= N; ++n) {
            integer l(1);
            for (std::size_t i = 0; i < M; ++i) {
                l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(jets[i][n]));
            }
            std::vector<integer> row(M);
            bool nonzero = false;
            for (std::size_t i = 0; i < M; ++i) {
                const auto &q = jets[i][n];
                row[i] = boost::multiprecision::numerator(q) * (l / boost::multiprecision::denominator(q));
                nonzero = nonzero || row[i] != 0;
            }
            if (nonzero) {
                rows.push_back(std::move(row));
            }
        }
        rb.basis = detail::integer_kernel(std::move(rows), M);
        rb.verified = std::all_of(rb.basis.begin(), rb.basis.end(), [&](const auto &v) {
            return evaluate_relation(c, rb.monomials, v, N, d).is_zero();
        });
        rb.transcendence_evidence = rb.basis.empty() && N >= 2 * M;
        return rb;
    }
}

using tail_operator = std::function<rational_series(const rational_series &, std::size_t)>;

// T_{k+1}H = T_k T_1 H and T_1(H o P) = (P/x) * ((T_1 H) o P) for H = x T_1 H, both compared
// on every coefficient the truncations determine (up to x^{N-k-1} and
// x^{N-1} respectively).
inline bool verify_tail_identities(const rational_series &H, const rational_polynomial &P, std::size_t k,
                                   std::size_t N, const tail_operator &T = [](const rational_series &s,
                                                                              std::size_t j) { return tail_T(s, j); })
{
    if (P.is_zero() || P[0] != 0) {
        throw composition_at_unit("the polynomial must vanish at 0 and be nonzero");
    }
    if (N > H.order() || k + 1 > N) {
        throw order_exceeded("identities need k + 1 <= N <= order of H");
    }
    const auto h = H.truncated(N);
    const std::size_t n1 = N - k - 1;
    const bool first = T(h, k + 1).truncated(n1) == T(T(h, 1), k).truncated(n1);

    // The exchange holds for H = x T_1 H, i.e. after removing J_1 H.
    const auto h2 = h - truncate_J(h, 1);
    const auto lhs = T(compose(h2, P), 1);
    const rational_polynomial p_over_x(std::vector<rational>(P.coeffs().begin() + 1, P.coeffs().end()));
    const auto rhs = p_over_x.to_series(N - 1) * compose(T(h2, 1), P);
    const std::size_t n2 = N - 1;
    const bool second = lhs.truncated(n2) == rhs.truncated(n2);
    return first && second;
}

} // namespace pencil

#endif
