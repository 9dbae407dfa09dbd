#ifndef PENCIL_TRAJECTORY_HPP
#define PENCIL_TRAJECTORY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <pencil/error.hpp>

namespace pencil
{

struct trajectory_stats {
    double rtol = 0;
    double atol = 0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    bool log_substitution = false;
};

// Dense numerical solution on a strictly monotone grid. Between knots the
// value is the cubic Hermite interpolant of the stored values and
// derivatives, so knots are reproduced exactly.
class trajectory
{
public:
    trajectory() = default;

    trajectory(std::size_t dim, std::vector<double> grid, std::vector<double> values, std::vector<double> derivatives,
               std::vector<std::string> names = {}, trajectory_stats stats = {})
        : m_dim(dim), m_grid(std::move(grid)), m_values(std::move(values)), m_derivs(std::move(derivatives)),
          m_names(std::move(names)), m_stats(stats)
    {
        if (m_dim == 0 || m_grid.empty() || m_values.size() != m_grid.size() * m_dim
            || m_derivs.size() != m_values.size()) {
            throw error("inconsistent trajectory storage");
        }
        for (std::size_t i = 1; i < m_grid.size(); ++i) {
            if ((m_grid[i] - m_grid[i - 1]) * (m_grid[1] - m_grid[0]) <= 0) {
                throw error("trajectory grid must be strictly monotone");
            }
        }
        if (m_names.empty()) {
            for (std::size_t j = 0; j < m_dim; ++j) {
                m_names.push_back("y" + std::to_string(j + 1));
            }
        }
    }

    std::size_t dim() const noexcept
    {
        return m_dim;
    }
    std::size_t size() const noexcept
    {
        return m_grid.size();
    }
    const std::vector<double> &grid() const noexcept
    {
        return m_grid;
    }
    const std::vector<std::string> &names() const noexcept
    {
        return m_names;
    }
    const trajectory_stats &stats() const noexcept
    {
        return m_stats;
    }

    double x_start() const
    {
        return m_grid.front();
    }
    double x_end() const
    {
        return m_grid.back();
    }

    bool contains(double x) const
    {
        const double lo = std::min(x_start(), x_end()), hi = std::max(x_start(), x_end());
        return x >= lo && x <= hi;
    }

    std::span<const double> value_at_knot(std::size_t i) const
    {
        return {m_values.data() + i * m_dim, m_dim};
    }
    std::span<const double> derivative_at_knot(std::size_t i) const
    {
        return {m_derivs.data() + i * m_dim, m_dim};
    }

    std::vector<double> value(double x) const
    {
        std::vector<double> out(m_dim);
        value_into(x, out);
        return out;
    }

    void value_into(double x, std::span<double> out) const
    {
        if (!contains(x)) {
            throw domain_error("x = " + std::to_string(x) + " outside trajectory domain [" + std::to_string(x_end())
                               + ", " + std::to_string(x_start()) + "]");
        }
        const std::size_t i = interval(x);
        if (x == m_grid[i]) {
            std::copy_n(m_values.begin() + static_cast<std::ptrdiff_t>(i * m_dim), m_dim, out.begin());
            return;
        }
        if (x == m_grid[i + 1]) {
            std::copy_n(m_values.begin() + static_cast<std::ptrdiff_t>((i + 1) * m_dim), m_dim, out.begin());
            return;
        }
        const double x0 = m_grid[i], h = m_grid[i + 1] - x0;
        const double s = (x - x0) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        for (std::size_t j = 0; j < m_dim; ++j) {
            const double y0 = m_values[i * m_dim + j], y1 = m_values[(i + 1) * m_dim + j];
            const double d0 = m_derivs[i * m_dim + j], d1 = m_derivs[(i + 1) * m_dim + j];
            out[j] = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        }
    }

    // Components [first, first + count) on the same grid.
    trajectory slice(std::size_t first, std::size_t count, std::vector<std::string> names = {}) const
    {
        if (first + count > m_dim || count == 0) {
            throw error("trajectory slice out of range");
        }
        std::vector<double> v(m_grid.size() * count), d(m_grid.size() * count);
        for (std::size_t i = 0; i < m_grid.size(); ++i) {
            for (std::size_t j = 0; j < count; ++j) {
                v[i * count + j] = m_values[i * m_dim + first + j];
                d[i * count + j] = m_derivs[i * m_dim + first + j];
            }
        }
        if (names.empty()) {
            names.assign(m_names.begin() + static_cast<std::ptrdiff_t>(first),
                         m_names.begin() + static_cast<std::ptrdiff_t>(first + count));
        }
        return trajectory(count, m_grid, std::move(v), std::move(d), std::move(names), m_stats);
    }

    // CSV with a header row; 17 significant digits.
    void write_csv(std::ostream &os) const
    {
        os << "x";
        for (const auto &n : m_names) {
            os << ',' << n;
        }
        os << '\n';
        char buf[32];
        for (std::size_t i = 0; i < m_grid.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", m_grid[i]);
            os << buf;
            for (std::size_t j = 0; j < m_dim; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", m_values[i * m_dim + j]);
                os << ',' << buf;
            }
            os << '\n';
        }
    }

private:
    // Index i of the knot interval [grid[i], grid[i+1]] containing x.
    std::size_t interval(double x) const
    {
        if (m_grid.size() == 1) {
            return 0;
        }
        const bool decreasing = m_grid[1] < m_grid[0];
        auto it = decreasing
                      ? std::lower_bound(m_grid.begin(), m_grid.end(), x, [](double g, double v) { return g > v; })
                      : std::lower_bound(m_grid.begin(), m_grid.end(), x);
        auto idx = static_cast<std::size_t>(it - m_grid.begin());
        if (idx == 0) {
            return 0;
        }
        return std::min(idx - 1, m_grid.size() - 2);
    }

    std::size_t m_dim = 0;
    std::vector<double> m_grid;
    std::vector<double> m_values;
    std::vector<double> m_derivs;
    std::vector<std::string> m_names;
    trajectory_stats m_stats;
};

} // namespace pencil

#endif
