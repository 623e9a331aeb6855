#pragma once

// Periodic uniform grid, nodal state and model parameters shared by the
// discrete schemes, the spectral reference solver and the experiment harness.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ksfd {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// j mod m with a nonnegative result.
constexpr int wrap(int j, int m) noexcept
{
    int r = j % m;
    return r < 0 ? r + m : r;
}

// Uniform periodic grid on [0, L): m nodes x_j = j*h, h = L/m.
class GridSpec {
public:
    GridSpec(int m, double length = two_pi)
        : m_(m), length_(length)
    {
        if (m < 5)
            throw std::invalid_argument("GridSpec: need m >= 5 (widest stencil spans j-2..j+2)");
        if (!(length > 0.0) || !std::isfinite(length))
            throw std::invalid_argument("GridSpec: domain length must be positive and finite");
    }

    int num_nodes() const noexcept { return m_; }
    double length() const noexcept { return length_; }
    double spacing() const noexcept { return length_ / m_; }
    double node(int j) const noexcept { return wrap(j, m_) * spacing(); }

    friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept
    {
        return a.m_ == b.m_ && a.length_ == b.length_;
    }

private:
    int m_;
    double length_;
};

// Nodal values u_j tied to their grid so cross-grid arithmetic is caught early.
class StateVector {
public:
    StateVector(GridSpec grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values))
    {
        if (static_cast<int>(values_.size()) != grid_.num_nodes())
            throw std::invalid_argument("StateVector: value count does not match grid");
    }

    explicit StateVector(GridSpec grid)
        : grid_(grid), values_(static_cast<std::size_t>(grid.num_nodes()), 0.0)
    {
    }

    const GridSpec& grid() const noexcept { return grid_; }
    int size() const noexcept { return grid_.num_nodes(); }

    // Periodic access: any integer index is wrapped into 0..m-1.
    double operator()(int j) const noexcept { return values_[static_cast<std::size_t>(wrap(j, size()))]; }
    double& operator[](int j) noexcept { return values_[static_cast<std::size_t>(j)]; }
    double operator[](int j) const noexcept { return values_[static_cast<std::size_t>(j)]; }

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    bool all_finite() const noexcept
    {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const StateVector& a, const StateVector& b)
{
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("states live on different grids");
}

// Linear growth parameter R and element coupling gamma; the physical model
// is gamma = 1, smaller values leave elements partially decoupled.
struct ModelParams {
    double R = 2.0;
    double gamma = 1.0;

    ModelParams(double R_ = 2.0, double gamma_ = 1.0) : R(R_), gamma(gamma_)
    {
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw std::invalid_argument("ModelParams: gamma must lie in [0, 1]");
        if (!std::isfinite(R))
            throw std::invalid_argument("ModelParams: R must be finite");
    }
};

// Which truncation of the centre-manifold expansion the RHS evaluates.
// LowOrderEq3 is the standalone low-order model written in conservative
// bracket form; the others are cumulative truncations of the full expansion.
enum class TruncationLevel {
    Conventional,
    FirstCorrection,
    SecondCorrection,
    LowOrderEq3,
};

inline const char* name(TruncationLevel level) noexcept
{
    switch (level) {
        case TruncationLevel::Conventional: return "conventional";
        case TruncationLevel::FirstCorrection: return "first";
        case TruncationLevel::SecondCorrection: return "second";
        case TruncationLevel::LowOrderEq3: return "eq3";
    }
    return "?";
}

enum class NormKind { L2, Linf };

// L2 carries the sqrt(h) weight so values are comparable across resolutions.
inline double norm(const StateVector& u, NormKind kind) noexcept
{
    if (kind == NormKind::Linf) {
        double mx = 0.0;
        for (double v : u.values()) mx = std::max(mx, std::abs(v));
        return mx;
    }
    double s = 0.0;
    for (double v : u.values()) s += v * v;
    return std::sqrt(u.grid().spacing() * s);
}

inline double norm_l2(const StateVector& u) noexcept { return norm(u, NormKind::L2); }
inline double norm_linf(const StateVector& u) noexcept { return norm(u, NormKind::Linf); }

} // namespace ksfd
