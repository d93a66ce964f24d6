#pragma once

// Finite weighted spectral grids standing in for the multiplication-operator
// model of a selfadjoint S, plus state vectors of diagonal coefficients.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dampwave/friction.hpp"
#include "dampwave/symbols.hpp"

namespace dampwave {

struct GridPoint {
    ModeSymbol mode;
    double weight;      // quadrature mass of the point
    double coordinate;  // label: s itself, or the Fourier variable xi
};

struct GridMetadata {
    std::string family;
    // KdV grids record whether a > a1 + a0^2/4 holds.
    std::optional<bool> kdv_unique_crossover;
};

/// Immutable; modes strictly increasing in s, weights positive. The tag is a
/// content hash over (coordinate, s, b, weight) of every point.
class SpectralGrid {
public:
    static SpectralGrid create(std::vector<GridPoint> points, GridMetadata meta = {});

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] const std::vector<GridPoint>& points() const noexcept { return points_; }
    [[nodiscard]] const GridPoint& operator[](std::size_t i) const noexcept { return points_[i]; }
    [[nodiscard]] const ModeSymbol& mode(std::size_t i) const noexcept { return points_[i].mode; }
    [[nodiscard]] double s(std::size_t i) const noexcept { return points_[i].mode.s(); }
    [[nodiscard]] double b(std::size_t i) const noexcept { return points_[i].mode.b(); }
    [[nodiscard]] double weight(std::size_t i) const noexcept { return points_[i].weight; }
    [[nodiscard]] std::uint64_t tag() const noexcept { return tag_; }
    [[nodiscard]] const GridMetadata& metadata() const noexcept { return meta_; }

private:
    SpectralGrid(std::vector<GridPoint> points, GridMetadata meta, std::uint64_t tag)
        : points_(std::move(points)), meta_(std::move(meta)), tag_(tag) {}

    std::vector<GridPoint> points_;
    GridMetadata meta_;
    std::uint64_t tag_;
};

/// Diagonal coefficients of a vector, bound to one grid by tag.
class StateVector {
public:
    StateVector(const SpectralGrid& grid);  // zero vector
    StateVector(const SpectralGrid& grid, std::vector<Complex> coefficients);

    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
    [[nodiscard]] std::uint64_t grid_tag() const noexcept { return tag_; }
    [[nodiscard]] const std::vector<Complex>& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }
    Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }

    /// Throws GridMismatch unless the tags agree.
    void require_grid(std::uint64_t tag) const;
    void require_grid(const SpectralGrid& g) const { require_grid(g.tag()); }

    StateVector& operator+=(const StateVector& o);
    StateVector& operator-=(const StateVector& o);
    StateVector& operator*=(Complex lambda) noexcept;

    [[nodiscard]] bool is_zero() const noexcept;

private:
    std::vector<Complex> coeffs_;
    std::uint64_t tag_;
};

StateVector operator+(StateVector a, const StateVector& b);
StateVector operator-(StateVector a, const StateVector& b);
StateVector operator*(Complex lambda, StateVector a);

/// Interval of s-values with independently open or closed endpoints. hi may
/// be +infinity.
class Band {
public:
    static Band make(double lo, double hi, bool lo_closed, bool hi_closed);
    static Band open(double lo, double hi) { return make(lo, hi, false, false); }
    static Band closed(double lo, double hi) { return make(lo, hi, true, true); }
    /// [lo, hi)
    static Band half_open(double lo, double hi) { return make(lo, hi, true, false); }
    static Band everything() { return open(0.0, std::numeric_limits<double>::infinity()); }

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] bool lo_closed() const noexcept { return lo_closed_; }
    [[nodiscard]] bool hi_closed() const noexcept { return hi_closed_; }
    [[nodiscard]] bool contains(double s) const noexcept;

private:
    Band(double lo, double hi, bool lc, bool hc) : lo_(lo), hi_(hi), lo_closed_(lc), hi_closed_(hc) {}
    double lo_;
    double hi_;
    bool lo_closed_;
    bool hi_closed_;
};

enum class Spacing { Linear, Log };
enum class WeightRule { Uniform, Trapezoid };

/// n nodes on [lo, hi] with b = F(s). n = 1 gives a single point mass at lo
/// with weight 1. Uniform weights are (hi - lo)/n each.
[[nodiscard]] SpectralGrid grid_from_friction(const FrictionSpec& f, double lo, double hi, std::size_t n,
                                              Spacing spacing, WeightRule weights = WeightRule::Trapezoid);

/// Fractional powers of -Laplacian + w^2 in Fourier variables:
/// s(xi) = (xi^2 + w^2)^{k/2}, b = a s^alpha, with weights in xi.
[[nodiscard]] SpectralGrid grid_from_fourier_symbol(double w, int k, double a, double alpha, double xi_lo,
                                                    double xi_hi, std::size_t n, Spacing spacing,
                                                    WeightRule weights = WeightRule::Trapezoid);

/// Linearized KdV symbols: s(xi) = sqrt(xi^6 + a0 xi^4 + a1 xi^2), b = a xi^2.
[[nodiscard]] SpectralGrid grid_from_kdv_symbols(double a, double a0, double a1, double xi_lo, double xi_hi,
                                                 std::size_t n, Spacing spacing,
                                                 WeightRule weights = WeightRule::Trapezoid);

/// sqrt(sum_k w_k |c_k|^2), compensated and in grid order.
[[nodiscard]] double norm(const SpectralGrid& grid, const StateVector& v);

/// Zeroes every coefficient whose s lies outside the band.
[[nodiscard]] StateVector project(const SpectralGrid& grid, const StateVector& v, const Band& band);

struct IndicatorShape {
    Band band;
};
struct GaussianShape {
    double center;
    double width;
};
struct PointShape {
    std::size_t index;
};
struct FileShape {
    std::filesystem::path path;
};
struct ZeroShape {};
/// Complex coefficients with real and imaginary parts uniform in [-1, 1).
struct RandomShape {
    std::uint64_t seed;
};

using DataShape = std::variant<IndicatorShape, GaussianShape, PointShape, FileShape, ZeroShape, RandomShape>;

/// Initial-data generator. File data must be written against the same grid
/// (xi, s, b, weight columns equal) or FileFormat is thrown.
[[nodiscard]] StateVector make_data(const SpectralGrid& grid, const DataShape& shape);

// Delimited text: header `xi,s,b,weight[,re,im]`, one row per mode.
void write_grid_csv(std::ostream& os, const SpectralGrid& grid);
void write_state_csv(std::ostream& os, const SpectralGrid& grid, const StateVector& v);

struct GridFile {
    SpectralGrid grid;
    std::optional<StateVector> state;
};

/// Throws FileFormat on malformed input.
[[nodiscard]] GridFile read_grid_csv(std::istream& is);
[[nodiscard]] GridFile read_grid_csv(const std::filesystem::path& path);

}  // namespace dampwave
