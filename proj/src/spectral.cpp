#include "dampwave/spectral.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "dampwave/error.hpp"
#include "dampwave/io.hpp"
#include "dampwave/summation.hpp"

namespace dampwave {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

std::uint64_t fnv1a(std::uint64_t h, double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) {
        h ^= bits & 0xffu;
        h *= 0x100000001b3ull;
        bits >>= 8;
    }
    return h;
}

std::vector<double> nodes(double lo, double hi, std::size_t n, Spacing spacing) {
    std::vector<double> x(n);
    if (n == 1) {
        x[0] = lo;
        return x;
    }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / denom;
        x[i] = spacing == Spacing::Linear ? lo + (hi - lo) * frac : lo * std::exp(std::log(hi / lo) * frac);
    }
    x.front() = lo;
    x.back() = hi;
    return x;
}

std::vector<double> quadrature_weights(const std::vector<double>& x, double lo, double hi, WeightRule rule) {
    const std::size_t n = x.size();
    std::vector<double> w(n);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    if (rule == WeightRule::Uniform) {
        std::fill(w.begin(), w.end(), (hi - lo) / static_cast<double>(n));
        return w;
    }
    w.front() = 0.5 * (x[1] - x[0]);
    w.back() = 0.5 * (x[n - 1] - x[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (x[i + 1] - x[i - 1]);
    return w;
}

void check_range(double lo, double hi, std::size_t n, Spacing spacing, bool allow_zero_lo) {
    require(n >= 1, "grid needs at least one node");
    require(std::isfinite(lo) && std::isfinite(hi), "grid range must be finite");
    require(allow_zero_lo ? lo >= 0.0 : lo > 0.0, "grid range lower end out of domain");
    require(n == 1 || lo < hi, "grid range needs lo < hi");
    require(spacing == Spacing::Linear || lo > 0.0, "log spacing needs lo > 0");
}

}  // namespace

SpectralGrid SpectralGrid::create(std::vector<GridPoint> points, GridMetadata meta) {
    require(!points.empty(), "grid needs at least one point");
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        require(std::isfinite(p.weight) && p.weight > 0.0, "grid weights must be positive");
        require(std::isfinite(p.coordinate), "grid coordinates must be finite");
        if (i > 0) require(p.mode.s() > points[i - 1].mode.s(), "grid s-values must increase strictly");
        h = fnv1a(h, p.coordinate);
        h = fnv1a(h, p.mode.s());
        h = fnv1a(h, p.mode.b());
        h = fnv1a(h, p.weight);
    }
    return SpectralGrid(std::move(points), std::move(meta), h);
}

StateVector::StateVector(const SpectralGrid& grid) : coeffs_(grid.size()), tag_(grid.tag()) {}

StateVector::StateVector(const SpectralGrid& grid, std::vector<Complex> coefficients)
    : coeffs_(std::move(coefficients)), tag_(grid.tag()) {
    if (coeffs_.size() != grid.size()) {
        throw Error(ErrorCode::GridMismatch, "state length " + std::to_string(coeffs_.size()) +
                                                 " does not match grid size " + std::to_string(grid.size()));
    }
}

void StateVector::require_grid(std::uint64_t tag) const {
    if (tag != tag_) throw Error(ErrorCode::GridMismatch, "state vector belongs to a different grid");
}

StateVector& StateVector::operator+=(const StateVector& o) {
    require_grid(o.tag_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

StateVector& StateVector::operator-=(const StateVector& o) {
    require_grid(o.tag_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

StateVector& StateVector::operator*=(Complex lambda) noexcept {
    for (auto& c : coeffs_) c *= lambda;
    return *this;
}

bool StateVector::is_zero() const noexcept {
    for (const auto& c : coeffs_) {
        if (c != Complex(0.0, 0.0)) return false;
    }
    return true;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
StateVector operator*(Complex lambda, StateVector a) { return a *= lambda; }

Band Band::make(double lo, double hi, bool lo_closed, bool hi_closed) {
    require(lo >= 0.0 && !std::isnan(hi) && lo < hi, "band needs 0 <= lo < hi");
    return Band(lo, hi, lo_closed, hi_closed && std::isfinite(hi));
}

bool Band::contains(double s) const noexcept {
    const bool above_lo = lo_closed_ ? s >= lo_ : s > lo_;
    const bool below_hi = hi_closed_ ? s <= hi_ : s < hi_;
    return above_lo && below_hi;
}

SpectralGrid grid_from_friction(const FrictionSpec& f, double lo, double hi, std::size_t n, Spacing spacing,
                                WeightRule weights) {
    check_range(lo, hi, n, spacing, false);
    const auto s = nodes(lo, hi, n, spacing);
    const auto w = quadrature_weights(s, lo, hi, weights);
    std::vector<GridPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({ModeSymbol::make(s[i], evaluate(f, s[i])), w[i], s[i]});
    return SpectralGrid::create(std::move(pts), {f.name(), std::nullopt});
}

SpectralGrid grid_from_fourier_symbol(double w, int k, double a, double alpha, double xi_lo, double xi_hi,
                                      std::size_t n, Spacing spacing, WeightRule weights) {
    require(std::isfinite(w) && w > 0.0, "fourier grid needs w > 0");
    require(k >= 1, "fourier grid needs k >= 1");
    const auto friction = FrictionSpec::power(a, alpha);
    check_range(xi_lo, xi_hi, n, spacing, true);
    const auto xi = nodes(xi_lo, xi_hi, n, spacing);
    const auto wt = quadrature_weights(xi, xi_lo, xi_hi, weights);
    std::vector<GridPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::pow(xi[i] * xi[i] + w * w, 0.5 * k);
        pts.push_back({ModeSymbol::make(s, evaluate(friction, s)), wt[i], xi[i]});
    }
    return SpectralGrid::create(std::move(pts), {"fourier-power", std::nullopt});
}

SpectralGrid grid_from_kdv_symbols(double a, double a0, double a1, double xi_lo, double xi_hi, std::size_t n,
                                   Spacing spacing, WeightRule weights) {
    const auto friction = FrictionSpec::kdv(a, a0, a1);
    const auto& k = std::get<KdvFriction>(friction.kind());
    check_range(xi_lo, xi_hi, n, spacing, false);
    const auto xi = nodes(xi_lo, xi_hi, n, spacing);
    const auto wt = quadrature_weights(xi, xi_lo, xi_hi, weights);
    std::vector<GridPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x2 = xi[i] * xi[i];
        pts.push_back({ModeSymbol::make(kdv_s_symbol(k, x2), a * x2), wt[i], xi[i]});
    }
    return SpectralGrid::create(std::move(pts), {"kdv", kdv_unique_crossover_condition(k)});
}

double norm(const SpectralGrid& grid, const StateVector& v) {
    v.require_grid(grid);
    CompensatedSum acc;
    for (std::size_t i = 0; i < grid.size(); ++i) acc.add(grid.weight(i) * std::norm(v[i]));
    return std::sqrt(acc.value());
}

StateVector project(const SpectralGrid& grid, const StateVector& v, const Band& band) {
    v.require_grid(grid);
    StateVector out = v;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!band.contains(grid.s(i))) out[i] = 0.0;
    }
    return out;
}

StateVector make_data(const SpectralGrid& grid, const DataShape& shape) {
    StateVector out(grid);
    std::visit(Overloaded{
                   [&](const IndicatorShape& ind) {
                       for (std::size_t i = 0; i < grid.size(); ++i) {
                           if (ind.band.contains(grid.s(i))) out[i] = 1.0;
                       }
                   },
                   [&](const GaussianShape& g) {
                       require(g.width > 0.0, "gaussian width must be positive");
                       for (std::size_t i = 0; i < grid.size(); ++i) {
                           const double z = grid.s(i) - g.center;
                           out[i] = std::exp(-z * z / (2.0 * g.width * g.width));
                       }
                   },
                   [&](const PointShape& p) {
                       require(p.index < grid.size(), "point index outside grid");
                       out[p.index] = 1.0;
                   },
                   [&](const FileShape& file) {
                       auto loaded = read_grid_csv(file.path);
                       if (!loaded.state) {
                           throw Error(ErrorCode::FileFormat, file.path.string() + " has no re,im columns");
                       }
                       if (loaded.grid.tag() != grid.tag()) {
                           throw Error(ErrorCode::FileFormat, file.path.string() + " was written for another grid");
                       }
                       out = StateVector(grid, loaded.state->coefficients());
                   },
                   [](const ZeroShape&) {},
                   [&](const RandomShape& r) {
                       std::mt19937_64 rng(r.seed);
                       auto uniform = [&rng] {
                           return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
                       };
                       for (std::size_t i = 0; i < grid.size(); ++i) {
                           const double re = uniform();
                           const double im = uniform();
                           out[i] = Complex(re, im);
                       }
                   },
               },
               shape);
    return out;
}

namespace {

void write_rows(std::ostream& os, const SpectralGrid& grid, const StateVector* v) {
    os << (v ? "xi,s,b,weight,re,im\n" : "xi,s,b,weight\n");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = grid[i];
        os << format_double(p.coordinate) << ',' << format_double(p.mode.s()) << ',' << format_double(p.mode.b())
           << ',' << format_double(p.weight);
        if (v) os << ',' << format_double((*v)[i].real()) << ',' << format_double((*v)[i].imag());
        os << '\n';
    }
}

}  // namespace

void write_grid_csv(std::ostream& os, const SpectralGrid& grid) { write_rows(os, grid, nullptr); }

void write_state_csv(std::ostream& os, const SpectralGrid& grid, const StateVector& v) {
    v.require_grid(grid);
    write_rows(os, grid, &v);
}

GridFile read_grid_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::FileFormat, "empty grid file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool with_state = false;
    if (line == "xi,s,b,weight,re,im") {
        with_state = true;
    } else if (line != "xi,s,b,weight") {
        throw Error(ErrorCode::FileFormat, "bad header '" + line + "'");
    }
    const std::size_t ncols = with_state ? 6 : 4;
    std::vector<GridPoint> pts;
    std::vector<Complex> coeffs;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != ncols) {
            throw Error(ErrorCode::FileFormat, "line " + std::to_string(lineno) + ": expected " +
                                                   std::to_string(ncols) + " fields");
        }
        try {
            const double xi = parse_double(fields[0]);
            const double s = parse_double(fields[1]);
            const double b = parse_double(fields[2]);
            const double w = parse_double(fields[3]);
            pts.push_back({ModeSymbol::make(s, b), w, xi});
            if (with_state) coeffs.emplace_back(parse_double(fields[4]), parse_double(fields[5]));
        } catch (const Error& e) {
            throw Error(ErrorCode::FileFormat, "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    try {
        auto grid = SpectralGrid::create(std::move(pts), {"file", std::nullopt});
        std::optional<StateVector> state;
        if (with_state) state.emplace(grid, std::move(coeffs));
        return {std::move(grid), std::move(state)};
    } catch (const Error& e) {
        throw Error(ErrorCode::FileFormat, e.what());
    }
}

GridFile read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileFormat, "cannot open " + path.string());
    return read_grid_csv(in);
}

}  // namespace dampwave
