#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "gfa/scalar.hpp"

namespace gfa {

enum class ScaleClass { Slow, Fast, Neither, Inconclusive };

const char* to_string(ScaleClass c);

/// Closed axis-aligned box in R^d.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    Box(std::vector<double> l, std::vector<double> h);
    int dim() const { return static_cast<int>(lo.size()); }
};

/// A generalized point of R~^d: d coordinates, either all exact or all
/// sampled on one shared grid. Coordinates are real-valued nets (exact
/// coefficients must have zero imaginary part).
class GenPoint {
public:
    static GenPoint exact(std::vector<ExactScalar> coords);
    static GenPoint sampled(EpsGrid grid, std::vector<std::vector<double>> coords);
    /// Embeds a classical point of R^d.
    static GenPoint classical(std::vector<double> x0);

    int dim() const { return dim_; }
    bool is_exact() const { return std::holds_alternative<ExactCoords>(rep_); }
    const std::vector<ExactScalar>& exact_coords() const;
    const EpsGrid& grid() const;
    /// coords()[i][j] = i-th coordinate at grid eps j.
    const std::vector<std::vector<double>>& sampled_coords() const;

    /// Euclidean coordinates at a concrete eps.
    std::vector<double> at(double eps) const;
    std::vector<double> at_index(size_t grid_index) const;

    friend GenPoint operator-(const GenPoint& a, const GenPoint& b);

private:
    struct ExactCoords {
        std::vector<ExactScalar> c;
    };
    struct SampledCoords {
        EpsGrid grid;
        std::vector<std::vector<double>> c;
    };
    int dim_ = 0;
    std::variant<ExactCoords, SampledCoords> rep_;
};

/// Euclidean-norm net |x_eps| as a scalar: exact when every coordinate is a
/// single term and all terms share (eps_pow, log_pow); otherwise sampled
/// (exact inputs are sampled onto the default dyadic grid).
std::variant<ExactScalar, SampledScalar> point_norm(const GenPoint& p);

/// Slow: |x_eps| below eps^-a eventually for every a > 0 (v(|x|) >= 0).
/// Fast: |x| invertible with |x_eps| >= eps^-a for some a > 0.
/// On the sampled layer decisions are made up to fit tolerances; oscillating
/// nets classify as Neither, noisy ones as Inconclusive.
ScaleClass classify_scale(const GenPoint& p);

/// True iff the point admits values inside the (closed) box for small eps.
bool is_compactly_supported(const GenPoint& p, const Box& box);

/// Monad membership: |a - b| tends to 0 (not necessarily with positive
/// valuation). Exact layer is decided exactly; sampled layer up to fit
/// tolerance.
bool infinitely_close(const GenPoint& a, const GenPoint& b);

/// exp(-v(|a - b|)); satisfies the ultrametric triangle inequality on exact
/// points.
double sharp_distance(const GenPoint& a, const GenPoint& b);

}  // namespace gfa
