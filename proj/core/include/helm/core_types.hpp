#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string_view>

namespace helm {

/// Dense real matrix; sensor data keeps rows = time samples, columns = signals.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using MatrixRef = Eigen::Ref<const Matrix>;
using VectorRef = Eigen::Ref<const Vector>;

/// Sensor data: K samples x D signals, all entries finite.
using SensorMatrix = Matrix;

/// Throws NumericalError naming `what` if any entry is NaN or infinite.
void require_finite(const MatrixRef& m, std::string_view what);

/// Throws InvalidArgument if the matrix has no rows or no columns.
void require_nonempty(const MatrixRef& m, std::string_view what);

/// Per-column standardization statistics, computed on training data only.
struct NormalizationStats {
    Vector mean;
    Vector std;  // strictly positive

    Eigen::Index dimension() const { return mean.size(); }
};

/// Columns whose standard deviation is below this are treated as constant.
inline constexpr double kConstantColumnStd = 1e-12;

/// Column means and population (divide by K) standard deviations.
/// Constant columns get std = 1 so frozen sensors do not break inference.
NormalizationStats fit_normalization(const MatrixRef& x_train);

/// (x - mean) / std, column by column.
SensorMatrix apply_normalization(const MatrixRef& x, const NormalizationStats& stats);

/// Inverse of apply_normalization.
SensorMatrix invert_normalization(const MatrixRef& z, const NormalizationStats& stats);

/// Deterministic random stream identified by (seed, stream id).
///
/// Identical pairs reproduce identical draws. Sub-streams are derived with
/// child(), so one user-visible seed fans out into independent streams for
/// datasets, repetitions and ensemble members. A stream is single-owner.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Independent stream keyed by `tag`; does not consume draws from this one.
    RngStream child(std::uint64_t tag) const;

    double uniform(double lo, double hi);
    double normal(double mean, double stddev);
    /// Uniform integer on the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Matrix with i.i.d. uniform [lo, hi] entries, filled in row-major order.
    Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> standard_normal_{0.0, 1.0};
};

}  // namespace helm
